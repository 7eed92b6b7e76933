//! Slow, direct reference implementations used to cross-check the fast
//! paths: congruences by the substitution property over all partitions,
//! algebra compatibility over all argument tuples, and lattices by listing
//! every labeled bounded poset and folding out isomorphic copies by
//! permutation.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::congruence::{all_congruences, principal_congruence};
use crate::enumeration::all_lattices;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::partition::{all_partitions, Partition};
use crate::ualgebra::{all_congruences_alg, FiniteAlgebra};

/// Largest size for [`labeled_lattices`] and [`cross_check`].
pub const ORACLE_BUDGET: usize = 7;

fn check_budget(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("oracle needs n >= 1".into()));
    }
    if n > ORACLE_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "oracle size",
            value: n,
            limit: ORACLE_BUDGET,
        });
    }
    Ok(())
}

/// `x ≡ y` implies `x∨z ≡ y∨z` and `x∧z ≡ y∧z` for every `z`.
pub fn is_lattice_congruence_direct(l: &Lattice, p: &Partition) -> bool {
    let n = l.len();
    if p.len() != n {
        return false;
    }
    for x in 0..n {
        for y in x + 1..n {
            if !p.same_block(x, y) {
                continue;
            }
            for z in 0..n {
                if !p.same_block(l.join(x, z), l.join(y, z)) || !p.same_block(l.meet(x, z), l.meet(y, z)) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn lattice_congruences_direct(l: &Lattice) -> Result<Vec<Partition>> {
    Ok(all_partitions(l.len())?
        .into_iter()
        .filter(|p| is_lattice_congruence_direct(l, p))
        .collect())
}

/// Meet of every congruence collapsing `a` and `b`.
pub fn principal_congruence_direct(l: &Lattice, a: usize, b: usize) -> Result<Partition> {
    Ok(least_containing(l.len(), &lattice_congruences_direct(l)?, a, b))
}

fn least_containing(n: usize, congruences: &[Partition], a: usize, b: usize) -> Partition {
    congruences
        .iter()
        .filter(|p| p.same_block(a, b))
        .fold(Partition::top(n), |acc, p| acc.meet_unchecked(p))
}

fn decode(mut code: usize, n: usize, k: usize, out: &mut [usize]) {
    for slot in out[..k].iter_mut().rev() {
        *slot = code % n;
        code /= n;
    }
}

/// Every operation maps coordinatewise related tuples to related values.
pub fn is_algebra_congruence_direct(a: &FiniteAlgebra, p: &Partition) -> bool {
    let n = a.len();
    let mut xs = [0usize; 3];
    let mut ys = [0usize; 3];
    for op in a.ops() {
        let k = op.arity;
        let total = n.pow(k as u32);
        for cx in 0..total {
            decode(cx, n, k, &mut xs);
            for cy in cx + 1..total {
                decode(cy, n, k, &mut ys);
                let related = (0..k).all(|i| p.same_block(xs[i], ys[i]));
                if related && !p.same_block(op.table[cx], op.table[cy]) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn algebra_congruences_direct(a: &FiniteAlgebra) -> Result<Vec<Partition>> {
    Ok(all_partitions(a.len())?
        .into_iter()
        .filter(|p| is_algebra_congruence_direct(a, p))
        .collect())
}

/// Bit index of the pair `(i, j)`, `i != j`, among `k` interior elements.
fn pair_bit(k: usize, i: usize, j: usize) -> usize {
    i * (k - 1) + if j > i { j - 1 } else { j }
}

fn is_strict_order(k: usize, rel: u32) -> bool {
    let has = |i: usize, j: usize| i != j && rel >> pair_bit(k, i, j) & 1 == 1;
    for i in 0..k {
        for j in 0..k {
            if has(i, j) && has(j, i) {
                return false;
            }
            if !has(i, j) {
                continue;
            }
            for m in 0..k {
                if has(j, m) && !has(i, m) {
                    return false;
                }
            }
        }
    }
    true
}

fn permute_rel(k: usize, rel: u32, perm: &[usize]) -> u32 {
    let mut out = 0;
    for i in 0..k {
        for j in 0..k {
            if i != j && rel >> pair_bit(k, i, j) & 1 == 1 {
                out |= 1 << pair_bit(k, perm[i], perm[j]);
            }
        }
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    fn heap(m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if m <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..m {
            heap(m - 1, cur, out);
            if m.is_multiple_of(2) {
                cur.swap(i, m - 1);
            } else {
                cur.swap(0, m - 1);
            }
        }
    }
    heap(k, &mut cur, &mut out);
    out
}

/// Full order on `n = k + 2` elements: 0 is the bottom, `n-1` the top,
/// interior element `i` is `i + 1`.
fn bounded_order(k: usize, rel: u32) -> Vec<Vec<bool>> {
    let n = k + 2;
    let mut leq = vec![vec![false; n]; n];
    for (x, row) in leq.iter_mut().enumerate() {
        row[x] = true;
        row[n - 1] = true;
    }
    leq[0] = vec![true; n];
    for i in 0..k {
        for j in 0..k {
            if i != j && rel >> pair_bit(k, i, j) & 1 == 1 {
                leq[i + 1][j + 1] = true;
            }
        }
    }
    leq
}

fn has_all_joins(leq: &[Vec<bool>]) -> bool {
    let n = leq.len();
    for x in 0..n {
        for y in x + 1..n {
            let ub: Vec<usize> = (0..n).filter(|&z| leq[x][z] && leq[y][z]).collect();
            if !ub.iter().any(|&u| ub.iter().all(|&v| leq[u][v])) {
                return false;
            }
        }
    }
    true
}

fn covers_of(leq: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = leq.len();
    let mut covers = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || !leq[a][b] {
                continue;
            }
            if !(0..n).any(|z| z != a && z != b && leq[a][z] && leq[z][b]) {
                covers.push((a, b));
            }
        }
    }
    covers
}

/// One lattice per isomorphism class, found by listing every strict order
/// on the interior and keeping the permutation-minimal code of each one
/// that has all joins.
pub fn labeled_lattices(n: usize) -> Result<Vec<Lattice>> {
    check_budget(n)?;
    if n == 1 {
        return Ok(vec![Lattice::chain(1)]);
    }
    let k = n - 2;
    let pairs = k * k.saturating_sub(1);
    let perms = permutations(k);
    let mut seen = BTreeSet::new();
    for rel in 0..(1u32 << pairs) {
        if !is_strict_order(k, rel) {
            continue;
        }
        let key = perms.iter().map(|p| permute_rel(k, rel, p)).min().unwrap_or(rel);
        if key != rel || seen.contains(&key) {
            continue;
        }
        if has_all_joins(&bounded_order(k, rel)) {
            seen.insert(key);
        }
    }
    seen.into_iter()
        .map(|rel| Lattice::from_covers(n, &covers_of(&bounded_order(k, rel))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub labeled_count: usize,
    pub enumerated_count: usize,
    /// Labeled classes with no isomorphic partner among the enumerated ones.
    pub unmatched: usize,
    pub congruence_discrepancies: usize,
    pub principal_discrepancies: usize,
    pub algebra_discrepancies: usize,
}

impl OracleReport {
    pub fn is_clean(&self) -> bool {
        self.labeled_count == self.enumerated_count
            && self.unmatched == 0
            && self.congruence_discrepancies == 0
            && self.principal_discrepancies == 0
            && self.algebra_discrepancies == 0
    }
}

/// Compares the fast routes with the direct ones on every lattice of size `n`.
pub fn cross_check(n: usize) -> Result<OracleReport> {
    check_budget(n)?;
    let labeled = labeled_lattices(n)?;
    let enumerated = all_lattices(n)?;
    let forms: BTreeSet<Vec<u8>> = enumerated
        .iter()
        .map(Lattice::canonical_form)
        .collect::<Result<_>>()?;
    let mut unmatched = 0;
    for l in &labeled {
        if !forms.contains(&l.canonical_form()?) {
            unmatched += 1;
        }
    }
    let mut congruence_discrepancies = 0;
    let mut principal_discrepancies = 0;
    let mut algebra_discrepancies = 0;
    for l in &enumerated {
        let direct = lattice_congruences_direct(l)?;
        let fast = all_congruences(l);
        let mut sorted_fast: Vec<Partition> = fast.members().to_vec();
        sorted_fast.sort();
        if sorted_fast != direct {
            congruence_discrepancies += 1;
        }
        for a in 0..n {
            for b in a + 1..n {
                if principal_congruence(l, a, b)? != least_containing(n, &direct, a, b) {
                    principal_discrepancies += 1;
                }
            }
        }
        if n <= crate::ualgebra::ALGEBRA_BUDGET {
            let alg = all_congruences_alg(&FiniteAlgebra::from_lattice(l))?;
            if alg.members() != fast.members() {
                algebra_discrepancies += 1;
            }
        }
    }
    Ok(OracleReport {
        n,
        labeled_count: labeled.len(),
        enumerated_count: enumerated.len(),
        unmatched,
        congruence_discrepancies,
        principal_discrepancies,
        algebra_discrepancies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Named;
    use crate::ualgebra::xor_square;

    #[test]
    fn labeled_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| labeled_lattices(n).unwrap().len()).collect();
        assert_eq!(counts, [1, 1, 1, 2, 5, 15]);
    }

    #[test]
    fn direct_congruences_of_named() {
        assert_eq!(lattice_congruences_direct(&Lattice::named(Named::B4)).unwrap().len(), 4);
        assert_eq!(lattice_congruences_direct(&Lattice::named(Named::N5)).unwrap().len(), 5);
        assert_eq!(lattice_congruences_direct(&Lattice::named(Named::M3)).unwrap().len(), 2);
    }

    #[test]
    fn xor_square_direct() {
        assert_eq!(algebra_congruences_direct(&xor_square()).unwrap().len(), 5);
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0).len(), 1);
        let distinct: BTreeSet<_> = permutations(4).into_iter().collect();
        assert_eq!(distinct.len(), 24);
    }

    #[test]
    fn budget() {
        assert!(matches!(labeled_lattices(8), Err(Error::BudgetExceeded { .. })));
        assert!(labeled_lattices(0).is_err());
    }
}
