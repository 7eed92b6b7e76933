//! Finite algebras given by operation tables, and their congruences.

use std::collections::VecDeque;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::congruence::CongruenceLattice;
use crate::energy::congruence_energy;
use crate::error::{Error, Result};
use crate::extremal::g_max;
use crate::lattice::Lattice;
use crate::partition::Partition;

/// Largest universe for [`all_congruences_alg`].
pub const ALGEBRA_BUDGET: usize = 8;
pub const MAX_ARITY: usize = 3;

/// Table entry for arguments `(x_0, .., x_{k-1})` sits at index
/// `x_0·n^(k-1) + .. + x_{k-1}` (row-major).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub n: usize,
    pub ops: Vec<Operation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    n: usize,
    ops: Vec<Operation>,
}

impl FiniteAlgebra {
    pub fn new(n: usize, ops: Vec<Operation>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAlgebra("empty universe".into()));
        }
        for op in &ops {
            if op.arity > MAX_ARITY {
                return Err(Error::InvalidAlgebra(format!(
                    "operation {:?} has arity {} > {MAX_ARITY}",
                    op.name, op.arity
                )));
            }
            let expected = n.pow(op.arity as u32);
            if op.table.len() != expected {
                return Err(Error::InvalidAlgebra(format!(
                    "operation {:?}: table has {} entries, expected {expected}",
                    op.name,
                    op.table.len()
                )));
            }
            if let Some(&bad) = op.table.iter().find(|&&v| v >= n) {
                return Err(Error::OutOfRange { element: bad, n });
            }
        }
        Ok(FiniteAlgebra { n, ops })
    }

    pub fn from_doc(doc: AlgebraDoc) -> Result<Self> {
        Self::new(doc.n, doc.ops)
    }

    pub fn to_doc(&self) -> AlgebraDoc {
        AlgebraDoc {
            n: self.n,
            ops: self.ops.clone(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: AlgebraDoc = serde_json::from_str(s)
            .map_err(|e| Error::InvalidAlgebra(format!("algebra JSON: {e}")))?;
        Self::from_doc(doc)
    }

    /// The set with no operations.
    pub fn bare(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    /// A lattice as an algebra with binary `join` and `meet`.
    pub fn from_lattice(l: &Lattice) -> Self {
        let ops = vec![
            Operation {
                name: "join".into(),
                arity: 2,
                table: l.join_table().to_vec(),
            },
            Operation {
                name: "meet".into(),
                arity: 2,
                table: l.meet_table().to_vec(),
            },
        ];
        FiniteAlgebra { n: l.len(), ops }
    }

    /// A copy with one more operation.
    pub fn with_op(&self, op: Operation) -> Result<Self> {
        let mut ops = self.ops.clone();
        ops.push(op);
        Self::new(self.n, ops)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    /// Every basic translation: one operation with all but one argument fixed.
    fn translations(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut out = Vec::new();
        for op in &self.ops {
            let k = op.arity;
            if k == 0 {
                continue;
            }
            for pos in 0..k {
                // stride of the free coordinate in the row-major table
                let stride = n.pow((k - 1 - pos) as u32);
                for consts in 0..n.pow((k - 1) as u32) {
                    // spread the k-1 constants around the free position
                    let high = consts / stride;
                    let low = consts % stride;
                    let base = high * stride * n + low;
                    out.push((0..n).map(|x| op.table[base + x * stride]).collect());
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Least congruence containing `pairs`.
///
/// Union-find over the universe with a queue of merged pairs; every queued
/// pair is pushed through every basic translation. The result is the
/// transitive closure of all translation images, i.e. the congruence
/// generated.
pub fn congruence_closure(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Result<Partition> {
    let translations = a.translations();
    closure_with(a.n, &translations, pairs)
}

fn closure_with(n: usize, translations: &[Vec<usize>], pairs: &[(usize, usize)]) -> Result<Partition> {
    for &(x, y) in pairs {
        for e in [x, y] {
            if e >= n {
                return Err(Error::OutOfRange { element: e, n });
            }
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    let merge = |parent: &mut Vec<usize>, queue: &mut VecDeque<(usize, usize)>, x: usize, y: usize| {
        let (rx, ry) = (find(parent, x), find(parent, y));
        if rx != ry {
            parent[rx.max(ry)] = rx.min(ry);
            queue.push_back((x, y));
        }
    };
    for &(x, y) in pairs {
        merge(&mut parent, &mut queue, x, y);
    }
    while let Some((x, y)) = queue.pop_front() {
        for t in translations {
            merge(&mut parent, &mut queue, t[x], t[y]);
        }
    }
    let labels: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    Ok(Partition::from_labels(&labels))
}

/// All congruences, as the join-closure of the principal ones.
pub fn all_congruences_alg(a: &FiniteAlgebra) -> Result<CongruenceLattice> {
    if a.n > ALGEBRA_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "algebra size",
            value: a.n,
            limit: ALGEBRA_BUDGET,
        });
    }
    let translations = a.translations();
    let mut principal = Vec::new();
    for x in 0..a.n {
        for y in x + 1..a.n {
            principal.push(closure_with(a.n, &translations, &[(x, y)])?);
        }
    }
    principal.sort();
    principal.dedup();
    Ok(CongruenceLattice::join_closure(a.n, &principal))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum BoundVerdict {
    /// `CE < g_max(n)`.
    Strict,
    /// `CE = g_max(n)`, with a boolean congruence lattice of size `2^(n-1)`.
    Extremal,
    /// The bound or its equality clause fails; carries the reason.
    Violated { reason: String },
    /// Congruence lattice not distributive; nothing to check.
    PreconditionFailed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CeBoundReport {
    pub n: usize,
    pub con_size: usize,
    pub ce: u64,
    #[serde(serialize_with = "crate::extremal::decimal")]
    pub g_max: BigUint,
    pub distributive: bool,
    pub verdict: BoundVerdict,
}

/// Checks `CE(A) ≤ g_max(n)` for a congruence-distributive algebra, and that
/// equality forces a boolean congruence lattice with `2^(n-1)` members.
pub fn ce_bound_check(a: &FiniteAlgebra) -> Result<CeBoundReport> {
    let con = all_congruences_alg(a)?;
    let ce = congruence_energy(&con);
    let bound = g_max(a.n)?;
    let distributive = con.is_distributive();
    let ce_big = BigUint::from(ce);
    let verdict = if !distributive {
        BoundVerdict::PreconditionFailed
    } else if ce_big > bound {
        BoundVerdict::Violated {
            reason: format!("CE = {ce} exceeds g_max = {bound}"),
        }
    } else if ce_big == bound {
        let expected = 1usize << (a.n - 1);
        if !con.is_boolean() {
            BoundVerdict::Violated {
                reason: "CE attains g_max but Con is not boolean".into(),
            }
        } else if con.len() != expected {
            BoundVerdict::Violated {
                reason: format!("CE attains g_max but |Con| = {} != {expected}", con.len()),
            }
        } else {
            BoundVerdict::Extremal
        }
    } else {
        BoundVerdict::Strict
    };
    Ok(CeBoundReport {
        n: a.n,
        con_size: con.len(),
        ce,
        g_max: bound,
        distributive,
        verdict,
    })
}

/// `{0,1}²` under coordinatewise xor, encoded as `0..4`.
pub fn xor_square() -> FiniteAlgebra {
    let table = (0..4).flat_map(|x| (0..4).map(move |y| x ^ y)).collect();
    FiniteAlgebra::new(
        4,
        vec![Operation {
            name: "xor".into(),
            arity: 2,
            table,
        }],
    )
    .expect("xor table is valid")
}

/// The ternary discriminator `t(x,y,z) = z` if `x = y`, else `x`. Any
/// algebra with it as an operation is simple.
pub fn discriminator(n: usize) -> Result<FiniteAlgebra> {
    let mut table = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                table.push(if x == y { z } else { x });
            }
        }
    }
    FiniteAlgebra::new(
        n,
        vec![Operation {
            name: "disc".into(),
            arity: 3,
            table,
        }],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::{all_congruences, principal_congruence};
    use crate::lattice::{Lattice, Named};

    #[test]
    fn bare_set_generates_equ_pairs() {
        let a = FiniteAlgebra::bare(5).unwrap();
        assert_eq!(
            congruence_closure(&a, &[(1, 3)]).unwrap(),
            Partition::equ_pair(5, 1, 3).unwrap()
        );
        assert_eq!(congruence_closure(&a, &[]).unwrap(), Partition::bottom(5));
        assert!(congruence_closure(&a, &[(0, 5)]).is_err());
    }

    #[test]
    fn chain_as_algebra_matches_lattice_route() {
        let l = Lattice::chain(3);
        let a = FiniteAlgebra::from_lattice(&l);
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(
                    congruence_closure(&a, &[(x, y)]).unwrap(),
                    principal_congruence(&l, x, y).unwrap()
                );
            }
        }
    }

    #[test]
    fn ternary_translations() {
        // majority on a 3-chain equals the median; its congruences are those of the chain
        let n = 3;
        let mut table = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let mut v = [x, y, z];
                    v.sort();
                    table.push(v[1]);
                }
            }
        }
        let a = FiniteAlgebra::new(n, vec![Operation { name: "median".into(), arity: 3, table }]).unwrap();
        let con = all_congruences_alg(&a).unwrap();
        assert_eq!(con.members(), all_congruences(&Lattice::chain(3)).members());
    }

    #[test]
    fn xor_square_is_not_distributive() {
        let con = all_congruences_alg(&xor_square()).unwrap();
        assert_eq!(con.len(), 5);
        assert!(!con.is_distributive());
        assert_eq!(
            ce_bound_check(&xor_square()).unwrap().verdict,
            BoundVerdict::PreconditionFailed
        );
    }

    #[test]
    fn simple_algebra() {
        for n in 2..=5 {
            let a = discriminator(n).unwrap();
            let con = all_congruences_alg(&a).unwrap();
            assert_eq!(con.members(), &[Partition::bottom(n), Partition::top(n)]);
        }
        // two elements, two congruences: the bound is attained
        let r = ce_bound_check(&discriminator(2).unwrap()).unwrap();
        assert_eq!(r.verdict, BoundVerdict::Extremal);
        let r = ce_bound_check(&discriminator(4).unwrap()).unwrap();
        assert_eq!(r.verdict, BoundVerdict::Strict);
    }

    #[test]
    fn bound_verdicts() {
        for n in 1..=6 {
            let r = ce_bound_check(&FiniteAlgebra::from_lattice(&Lattice::chain(n))).unwrap();
            assert_eq!(r.verdict, BoundVerdict::Extremal, "n = {n}");
            assert_eq!(r.con_size, 1 << (n - 1));
        }
        let r = ce_bound_check(&FiniteAlgebra::from_lattice(&Lattice::named(Named::N5))).unwrap();
        assert_eq!(r.ce, 22);
        assert_eq!(r.g_max, BigUint::from(64u8));
        assert_eq!(r.verdict, BoundVerdict::Strict);
    }

    #[test]
    fn validation() {
        let bad = Operation { name: "f".into(), arity: 1, table: vec![0, 3] };
        assert!(matches!(FiniteAlgebra::new(2, vec![bad]), Err(Error::OutOfRange { .. })));
        let short = Operation { name: "f".into(), arity: 2, table: vec![0, 1] };
        assert!(FiniteAlgebra::new(2, vec![short]).is_err());
        let quaternary = Operation { name: "f".into(), arity: 4, table: vec![0; 16] };
        assert!(FiniteAlgebra::new(2, vec![quaternary]).is_err());
        assert!(matches!(
            all_congruences_alg(&FiniteAlgebra::bare(9).unwrap()),
            Err(Error::BudgetExceeded { .. })
        ));
        let json = r#"{"n":2,"ops":[{"name":"neg","arity":1,"table":[1,0]}]}"#;
        let a = FiniteAlgebra::from_json(json).unwrap();
        assert_eq!(serde_json::to_string(&a.to_doc()).unwrap(), json);
    }
}
