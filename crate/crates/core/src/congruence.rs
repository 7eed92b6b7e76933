//! Congruences of finite lattices.
//!
//! The production route goes through prime intervals: every principal
//! congruence `con(a, b)` of a cover `a ≺ b` is read off from the prime
//! intervals that `[a, b]` projects onto, and the full congruence lattice is
//! the join-closure of those join-irreducibles. Membership of an arbitrary
//! partition is decided by Grätzer's local criterion in [`is_congruence`].

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, PrimeInterval};
use crate::partition::Partition;

/// Congruence lattices up to this size are tested for distributivity by
/// checking every triple; larger ones use the join-prime criterion.
const TRIPLE_CHECK_LIMIT: usize = 512;

fn check_host(l: &Lattice, p: &Partition) -> Result<()> {
    if p.len() != l.len() {
        return Err(Error::SizeMismatch {
            left: l.len(),
            right: p.len(),
        });
    }
    Ok(())
}

/// Blocks are intervals, and for covers `x ≺ y`, `x ≺ z` with `x ≡ y` we
/// have `z ≡ y ∨ z` (and dually).
pub fn is_congruence(l: &Lattice, p: &Partition) -> Result<bool> {
    check_host(l, p)?;
    for block in p.blocks() {
        let lo = block.iter().fold(block[0], |acc, &x| l.meet(acc, x));
        let hi = block.iter().fold(block[0], |acc, &x| l.join(acc, x));
        if !l.interval(lo, hi).iter().all(|&z| p.same_block(z, block[0])) {
            return Ok(false);
        }
    }
    for x in 0..l.len() {
        let ups: Vec<usize> = l.upper_covers(x).collect();
        for &y in &ups {
            if !p.same_block(x, y) {
                continue;
            }
            for &z in &ups {
                if z != y && !p.same_block(z, l.join(y, z)) {
                    return Ok(false);
                }
            }
        }
        let downs: Vec<usize> = l.lower_covers(x).collect();
        for &y in &downs {
            if !p.same_block(x, y) {
                continue;
            }
            for &z in &downs {
                if z != y && !p.same_block(z, l.meet(y, z)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn primes_inside(l: &Lattice, c: usize, d: usize, out: &mut Vec<PrimeInterval>) {
    for &(x, y) in l.covers() {
        if l.leq(c, x) && l.leq(y, d) {
            out.push(PrimeInterval::new(x, y));
        }
    }
}

/// Prime intervals collapsed by `con(seed)`.
///
/// One step goes from a prime interval `[a, b]` to its perspective images
/// `[c, b ∨ c]` (for `c ≥ a`) and `[a ∧ d, d]` (for `d ≤ b`), and from each
/// image to every prime interval it contains. Restricting the images
/// themselves to prime intervals is not enough: in the pentagon, `[0, a]`
/// reaches `[p, q]` only through the two-step image `[p, 1]`.
pub fn perspectivity_closure(l: &Lattice, seed: PrimeInterval) -> Result<BTreeSet<PrimeInterval>> {
    for e in [seed.lo, seed.hi] {
        if e >= l.len() {
            return Err(Error::OutOfRange { element: e, n: l.len() });
        }
    }
    if !l.is_cover(seed.lo, seed.hi) {
        return Err(Error::NotPrime(seed.lo, seed.hi));
    }
    let mut reached = BTreeSet::from([seed]);
    let mut queue = VecDeque::from([seed]);
    let mut found = Vec::new();
    while let Some(PrimeInterval { lo: a, hi: b }) = queue.pop_front() {
        found.clear();
        for c in 0..l.len() {
            if l.leq(a, c) {
                let d = l.join(b, c);
                if d != c {
                    primes_inside(l, c, d, &mut found);
                }
            }
            // c plays the role of the upper end d of a down-perspective image
            if l.leq(c, b) {
                let lo = l.meet(a, c);
                if lo != c {
                    primes_inside(l, lo, c, &mut found);
                }
            }
        }
        for &q in &found {
            if reached.insert(q) {
                queue.push_back(q);
            }
        }
    }
    Ok(reached)
}

/// Partition whose blocks are the components of the graph with the given
/// prime intervals as edges.
fn collapse(n: usize, primes: impl IntoIterator<Item = PrimeInterval>) -> Partition {
    let pairs: Vec<(usize, usize)> = primes.into_iter().map(|p| (p.lo, p.hi)).collect();
    Partition::from_pairs(n, &pairs).expect("prime intervals lie in the lattice")
}

/// `con(a, b)`, the least congruence collapsing `a` and `b`.
pub fn principal_congruence(l: &Lattice, a: usize, b: usize) -> Result<Partition> {
    for e in [a, b] {
        if e >= l.len() {
            return Err(Error::OutOfRange { element: e, n: l.len() });
        }
    }
    if a == b {
        return Ok(Partition::bottom(l.len()));
    }
    let (lo, hi) = if l.leq(a, b) {
        (a, b)
    } else if l.leq(b, a) {
        (b, a)
    } else {
        (l.meet(a, b), l.join(a, b))
    };
    let mut chain = vec![lo];
    let mut x = lo;
    while x != hi {
        x = l
            .upper_covers(x)
            .find(|&y| l.leq(y, hi))
            .expect("a cover below hi exists while x < hi");
        chain.push(x);
    }
    principal_congruence_along(l, &chain)
}

/// `con(chain[0], chain[last])` computed from the covers of the given
/// maximal chain. Any maximal chain gives the same result.
pub fn principal_congruence_along(l: &Lattice, chain: &[usize]) -> Result<Partition> {
    let mut primes = BTreeSet::new();
    for w in chain.windows(2) {
        if w[0] >= l.len() || w[1] >= l.len() {
            return Err(Error::OutOfRange {
                element: w[0].max(w[1]),
                n: l.len(),
            });
        }
        primes.extend(perspectivity_closure(l, PrimeInterval::new(w[0], w[1]))?);
    }
    Ok(collapse(l.len(), primes))
}

/// All congruences of `l`.
pub fn all_congruences(l: &Lattice) -> CongruenceLattice {
    let n = l.len();
    let mut generators: Vec<Partition> = l
        .prime_intervals()
        .into_iter()
        .map(|p| {
            let closure = perspectivity_closure(l, p).expect("covers are prime");
            collapse(n, closure)
        })
        .collect();
    generators.sort();
    generators.dedup();
    CongruenceLattice::join_closure(n, &generators)
}

/// The quotient `L/θ` with its blocks numbered by least member index.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub lattice: Lattice,
    /// `block_of[x]` is the quotient element containing `x`.
    pub block_of: Vec<usize>,
}

/// Blocks ordered by their least elements.
pub fn quotient(l: &Lattice, theta: &Partition) -> Result<Quotient> {
    if !is_congruence(l, theta)? {
        return Err(Error::NotACongruence);
    }
    let blocks = theta.blocks();
    let least: Vec<usize> = blocks
        .iter()
        .map(|b| b.iter().fold(b[0], |acc, &x| l.meet(acc, x)))
        .collect();
    let k = blocks.len();
    let mut leq = crate::bits::BitMatrix::new(k);
    for s in 0..k {
        for t in 0..k {
            if l.leq(least[s], least[t]) {
                leq.set(s, t);
            }
        }
    }
    let lattice = Lattice::from_order(leq)?;
    Ok(Quotient {
        lattice,
        block_of: theta.block_index(),
    })
}

/// `γ ↦ α ∨ γ` from the members not above an atom `α` to those above it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomJoinMap {
    pub atom: Partition,
    pub pairs: Vec<(Partition, Partition)>,
    pub injective: bool,
    pub bijective: bool,
}

/// The members above an atom (`upper`) and the rest (`lower`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpsetSplit {
    pub upper: Vec<Partition>,
    pub lower: Vec<Partition>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CongruenceLatticeDoc {
    pub host_n: usize,
    pub members: Vec<Partition>,
}

/// Congruences of one host, sorted by height in the partition lattice and
/// then lexicographically by representative array.
#[derive(Clone, Debug)]
pub struct CongruenceLattice {
    host_n: usize,
    members: Vec<Partition>,
    index: HashMap<Partition, usize>,
    tables: OnceLock<Tables>,
}

#[derive(Clone, Debug)]
struct Tables {
    join: Vec<u32>,
    meet: Vec<u32>,
    /// `below[i][j]`: members[i] <= members[j]
    below: Vec<bool>,
}

impl PartialEq for CongruenceLattice {
    fn eq(&self, other: &Self) -> bool {
        self.host_n == other.host_n && self.members == other.members
    }
}

impl Eq for CongruenceLattice {}

impl Serialize for CongruenceLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CongruenceLatticeDoc {
            host_n: self.host_n,
            members: self.members.clone(),
        }
        .serialize(s)
    }
}

impl CongruenceLattice {
    fn sorted(host_n: usize, mut members: Vec<Partition>) -> Self {
        members.sort_by(|a, b| a.heq().cmp(&b.heq()).then_with(|| a.cmp(b)));
        members.dedup();
        let index = members
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        CongruenceLattice {
            host_n,
            members,
            index,
            tables: OnceLock::new(),
        }
    }

    /// Close `{bottom} ∪ generators` under partition joins.
    pub(crate) fn join_closure(host_n: usize, generators: &[Partition]) -> Self {
        let bottom = Partition::bottom(host_n);
        let mut seen: std::collections::HashSet<Partition> = std::collections::HashSet::new();
        let mut members = vec![bottom.clone()];
        seen.insert(bottom);
        let mut queue: VecDeque<Partition> = VecDeque::new();
        for g in generators {
            if seen.insert(g.clone()) {
                members.push(g.clone());
                queue.push_back(g.clone());
            }
        }
        // every member is a join of generators, so joining with generators suffices
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let j = x.join_unchecked(g);
                if seen.insert(j.clone()) {
                    members.push(j.clone());
                    queue.push_back(j);
                }
            }
        }
        Self::sorted(host_n, members)
    }

    /// Validating constructor for externally supplied member sets.
    pub fn from_members(host_n: usize, members: Vec<Partition>) -> Result<Self> {
        for m in &members {
            if m.len() != host_n {
                return Err(Error::SizeMismatch {
                    left: host_n,
                    right: m.len(),
                });
            }
        }
        let c = Self::sorted(host_n, members);
        let closed = c.index.contains_key(&Partition::bottom(host_n))
            && c.index.contains_key(&Partition::top(host_n))
            && c.members.iter().all(|a| {
                c.members.iter().all(|b| {
                    c.index.contains_key(&a.join_unchecked(b))
                        && c.index.contains_key(&a.meet_unchecked(b))
                })
            });
        if !closed {
            return Err(Error::Domain(
                "member set is not a sublattice of the partition lattice".into(),
            ));
        }
        Ok(c)
    }

    pub fn from_doc(doc: CongruenceLatticeDoc) -> Result<Self> {
        Self::from_members(doc.host_n, doc.members)
    }

    pub fn host_size(&self) -> usize {
        self.host_n
    }

    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    fn tables(&self) -> &Tables {
        self.tables.get_or_init(|| {
            let m = self.members.len();
            let mut join = vec![0u32; m * m];
            let mut meet = vec![0u32; m * m];
            let mut below = vec![false; m * m];
            for i in 0..m {
                for j in i..m {
                    let a = &self.members[i];
                    let b = &self.members[j];
                    let jn = self.index[&a.join_unchecked(b)] as u32;
                    let mt = self.index[&a.meet_unchecked(b)] as u32;
                    join[i * m + j] = jn;
                    join[j * m + i] = jn;
                    meet[i * m + j] = mt;
                    meet[j * m + i] = mt;
                    below[i * m + j] = mt as usize == i;
                    below[j * m + i] = mt as usize == j;
                }
            }
            Tables { join, meet, below }
        })
    }

    /// Join of members `i` and `j`, as a member index.
    pub fn join_idx(&self, i: usize, j: usize) -> usize {
        self.tables().join[i * self.len() + j] as usize
    }

    pub fn meet_idx(&self, i: usize, j: usize) -> usize {
        self.tables().meet[i * self.len() + j] as usize
    }

    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.tables().below[i * self.len() + j]
    }

    fn bottom_idx(&self) -> usize {
        0
    }

    fn top_idx(&self) -> usize {
        self.len() - 1
    }

    /// Covering pairs `(i, j)` of member indices.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let m = self.len();
        let mut out = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if i == j || !self.leq_idx(i, j) {
                    continue;
                }
                let between = (0..m).any(|k| k != i && k != j && self.leq_idx(i, k) && self.leq_idx(k, j));
                if !between {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn atom_indices(&self) -> Vec<usize> {
        let b = self.bottom_idx();
        (0..self.len())
            .filter(|&i| i != b)
            .filter(|&i| (0..self.len()).all(|k| k == b || k == i || !self.leq_idx(k, i)))
            .collect()
    }

    pub fn atoms(&self) -> Vec<Partition> {
        self.atom_indices()
            .into_iter()
            .map(|i| self.members[i].clone())
            .collect()
    }

    fn atom_index(&self, alpha: &Partition) -> Result<usize> {
        let i = self.index_of(alpha).ok_or(Error::NotAnAtom)?;
        if self.atom_indices().contains(&i) {
            Ok(i)
        } else {
            Err(Error::NotAnAtom)
        }
    }

    /// Split into the members above `alpha` and the rest.
    pub fn upset_split(&self, alpha: &Partition) -> Result<UpsetSplit> {
        let a = self.atom_index(alpha)?;
        let (upper, lower): (Vec<usize>, Vec<usize>) =
            (0..self.len()).partition(|&i| self.leq_idx(a, i));
        Ok(UpsetSplit {
            upper: upper.into_iter().map(|i| self.members[i].clone()).collect(),
            lower: lower.into_iter().map(|i| self.members[i].clone()).collect(),
        })
    }

    fn atom_map_indices(&self, a: usize) -> Vec<(usize, usize)> {
        (0..self.len())
            .filter(|&g| !self.leq_idx(a, g))
            .map(|g| (g, self.join_idx(a, g)))
            .collect()
    }

    fn atom_map_bijective(&self, a: usize) -> (bool, bool) {
        let pairs = self.atom_map_indices(a);
        let images: BTreeSet<usize> = pairs.iter().map(|&(_, img)| img).collect();
        let injective = images.len() == pairs.len();
        let upper = (0..self.len()).filter(|&i| self.leq_idx(a, i)).count();
        (injective, injective && images.len() == upper)
    }

    /// `γ ↦ α ∨ γ`; requires a distributive lattice and an atom `α`.
    pub fn join_with_atom_map(&self, alpha: &Partition) -> Result<AtomJoinMap> {
        let a = self.atom_index(alpha)?;
        if !self.is_distributive() {
            return Err(Error::NotDistributive);
        }
        let pairs = self
            .atom_map_indices(a)
            .into_iter()
            .map(|(g, img)| (self.members[g].clone(), self.members[img].clone()))
            .collect();
        let (injective, bijective) = self.atom_map_bijective(a);
        Ok(AtomJoinMap {
            atom: alpha.clone(),
            pairs,
            injective,
            bijective,
        })
    }

    pub fn is_distributive(&self) -> bool {
        let m = self.len();
        if m <= TRIPLE_CHECK_LIMIT {
            for x in 0..m {
                for y in 0..m {
                    for z in y + 1..m {
                        let lhs = self.meet_idx(x, self.join_idx(y, z));
                        let rhs = self.join_idx(self.meet_idx(x, y), self.meet_idx(x, z));
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
            true
        } else {
            self.join_irreducibles_are_join_prime()
        }
    }

    /// A finite lattice is distributive iff every join-irreducible `j`
    /// satisfies `j ≤ x ∨ y ⇒ j ≤ x or j ≤ y`.
    fn join_irreducibles_are_join_prime(&self) -> bool {
        let m = self.len();
        // j is join-irreducible iff the join of everything strictly below it is not j
        let irreducibles: Vec<usize> = (1..m)
            .filter(|&j| {
                let below = (0..m)
                    .filter(|&k| k != j && self.leq_idx(k, j))
                    .fold(self.bottom_idx(), |acc, k| self.join_idx(acc, k));
                below != j
            })
            .collect();
        irreducibles.iter().all(|&j| {
            (0..m).all(|x| {
                self.leq_idx(j, x)
                    || (0..m).all(|y| {
                        self.leq_idx(j, y) || !self.leq_idx(j, self.join_idx(x, y))
                    })
            })
        })
    }

    /// Every member has a complement.
    pub fn is_complemented(&self) -> bool {
        let (b, t) = (self.bottom_idx(), self.top_idx());
        (0..self.len()).all(|x| {
            (0..self.len()).any(|y| self.join_idx(x, y) == t && self.meet_idx(x, y) == b)
        })
    }

    pub fn is_boolean_by_complements(&self) -> bool {
        self.is_distributive() && self.is_complemented()
    }

    pub fn is_boolean_by_atom_maps(&self) -> bool {
        self.is_distributive()
            && self
                .atom_indices()
                .into_iter()
                .all(|a| self.atom_map_bijective(a).1)
    }

    /// Boolean test; both characterizations are evaluated and must agree.
    pub fn is_boolean(&self) -> bool {
        let by_complements = self.is_boolean_by_complements();
        let by_maps = self.is_boolean_by_atom_maps();
        assert_eq!(
            by_complements, by_maps,
            "boolean characterizations disagree on a distributive lattice"
        );
        by_complements
    }
}
