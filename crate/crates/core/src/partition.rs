//! Set partitions (equivalence relations) of `{0, .., n-1}`.
//!
//! A [`Partition`] stores, for every element, the least element of its
//! block. Equal partitions are therefore bitwise equal, and the derived
//! `Ord` (lexicographic on that array) is the tie-break used when sorting
//! congruence lattices.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest universe accepted by [`all_partitions`]; B(12) = 4 213 597.
pub const PARTITION_BUDGET: usize = 12;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    rep: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(rep: Vec<usize>) -> Result<Self> {
        Partition::from_rep(rep)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.rep
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in self.blocks() {
            write!(f, "{{")?;
            for (i, x) in block.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// Union-find whose roots are always the least element of a class.
struct MinUnionFind(Vec<usize>);

impl MinUnionFind {
    fn new(n: usize) -> Self {
        MinUnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }

    fn into_partition(mut self) -> Partition {
        let rep = (0..self.0.len()).map(|i| self.find(i)).collect();
        Partition { rep }
    }
}

impl Partition {
    /// Accepts only arrays already in canonical representative form.
    pub fn from_rep(rep: Vec<usize>) -> Result<Self> {
        for (i, &r) in rep.iter().enumerate() {
            if r > i || rep[r] != r {
                return Err(Error::InvalidPartition(format!(
                    "rep[{i}] = {r} is not the least element of its block"
                )));
            }
        }
        Ok(Partition { rep })
    }

    /// Normalizes arbitrary block labels: `i` and `j` share a block iff
    /// `labels[i] == labels[j]`.
    pub fn from_labels<T: Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut first: HashMap<&T, usize> = HashMap::new();
        let rep = labels
            .iter()
            .enumerate()
            .map(|(i, l)| *first.entry(l).or_insert(i))
            .collect();
        Partition { rep }
    }

    /// Least equivalence containing all given pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut uf = MinUnionFind::new(n);
        for &(a, b) in pairs {
            for e in [a, b] {
                if e >= n {
                    return Err(Error::OutOfRange { element: e, n });
                }
            }
            uf.union(a, b);
        }
        Ok(uf.into_partition())
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut pairs = Vec::new();
        for b in blocks {
            for w in b.windows(2) {
                pairs.push((w[0], w[1]));
            }
            if let Some(&x) = b.first() {
                pairs.push((x, x));
            }
        }
        Self::from_pairs(n, &pairs)
    }

    pub fn bottom(n: usize) -> Self {
        Partition {
            rep: (0..n).collect(),
        }
    }

    pub fn top(n: usize) -> Self {
        Partition { rep: vec![0; n] }
    }

    /// `equ(a, b)`: collapses exactly `{a, b}`.
    pub fn equ_pair(n: usize, a: usize, b: usize) -> Result<Self> {
        Self::from_pairs(n, &[(a, b)])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }

    pub fn rep(&self) -> &[usize] {
        &self.rep
    }

    #[inline]
    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.rep[a] == self.rep[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.rep.iter().enumerate().filter(|&(i, &r)| i == r).count()
    }

    /// Height in the partition lattice: `n - num_blocks`.
    pub fn heq(&self) -> usize {
        self.len() - self.num_blocks()
    }

    pub fn is_bottom(&self) -> bool {
        self.num_blocks() == self.len()
    }

    pub fn is_top(&self) -> bool {
        self.rep.iter().all(|&r| r == 0)
    }

    /// Blocks in order of their least elements, each sorted.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut index = vec![usize::MAX; self.len()];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &r) in self.rep.iter().enumerate() {
            if r == i {
                index[i] = blocks.len();
                blocks.push(vec![i]);
            } else {
                blocks[index[r]].push(i);
            }
        }
        blocks
    }

    /// Block number of each element, numbering blocks by least element.
    pub fn block_index(&self) -> Vec<usize> {
        let mut index = vec![0; self.len()];
        let mut next = 0;
        for (i, &r) in self.rep.iter().enumerate() {
            if r == i {
                index[i] = next;
                next += 1;
            } else {
                index[i] = index[r];
            }
        }
        index
    }

    fn check_size(&self, other: &Partition) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &Partition) -> Result<bool> {
        self.check_size(other)?;
        Ok(self.refines(other))
    }

    pub(crate) fn refines(&self, other: &Partition) -> bool {
        self.rep
            .iter()
            .enumerate()
            .all(|(i, &r)| other.rep[i] == other.rep[r])
    }

    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.check_size(other)?;
        Ok(self.join_unchecked(other))
    }

    pub(crate) fn join_unchecked(&self, other: &Partition) -> Partition {
        let mut uf = MinUnionFind::new(self.len());
        for i in 0..self.len() {
            uf.union(i, self.rep[i]);
            uf.union(i, other.rep[i]);
        }
        uf.into_partition()
    }

    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.check_size(other)?;
        Ok(self.meet_unchecked(other))
    }

    pub(crate) fn meet_unchecked(&self, other: &Partition) -> Partition {
        let pairs: Vec<(usize, usize)> = (0..self.len())
            .map(|i| (self.rep[i], other.rep[i]))
            .collect();
        Partition::from_labels(&pairs)
    }

}

/// Iterator over all partitions of `{0..n-1}` via restricted growth strings,
/// in lexicographic order of the string.
pub struct Partitions {
    rgs: Vec<usize>,
    maxes: Vec<usize>,
    done: bool,
}

impl Partitions {
    pub fn new(n: usize) -> Self {
        Partitions {
            rgs: vec![0; n],
            maxes: vec![0; n],
            done: false,
        }
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition::from_labels(&self.rgs);
        // advance: rightmost position that can still grow
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            let prev_max = self.maxes[i - 1];
            if self.rgs[i] <= prev_max {
                self.rgs[i] += 1;
                self.maxes[i] = prev_max.max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.maxes[j] = self.maxes[i];
                }
                break;
            }
        }
        Some(out)
    }
}

/// Every partition of `{0..n-1}`, each once.
pub fn all_partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 {
        return Err(Error::Domain("partitions need n >= 1".into()));
    }
    if n > PARTITION_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "universe size",
            value: n,
            limit: PARTITION_BUDGET,
        });
    }
    Ok(Partitions::new(n).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(rep: &[usize]) -> Partition {
        Partition::from_rep(rep.to_vec()).unwrap()
    }

    #[test]
    fn bottom_and_top() {
        let b = Partition::bottom(3);
        assert_eq!(b.blocks(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(b.num_blocks(), 3);
        assert_eq!(b.heq(), 0);
        let t = Partition::top(3);
        assert_eq!(t.num_blocks(), 1);
        assert_eq!(t.heq(), 2);
        assert_eq!(Partition::top(7).heq(), 6);
    }

    #[test]
    fn equ_pairs() {
        assert_eq!(Partition::equ_pair(4, 1, 2).unwrap(), p(&[0, 1, 1, 3]));
        assert_eq!(Partition::equ_pair(4, 2, 2).unwrap(), Partition::bottom(4));
        assert_eq!(Partition::equ_pair(6, 5, 0).unwrap().heq(), 1);
        assert!(matches!(
            Partition::equ_pair(3, 0, 3),
            Err(Error::OutOfRange { element: 3, n: 3 })
        ));
    }

    #[test]
    fn join_meet_examples() {
        let a = Partition::equ_pair(4, 0, 1).unwrap();
        let b = Partition::equ_pair(4, 1, 2).unwrap();
        assert_eq!(a.join(&b).unwrap(), p(&[0, 0, 0, 3]));
        assert_eq!(a.meet(&b).unwrap(), Partition::bottom(4));
        assert_eq!(a.join(&Partition::bottom(4)).unwrap(), a);
        assert_eq!(a.meet(&Partition::top(4)).unwrap(), a);
        assert!(matches!(a.join(&Partition::top(3)), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn heights_and_blocks() {
        let q = p(&[0, 0, 2, 3, 4]);
        assert_eq!(q.num_blocks(), 4);
        assert_eq!(q.heq(), 1);
        assert_eq!(format!("{}", p(&[0, 0, 2, 2, 4])), "{0,1}{2,3}{4}");
        assert_eq!(serde_json::to_string(&p(&[0, 0, 2, 2, 4])).unwrap(), "[0,0,2,2,4]");
        let back: Partition = serde_json::from_str("[0,0,2,2,4]").unwrap();
        assert_eq!(back, p(&[0, 0, 2, 2, 4]));
        assert!(serde_json::from_str::<Partition>("[0,0,1]").is_err());
    }

    #[test]
    fn rejects_non_canonical() {
        assert!(Partition::from_rep(vec![1, 1]).is_err());
        assert!(Partition::from_rep(vec![0, 0, 1]).is_err());
        assert_eq!(Partition::from_labels(&[7, 3, 7]), p(&[0, 1, 0]));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_partitions(1).unwrap().len(), 1);
        assert_eq!(all_partitions(3).unwrap().len(), 5);
        let four = all_partitions(4).unwrap();
        assert_eq!(four.len(), 15);
        assert_eq!(four.iter().filter(|q| q.num_blocks() == 2).count(), 7);
        assert!(matches!(all_partitions(13), Err(Error::BudgetExceeded { .. })));
        // lexicographic restricted growth order: bottom comes last, top first
        assert_eq!(four[0], Partition::top(4));
        assert_eq!(four[14], Partition::bottom(4));
    }

    #[test]
    fn covering_by_block_count() {
        let parts = all_partitions(5).unwrap();
        for a in &parts {
            for b in &parts {
                if a == b || !a.refines(b) {
                    continue;
                }
                let strictly_between = parts
                    .iter()
                    .any(|c| c != a && c != b && a.refines(c) && c.refines(b));
                assert_eq!(!strictly_between, b.num_blocks() + 1 == a.num_blocks());
            }
        }
    }
}
