//! Finite lattices given by their covering relation.
//!
//! Elements are `0..n`. A [`Lattice`] is immutable once built and carries its
//! order matrix (packed rows, both directions) together with full join and
//! meet tables, so every query after construction is a table lookup.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::BitMatrix;
use crate::canon;
use crate::error::{Error, Result};

/// Largest order accepted by [`Lattice::canonical_form`] and friends.
pub const CANONICAL_BUDGET: usize = 10;

/// A covering pair `lo ≺ hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrimeInterval {
    pub lo: usize,
    pub hi: usize,
}

impl PrimeInterval {
    pub fn new(lo: usize, hi: usize) -> Self {
        PrimeInterval { lo, hi }
    }
}

impl fmt::Display for PrimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Interchange form: `{"n": 4, "covers": [[0,1],[0,2],[1,3],[2,3]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
}

#[derive(Clone)]
pub struct Lattice {
    n: usize,
    covers: Vec<(usize, usize)>,
    leq: BitMatrix,
    geq: BitMatrix,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.covers == other.covers
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("n", &self.n)
            .field("covers", &self.covers)
            .finish()
    }
}

/// The small lattices with names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Named {
    B4,
    M3,
    N5,
}

impl FromStr for Named {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "b4" => Ok(Named::B4),
            "m3" => Ok(Named::M3),
            "n5" => Ok(Named::N5),
            _ => Err(Error::Domain(format!("unknown named lattice {s:?}"))),
        }
    }
}

/// Element labels of the pentagon built by [`Lattice::named`]:
/// `0 < P < Q < 1` and `0 < A < 1`.
pub mod n5 {
    pub const BOTTOM: usize = 0;
    pub const P: usize = 1;
    pub const Q: usize = 2;
    pub const A: usize = 3;
    pub const TOP: usize = 4;
}

impl Lattice {
    /// Build a lattice from its covering pairs.
    ///
    /// Every input pair must be a genuine cover; pairs implied by
    /// transitivity are rejected rather than dropped.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a lattice needs at least one element".into()));
        }
        let mut rel = BitMatrix::identity(n);
        for &(a, b) in covers {
            for e in [a, b] {
                if e >= n {
                    return Err(Error::OutOfRange { element: e, n });
                }
            }
            if a == b {
                return Err(Error::NotAPoset(format!("loop at {a}")));
            }
            if rel.get(a, b) {
                return Err(Error::RedundantCover(a, b));
            }
            rel.set(a, b);
        }
        let mut leq = rel;
        leq.transitive_closure();
        for i in 0..n {
            for j in leq.row_iter(i) {
                if j != i && leq.get(j, i) {
                    return Err(Error::NotAPoset(format!("cycle through {i} and {j}")));
                }
            }
        }
        for &(a, b) in covers {
            let between = (0..n).any(|z| z != a && z != b && leq.get(a, z) && leq.get(z, b));
            if between {
                return Err(Error::RedundantCover(a, b));
            }
        }
        Self::from_order(leq)
    }

    pub fn from_doc(doc: &LatticeDoc) -> Result<Self> {
        let covers: Vec<_> = doc.covers.iter().map(|c| (c[0], c[1])).collect();
        Self::from_covers(doc.n, &covers)
    }

    pub fn to_doc(&self) -> LatticeDoc {
        LatticeDoc {
            n: self.n,
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: LatticeDoc =
            serde_json::from_str(s).map_err(|e| Error::Domain(format!("lattice JSON: {e}")))?;
        Self::from_doc(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("lattice doc serializes")
    }

    /// Build from a reflexive order matrix that is already known to be a
    /// partial order. Checks the lattice property and derives the covers.
    pub(crate) fn from_order(leq: BitMatrix) -> Result<Self> {
        let n = leq.size();
        let geq = leq.transpose();
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for x in 0..n {
            for y in x..n {
                let j = least_in(&leq, x, y).ok_or(Error::NotALattice {
                    a: x,
                    b: y,
                    which: "join",
                })?;
                let m = least_in(&geq, x, y).ok_or(Error::NotALattice {
                    a: x,
                    b: y,
                    which: "meet",
                })?;
                join[x * n + y] = j;
                join[y * n + x] = j;
                meet[x * n + y] = m;
                meet[y * n + x] = m;
            }
        }
        let bottom = (0..n).fold(0, |acc, x| meet[acc * n + x]);
        let top = (0..n).fold(0, |acc, x| join[acc * n + x]);
        let mut covers = Vec::new();
        for a in 0..n {
            for b in leq.row_iter(a) {
                if b == a {
                    continue;
                }
                let between = leq
                    .row_iter(a)
                    .any(|z| z != a && z != b && leq.get(z, b));
                if !between {
                    covers.push((a, b));
                }
            }
        }
        covers.sort_unstable();
        Ok(Lattice {
            n,
            covers,
            leq,
            geq,
            join,
            meet,
            bottom,
            top,
        })
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        assert!(n >= 1, "chain needs n >= 1");
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_covers(n, &covers).expect("chain is a lattice")
    }

    pub fn named(which: Named) -> Self {
        let covers: &[(usize, usize)] = match which {
            Named::B4 => &[(0, 1), (0, 2), (1, 3), (2, 3)],
            Named::M3 => &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
            Named::N5 => &[
                (n5::BOTTOM, n5::P),
                (n5::P, n5::Q),
                (n5::Q, n5::TOP),
                (n5::BOTTOM, n5::A),
                (n5::A, n5::TOP),
            ],
        };
        let n = if which == Named::B4 { 4 } else { 5 };
        Self::from_covers(n, covers).expect("named lattice is valid")
    }

    /// Glued sum: `v` stacked on `u` with the top of `u` identified with the
    /// bottom of `v`. Elements of `u` come first, in a linear extension.
    pub fn glued_sum(u: &Lattice, v: &Lattice) -> Self {
        let u = u.linearized();
        let v = v.linearized();
        let offset = u.n - 1;
        let n = u.n + v.n - 1;
        let mut covers = u.covers.clone();
        covers.extend(v.covers.iter().map(|&(a, b)| (a + offset, b + offset)));
        Self::from_covers(n, &covers).expect("glued sum is a lattice")
    }

    /// Glue a sequence of lattices bottom to top.
    pub fn glued_sum_all<'a>(parts: impl IntoIterator<Item = &'a Lattice>) -> Self {
        let mut iter = parts.into_iter();
        let first = iter.next().expect("at least one summand").linearized();
        iter.fold(first, |acc, next| Self::glued_sum(&acc, next))
    }

    /// Order dual, relabeled by `i -> n-1-i` so that `dual(dual(L)) == L`.
    pub fn dual(&self) -> Self {
        let n = self.n;
        let covers: Vec<_> = self
            .covers
            .iter()
            .map(|&(a, b)| (n - 1 - b, n - 1 - a))
            .collect();
        Self::from_covers(n, &covers).expect("dual of a lattice is a lattice")
    }

    /// Relabel so that the old element `order[pos]` becomes `pos`.
    pub fn relabeled(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.n);
        let mut pos = vec![usize::MAX; self.n];
        for (p, &e) in order.iter().enumerate() {
            pos[e] = p;
        }
        let covers: Vec<_> = self.covers.iter().map(|&(a, b)| (pos[a], pos[b])).collect();
        Self::from_covers(self.n, &covers).expect("relabeling preserves the lattice")
    }

    /// Relabel along the least-index-first linear extension; a no-op when
    /// the labels already form a linear extension.
    pub fn linearized(&self) -> Self {
        let mut indeg = vec![0usize; self.n];
        for &(_, b) in &self.covers {
            indeg[b] += 1;
        }
        let mut ready: std::collections::BTreeSet<usize> =
            (0..self.n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(x) = ready.pop_first() {
            order.push(x);
            for y in self.upper_covers(x) {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.insert(y);
                }
            }
        }
        if order.iter().enumerate().all(|(i, &e)| i == e) {
            self.clone()
        } else {
            self.relabeled(&order)
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    #[inline]
    pub fn bottom(&self) -> usize {
        self.bottom
    }

    #[inline]
    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq.get(a, b)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq.get(a, b)
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq.get(a, b) || self.leq.get(b, a)
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b]
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b]
    }

    pub fn join_table(&self) -> &[usize] {
        &self.join
    }

    pub fn meet_table(&self) -> &[usize] {
        &self.meet
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.covers.binary_search(&(a, b)).is_ok()
    }

    pub fn upper_covers(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.covers.partition_point(|&(x, _)| x < a);
        self.covers[start..]
            .iter()
            .take_while(move |&&(x, _)| x == a)
            .map(|&(_, b)| b)
    }

    pub fn lower_covers(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers
            .iter()
            .filter(move |&&(_, y)| y == b)
            .map(|&(a, _)| a)
    }

    /// Elements of the interval `[a, b]` in ascending label order.
    pub fn interval(&self, a: usize, b: usize) -> Vec<usize> {
        self.leq
            .row_iter(a)
            .filter(|&z| self.geq.get(b, z))
            .collect()
    }

    pub fn is_chain(&self) -> bool {
        self.count_two_element_antichains() == 0
    }

    pub fn count_two_element_antichains(&self) -> usize {
        let mut count = 0;
        for a in 0..self.n {
            for b in a + 1..self.n {
                if !self.comparable(a, b) {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn prime_intervals(&self) -> Vec<PrimeInterval> {
        self.covers
            .iter()
            .map(|&(lo, hi)| PrimeInterval { lo, hi })
            .collect()
    }

    /// Atoms of the lattice (upper covers of the bottom).
    pub fn atoms(&self) -> Vec<usize> {
        self.upper_covers(self.bottom).collect()
    }

    /// Permutation-invariant byte string; equal exactly for isomorphic
    /// lattices.
    pub fn canonical_form(&self) -> Result<Vec<u8>> {
        self.check_canonical_budget()?;
        Ok(canon::canonical(&self.leq).form)
    }

    /// Isomorphic copy in canonical labeling. The labeling is a linear
    /// extension, so the bottom is `0` and the top is `n-1`.
    pub fn canonical(&self) -> Result<Self> {
        self.check_canonical_budget()?;
        let c = canon::canonical(&self.leq);
        Ok(self.relabeled(&c.order))
    }

    pub fn are_isomorphic(a: &Lattice, b: &Lattice) -> Result<bool> {
        if a.n != b.n || a.covers.len() != b.covers.len() {
            a.check_canonical_budget()?;
            b.check_canonical_budget()?;
            return Ok(false);
        }
        Ok(a.canonical_form()? == b.canonical_form()?)
    }

    fn check_canonical_budget(&self) -> Result<()> {
        if self.n > CANONICAL_BUDGET {
            return Err(Error::BudgetExceeded {
                what: "lattice order",
                value: self.n,
                limit: CANONICAL_BUDGET,
            });
        }
        Ok(())
    }
}

/// Least element of `up(x) ∩ up(y)` with respect to the row relation `up`.
/// Called with the transposed order for meets.
fn least_in(up: &BitMatrix, x: usize, y: usize) -> Option<usize> {
    let common: Vec<u64> = up
        .row(x)
        .iter()
        .zip(up.row(y))
        .map(|(a, b)| a & b)
        .collect();
    let mut found = None;
    for (w, &word) in common.iter().enumerate() {
        let mut word = word;
        while word != 0 {
            let u = w * 64 + word.trailing_zeros() as usize;
            word &= word - 1;
            // u is least iff every common bound lies above it
            if common
                .iter()
                .zip(up.row(u))
                .all(|(c, r)| c & !r == 0)
            {
                found = Some(u);
                break;
            }
        }
        if found.is_some() {
            break;
        }
    }
    found
}
