//! Square boolean matrices stored as packed 64-bit rows.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Number of set bits in row `i`.
    pub fn row_count(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of set bits in row `i`, ascending.
    pub fn row_iter(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.n;
        self.row(i).iter().enumerate().flat_map(move |(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
            .take_while(move |&j| j < n)
        })
    }

    /// `row(i) |= row(k)`.
    fn or_row_into(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        let w = self.words;
        let (src, dst) = if k < i {
            let (lo, hi) = self.bits.split_at_mut(i * w);
            (&lo[k * w..(k + 1) * w], &mut hi[..w])
        } else {
            let (lo, hi) = self.bits.split_at_mut(k * w);
            (&hi[..w], &mut lo[i * w..(i + 1) * w])
        };
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= *s;
        }
    }

    /// Warshall closure, row-parallel.
    pub fn transitive_closure(&mut self) {
        for k in 0..self.n {
            for i in 0..self.n {
                if self.get(i, k) {
                    self.or_row_into(i, k);
                }
            }
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::new(self.n);
        for i in 0..self.n {
            for j in self.row_iter(i) {
                t.set(j, i);
            }
        }
        t
    }

    #[cfg(test)]
    pub fn is_transitive(&self) -> bool {
        let mut c = self.clone();
        c.transitive_closure();
        &c == self
    }

    /// Relabel so that the old element `order[pos]` becomes `pos`.
    #[cfg(test)]
    pub fn permuted(&self, order: &[usize]) -> Self {
        let mut m = Self::new(self.n);
        for (pi, &i) in order.iter().enumerate() {
            for (pj, &j) in order.iter().enumerate() {
                if self.get(i, j) {
                    m.set(pi, pj);
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_path() {
        let mut m = BitMatrix::identity(70);
        for i in 0..69 {
            m.set(i, i + 1);
        }
        m.transitive_closure();
        assert!(m.get(0, 69));
        assert!(!m.get(69, 0));
        assert_eq!(m.row_count(0), 70);
        assert_eq!(m.row_iter(65).collect::<Vec<_>>(), vec![65, 66, 67, 68, 69]);
        assert!(m.is_transitive());
    }

    #[test]
    fn transpose_roundtrip() {
        let mut m = BitMatrix::new(3);
        m.set(0, 2);
        m.set(1, 2);
        let t = m.transpose();
        assert!(t.get(2, 0) && t.get(2, 1) && !t.get(0, 2));
        assert_eq!(t.transpose(), m);
    }
}
