//! Canonical labeling of small posets.
//!
//! Elements are split into classes by isomorphism-invariant data (down-set
//! size, up-set size, cover degrees), refined by the classes of their cover
//! neighbours until stable. Classes are laid out in invariant order and the
//! canonical form is the lexicographically least strict-upper-triangle of the
//! order matrix over all placements that respect the classes. Because the
//! down-set size is the leading invariant, every admissible placement is a
//! linear extension and the lower triangle is always zero.

use std::collections::BTreeMap;

use crate::bits::BitMatrix;

/// Upper triangle of an 11-element poset has 55 bits.
pub(crate) const MAX_ORDER: usize = 11;

pub(crate) struct Canonical {
    pub form: Vec<u8>,
    /// `order[pos]` is the original element placed at `pos`.
    pub order: Vec<usize>,
}

pub(crate) fn canonical(leq: &BitMatrix) -> Canonical {
    let n = leq.size();
    assert!(n <= MAX_ORDER, "canonical labeling supports at most {MAX_ORDER} elements");
    let classes = refined_classes(leq);
    let mut slot_class: Vec<usize> = classes.clone();
    slot_class.sort_unstable();

    let mut search = Search {
        leq,
        n,
        classes: &classes,
        slot_class: &slot_class,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        best: None,
    };
    search.descend(0);
    let (code, order) = search.best.expect("at least one placement exists");
    let mut form = vec![n as u8];
    form.extend_from_slice(&code.to_be_bytes()[..bit_offset(n).div_ceil(8).max(1)]);
    Canonical { form, order }
}

fn bit_offset(k: usize) -> usize {
    // bits emitted before column k: 0 + 1 + ... + (k-1)
    k * k.saturating_sub(1) / 2
}

/// Mask selecting the bits of columns `0..=k`, most significant first.
fn prefix_mask(k: usize) -> u64 {
    let len = bit_offset(k + 1);
    if len == 0 {
        0
    } else {
        !0u64 << (64 - len)
    }
}

struct Search<'a> {
    leq: &'a BitMatrix,
    n: usize,
    classes: &'a [usize],
    slot_class: &'a [usize],
    order: Vec<usize>,
    used: Vec<bool>,
    best: Option<(u64, Vec<usize>)>,
}

impl Search<'_> {
    fn code_of(&self) -> u64 {
        let mut code = 0u64;
        for k in 1..self.order.len() {
            for i in 0..k {
                if self.leq.get(self.order[i], self.order[k]) {
                    code |= 1 << (63 - (bit_offset(k) + i));
                }
            }
        }
        code
    }

    fn descend(&mut self, k: usize) {
        if k == self.n {
            let code = self.code_of();
            match &self.best {
                Some((b, _)) if *b <= code => {}
                _ => self.best = Some((code, self.order.clone())),
            }
            return;
        }
        let mask = prefix_mask(k);
        for e in 0..self.n {
            if self.used[e] || self.classes[e] != self.slot_class[k] {
                continue;
            }
            self.order.push(e);
            // prune when the prefix is already larger than the best's
            let worse = match &self.best {
                Some((b, _)) => self.code_of() & mask > b & mask,
                None => false,
            };
            if !worse {
                self.used[e] = true;
                self.descend(k + 1);
                self.used[e] = false;
            }
            self.order.pop();
        }
    }
}

/// Invariant class id per element; ids are ranks of invariant tuples, so
/// they do not depend on the input labeling.
pub(crate) fn refined_classes(leq: &BitMatrix) -> Vec<usize> {
    let n = leq.size();
    let geq = leq.transpose();
    let mut lower: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut upper: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, ups) in upper.iter_mut().enumerate() {
        for b in leq.row_iter(a) {
            if b == a {
                continue;
            }
            let cover = !leq.row_iter(a).any(|z| z != a && z != b && leq.get(z, b));
            if cover {
                ups.push(b);
                lower[b].push(a);
            }
        }
    }
    let base: Vec<[usize; 4]> = (0..n)
        .map(|x| [geq.row_count(x), leq.row_count(x), lower[x].len(), upper[x].len()])
        .collect();
    let mut classes = rank(&base);
    loop {
        let keys: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|x| {
                let mut lo: Vec<usize> = lower[x].iter().map(|&y| classes[y]).collect();
                let mut up: Vec<usize> = upper[x].iter().map(|&y| classes[y]).collect();
                lo.sort_unstable();
                up.sort_unstable();
                (classes[x], lo, up)
            })
            .collect();
        let next = rank(&keys);
        let before = count_distinct(&classes);
        let after = count_distinct(&next);
        classes = next;
        if after == before {
            return classes;
        }
    }
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let ids: BTreeMap<K, usize> = {
        let mut sorted: Vec<K> = keys.to_vec();
        sorted.sort();
        sorted.dedup();
        sorted.into_iter().enumerate().map(|(i, k)| (k, i)).collect()
    };
    keys.iter().map(|k| ids[k]).collect()
}

fn count_distinct(v: &[usize]) -> usize {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poset(n: usize, rel: &[(usize, usize)]) -> BitMatrix {
        let mut m = BitMatrix::identity(n);
        for &(a, b) in rel {
            m.set(a, b);
        }
        m.transitive_closure();
        m
    }

    #[test]
    fn antichain_placements_collapse() {
        // M3-like poset: three middle elements are interchangeable
        let m = poset(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]);
        let c = canonical(&m);
        assert_eq!(c.order[0], 0);
        assert_eq!(c.order[4], 4);
    }

    #[test]
    fn labeling_is_a_linear_extension() {
        let m = poset(5, &[(3, 1), (1, 2), (2, 0), (3, 4), (4, 0)]);
        let c = canonical(&m);
        let relabeled = m.permuted(&c.order);
        for i in 0..5 {
            for j in 0..i {
                assert!(!relabeled.get(i, j));
            }
        }
    }
}
