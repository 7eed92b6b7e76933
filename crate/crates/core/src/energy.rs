//! Graph energy of congruences and the total congruence energy.
//!
//! The energy of a congruence is the energy of the graph joining distinct
//! elements that share a block. That graph is a disjoint union of cliques,
//! so its energy is `2·(n − #blocks)`; [`combinatorial_energy`] returns that
//! integer and is what [`congruence_energy`] sums. The eigenvalue route
//! ([`spectrum`], [`spectral_energy`]) exists to check the definition.

use crate::congruence::CongruenceLattice;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 64;

/// Rotations are skipped below this magnitude.
const NEGLIGIBLE: f64 = 1e-300;

/// Symmetric 0/1 matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl AdjacencyMatrix {
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::SizeMismatch {
                    left: n,
                    right: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(Error::Domain(format!("entry ({i},{j}) is {v}, expected 0 or 1")));
                }
                if i == j && v != 0 {
                    return Err(Error::Domain(format!("nonzero diagonal at {i}")));
                }
            }
            entries.extend_from_slice(row);
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::Domain(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        Ok(AdjacencyMatrix { n, entries })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    pub fn edge_count(&self) -> usize {
        self.entries.iter().filter(|&&v| v == 1).count() / 2
    }

    /// Simultaneous row/column permutation: old vertex `order[pos]` becomes `pos`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let n = self.n;
        let mut entries = vec![0; n * n];
        for (pi, &i) in order.iter().enumerate() {
            for (pj, &j) in order.iter().enumerate() {
                entries[pi * n + pj] = self.entries[i * n + j];
            }
        }
        AdjacencyMatrix { n, entries }
    }
}

/// Entry `(i, j)` is 1 iff `i != j` and both lie in one block.
pub fn adjacency_of(p: &Partition) -> AdjacencyMatrix {
    let n = p.len();
    let mut entries = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j && p.same_block(i, j) {
                entries[i * n + j] = 1;
            }
        }
    }
    AdjacencyMatrix { n, entries }
}

/// Eigenvalues in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub sweeps: usize,
}

impl Spectrum {
    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x * x).sum()
    }

    pub fn energy(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x.abs()).sum()
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Cyclic-by-row Jacobi on a dense symmetric matrix stored row-major.
/// Iterates until the off-diagonal Frobenius norm drops below `tol·n`.
pub fn symmetric_eigenvalues(matrix: &[f64], n: usize, tol: f64) -> Result<Spectrum> {
    jacobi(matrix, n, tol, MAX_SWEEPS)
}

fn jacobi(matrix: &[f64], n: usize, tol: f64, max_sweeps: usize) -> Result<Spectrum> {
    if matrix.len() != n * n {
        return Err(Error::SizeMismatch {
            left: n * n,
            right: matrix.len(),
        });
    }
    if tol.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if let Some(i) = matrix.iter().position(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("non-finite entry at ({}, {})", i / n, i % n)));
    }
    for i in 0..n {
        for j in 0..i {
            if matrix[i * n + j] != matrix[j * n + i] {
                return Err(Error::Domain(format!("asymmetric at ({i},{j})")));
            }
        }
    }
    let mut a = matrix.to_vec();
    let threshold = tol * n.max(1) as f64;
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a, n);
        if off < threshold {
            break;
        }
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < NEGLIGIBLE {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // tan of the rotation angle, the smaller root
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    Ok(Spectrum { eigenvalues, sweeps })
}

pub fn spectrum(m: &AdjacencyMatrix, tol: f64) -> Result<Spectrum> {
    let dense: Vec<f64> = m.entries.iter().map(|&v| v as f64).collect();
    symmetric_eigenvalues(&dense, m.n, tol)
}

/// Sum of absolute eigenvalues.
pub fn spectral_energy(m: &AdjacencyMatrix, tol: f64) -> Result<f64> {
    Ok(spectrum(m, tol)?.energy())
}

/// `2·(n − #blocks)`, exact.
pub fn combinatorial_energy(p: &Partition) -> u64 {
    2 * p.heq() as u64
}

/// Sum of the energies of all members.
pub fn congruence_energy(c: &CongruenceLattice) -> u64 {
    let total: u64 = c.members().iter().map(combinatorial_energy).sum();
    let n = c.host_size() as u64;
    let blocks: u64 = c.members().iter().map(|p| p.num_blocks() as u64).sum();
    debug_assert_eq!(total, 2 * n * c.len() as u64 - 2 * blocks);
    total
}
