use nalgebra::DMatrix;
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use conergy::congruence::{all_congruences, principal_congruence, principal_congruence_along};
use conergy::energy::{adjacency_of, symmetric_eigenvalues};
use conergy::enumeration::{all_lattices, all_lattices_with_budget, glued_b4_count, is_glued_b4_shape};
use conergy::extremal::{bell, bell2, equ_energy_bound};
use conergy::oracle::{algebra_congruences_direct, cross_check, labeled_lattices, principal_congruence_direct};
use conergy::partition::{all_partitions, Partition};
use conergy::ualgebra::{all_congruences_alg, discriminator, xor_square, FiniteAlgebra, Operation};
use conergy::{congruence_energy, Lattice, Named};

#[test]
fn enumeration_matches_labeled_oracle() {
    for n in 1..=7 {
        let report = cross_check(n).unwrap();
        assert!(report.is_clean(), "{report:?}");
    }
}

#[test]
fn enumeration_counts_to_nine() {
    assert_eq!(all_lattices_with_budget(9, 9).unwrap().len(), 1078);
    // the hard cap wins over a larger requested budget
    assert!(all_lattices_with_budget(10, 12).is_err());
}

#[test]
fn glued_b4_witnesses_are_counted_by_enumeration() {
    for n in 4..=8 {
        let found = all_lattices(n).unwrap().iter().filter(|l| is_glued_b4_shape(l)).count();
        assert_eq!(found, n - 3);
        assert_eq!(glued_b4_count(n).unwrap(), n - 3);
    }
}

#[test]
fn principal_congruences_by_meet_of_all() {
    for n in 1..=6 {
        for l in labeled_lattices(n).unwrap() {
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(
                        principal_congruence(&l, a, b).unwrap(),
                        principal_congruence_direct(&l, a, b).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn any_maximal_chain_gives_the_same_principal_congruence() {
    let l = Lattice::named(Named::N5);
    use conergy::lattice::n5::*;
    let left = principal_congruence_along(&l, &[BOTTOM, P, Q, TOP]).unwrap();
    let right = principal_congruence_along(&l, &[BOTTOM, A, TOP]).unwrap();
    assert_eq!(left, right);
    assert!(left.is_top());
}

#[test]
fn algebra_closure_matches_tuple_check() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..40 {
        let n: usize = rng.gen_range(2..=5);
        let arity: usize = rng.gen_range(1..=3);
        let table = (0..n.pow(arity as u32)).map(|_| rng.gen_range(0..n)).collect();
        let a = FiniteAlgebra::new(n, vec![Operation { name: "f".into(), arity, table }]).unwrap();
        let mut direct = algebra_congruences_direct(&a).unwrap();
        direct.sort();
        let mut fast = all_congruences_alg(&a).unwrap().members().to_vec();
        fast.sort();
        assert_eq!(fast, direct);
    }
    assert_eq!(algebra_congruences_direct(&xor_square()).unwrap().len(), 5);
    assert_eq!(algebra_congruences_direct(&discriminator(4).unwrap()).unwrap().len(), 2);
}

#[test]
fn bell_numbers_count_partitions() {
    for n in 1..=10 {
        let parts = all_partitions(n).unwrap();
        assert_eq!(bell(n).unwrap(), BigUint::from(parts.len()));
        let blocks: usize = parts.iter().map(Partition::num_blocks).sum();
        assert_eq!(bell2(n).unwrap(), BigUint::from(blocks));
    }
}

#[test]
fn bare_set_attains_the_partition_bound() {
    for n in 1..=6 {
        let con = all_congruences_alg(&FiniteAlgebra::bare(n).unwrap()).unwrap();
        assert_eq!(con.len(), all_partitions(n).unwrap().len());
        assert_eq!(BigUint::from(congruence_energy(&con)), equ_energy_bound(n).unwrap());
    }
}

#[test]
fn eigenvalues_agree_with_nalgebra() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.gen_range(1..=12);
        let mut dense = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = rng.gen_range(-5.0..5.0);
                dense[i * n + j] = v;
                dense[j * n + i] = v;
            }
        }
        let ours = symmetric_eigenvalues(&dense, n, 1e-12).unwrap().eigenvalues;
        let mut theirs: Vec<f64> = DMatrix::from_row_slice(n, n, &dense)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        theirs.sort_by(|a, b| b.total_cmp(a));
        for (x, y) in ours.iter().zip(&theirs) {
            assert!((x - y).abs() < 1e-8, "{ours:?} vs {theirs:?}");
        }
    }
}

#[test]
fn block_graph_spectrum_matches_nalgebra() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..50 {
        let n = rng.gen_range(1..=10);
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let m = adjacency_of(&Partition::from_labels(&labels));
        let dense: Vec<f64> = (0..n * n).map(|k| m.get(k / n, k % n) as f64).collect();
        let energy: f64 = DMatrix::from_row_slice(n, n, &dense)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .map(|x| x.abs())
            .sum();
        let ours = conergy::spectral_energy(&m, 1e-12).unwrap();
        assert!((energy - ours).abs() < 1e-9);
    }
}

#[test]
fn congruence_lattice_of_glued_sums_multiplies() {
    // Con of a glued sum is the product of the summands' Con
    let b4 = Lattice::named(Named::B4);
    let n5 = Lattice::named(Named::N5);
    let sum = Lattice::glued_sum(&b4, &n5);
    assert_eq!(all_congruences(&sum).len(), 4 * 5);
}
