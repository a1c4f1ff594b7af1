//! Property-based invariants for the kernel and counting layers.

use proptest::prelude::*;

use qlat::gfq::{contains, dim_meet, field_make, join, rref, Matrix, Subspace, SUPPORTED_ORDERS};
use qlat::lattice::{cache_load, cache_save, enumerate_slice, DEFAULT_BUDGET};
use qlat::qcount::{gauss_binom, qpow};

// dim(a) + dim(b) = dim(a ∩ b) + dim(a + b) over every pair in the small
// lattices, with the two sides computed along independent elimination
// routes (rank-only kernel vs full canonicalization).
#[test]
fn modular_law_exhaustive_on_small_lattices() {
    for (q, n_max) in [(2u64, 5usize), (3, 5)] {
        let f = field_make(q).unwrap();
        for n in 1..=n_max {
            let mut all = Vec::new();
            for k in 0..=n {
                all.extend(enumerate_slice(n, k, &f, DEFAULT_BUDGET).unwrap().into_elements());
            }
            for a in &all {
                for b in &all {
                    let meet_dim = dim_meet(a, b, &f).unwrap();
                    let join_s = join(a, b, &f).unwrap();
                    assert_eq!(
                        a.dim() + b.dim(),
                        meet_dim + join_s.dim(),
                        "modular law failed at q={q}, n={n}"
                    );
                }
            }
        }
    }
}

// Same identity over an extension field, exercising the generic
// elimination path end to end.
#[test]
fn modular_law_exhaustive_gf4() {
    let f = field_make(4).unwrap();
    let mut all = Vec::new();
    for k in 0..=3usize {
        all.extend(enumerate_slice(3, k, &f, DEFAULT_BUDGET).unwrap().into_elements());
    }
    for a in &all {
        for b in &all {
            let meet_dim = dim_meet(a, b, &f).unwrap();
            let join_s = join(a, b, &f).unwrap();
            assert_eq!(a.dim() + b.dim(), meet_dim + join_s.dim());
        }
    }
}

// Every pair of planes in F_2^4: the join/meet dimension identity, the
// classical 35-element count, and containment coherence.
#[test]
fn plane_pairs_in_dim_four() {
    let f = field_make(2).unwrap();
    let planes = enumerate_slice(4, 2, &f, DEFAULT_BUDGET).unwrap().into_elements();
    assert_eq!(planes.len(), 35);
    for a in &planes {
        for b in &planes {
            let meet_dim = dim_meet(a, b, &f).unwrap();
            let join_s = join(a, b, &f).unwrap();
            assert_eq!(4, meet_dim + join_s.dim());
            assert_eq!(contains(a, b, &f).unwrap(), meet_dim == b.dim());
        }
    }
}

fn arb_field() -> impl Strategy<Value = u64> {
    prop::sample::select(SUPPORTED_ORDERS.to_vec())
}

fn arb_matrix() -> impl Strategy<Value = (u64, usize, usize, Vec<u8>)> {
    (arb_field(), 1usize..=6, 1usize..=12).prop_flat_map(|(q, rows, cols)| {
        let entries = prop::collection::vec(0u8..q as u8, rows * cols);
        (Just(q), Just(rows), Just(cols), entries)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rref_is_idempotent_and_preserves_row_space((q, rows, cols, entries) in arb_matrix()) {
        let f = field_make(q).unwrap();
        let mut m = Matrix::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, entries[r * cols + c]);
            }
        }
        let (canon, rank, pivots) = rref(&m, &f).unwrap();
        prop_assert_eq!(canon.rows(), rank);
        prop_assert_eq!(pivots.len(), rank);
        prop_assert!(pivots.windows(2).all(|w| w[0] < w[1]));

        // Idempotence.
        let (canon2, rank2, pivots2) = rref(&canon, &f).unwrap();
        prop_assert_eq!(&canon2, &canon);
        prop_assert_eq!(rank2, rank);
        prop_assert_eq!(pivots2, pivots);

        // Row-space preservation: every original row lies in the span of
        // the canonical rows, and ranks agree.
        let space = Subspace::from_matrix(&canon, &f).unwrap();
        for r in 0..rows {
            let row_space = Subspace::from_rows(&[m.row(r).to_vec()], &f).unwrap();
            prop_assert!(contains(&space, &row_space, &f).unwrap());
        }
    }

    #[test]
    fn random_row_operations_do_not_change_the_canonical_form(
        (q, rows, cols, entries) in arb_matrix(),
        op_seq in prop::collection::vec((0usize..6, 0usize..6, 1u8..9), 1..8)
    ) {
        let f = field_make(q).unwrap();
        let mut m = Matrix::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, entries[r * cols + c]);
            }
        }
        let original = Subspace::from_matrix(&m, &f).unwrap();

        // Apply random invertible row operations: row_i += scalar * row_j.
        let mut mutated = m.clone();
        for (i, j, scalar) in op_seq {
            let (i, j) = (i % rows, j % rows);
            if i == j || !f.is_element(scalar % q as u8) {
                continue;
            }
            let scalar = scalar % q as u8;
            for c in 0..cols {
                let v = f.add(mutated.get(i, c), f.mul(scalar, mutated.get(j, c)));
                mutated.set(i, c, v);
            }
        }
        let roundtrip = Subspace::from_matrix(&mutated, &f).unwrap();
        prop_assert_eq!(original, roundtrip);
    }

    #[test]
    fn modular_law_on_random_pairs(
        q in prop::sample::select(vec![2u64, 3]),
        rows_a in prop::collection::vec(prop::collection::vec(0u8..3, 5), 1..4),
        rows_b in prop::collection::vec(prop::collection::vec(0u8..3, 5), 1..4),
    ) {
        let f = field_make(q).unwrap();
        let clamp = |rows: Vec<Vec<u8>>| -> Vec<Vec<u8>> {
            rows.into_iter().map(|r| r.into_iter().map(|v| v % q as u8).collect()).collect()
        };
        let a = Subspace::from_rows(&clamp(rows_a), &f).unwrap();
        let b = Subspace::from_rows(&clamp(rows_b), &f).unwrap();
        let meet_dim = dim_meet(&a, &b, &f).unwrap();
        let join_s = join(&a, &b, &f).unwrap();
        prop_assert_eq!(a.dim() + b.dim(), meet_dim + join_s.dim());
        prop_assert!(contains(&join_s, &a, &f).unwrap());
        prop_assert!(contains(&join_s, &b, &f).unwrap());
    }

    #[test]
    fn pascal_identity_random(q in 2u64..6, m in 1i64..24, i_frac in 0.0f64..1.0) {
        let i = 1 + ((m - 1) as f64 * i_frac) as i64;
        let lhs = gauss_binom(m, i, q).unwrap();
        let rhs = gauss_binom(m - 1, i - 1, q).unwrap()
            + qpow(q, i as u64) * gauss_binom(m - 1, i, q).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cache_round_trip_random_slice(
        q in prop::sample::select(vec![2u64, 3, 4]),
        n in 1usize..5,
        k_frac in 0.0f64..1.0,
    ) {
        let k = (n as f64 * k_frac) as usize;
        let f = field_make(q).unwrap();
        let slice = enumerate_slice(n, k, &f, DEFAULT_BUDGET).unwrap();
        let dir = std::env::temp_dir().join(format!("qlat-prop-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(format!("prop_q{q}_n{n}_k{k}.qlat"));
        cache_save(&slice, &path).unwrap();
        let loaded = cache_load(&path).unwrap();
        prop_assert_eq!(slice, loaded);
    }
}
