mod common;

use kisslat::binary_codes::BinaryCode;
use kisslat::corpus;
use kisslat::lattice::{
    build_span_basis, default_cap, enumerate_short, membership_set, membership_span,
    sample_set_member, EnumerationOptions, LatticeBasis,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_lattice_vector(basis: &LatticeBasis, rng: &mut ChaCha8Rng) -> Vec<i64> {
    let n = basis.n();
    let mut x = vec![0i64; n];
    for row in basis.rows() {
        let c: i64 = rng.gen_range(-3..=3);
        for (xj, r) in x.iter_mut().zip(row) {
            *xj += c * r;
        }
    }
    x
}

#[test]
fn span_is_a_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, code) in corpus::all() {
        let basis = build_span_basis(&code).unwrap();
        assert!(membership_span(&basis, &vec![0; code.n()]), "{name}");
        for _ in 0..1000 {
            let a = random_lattice_vector(&basis, &mut rng);
            let b = random_lattice_vector(&basis, &mut rng);
            let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let neg: Vec<i64> = a.iter().map(|x| -x).collect();
            assert!(membership_span(&basis, &a), "{name}");
            assert!(
                membership_span(&basis, &sum),
                "{name}: sum left the lattice"
            );
            assert!(
                membership_span(&basis, &neg),
                "{name}: negation left the lattice"
            );
        }
    }
}

#[test]
fn basis_rows_reduce_into_code() {
    for (name, code) in corpus::all() {
        let basis = build_span_basis(&code).unwrap();
        for row in basis.rows() {
            let word = row
                .iter()
                .enumerate()
                .fold(0u32, |acc, (j, &a)| acc | ((a.rem_euclid(2)) as u32) << j);
            assert!(
                code.contains(word),
                "{name}: row {row:?} mod 2 is not a codeword"
            );
        }
    }
}

#[test]
fn determinant_is_power_of_two() {
    for (name, code) in corpus::all() {
        let basis = build_span_basis(&code).unwrap();
        let det = basis.determinant();
        assert_eq!(det.count_ones(), 1, "{name}: det {det}");
        assert_eq!(
            det.trailing_zeros(),
            Some(u64::from(basis.determinant_log2()))
        );
    }
}

#[test]
fn span_contains_level_sum_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, code) in corpus::all() {
        let basis = build_span_basis(&code).unwrap();
        for _ in 0..500 {
            let x = sample_set_member(&code, &mut rng);
            assert!(membership_set(&code, &x), "{name}: sampler left the set");
            assert!(membership_span(&basis, &x), "{name}: {x:?}");
        }
    }
}

#[test]
fn kissing_is_even_and_workers_agree() {
    for (name, code) in corpus::all() {
        let basis = build_span_basis(&code).unwrap();
        let d = code.weight_distribution().unwrap().min_distance();
        let cap = default_cap(d);
        let reports: Vec<_> = [1, 2, 4]
            .into_iter()
            .map(|workers| {
                enumerate_short(
                    &basis,
                    cap,
                    EnumerationOptions {
                        workers,
                        allow_large: false,
                    },
                )
                .unwrap()
            })
            .collect();
        assert_eq!(reports[0], reports[1], "{name}");
        assert_eq!(reports[0], reports[2], "{name}");
        assert_eq!(reports[0].kissing % 2, 0, "{name}");
        for count in reports[0].per_norm.values() {
            assert_eq!(count % 2, 0, "{name}: x and -x pair up");
        }
    }
}

#[test]
fn self_orthogonal_codes_have_min_norm_d() {
    for (name, code) in corpus::all() {
        if !code.is_self_orthogonal() || code.k() == 0 {
            continue;
        }
        let wd = code.weight_distribution().unwrap();
        let d = wd.min_distance().unwrap() as u64;
        let basis = build_span_basis(&code).unwrap();
        let report = enumerate_short(&basis, d, EnumerationOptions::default()).unwrap();
        assert_eq!(report.min_norm, Some(d), "{name}");
        assert!(report.kissing >= wd.light_count(), "{name}");
    }
}

fn code_strategy() -> impl Strategy<Value = Option<BinaryCode>> {
    (2usize..=8).prop_flat_map(|n| {
        prop::collection::vec(1u32..(1 << n), 0..=3)
            .prop_map(move |rows| BinaryCode::new(n, rows).ok())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_code_invariants(code in code_strategy(), seed in any::<u64>()) {
        let Some(code) = code else { return Ok(()) };
        let basis = build_span_basis(&code).unwrap();
        prop_assert_eq!(basis.determinant().count_ones(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let a = random_lattice_vector(&basis, &mut rng);
            let b = random_lattice_vector(&basis, &mut rng);
            let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            prop_assert!(membership_span(&basis, &sum));
            let s = sample_set_member(&code, &mut rng);
            prop_assert!(membership_span(&basis, &s));
        }
        let report = enumerate_short(&basis, 6, EnumerationOptions::default()).unwrap();
        prop_assert_eq!(report.kissing % 2, 0);
        let par = enumerate_short(&basis, 6, EnumerationOptions { workers: 3, allow_large: false }).unwrap();
        prop_assert_eq!(report, par);
    }

    #[test]
    fn text_round_trip_preserves_basis(code in code_strategy()) {
        let Some(code) = code else { return Ok(()) };
        let basis = build_span_basis(&code).unwrap();
        let parsed = LatticeBasis::parse(&basis.to_text()).unwrap();
        prop_assert_eq!(parsed.rows(), basis.rows());
        prop_assert_eq!(parsed.digest(), basis.digest());
    }
}
