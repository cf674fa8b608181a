mod common;

use std::collections::BTreeMap;

use kisslat::binary_codes::BinaryCode;
use kisslat::concatenation::{concat_build, rows_orthonormal, sample_instances};
use kisslat::corpus;
use kisslat::outer_codes::GrsCode;

/// Euclidean self-orthogonality of a GRS code by expanding every codeword pair.
fn outer_self_orthogonal_bruteforce(code: &GrsCode) -> bool {
    let f = code.field();
    let words = code.codewords(1 << 16).unwrap();
    words.iter().all(|a| {
        words.iter().all(|b| {
            a.iter()
                .zip(b)
                .fold(0u8, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
                == 0
        })
    })
}

#[test]
fn sampled_concatenations_are_self_orthogonal() {
    let specs = sample_instances(60, 2024).unwrap();
    assert!(specs.len() >= 50);
    let (mut orthonormal, mut self_orth) = (0, 0);
    for (i, spec) in specs.iter().enumerate() {
        assert!(
            outer_self_orthogonal_bruteforce(spec.outer()),
            "instance {i}"
        );
        if rows_orthonormal(spec.inner()) {
            orthonormal += 1;
        } else {
            assert!(
                common::self_orthogonal_bruteforce(spec.inner()),
                "instance {i}"
            );
            self_orth += 1;
        }
        let code = concat_build(spec).unwrap();
        assert_eq!(code.n(), spec.inner().n() * spec.outer().len());
        assert_eq!(
            code.k(),
            spec.basis().m() as usize * spec.outer().dimension()
        );
        assert!(code.is_self_orthogonal(), "instance {i}");
        assert!(common::self_orthogonal_bruteforce(&code), "instance {i}");
    }
    assert!(orthonormal > 0 && self_orth > 0);
}

#[test]
fn worked_example_weights() {
    let code = corpus::concat_18_2();
    assert_eq!((code.n(), code.k()), (18, 2));
    let mut weights = BTreeMap::new();
    for w in common::codewords(&code) {
        *weights.entry(w.count_ones()).or_insert(0u32) += 1;
    }
    assert_eq!(weights, BTreeMap::from([(0, 1), (12, 3)]));
    assert!(common::self_orthogonal_bruteforce(&code));
}

#[test]
fn expansion_code_words() {
    let code = corpus::expansion_6_2();
    let mut words: Vec<u32> = common::codewords(&code);
    words.sort();
    let expected: Vec<u32> = {
        let mut v: Vec<u32> = ["000000", "011110", "100111", "111001"]
            .iter()
            .map(|s| {
                s.chars()
                    .enumerate()
                    .fold(0, |acc, (j, c)| acc | u32::from(c == '1') << j)
            })
            .collect();
        v.sort();
        v
    };
    assert_eq!(words, expected);
}

#[test]
fn outside_hypotheses_the_verdict_still_matches_brute_force() {
    use kisslat::concatenation::ConcatSpec;
    use kisslat::finite_field::find_self_dual_basis;

    let outer = corpus::grs_3_1();
    let basis = find_self_dual_basis(outer.field()).unwrap();
    let inner = BinaryCode::from_strs(&["110", "011"]).unwrap();
    assert!(!rows_orthonormal(&inner));
    let spec = ConcatSpec::new(outer, basis, inner).unwrap();
    assert!(!spec.preconditions().guarantee_self_orthogonal());
    let code = concat_build(&spec).unwrap();
    assert_eq!(
        code.is_self_orthogonal(),
        common::self_orthogonal_bruteforce(&code)
    );
}
