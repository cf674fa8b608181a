//! Concatenation of an outer GRS code over GF(2^m) with a binary inner
//! [n0, m] code, symbols mapped to bits through a self-dual basis.
//!
//! Outer coordinate j becomes the bit block [j·n0, (j+1)·n0). A symbol `a` is
//! first expanded to its m basis coordinates and the coordinate vector is then
//! encoded by the inner generator.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binary_codes::{BinaryCode, Word, MAX_DIMENSION, MAX_LENGTH};
use crate::error::{Error, Result};
use crate::finite_field::{find_self_dual_basis, Element, FieldTable, SelfDualBasis};
use crate::outer_codes::{search_self_orthogonal, GrsCode};

#[derive(Clone, Debug)]
pub struct ConcatSpec {
    outer: GrsCode,
    basis: SelfDualBasis,
    inner: BinaryCode,
}

impl ConcatSpec {
    pub fn new(outer: GrsCode, basis: SelfDualBasis, inner: BinaryCode) -> Result<Self> {
        if basis.field() != outer.field() {
            return Err(Error::Mismatch(format!(
                "basis over `{}` but outer code over `{}`",
                basis.field().spec_line(),
                outer.field().spec_line()
            )));
        }
        let m = basis.m() as usize;
        if inner.k() != m {
            return Err(Error::Mismatch(format!(
                "inner code has dimension {}, field degree is {m}",
                inner.k()
            )));
        }
        let n = inner.n() * outer.len();
        if n > MAX_LENGTH {
            return Err(Error::Guard {
                what: "concatenated length n0*N",
                value: n as u64,
                limit: MAX_LENGTH as u64,
            });
        }
        let k = m * outer.dimension();
        if k > MAX_DIMENSION {
            return Err(Error::Guard {
                what: "concatenated dimension m*K",
                value: k as u64,
                limit: MAX_DIMENSION as u64,
            });
        }
        Ok(ConcatSpec {
            outer,
            basis,
            inner,
        })
    }

    pub fn outer(&self) -> &GrsCode {
        &self.outer
    }

    pub fn basis(&self) -> &SelfDualBasis {
        &self.basis
    }

    pub fn inner(&self) -> &BinaryCode {
        &self.inner
    }

    /// Binary image of an arbitrary vector over GF(2^m) of the outer length.
    pub fn image(&self, word: &[Element]) -> Word {
        let n0 = self.inner.n();
        word.iter().enumerate().fold(0, |acc, (j, &s)| {
            acc | self.inner.encode(self.basis.expand_mask(s)) << (j * n0)
        })
    }

    pub fn preconditions(&self) -> Preconditions {
        Preconditions {
            outer_self_orthogonal: self.outer.is_euclidean_self_orthogonal(),
            inner_orthonormal: rows_orthonormal(&self.inner),
            inner_self_orthogonal: self.inner.is_self_orthogonal(),
        }
    }
}

/// Directly checked sufficient conditions for the concatenation to be self-orthogonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Preconditions {
    pub outer_self_orthogonal: bool,
    pub inner_orthonormal: bool,
    pub inner_self_orthogonal: bool,
}

impl Preconditions {
    pub fn guarantee_self_orthogonal(&self) -> bool {
        self.inner_self_orthogonal || (self.outer_self_orthogonal && self.inner_orthonormal)
    }
}

/// G·Gᵀ = I over GF(2).
pub fn rows_orthonormal(code: &BinaryCode) -> bool {
    let rows = code.rows();
    rows.iter().enumerate().all(|(i, &a)| {
        rows.iter()
            .enumerate()
            .all(|(j, &b)| (a & b).count_ones() % 2 == u32::from(i == j))
    })
}

/// Concatenated code of length n0·N and dimension m·K.
pub fn concat_build(spec: &ConcatSpec) -> Result<BinaryCode> {
    let n = spec.inner.n() * spec.outer.len();
    // GF(2)-basis of the outer code: {b · g_t} for basis elements b and generator rows g_t.
    let f = spec.outer.field();
    let mut rows = Vec::with_capacity(spec.basis.m() as usize * spec.outer.dimension());
    for g in spec.outer.generator() {
        for &b in spec.basis.elements() {
            let scaled: Vec<Element> = g.iter().map(|&s| f.mul(b, s)).collect();
            rows.push(spec.image(&scaled));
        }
    }
    BinaryCode::new(n, rows)
}

/// Basis expansion alone: concatenation with the identity [m, m] inner code.
pub fn binary_expand_code(outer: &GrsCode, basis: &SelfDualBasis) -> Result<BinaryCode> {
    let m = basis.m() as usize;
    let identity = BinaryCode::new(m, (0..m).map(|i| 1 << i).collect())?;
    concat_build(&ConcatSpec::new(outer.clone(), basis.clone(), identity)?)
}

/// Seeded instances with a Euclidean self-orthogonal GRS outer code over
/// GF(4) or GF(8) and an inner code that either has orthonormal rows or is
/// self-orthogonal, alternating between the two.
pub fn sample_instances(count: usize, seed: u64) -> Result<Vec<ConcatSpec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields = [
        FieldTable::with_default_modulus(2)?,
        FieldTable::with_default_modulus(3)?,
    ];
    let bases = [
        find_self_dual_basis(&fields[0])?,
        find_self_dual_basis(&fields[1])?,
    ];
    let mut out = Vec::with_capacity(count);
    let mut tries = 0u32;
    while out.len() < count {
        tries += 1;
        if tries > 100 * count as u32 + 1000 {
            return Err(Error::SearchExhausted {
                m: 0,
                attempts: u64::from(tries),
            });
        }
        let which = rng.gen_range(0..2);
        let (field, basis) = (&fields[which], &bases[which]);
        let m = field.m() as usize;
        let orthonormal = out.len() % 2 == 0;
        let n0 = if orthonormal {
            rng.gen_range(m..=m + 3)
        } else {
            rng.gen_range(2 * m..=2 * m + 2)
        };
        let max_outer = (MAX_LENGTH / n0).min(field.size() as usize);
        if max_outer < 2 {
            continue;
        }
        let n_outer = rng.gen_range(2..=max_outer);
        let k_outer = rng.gen_range(1..=n_outer / 2);
        let Some(outer) = search_self_orthogonal(field, n_outer, k_outer, rng.gen(), 50) else {
            continue;
        };
        let Some(inner) = random_inner(&mut rng, n0, m, orthonormal) else {
            continue;
        };
        out.push(ConcatSpec::new(outer, basis.clone(), inner)?);
    }
    Ok(out)
}

fn random_inner(
    rng: &mut ChaCha8Rng,
    n0: usize,
    m: usize,
    orthonormal: bool,
) -> Option<BinaryCode> {
    let mask: Word = (1 << n0) - 1;
    for _ in 0..2000 {
        let mut rows: Vec<Word> = Vec::with_capacity(m);
        for _ in 0..200 {
            let r = rng.gen::<Word>() & mask;
            let self_dot = r.count_ones() % 2;
            let ok = self_dot == u32::from(orthonormal)
                && r != 0
                && rows.iter().all(|&x| (x & r).count_ones().is_multiple_of(2));
            if ok {
                rows.push(r);
                if rows.len() == m {
                    break;
                }
            }
        }
        if rows.len() == m {
            rows.shuffle(rng);
            if let Ok(code) = BinaryCode::new(n0, rows) {
                return Some(code);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn gf4_setup() -> (FieldTable, SelfDualBasis) {
        let f = FieldTable::with_default_modulus(2).unwrap();
        let b = find_self_dual_basis(&f).unwrap();
        (f, b)
    }

    fn words(code: &BinaryCode) -> Vec<String> {
        let mut w: Vec<String> = code
            .codewords()
            .map(|c| crate::binary_codes::word_to_string(c, code.n()))
            .collect();
        w.sort();
        w
    }

    #[test]
    fn expansion_of_self_orthogonal_grs() {
        let (f, b) = gf4_setup();
        let outer = GrsCode::new(&f, vec![1, 2, 3], vec![1, 2, 3], 1).unwrap();
        let code = binary_expand_code(&outer, &b).unwrap();
        assert_eq!((code.n(), code.k()), (6, 2));
        assert_eq!(words(&code), ["000000", "011110", "100111", "111001"]);
        assert!(code.is_self_orthogonal());
    }

    #[test]
    fn expansion_of_zero_outer_code() {
        let (f, b) = gf4_setup();
        let outer = GrsCode::new(&f, vec![1, 2, 3], vec![1, 1, 1], 0).unwrap();
        let code = binary_expand_code(&outer, &b).unwrap();
        assert_eq!((code.n(), code.k()), (6, 0));
    }

    #[test]
    fn expansion_of_repetition_code_is_not_self_orthogonal() {
        let (f, b) = gf4_setup();
        let outer = GrsCode::new(&f, vec![1, 2, 3], vec![1, 1, 1], 1).unwrap();
        assert!(!outer.is_euclidean_self_orthogonal());
        let code = binary_expand_code(&outer, &b).unwrap();
        // ω·(1,1,1) expands to 10 10 10, odd weight
        assert!(!code.is_self_orthogonal());
    }

    #[test]
    fn worked_18_2_example() {
        let (f, b) = gf4_setup();
        let outer = GrsCode::new(&f, vec![1, 2, 3], vec![1, 2, 3], 1).unwrap();
        let inner = BinaryCode::from_strs(&["111000", "000111"]).unwrap();
        let spec = ConcatSpec::new(outer, b, inner).unwrap();
        assert_eq!(spec.image(&[1]), 0b111111);
        assert_eq!(spec.image(&[2]), 0b000111);
        assert_eq!(spec.image(&[3]), 0b111000);
        let pre = spec.preconditions();
        assert!(pre.outer_self_orthogonal && pre.inner_orthonormal && !pre.inner_self_orthogonal);
        let code = concat_build(&spec).unwrap();
        assert_eq!((code.n(), code.k()), (18, 2));
        let wd = code.weight_distribution().unwrap();
        assert_eq!(wd.as_map(), BTreeMap::from([(0, 1), (12, 3)]));
        assert!(code.is_self_orthogonal());
    }

    #[test]
    fn identity_inner_equals_expansion() {
        let (f, b) = gf4_setup();
        let outer = GrsCode::new(&f, vec![0, 1, 2, 3], vec![1, 1, 2, 3], 2).unwrap();
        let identity = BinaryCode::from_strs(&["10", "01"]).unwrap();
        let spec = ConcatSpec::new(outer.clone(), b.clone(), identity).unwrap();
        assert_eq!(
            concat_build(&spec).unwrap(),
            binary_expand_code(&outer, &b).unwrap()
        );
    }

    #[test]
    fn repetition_inner_over_gf2_doubles_coordinates() {
        let f = FieldTable::with_default_modulus(1).unwrap();
        let b = find_self_dual_basis(&f).unwrap();
        let outer = GrsCode::new(&f, vec![0, 1], vec![1, 1], 1).unwrap();
        assert!(outer.is_euclidean_self_orthogonal());
        let inner = BinaryCode::from_strs(&["11"]).unwrap();
        let code = concat_build(&ConcatSpec::new(outer, b, inner).unwrap()).unwrap();
        assert_eq!(code.rows(), &[0b1111]);
        assert!(code.is_self_orthogonal());
        let wd = code.weight_distribution().unwrap();
        assert_eq!(wd.as_map(), BTreeMap::from([(0, 1), (4, 1)]));
    }

    #[test]
    fn spec_validation() {
        let (f, b) = gf4_setup();
        let outer = GrsCode::new(&f, vec![1, 2, 3], vec![1, 2, 3], 1).unwrap();
        let wrong_k = BinaryCode::from_strs(&["111"]).unwrap();
        assert!(matches!(
            ConcatSpec::new(outer.clone(), b.clone(), wrong_k),
            Err(Error::Mismatch(_))
        ));
        let f8 = FieldTable::with_default_modulus(3).unwrap();
        let b8 = find_self_dual_basis(&f8).unwrap();
        let inner3 = BinaryCode::from_strs(&["100", "010", "001"]).unwrap();
        assert!(matches!(
            ConcatSpec::new(outer.clone(), b8, inner3),
            Err(Error::Mismatch(_))
        ));
        let long = BinaryCode::new(11, vec![0b1, 0b10]).unwrap();
        assert!(matches!(
            ConcatSpec::new(outer, b, long),
            Err(Error::Guard { .. })
        ));
    }

    #[test]
    fn sampled_instances_meet_preconditions() {
        let specs = sample_instances(12, 3).unwrap();
        assert_eq!(specs.len(), 12);
        for s in &specs {
            assert!(s.preconditions().guarantee_self_orthogonal());
        }
    }
}
