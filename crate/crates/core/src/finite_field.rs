//! Arithmetic in GF(2^m) for 1 <= m <= 8, the absolute trace, and self-dual
//! bases over GF(2).
//!
//! Elements are m-bit patterns: bit i holds the coefficient of x^i. Addition
//! is XOR; multiplication goes through exp/log tables built from a generator
//! of the multiplicative group found at construction time.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Element = u8;

pub const MAX_DEGREE: u32 = 8;

/// Seed used by [`find_self_dual_basis`] for the randomized search (m >= 4).
pub const DEFAULT_BASIS_SEED: u64 = 0x5e1f_d0a1;

const BASIS_SEARCH_BUDGET: u64 = 100_000;

/// Default modulus for each degree, bit-encoded with the leading term.
pub fn default_modulus(m: u32) -> Option<u16> {
    match m {
        1 => Some(0b11),          // x + 1
        2 => Some(0b111),         // x^2 + x + 1
        3 => Some(0b1011),        // x^3 + x + 1
        4 => Some(0b1_0011),      // x^4 + x + 1
        5 => Some(0b10_0101),     // x^5 + x^2 + 1
        6 => Some(0b101_1011),    // x^6 + x^4 + x^3 + x + 1
        7 => Some(0b1000_0011),   // x^7 + x + 1
        8 => Some(0b1_0001_1101), // x^8 + x^4 + x^3 + x^2 + 1
        _ => None,
    }
}

fn degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

/// Remainder of carry-less division `a mod b` over GF(2)[x].
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

fn is_irreducible(modulus: u32, m: u32) -> bool {
    // Any reducible polynomial of degree m has a factor of degree <= m/2.
    for d in 1..=m / 2 {
        for f in (1u32 << d)..(1u32 << (d + 1)) {
            if poly_rem(modulus, f) == 0 {
                return false;
            }
        }
    }
    true
}

fn mul_reduce(a: u32, b: u32, modulus: u32, m: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> m & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

/// Precomputed arithmetic for one GF(2^m).
#[derive(Clone, PartialEq, Eq)]
pub struct FieldTable {
    m: u32,
    modulus: u16,
    generator: Element,
    exp: Vec<Element>,
    log: Vec<u16>,
    trace: Vec<u8>,
}

impl fmt::Debug for FieldTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTable")
            .field("m", &self.m)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .field("generator", &self.generator)
            .finish()
    }
}

impl FieldTable {
    pub fn new(m: u32, modulus: u16) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&m) {
            return Err(Error::Field(format!("degree m = {m} outside 1..=8")));
        }
        let modulus32 = u32::from(modulus);
        if degree(modulus32) != m as i32 {
            return Err(Error::Field(format!(
                "modulus {modulus:#x} does not have degree {m}"
            )));
        }
        if !is_irreducible(modulus32, m) {
            return Err(Error::Field(format!(
                "modulus {modulus:#x} is reducible over GF(2)"
            )));
        }

        let q = 1u32 << m;
        let order = q - 1;
        let generator = (1..q)
            .find(|&g| {
                let mut x = g;
                let mut k = 1;
                while x != 1 {
                    x = mul_reduce(x, g, modulus32, m);
                    k += 1;
                }
                k == order
            })
            .ok_or_else(|| Error::Field("multiplicative group is not cyclic".into()))?;

        let mut exp = vec![0 as Element; 2 * order as usize];
        let mut log = vec![0u16; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x as Element;
            exp[(i + order) as usize] = x as Element;
            log[x as usize] = i as u16;
            x = mul_reduce(x, generator, modulus32, m);
        }

        let mut field = FieldTable {
            m,
            modulus,
            generator: generator as Element,
            exp,
            log,
            trace: Vec::new(),
        };
        let trace = (0..q)
            .map(|a| {
                let mut sum = 0;
                let mut power = a as Element;
                for _ in 0..m {
                    sum ^= power;
                    power = field.mul(power, power);
                }
                debug_assert!(sum <= 1, "trace left the prime field");
                sum
            })
            .collect();
        field.trace = trace;
        Ok(field)
    }

    pub fn with_default_modulus(m: u32) -> Result<Self> {
        let modulus = default_modulus(m)
            .ok_or_else(|| Error::Field(format!("degree m = {m} outside 1..=8")))?;
        Self::new(m, modulus)
    }

    /// Field of size `q = 2^m` with the default modulus.
    pub fn for_size(q: u32) -> Result<Self> {
        if !q.is_power_of_two() || q < 2 {
            return Err(Error::Field(format!("q = {q} is not a power of 2")));
        }
        Self::with_default_modulus(q.trailing_zeros())
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u16 {
        self.modulus
    }

    pub fn size(&self) -> u32 {
        1 << self.m
    }

    /// A generator of the multiplicative group.
    pub fn generator(&self) -> Element {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.size()).map(|a| a as Element)
    }

    pub fn contains(&self, a: Element) -> bool {
        u32::from(a) < self.size()
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    pub fn inv(&self, a: Element) -> Option<Element> {
        if a == 0 {
            return None;
        }
        let order = self.size() as usize - 1;
        Some(self.exp[(order - self.log[a as usize] as usize) % order])
    }

    pub fn pow(&self, a: Element, e: u32) -> Element {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = u64::from(self.size() - 1);
        let idx = u64::from(self.log[a as usize]) * u64::from(e) % order;
        self.exp[idx as usize]
    }

    /// Absolute trace to GF(2): a + a^2 + a^4 + ... + a^(2^(m-1)).
    #[inline]
    pub fn trace(&self, a: Element) -> u8 {
        self.trace[a as usize]
    }

    /// Header line of the field text format: `field m=<m> modulus=<hex>`.
    pub fn spec_line(&self) -> String {
        format!("field m={} modulus={:x}", self.m, self.modulus)
    }

    pub fn parse_spec_line(line: &str) -> Result<Self> {
        let mut words = line.split_whitespace();
        if words.next() != Some("field") {
            return Err(Error::parse(1, "expected `field m=<m> modulus=<hex>`"));
        }
        let mut m = None;
        let mut modulus = None;
        for word in words {
            match word.split_once('=') {
                Some(("m", v)) => {
                    m = Some(
                        v.parse::<u32>()
                            .map_err(|e| Error::parse(1, e.to_string()))?,
                    )
                }
                Some(("modulus", v)) => modulus = Some(parse_hex(v, 1)?),
                _ => return Err(Error::parse(1, format!("unexpected token `{word}`"))),
            }
        }
        let m = m.ok_or_else(|| Error::parse(1, "missing m="))?;
        let modulus = modulus.ok_or_else(|| Error::parse(1, "missing modulus="))?;
        Self::new(m, modulus)
    }
}

pub(crate) fn parse_hex(word: &str, line: usize) -> Result<u16> {
    let digits = word
        .strip_prefix("0x")
        .or_else(|| word.strip_prefix("0X"))
        .unwrap_or(word);
    u16::from_str_radix(digits, 16).map_err(|e| Error::parse(line, format!("`{word}`: {e}")))
}

/// Parses a defining polynomial written in hex, with or without `0x`.
pub fn parse_modulus(word: &str) -> Result<u16> {
    parse_hex(word, 1)
}

/// A basis {a_1..a_m} of GF(2^m) over GF(2) with Tr(a_i a_j) = [i == j].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfDualBasis {
    field: FieldTable,
    basis: Vec<Element>,
    seed: Option<u64>,
}

impl SelfDualBasis {
    /// Wraps a user-supplied basis after checking the trace Gram matrix.
    pub fn from_elements(field: &FieldTable, basis: Vec<Element>) -> Result<Self> {
        if basis.len() != field.m() as usize {
            return Err(Error::Mismatch(format!(
                "basis has {} elements, field degree is {}",
                basis.len(),
                field.m()
            )));
        }
        if let Some(&bad) = basis.iter().find(|&&a| !field.contains(a)) {
            return Err(Error::Field(format!(
                "{bad:#x} is not an element of GF(2^{})",
                field.m()
            )));
        }
        if !is_trace_orthonormal(field, &basis) {
            return Err(Error::Field("trace Gram matrix is not the identity".into()));
        }
        Ok(SelfDualBasis {
            field: field.clone(),
            basis,
            seed: None,
        })
    }

    pub fn m(&self) -> u32 {
        self.field.m()
    }

    pub fn field(&self) -> &FieldTable {
        &self.field
    }

    pub fn elements(&self) -> &[Element] {
        &self.basis
    }

    /// Seed of the randomized search, `None` for exhaustive or user-supplied bases.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Coordinates of `a` in this basis, as a bit-vector of length m.
    pub fn expand(&self, a: Element) -> Vec<u8> {
        self.basis
            .iter()
            .map(|&alpha| self.field.trace(self.field.mul(a, alpha)))
            .collect()
    }

    /// Same as [`expand`](Self::expand) packed into a mask, coordinate i at bit i.
    pub fn expand_mask(&self, a: Element) -> u32 {
        self.basis.iter().enumerate().fold(0, |acc, (i, &alpha)| {
            acc | u32::from(self.field.trace(self.field.mul(a, alpha))) << i
        })
    }

    /// Inverse of `expand`: sum of the basis elements selected by `coords`.
    pub fn combine(&self, coords: &[u8]) -> Element {
        coords
            .iter()
            .zip(&self.basis)
            .filter(|(&c, _)| c & 1 == 1)
            .fold(0, |acc, (_, &alpha)| acc ^ alpha)
    }

    /// Basis file text: a field header, the seed if any, then one element per line.
    pub fn to_text(&self) -> String {
        let mut out = self.field.spec_line();
        out.push('\n');
        if let Some(seed) = self.seed {
            out.push_str(&format!("# seed={seed}\n"));
        }
        for a in &self.basis {
            out.push_str(&format!("{a:x}\n"));
        }
        out
    }

    /// Parses a basis file. A leading `field ...` line fixes the field; otherwise
    /// `field` (or the default field of degree = element count) is used.
    pub fn parse(text: &str, field: Option<&FieldTable>) -> Result<Self> {
        let mut declared = None;
        let mut elements = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.starts_with("field") {
                if declared.is_some() || !elements.is_empty() {
                    return Err(Error::parse(idx + 1, "field line must come first"));
                }
                declared = Some(FieldTable::parse_spec_line(line).map_err(|e| match e {
                    Error::Parse { message, .. } => Error::parse(idx + 1, message),
                    other => other,
                })?);
                continue;
            }
            let value = parse_hex(line, idx + 1)?;
            let value = Element::try_from(value)
                .map_err(|_| Error::parse(idx + 1, format!("`{line}` exceeds 8 bits")))?;
            elements.push(value);
        }
        let field = match (declared, field) {
            (Some(d), Some(f)) if &d != f => {
                return Err(Error::Mismatch(format!(
                    "basis declared over `{}`, expected `{}`",
                    d.spec_line(),
                    f.spec_line()
                )))
            }
            (Some(d), _) => d,
            (None, Some(f)) => f.clone(),
            (None, None) => FieldTable::with_default_modulus(elements.len() as u32)?,
        };
        Self::from_elements(&field, elements)
    }
}

/// True iff Tr(b_i b_j) = [i == j] for all pairs.
pub fn is_trace_orthonormal(field: &FieldTable, basis: &[Element]) -> bool {
    basis.iter().enumerate().all(|(i, &a)| {
        basis
            .iter()
            .enumerate()
            .all(|(j, &b)| field.trace(field.mul(a, b)) == u8::from(i == j))
    })
}

/// Finds a self-dual basis: exhaustive in lexicographic order for m <= 3,
/// seeded randomized search with [`DEFAULT_BASIS_SEED`] otherwise.
pub fn find_self_dual_basis(field: &FieldTable) -> Result<SelfDualBasis> {
    if field.m() <= 3 {
        exhaustive_self_dual_basis(field)
    } else {
        find_self_dual_basis_seeded(field, DEFAULT_BASIS_SEED)
    }
}

fn exhaustive_self_dual_basis(field: &FieldTable) -> Result<SelfDualBasis> {
    let m = field.m() as usize;
    // Tr(a^2) = Tr(a), so only trace-one elements can appear.
    let candidates: Vec<Element> = field.elements().filter(|&a| field.trace(a) == 1).collect();
    let mut chosen = Vec::with_capacity(m);
    let mut attempts = 0u64;
    if extend_orthonormal(field, &candidates, 0, m, &mut chosen, &mut attempts) {
        return Ok(SelfDualBasis {
            field: field.clone(),
            basis: chosen,
            seed: None,
        });
    }
    Err(Error::SearchExhausted {
        m: field.m(),
        attempts,
    })
}

fn extend_orthonormal(
    field: &FieldTable,
    candidates: &[Element],
    start: usize,
    m: usize,
    chosen: &mut Vec<Element>,
    attempts: &mut u64,
) -> bool {
    if chosen.len() == m {
        return true;
    }
    for i in start..candidates.len() {
        *attempts += 1;
        let a = candidates[i];
        if chosen.iter().all(|&b| field.trace(field.mul(a, b)) == 0) {
            chosen.push(a);
            if extend_orthonormal(field, candidates, i + 1, m, chosen, attempts) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Randomized greedy search: repeatedly pick a random trace-one element
/// orthogonal to everything chosen so far, restarting on dead ends.
pub fn find_self_dual_basis_seeded(field: &FieldTable, seed: u64) -> Result<SelfDualBasis> {
    let m = field.m() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trace_one: Vec<Element> = field.elements().filter(|&a| field.trace(a) == 1).collect();
    for _ in 0..BASIS_SEARCH_BUDGET {
        let mut chosen: Vec<Element> = Vec::with_capacity(m);
        while chosen.len() < m {
            let open: Vec<Element> = trace_one
                .iter()
                .copied()
                .filter(|&a| chosen.iter().all(|&b| field.trace(field.mul(a, b)) == 0))
                .collect();
            match open.choose(&mut rng) {
                Some(&a) => chosen.push(a),
                None => break,
            }
        }
        if chosen.len() == m && is_trace_orthonormal(field, &chosen) {
            return Ok(SelfDualBasis {
                field: field.clone(),
                basis: chosen,
                seed: Some(seed),
            });
        }
    }
    Err(Error::SearchExhausted {
        m: field.m(),
        attempts: BASIS_SEARCH_BUDGET,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> FieldTable {
        FieldTable::with_default_modulus(2).unwrap()
    }

    #[test]
    fn gf4_products() {
        let f = gf4();
        // omega = x = 2, omega^2 = x + 1 = 3
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1);
        for a in f.elements() {
            assert_eq!(f.mul(1, a), a);
        }
    }

    #[test]
    fn gf4_trace() {
        let f = gf4();
        assert_eq!(f.trace(0), 0);
        assert_eq!(f.trace(1), 0);
        assert_eq!(f.trace(2), 1);
        assert_eq!(f.trace(3), 1);
    }

    #[test]
    fn default_moduli_are_fields() {
        for m in 1..=MAX_DEGREE {
            let f = FieldTable::with_default_modulus(m).unwrap();
            let q = f.size();
            assert_eq!(f.pow(f.generator(), q - 1), 1);
            for a in f.elements().skip(1) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn rejects_reducible_and_wrong_degree() {
        // x^2 + 1 = (x + 1)^2
        assert!(matches!(FieldTable::new(2, 0b101), Err(Error::Field(_))));
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2, no roots but reducible
        assert!(matches!(FieldTable::new(4, 0b10101), Err(Error::Field(_))));
        assert!(matches!(FieldTable::new(3, 0b111), Err(Error::Field(_))));
        assert!(matches!(FieldTable::new(9, 0x211), Err(Error::Field(_))));
    }

    #[test]
    fn non_primitive_modulus_still_works() {
        // x^4 + x^3 + x^2 + x + 1 is irreducible but x has order 5.
        let f = FieldTable::new(4, 0b11111).unwrap();
        assert_ne!(f.generator(), 2);
        let mut seen = std::collections::HashSet::new();
        let mut x = 1;
        for _ in 0..15 {
            seen.insert(x);
            x = f.mul(x, f.generator());
        }
        assert_eq!(seen.len(), 15);
    }

    #[test]
    fn gf4_self_dual_basis() {
        let b = find_self_dual_basis(&gf4()).unwrap();
        assert_eq!(b.elements(), &[2, 3]);
        assert_eq!(b.expand(1), vec![1, 1]);
        assert_eq!(b.expand(0), vec![0, 0]);
        assert_eq!(b.expand(2), vec![1, 0]);
    }

    #[test]
    fn gf2_self_dual_basis() {
        let f = FieldTable::with_default_modulus(1).unwrap();
        let b = find_self_dual_basis(&f).unwrap();
        assert_eq!(b.elements(), &[1]);
    }

    #[test]
    fn gf8_self_dual_basis_passes_gram_check() {
        let f = FieldTable::with_default_modulus(3).unwrap();
        let b = find_self_dual_basis(&f).unwrap();
        assert_eq!(b.elements().len(), 3);
        assert!(is_trace_orthonormal(&f, b.elements()));
    }

    #[test]
    fn seeded_search_is_deterministic() {
        let f = FieldTable::with_default_modulus(6).unwrap();
        let a = find_self_dual_basis_seeded(&f, 7).unwrap();
        let b = find_self_dual_basis_seeded(&f, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.seed(), Some(7));
    }

    #[test]
    fn expansion_is_injective_and_inverted_by_combine() {
        for m in 1..=MAX_DEGREE {
            let f = FieldTable::with_default_modulus(m).unwrap();
            let b = find_self_dual_basis(&f).unwrap();
            let mut seen = std::collections::HashSet::new();
            for a in f.elements() {
                let c = b.expand(a);
                assert_eq!(b.combine(&c), a);
                assert!(seen.insert(b.expand_mask(a)));
            }
            assert_eq!(seen.len(), f.size() as usize);
        }
    }

    #[test]
    fn basis_text_round_trip() {
        let f = FieldTable::with_default_modulus(4).unwrap();
        let b = find_self_dual_basis(&f).unwrap();
        let parsed = SelfDualBasis::parse(&b.to_text(), None).unwrap();
        assert_eq!(parsed.elements(), b.elements());
        assert_eq!(parsed.field(), &f);
    }

    #[test]
    fn basis_parse_rejects_non_orthonormal() {
        assert!(SelfDualBasis::parse("1\n2\n", None).is_err());
        let f8 = FieldTable::with_default_modulus(3).unwrap();
        assert!(matches!(
            SelfDualBasis::parse("field m=2 modulus=7\n2\n3\n", Some(&f8)),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn spec_line_round_trip() {
        let f = FieldTable::with_default_modulus(6).unwrap();
        assert_eq!(f.spec_line(), "field m=6 modulus=5b");
        assert_eq!(FieldTable::parse_spec_line(&f.spec_line()).unwrap(), f);
        assert_eq!(
            FieldTable::parse_spec_line("field m=3 modulus=0xb")
                .unwrap()
                .modulus(),
            0b1011
        );
    }
}
