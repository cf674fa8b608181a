//! Independent oracles shared by the integration tests. Nothing here calls
//! the enumeration or Hermite code under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet, VecDeque};

use kisslat::binary_codes::BinaryCode;

/// All codewords by direct expansion over every message.
pub fn codewords(code: &BinaryCode) -> Vec<u32> {
    (0u32..1 << code.k())
        .map(|m| {
            code.rows()
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .fold(0, |acc, (_, r)| acc ^ r)
        })
        .collect()
}

/// Pairwise parity check of every pair of codewords.
pub fn self_orthogonal_bruteforce(code: &BinaryCode) -> bool {
    let words = codewords(code);
    words
        .iter()
        .all(|a| words.iter().all(|b| (a & b).count_ones() % 2 == 0))
}

/// Subgroup of (Z/2^t)^n generated by the lifts of all codewords, packed t
/// bits per coordinate. Lifting is not additive, so generator rows alone are
/// not enough.
fn lift_subgroup(words: &[u32], n: usize, t: usize) -> HashSet<u64> {
    let gens: Vec<u64> = words
        .iter()
        .map(|&w| (0..n).fold(0u64, |acc, j| acc | u64::from(w >> j & 1) << (t * j)))
        .collect();
    let mask = (1u64 << t) - 1;
    let add = |a: u64, b: u64| {
        (0..n).fold(0u64, |acc, j| {
            let s = ((a >> (t * j)) + (b >> (t * j))) & mask;
            acc | s << (t * j)
        })
    };
    let mut seen = HashSet::from([0u64]);
    let mut queue = VecDeque::from([0u64]);
    while let Some(v) = queue.pop_front() {
        for &g in &gens {
            let w = add(v, g);
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Exact membership for the span of all codeword lifts plus 2^n Z^n.
///
/// With L_t = lifts + 2^t Z^n the index [Z^n : L_t] = 2^(nt) / |H_t| never
/// decreases in t. Once it repeats, 2^t Z^n lies in L_(t+1), and by induction
/// in every later L, including the target lattice L_n. So x is a member iff
/// x mod 2^t lies in H_t.
pub struct ResidueOracle {
    pub t: usize,
    pub log2_index: u32,
    residues: HashSet<u64>,
}

impl ResidueOracle {
    pub fn new(code: &BinaryCode) -> Self {
        let n = code.n();
        let words = codewords(code);
        let log2_index = |t: usize, h: &HashSet<u64>| (n * t) as u32 - h.len().trailing_zeros();
        let mut t = 1;
        let mut h = lift_subgroup(&words, n, t);
        loop {
            if t == n {
                break;
            }
            let next = lift_subgroup(&words, n, t + 1);
            let stable = log2_index(t, &h) == log2_index(t + 1, &next);
            if stable {
                break;
            }
            t += 1;
            h = next;
            assert!(n * (t + 1) <= 64, "residue packing overflow");
        }
        assert!(h.len().is_power_of_two());
        ResidueOracle {
            t,
            log2_index: log2_index(t, &h),
            residues: h,
        }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let modulus = 1i64 << self.t;
        let key = x.iter().enumerate().fold(0u64, |acc, (j, a)| {
            acc | (a.rem_euclid(modulus) as u64) << (self.t * j)
        });
        self.residues.contains(&key)
    }
}

pub fn ceil_sqrt(x: u64) -> i64 {
    let r = x.isqrt();
    (if r * r == x { r } else { r + 1 }) as i64
}

/// Counts per nonzero norm <= cap over the box [-ceil(sqrt cap), ceil(sqrt cap)]^n
/// of points accepted by `member`.
pub fn box_counts(
    n: usize,
    cap: u64,
    mut member: impl FnMut(&[i64]) -> bool,
) -> BTreeMap<u64, u64> {
    let r = ceil_sqrt(cap);
    let mut counts = BTreeMap::new();
    let mut x = vec![-r; n];
    loop {
        let norm: u64 = x.iter().map(|&a| (a * a) as u64).sum();
        if norm > 0 && norm <= cap && member(&x) {
            *counts.entry(norm).or_insert(0) += 1;
        }
        let mut j = 0;
        while j < n {
            if x[j] < r {
                x[j] += 1;
                break;
            }
            x[j] = -r;
            j += 1;
        }
        if j == n {
            return counts;
        }
    }
}

/// Box counts using the residue-subgroup membership oracle.
pub fn oracle_counts(code: &BinaryCode, cap: u64) -> BTreeMap<u64, u64> {
    let oracle = ResidueOracle::new(code);
    box_counts(code.n(), cap, |x| oracle.contains(x))
}
