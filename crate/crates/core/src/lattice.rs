//! Construction C* lattices from binary codes.
//!
//! For a binary code C of length n the level-sum set is
//!
//! ```text
//!   S(C) = 2^n Z^n + Σ_{i=1..n} 2^{n-i} · lift(c_i),   c_i ∈ C,
//! ```
//!
//! where `lift` embeds {0,1}^n into Z^n. S(C) need not be closed under
//! addition: adding two lifts carries `lift(a AND b)` into the next level, and
//! that carry word has to be in C again. The lattice certified here is the
//! integer span of S(C), generated by the lifts of all codewords together with
//! 2^n Z^n. When S(C) is closed the two coincide.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::binary_codes::{BinaryCode, Word, MAX_LENGTH};
use crate::error::{Error, Result};

/// Largest code dimension for which all 2^k codeword lifts are fed to the
/// Hermite reduction.
pub const MAX_SPAN_DIMENSION: usize = 20;
/// Default enumeration guards, overridable through [`EnumerationOptions::allow_large`].
pub const DEFAULT_MAX_ENUM_DIMENSION: usize = 24;
pub const DEFAULT_MAX_CAP: u64 = 16;

/// Upper-triangular Hermite basis of a lattice Λ with 2^n Z^n ⊆ Λ ⊆ Z^n.
///
/// Row i has its pivot at column i; pivots are positive powers of two and
/// entries right of a pivot column satisfy 0 <= b[i][j] < b[j][j].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    n: usize,
    rows: Vec<Vec<i64>>,
    source: String,
}

impl LatticeBasis {
    /// Validates a basis given in Hermite form.
    pub fn from_rows(rows: Vec<Vec<i64>>, source: impl Into<String>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > MAX_LENGTH {
            return Err(Error::Guard {
                what: "lattice dimension n",
                value: n as u64,
                limit: MAX_LENGTH as u64,
            });
        }
        let modulus = 1i64 << n;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Mismatch(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if row[..i].iter().any(|&x| x != 0) {
                return Err(Error::InvalidCode(format!(
                    "row {i} is not upper triangular"
                )));
            }
            let p = row[i];
            if p <= 0 || modulus % p != 0 || !(p as u64).is_power_of_two() {
                return Err(Error::InvalidCode(format!(
                    "pivot {p} of row {i} is not a positive power of two dividing 2^{n}"
                )));
            }
        }
        for (j, pivot_row) in rows.iter().enumerate() {
            let p = pivot_row[j];
            if let Some(i) = (0..j).find(|&i| !(0..p).contains(&rows[i][j])) {
                return Err(Error::InvalidCode(format!(
                    "entry ({i}, {j}) is not reduced modulo pivot {p}"
                )));
            }
        }
        let basis = LatticeBasis {
            n,
            rows,
            source: source.into(),
        };
        for c in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[c] = BigInt::from(modulus);
            if !basis.contains_exact(&e) {
                return Err(Error::InvalidCode(format!(
                    "2^{n}·e_{c} is not in the lattice"
                )));
            }
        }
        Ok(basis)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn pivots(&self) -> impl Iterator<Item = i64> + '_ {
        self.rows.iter().enumerate().map(|(i, r)| r[i])
    }

    pub fn determinant(&self) -> BigUint {
        self.pivots()
            .fold(BigUint::one(), |acc, p| acc * BigUint::from(p as u64))
    }

    /// log2 of the determinant; every pivot is a power of two.
    pub fn determinant_log2(&self) -> u32 {
        self.pivots().map(|p| p.trailing_zeros()).sum()
    }

    fn modulus(&self) -> i128 {
        1i128 << self.n
    }

    /// Exact back-substitution without modular reduction.
    fn contains_exact(&self, x: &[BigInt]) -> bool {
        let mut r = x.to_vec();
        for j in 0..self.n {
            let p = BigInt::from(self.rows[j][j]);
            let (c, rem) = r[j].div_rem(&p);
            if !rem.is_zero() {
                return false;
            }
            for (rc, &b) in r[j..].iter_mut().zip(&self.rows[j][j..]) {
                *rc -= &c * BigInt::from(b);
            }
        }
        true
    }

    /// `lattice n=<n>` followed by n rows of signed decimal integers.
    pub fn to_text(&self) -> String {
        let mut out = format!("lattice n={}\n", self.n);
        if !self.source.is_empty() {
            let _ = writeln!(out, "# source {}", self.source);
        }
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(i64::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut source = String::new();
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(rest) = line.strip_prefix("# source ") {
                source = rest.to_string();
            } else if !line.is_empty() && !line.starts_with('#') {
                lines.push((i + 1, line));
            }
        }
        let mut it = lines.into_iter();
        let (hline, header) = it
            .next()
            .ok_or_else(|| Error::parse(1, "empty input, expected `lattice n=<n>`"))?;
        let n: usize = header
            .strip_prefix("lattice n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::parse(hline, "expected header `lattice n=<n>`"))?;
        let rows = it
            .map(|(line, row)| {
                row.split_whitespace()
                    .map(|w| {
                        w.parse::<i64>()
                            .map_err(|_| Error::parse(line, format!("bad integer `{w}`")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != n {
            return Err(Error::parse(
                hline,
                format!("header declares {n} rows, found {}", rows.len()),
            ));
        }
        Self::from_rows(rows, source)
    }

    /// SHA-256 of the basis rows in file format (without the source comment).
    pub fn digest(&self) -> String {
        let stripped = LatticeBasis {
            source: String::new(),
            ..self.clone()
        };
        let hash = Sha256::digest(stripped.to_text().as_bytes());
        hash.iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

/// Identifier recorded as the basis source.
pub fn code_identifier(code: &BinaryCode) -> String {
    let hash = Sha256::digest(code.to_text().as_bytes());
    let hex: String = hash[..8].iter().map(|b| format!("{b:02x}")).collect();
    format!("binary-code n={} k={} sha256={hex}", code.n(), code.k())
}

struct HermiteBuilder {
    n: usize,
    rows: Vec<Vec<BigInt>>,
    // i128 mirror of `rows` for the fast membership check.
    fast: Vec<Vec<i128>>,
}

impl HermiteBuilder {
    fn new(n: usize) -> Self {
        let rows: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut r = vec![BigInt::zero(); n];
                r[i] = BigInt::one() << n;
                r
            })
            .collect();
        let mut b = HermiteBuilder {
            n,
            rows,
            fast: Vec::new(),
        };
        b.refresh();
        b
    }

    fn refresh(&mut self) {
        self.fast = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_i128().expect("reduced entry"))
                    .collect()
            })
            .collect();
    }

    fn contains(&self, x: &[i64]) -> bool {
        contains_mod(&self.fast, self.n, x)
    }

    /// Reduces `v[c]` for c >= `from` modulo the pivot of row c.
    fn reduce_vector(&self, v: &mut [BigInt], from: usize) {
        for c in from..self.n {
            let p = &self.rows[c][c];
            let t = v[c].div_floor(p);
            if !t.is_zero() {
                for (vc, b) in v[c..].iter_mut().zip(&self.rows[c][c..]) {
                    *vc -= &t * b;
                }
            }
        }
    }

    fn insert(&mut self, x: &[i64]) {
        if self.contains(x) {
            return;
        }
        let mut v: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        for j in 0..self.n {
            if v[j].is_zero() {
                continue;
            }
            let p = self.rows[j][j].clone();
            let (q, rem) = v[j].div_rem(&p);
            if rem.is_zero() {
                for (vc, b) in v[j..].iter_mut().zip(&self.rows[j][j..]) {
                    *vc -= &q * b;
                }
            } else {
                // [s t; v_j/g -p/g] is unimodular and clears column j of v.
                let e = p.extended_gcd(&v[j]);
                let (g, s, t) = (e.gcd, e.x, e.y);
                let a = &v[j] / &g;
                let b = &p / &g;
                let old = std::mem::take(&mut self.rows[j]);
                self.rows[j] = old.iter().zip(&v).map(|(r, y)| &s * r + &t * y).collect();
                v = old.iter().zip(&v).map(|(r, y)| &a * r - &b * y).collect();
                if self.rows[j][j].is_negative() {
                    for x in self.rows[j].iter_mut() {
                        *x = -&*x;
                    }
                }
            }
            debug_assert!(v[j].is_zero());
            self.reduce_vector(&mut v, j + 1);
        }
        self.normalize();
        self.refresh();
    }

    /// Reduces entries above each pivot into [0, pivot). Columns go left to
    /// right because subtracting row j only touches columns >= j.
    fn normalize(&mut self) {
        for j in 0..self.n {
            for i in 0..j {
                let t = self.rows[i][j].div_floor(&self.rows[j][j]);
                if !t.is_zero() {
                    let pivot_row = self.rows[j].clone();
                    for (x, b) in self.rows[i][j..].iter_mut().zip(&pivot_row[j..]) {
                        *x -= &t * b;
                    }
                }
            }
        }
    }

    fn finish(self, source: String) -> LatticeBasis {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_i64().expect("entry below 2^32"))
                    .collect()
            })
            .collect();
        LatticeBasis {
            n: self.n,
            rows,
            source,
        }
    }
}

/// Back-substitution modulo 2^n, valid because 2^n Z^n lies in the lattice.
fn contains_mod(rows: &[Vec<i128>], n: usize, x: &[i64]) -> bool {
    if x.len() != n {
        return false;
    }
    let modulus = 1i128 << n;
    let mut r: Vec<i128> = x
        .iter()
        .map(|&a| i128::from(a).rem_euclid(modulus))
        .collect();
    for j in 0..n {
        let p = rows[j][j];
        if r[j] % p != 0 {
            return false;
        }
        let c = r[j] / p;
        if c != 0 {
            for (rc, &b) in r[j..].iter_mut().zip(&rows[j][j..]) {
                *rc = (*rc - c * b).rem_euclid(modulus);
            }
        }
    }
    true
}

/// Hermite basis of the integer span of all codeword lifts and 2^n Z^n.
pub fn build_span_basis(code: &BinaryCode) -> Result<LatticeBasis> {
    if code.k() > MAX_SPAN_DIMENSION {
        return Err(Error::Guard {
            what: "code dimension k for span generation",
            value: code.k() as u64,
            limit: MAX_SPAN_DIMENSION as u64,
        });
    }
    let n = code.n();
    let mut builder = HermiteBuilder::new(n);
    let mut lift = vec![0i64; n];
    for w in code.codewords() {
        for (j, x) in lift.iter_mut().enumerate() {
            *x = i64::from(w >> j & 1);
        }
        builder.insert(&lift);
    }
    Ok(builder.finish(code_identifier(code)))
}

/// Exact integer-span membership.
pub fn membership_span(basis: &LatticeBasis, x: &[i64]) -> bool {
    let rows: Vec<Vec<i128>> = basis
        .rows
        .iter()
        .map(|r| r.iter().map(|&a| i128::from(a)).collect())
        .collect();
    contains_mod(&rows, basis.n, x)
}

/// Membership in the level-sum set by peeling binary digits: the digit
/// `x mod 2` at each level is forced and must be a codeword.
pub fn membership_set(code: &BinaryCode, x: &[i64]) -> bool {
    let n = code.n();
    if x.len() != n {
        return false;
    }
    // 2^n Z^n is part of the set, so only x mod 2^n matters.
    let modulus = 1i128 << n;
    let mut r: Vec<i128> = x
        .iter()
        .map(|&a| i128::from(a).rem_euclid(modulus))
        .collect();
    for _ in 0..n {
        let digit: Word = r
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &v)| acc | ((v & 1) as Word) << j);
        if !code.contains(digit) {
            return false;
        }
        for v in r.iter_mut() {
            *v >>= 1;
        }
    }
    true
}

/// Random element of the level-sum set: random codewords at every level plus
/// a random point of 2^n {-1, 0, 1}^n.
pub fn sample_set_member<R: Rng>(code: &BinaryCode, rng: &mut R) -> Vec<i64> {
    let n = code.n();
    let mut x = vec![0i64; n];
    let message_mask = (1u64 << code.k()) - 1;
    for level in 1..=n {
        let c = code.encode((rng.gen::<u64>() & message_mask) as u32);
        let scale = 1i64 << (n - level);
        for (j, xj) in x.iter_mut().enumerate() {
            *xj += scale * i64::from(c >> j & 1);
        }
    }
    for xj in x.iter_mut() {
        *xj += (1i64 << n) * rng.gen_range(-1..=1);
    }
    x
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub sum: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl ClosureReport {
    pub fn closed(&self) -> bool {
        self.failed == 0
    }
}

pub const MAX_COUNTEREXAMPLES: usize = 10;

/// Samples pairs of set members and tests whether their sum stays in the set.
pub fn closure_probe(code: &BinaryCode, trials: u64, seed: u64) -> ClosureReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ClosureReport {
        trials,
        passed: 0,
        failed: 0,
        counterexamples: Vec::new(),
    };
    for _ in 0..trials {
        let a = sample_set_member(code, &mut rng);
        let b = sample_set_member(code, &mut rng);
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        if membership_set(code, &sum) {
            report.passed += 1;
        } else {
            report.failed += 1;
            if report.counterexamples.len() < MAX_COUNTEREXAMPLES {
                report.counterexamples.push(Counterexample { a, b, sum });
            }
        }
    }
    report
}

/// True iff `samples` random set members all lie in the span basis.
pub fn span_contains_set_probe(
    code: &BinaryCode,
    basis: &LatticeBasis,
    samples: u64,
    seed: u64,
) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).all(|_| membership_span(basis, &sample_set_member(code, &mut rng)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub workers: usize,
    /// Lifts the default n <= 24, cap <= 16 guards.
    pub allow_large: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            workers: 1,
            allow_large: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortVectorReport {
    pub cap: u64,
    pub min_norm: Option<u64>,
    pub kissing: u64,
    pub per_norm: BTreeMap<u64, u64>,
}

/// Counts every lattice vector with squared norm in [1, cap].
///
/// Depth-first over coordinates in pivot order: once x_0..x_{j-1} are fixed,
/// the coefficient of row j is forced and x_j must lie in a single residue
/// class modulo the pivot b[j][j]. Top-level branches are split round-robin
/// across `workers` threads and the counts are summed.
pub fn enumerate_short(
    basis: &LatticeBasis,
    cap: u64,
    options: EnumerationOptions,
) -> Result<ShortVectorReport> {
    if !options.allow_large {
        if basis.n > DEFAULT_MAX_ENUM_DIMENSION {
            return Err(Error::Guard {
                what: "enumeration dimension n",
                value: basis.n as u64,
                limit: DEFAULT_MAX_ENUM_DIMENSION as u64,
            });
        }
        if cap > DEFAULT_MAX_CAP {
            return Err(Error::Guard {
                what: "enumeration norm cap",
                value: cap,
                limit: DEFAULT_MAX_CAP,
            });
        }
    }
    let search = Search::new(basis, cap);
    let prefixes = search.prefixes();
    let workers = options.workers.max(1).min(prefixes.len().max(1));

    let mut per_norm = BTreeMap::new();
    let partials: Vec<BTreeMap<u64, u64>> = if workers == 1 {
        vec![search.run(&prefixes)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let mine: Vec<Prefix> =
                        prefixes.iter().skip(w).step_by(workers).cloned().collect();
                    let search = &search;
                    scope.spawn(move || search.run(&mine))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("enumeration worker panicked"))
                .collect()
        })
    };
    for part in partials {
        for (norm, count) in part {
            *per_norm.entry(norm).or_insert(0) += count;
        }
    }
    let min_norm = per_norm.keys().next().copied();
    let kissing = min_norm.map_or(0, |m| per_norm[&m]);
    Ok(ShortVectorReport {
        cap,
        min_norm,
        kissing,
        per_norm,
    })
}

#[derive(Clone, Debug)]
struct Prefix {
    depth: usize,
    norm: u64,
    offset: Vec<i128>,
}

struct Search {
    n: usize,
    cap: u64,
    modulus: i128,
    rows: Vec<Vec<i128>>,
}

impl Search {
    fn new(basis: &LatticeBasis, cap: u64) -> Self {
        Search {
            n: basis.n,
            cap,
            modulus: basis.modulus(),
            rows: basis
                .rows
                .iter()
                .map(|r| r.iter().map(|&a| i128::from(a)).collect())
                .collect(),
        }
    }

    /// Values x with x ≡ residue (mod p) and x² <= budget, ascending.
    fn candidates(residue: i128, p: i128, budget: u64) -> impl Iterator<Item = i128> {
        let s = budget.isqrt() as i128;
        let first = -s + (residue + s).rem_euclid(p);
        (first..=s).step_by(p as usize)
    }

    fn step(&self, j: usize, x: i128, offset: &[i128]) -> Vec<i128> {
        let p = self.rows[j][j];
        let c = (x - offset[j]).rem_euclid(self.modulus) / p;
        let mut next = offset.to_vec();
        if c != 0 {
            for (o, &b) in next[j..].iter_mut().zip(&self.rows[j][j..]) {
                *o = (*o + c * b).rem_euclid(self.modulus);
            }
        }
        next
    }

    /// Partial assignments of the leading coordinates, enough to spread work.
    fn prefixes(&self) -> Vec<Prefix> {
        let mut level = vec![Prefix {
            depth: 0,
            norm: 0,
            offset: vec![0; self.n],
        }];
        while !level.is_empty() && level.len() < 64 && level.iter().all(|p| p.depth < self.n) {
            let mut next = Vec::new();
            for pre in &level {
                let j = pre.depth;
                let p = self.rows[j][j];
                for x in Self::candidates(pre.offset[j], p, self.cap - pre.norm) {
                    next.push(Prefix {
                        depth: j + 1,
                        norm: pre.norm + (x * x) as u64,
                        offset: self.step(j, x, &pre.offset),
                    });
                }
            }
            level = next;
        }
        level
    }

    fn run(&self, prefixes: &[Prefix]) -> BTreeMap<u64, u64> {
        let mut counts = BTreeMap::new();
        let mut stack: Vec<Vec<i128>> = vec![vec![0; self.n]; self.n + 1];
        for pre in prefixes {
            stack[pre.depth].clone_from(&pre.offset);
            self.descend(pre.depth, pre.norm, &mut stack, &mut counts);
        }
        counts
    }

    fn descend(
        &self,
        j: usize,
        norm: u64,
        stack: &mut Vec<Vec<i128>>,
        counts: &mut BTreeMap<u64, u64>,
    ) {
        if j == self.n {
            if norm > 0 {
                *counts.entry(norm).or_insert(0) += 1;
            }
            return;
        }
        let p = self.rows[j][j];
        let residue = stack[j][j];
        for x in Self::candidates(residue, p, self.cap - norm) {
            let c = (x - stack[j][j]).rem_euclid(self.modulus) / p;
            let (head, tail) = stack.split_at_mut(j + 1);
            let (cur, next) = (&head[j], &mut tail[0]);
            next.copy_from_slice(cur);
            if c != 0 {
                for (o, &b) in next[j..].iter_mut().zip(&self.rows[j][j..]) {
                    *o = (*o + c * b).rem_euclid(self.modulus);
                }
            }
            self.descend(j + 1, norm + (x * x) as u64, stack, counts);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub cap: Option<u64>,
    pub closure_trials: u64,
    pub seed: u64,
    pub enumeration: EnumerationOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            cap: None,
            closure_trials: 1000,
            seed: 0,
            enumeration: EnumerationOptions::default(),
        }
    }
}

/// Measured outcome of the three lattice claims for one code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeVerdict {
    pub d: Option<usize>,
    pub a_d: u64,
    pub basis: LatticeBasis,
    pub short: ShortVectorReport,
    pub closure: ClosureReport,
    pub set_closed_sampled: bool,
    pub norm_equals_d: bool,
    pub kissing_ge_ad: bool,
}

/// Checks closure of the level-sum set, min norm = d and kissing >= A_d.
/// Requires a self-orthogonal code.
pub fn verify_lattice_code(code: &BinaryCode, options: VerifyOptions) -> Result<LatticeVerdict> {
    if !code.is_self_orthogonal() {
        return Err(Error::Precondition("code is not self-orthogonal".into()));
    }
    measure(code, options)
}

/// Default norm cap: max(d, 8).
pub fn default_cap(d: Option<usize>) -> u64 {
    d.map_or(8, |d| (d as u64).max(8))
}

pub(crate) fn measure(code: &BinaryCode, options: VerifyOptions) -> Result<LatticeVerdict> {
    let wd = code.weight_distribution()?;
    let (d, a_d) = (wd.min_distance(), wd.light_count());
    let basis = build_span_basis(code)?;
    let cap = options.cap.unwrap_or_else(|| default_cap(d));
    let short = enumerate_short(&basis, cap, options.enumeration)?;
    let closure = closure_probe(code, options.closure_trials, options.seed);
    let norm_equals_d = matches!((short.min_norm, d), (Some(m), Some(d)) if m == d as u64);
    let kissing_ge_ad = short.kissing >= a_d;
    Ok(LatticeVerdict {
        d,
        a_d,
        set_closed_sampled: closure.closed(),
        norm_equals_d,
        kissing_ge_ad,
        basis,
        short,
        closure,
    })
}
