//! Generalized Reed–Solomon codes over GF(2^m) and the rate thresholds under
//! which algebraic-geometry codes admit self-orthogonal equivalents.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::{parse_hex, Element, FieldTable};

/// Largest codeword count for which the MDS property is checked by enumeration.
pub const MDS_ENUMERATION_LIMIT: u64 = 1 << 20;

/// Rows are `multiplier_j * point_j^t` for t = 0..K-1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrsCode {
    field: FieldTable,
    points: Vec<Element>,
    multipliers: Vec<Element>,
    k: usize,
}

impl GrsCode {
    pub fn new(
        field: &FieldTable,
        points: Vec<Element>,
        multipliers: Vec<Element>,
        k: usize,
    ) -> Result<Self> {
        if points.len() != multipliers.len() {
            return Err(Error::Mismatch(format!(
                "{} points but {} multipliers",
                points.len(),
                multipliers.len()
            )));
        }
        if let Some(&bad) = points
            .iter()
            .chain(&multipliers)
            .find(|&&a| !field.contains(a))
        {
            return Err(Error::InvalidCode(format!(
                "{bad:#x} is not an element of GF({})",
                field.size()
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidCode(format!(
                    "evaluation point {p:#x} repeated at position {i}"
                )));
            }
        }
        if let Some(j) = multipliers.iter().position(|&v| v == 0) {
            return Err(Error::InvalidCode(format!("multiplier {j} is zero")));
        }
        if k > points.len() {
            return Err(Error::InvalidCode(format!(
                "dimension K = {k} exceeds length N = {}",
                points.len()
            )));
        }
        Ok(GrsCode {
            field: field.clone(),
            points,
            multipliers,
            k,
        })
    }

    pub fn field(&self) -> &FieldTable {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[Element] {
        &self.points
    }

    pub fn multipliers(&self) -> &[Element] {
        &self.multipliers
    }

    pub fn generator(&self) -> Vec<Vec<Element>> {
        (0..self.k as u32)
            .map(|t| {
                self.points
                    .iter()
                    .zip(&self.multipliers)
                    .map(|(&x, &v)| self.field.mul(v, self.field.pow(x, t)))
                    .collect()
            })
            .collect()
    }

    pub fn encode(&self, message: &[Element]) -> Vec<Element> {
        let f = &self.field;
        let mut word = vec![0; self.len()];
        for (row, &coef) in self.generator().iter().zip(message) {
            for (w, &g) in word.iter_mut().zip(row) {
                *w ^= f.mul(coef, g);
            }
        }
        word
    }

    /// G·Gᵀ = 0 under the Euclidean form Σ x_j y_j over GF(q).
    pub fn is_euclidean_self_orthogonal(&self) -> bool {
        let g = self.generator();
        let f = &self.field;
        g.iter().enumerate().all(|(s, a)| {
            g[s..]
                .iter()
                .all(|b| a.iter().zip(b).fold(0, |acc, (&x, &y)| acc ^ f.mul(x, y)) == 0)
        })
    }

    /// Number of codewords, `None` if it overflows u64.
    pub fn codeword_count(&self) -> Option<u64> {
        u64::from(self.field.size()).checked_pow(self.k as u32)
    }

    /// Every codeword, messages in lexicographic order. Guarded by `limit`.
    pub fn codewords(&self, limit: u64) -> Result<Vec<Vec<Element>>> {
        let count = self.codeword_count().unwrap_or(u64::MAX);
        if count > limit {
            return Err(Error::Guard {
                what: "outer codeword count q^K",
                value: count,
                limit,
            });
        }
        let q = self.field.size();
        let mut message = vec![0 as Element; self.k];
        let mut out = Vec::with_capacity(count as usize);
        for _ in 0..count {
            out.push(self.encode(&message));
            for digit in message.iter_mut() {
                *digit += 1;
                if u32::from(*digit) < q {
                    break;
                }
                *digit = 0;
            }
        }
        Ok(out)
    }

    /// Minimum Hamming distance by enumeration; `None` for K = 0.
    pub fn min_distance(&self) -> Result<Option<usize>> {
        Ok(self
            .codewords(MDS_ENUMERATION_LIMIT)?
            .iter()
            .map(|c| c.iter().filter(|&&s| s != 0).count())
            .filter(|&w| w > 0)
            .min())
    }

    /// File text: `grs q=<q> N=<N> K=<K>`, then points and multipliers in hex.
    pub fn to_text(&self) -> String {
        let hex = |v: &[Element]| {
            v.iter()
                .map(|a| format!("{a:x}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!(
            "grs q={} N={} K={}\n{}\n{}\n",
            self.field.size(),
            self.len(),
            self.k,
            hex(&self.points),
            hex(&self.multipliers)
        )
    }

    /// Parses a GRS file; the field uses the default modulus for its degree.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty input, expected `grs q=<q> N=<N> K=<K>`"))?;
        let mut words = header.split_whitespace();
        if words.next() != Some("grs") {
            return Err(Error::parse(
                hline,
                "expected header `grs q=<q> N=<N> K=<K>`",
            ));
        }
        let (mut q, mut n, mut k) = (None, None, None);
        for w in words {
            let (key, value) = w
                .split_once('=')
                .ok_or_else(|| Error::parse(hline, format!("unexpected token `{w}`")))?;
            let value: u32 = value
                .parse()
                .map_err(|_| Error::parse(hline, format!("bad value in `{w}`")))?;
            match key {
                "q" => q = Some(value),
                "N" => n = Some(value as usize),
                "K" => k = Some(value as usize),
                _ => return Err(Error::parse(hline, format!("unexpected token `{w}`"))),
            }
        }
        let q = q.ok_or_else(|| Error::parse(hline, "header missing q="))?;
        let n = n.ok_or_else(|| Error::parse(hline, "header missing N="))?;
        let k = k.ok_or_else(|| Error::parse(hline, "header missing K="))?;
        let field = FieldTable::for_size(q)?;

        let mut read_row = |what: &str| -> Result<Vec<Element>> {
            let (line, row) = lines
                .next()
                .ok_or_else(|| Error::parse(hline, format!("missing {what} line")))?;
            let values = row
                .split_whitespace()
                .map(|w| {
                    let v = parse_hex(w, line)?;
                    Element::try_from(v)
                        .map_err(|_| Error::parse(line, format!("`{w}` exceeds 8 bits")))
                })
                .collect::<Result<Vec<_>>>()?;
            if values.len() != n {
                return Err(Error::parse(
                    line,
                    format!("{what}: expected {n} entries, found {}", values.len()),
                ));
            }
            Ok(values)
        };
        let points = read_row("points")?;
        let multipliers = read_row("multipliers")?;
        if let Some((line, _)) = lines.next() {
            return Err(Error::parse(line, "trailing content after multipliers"));
        }
        Self::new(&field, points, multipliers, k)
    }
}

/// Seeded search for a Euclidean self-orthogonal [N, K] GRS code.
///
/// Self-orthogonality is Σ_j v_j² x_j^e = 0 for e = 0..=2K-2, linear in the
/// squared multipliers u_j = v_j². Each attempt draws a random point set,
/// solves that system, and tries random nullspace vectors with no zero
/// coordinate; squaring is bijective in characteristic 2, so v_j = √u_j.
pub fn search_self_orthogonal(
    field: &FieldTable,
    n: usize,
    k: usize,
    seed: u64,
    attempts: u64,
) -> Option<GrsCode> {
    if n > field.size() as usize || 2 * k > n {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut elements: Vec<Element> = field.elements().collect();
    let q = field.size();
    let sqrt_exp = 1u32 << (field.m() - 1);
    for _ in 0..attempts {
        elements.shuffle(&mut rng);
        let mut points = elements[..n].to_vec();
        points.sort_unstable();
        let conditions: Vec<Vec<Element>> = (0..(2 * k).saturating_sub(1) as u32)
            .map(|e| points.iter().map(|&x| field.pow(x, e)).collect())
            .collect();
        let kernel = nullspace(field, conditions, n);
        if kernel.is_empty() {
            continue;
        }
        for _ in 0..16 {
            let mut u = vec![0 as Element; n];
            for b in &kernel {
                let c = rng.gen_range(0..q) as Element;
                for (uj, &bj) in u.iter_mut().zip(b) {
                    *uj ^= field.mul(c, bj);
                }
            }
            if u.contains(&0) {
                continue;
            }
            let multipliers = u.iter().map(|&a| field.pow(a, sqrt_exp)).collect();
            let code = GrsCode::new(field, points.clone(), multipliers, k).ok()?;
            if code.is_euclidean_self_orthogonal() {
                return Some(code);
            }
        }
    }
    None
}

/// Basis of {u : rows · u = 0} over GF(q).
fn nullspace(field: &FieldTable, mut rows: Vec<Vec<Element>>, ncols: usize) -> Vec<Vec<Element>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][col]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let factor = rows[i][col];
                let pivot_row = rows[r].clone();
                for (x, &y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x ^= field.mul(factor, y);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut u = vec![0 as Element; ncols];
            u[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                // char 2: -a = a
                u[pc] = rows[i][free];
            }
            u
        })
        .collect()
}

/// Largest integer k with k <= (n - 1 - log_q(1 + 2/q)/q)/2 - g. May be negative.
pub fn outer_dimension_bound(q: u32, n: u64, g: u64) -> i64 {
    let q = f64::from(q);
    let log_q = (1.0 + 2.0 / q).log2() / q.log2();
    let bound = (n as f64 - 1.0 - log_q / q) / 2.0 - g as f64;
    bound.floor() as i64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateThresholds {
    pub q: u32,
    pub r: u32,
    /// log_q(1 + 2/q) / (2q)
    pub log_term: f64,
    /// 1/2 - log_term - 1/(r - 1). Negative for q = 4, where no rate qualifies.
    pub rho0: f64,
    /// Genus and the resulting length n = (r - 1)g and dimension bound, when requested.
    pub g: Option<u64>,
    pub n: Option<u64>,
    pub kmax: Option<i64>,
}

pub fn rho0(q: u32) -> Result<RateThresholds> {
    if !q.is_power_of_two() || !q.trailing_zeros().is_multiple_of(2) || q < 4 {
        return Err(Error::Domain(format!(
            "q = {q} is not an even power of 2 at least 4"
        )));
    }
    let r = 1u32 << (q.trailing_zeros() / 2);
    let qf = f64::from(q);
    let log_term = (1.0 + 2.0 / qf).log2() / qf.log2() / (2.0 * qf);
    let rho0 = 0.5 - log_term - 1.0 / f64::from(r - 1);
    Ok(RateThresholds {
        q,
        r,
        log_term,
        rho0,
        g: None,
        n: None,
        kmax: None,
    })
}

/// [`rho0`] together with the dimension bound for a curve of genus `g`
/// and length n = (r - 1)g.
pub fn rho0_at_genus(q: u32, g: u64) -> Result<RateThresholds> {
    let mut t = rho0(q)?;
    let n = u64::from(t.r - 1) * g;
    t.g = Some(g);
    t.n = Some(n);
    t.kmax = Some(outer_dimension_bound(q, n, g));
    Ok(t)
}
