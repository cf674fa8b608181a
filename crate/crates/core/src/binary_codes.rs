//! Binary linear codes of length at most 32, one machine word per row.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Word = u32;

pub const MAX_LENGTH: usize = 32;
pub const MAX_DIMENSION: usize = 28;

/// Coordinate j of the code lives at bit j of a [`Word`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCode {
    n: usize,
    rows: Vec<Word>,
    // Fully reduced echelon form: (pivot bit, row); each pivot occurs in one row only.
    echelon: Vec<(u32, Word)>,
}

fn length_mask(n: usize) -> Word {
    if n == 32 {
        Word::MAX
    } else {
        (1 << n) - 1
    }
}

impl BinaryCode {
    pub fn new(n: usize, rows: Vec<Word>) -> Result<Self> {
        if n == 0 || n > MAX_LENGTH {
            return Err(Error::Guard {
                what: "code length n",
                value: n as u64,
                limit: MAX_LENGTH as u64,
            });
        }
        if rows.len() > MAX_DIMENSION {
            return Err(Error::Guard {
                what: "code dimension k",
                value: rows.len() as u64,
                limit: MAX_DIMENSION as u64,
            });
        }
        if let Some(i) = rows.iter().position(|&r| r & !length_mask(n) != 0) {
            return Err(Error::InvalidCode(format!(
                "row {i} has bits beyond length {n}"
            )));
        }
        let mut echelon: Vec<(u32, Word)> = Vec::with_capacity(rows.len());
        for (i, &row) in rows.iter().enumerate() {
            let mut r = row;
            for &(p, e) in &echelon {
                if r >> p & 1 == 1 {
                    r ^= e;
                }
            }
            if r == 0 {
                return Err(Error::RankDeficient { row: i });
            }
            let p = r.trailing_zeros();
            for (_, e) in echelon.iter_mut() {
                if *e >> p & 1 == 1 {
                    *e ^= r;
                }
            }
            echelon.push((p, r));
        }
        Ok(BinaryCode { n, rows, echelon })
    }

    /// The zero code [n, 0].
    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    /// Builds a code from rows written as strings over {0,1}.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        let words = rows
            .iter()
            .enumerate()
            .map(|(i, r)| parse_word(r, n).map_err(|m| Error::parse(i + 2, m)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, words)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Word] {
        &self.rows
    }

    /// Codeword for the message whose bit i selects generator row i.
    pub fn encode(&self, message: u32) -> Word {
        self.rows
            .iter()
            .enumerate()
            .filter(|(i, _)| message >> i & 1 == 1)
            .fold(0, |acc, (_, &r)| acc ^ r)
    }

    pub fn contains(&self, word: Word) -> bool {
        if word & !length_mask(self.n) != 0 {
            return false;
        }
        let mut w = word;
        for &(p, e) in &self.echelon {
            if w >> p & 1 == 1 {
                w ^= e;
            }
        }
        w == 0
    }

    /// All 2^k codewords in Gray-code order, starting at zero.
    pub fn codewords(&self) -> GrayCodewords<'_> {
        GrayCodewords {
            rows: &self.rows,
            index: 0,
            current: 0,
            total: 1u64 << self.rows.len(),
        }
    }

    /// G·Gᵀ = 0 over GF(2).
    pub fn is_self_orthogonal(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, &a)| {
            self.rows[i..]
                .iter()
                .all(|&b| (a & b).count_ones() % 2 == 0)
        })
    }

    pub fn weight_distribution(&self) -> Result<WeightDistribution> {
        if self.k() > MAX_DIMENSION {
            return Err(Error::Guard {
                what: "code dimension k",
                value: self.k() as u64,
                limit: MAX_DIMENSION as u64,
            });
        }
        let mut counts = vec![0u64; self.n + 1];
        for c in self.codewords() {
            counts[c.count_ones() as usize] += 1;
        }
        Ok(WeightDistribution { counts })
    }

    /// Code file text: `binary-code n=<n> k=<k>` then k rows over {0,1}.
    pub fn to_text(&self) -> String {
        let mut out = format!("binary-code n={} k={}\n", self.n, self.k());
        for &r in &self.rows {
            out.push_str(&word_to_string(r, self.n));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty input, expected `binary-code n=<n> k=<k>`"))?;
        let (n, k) = parse_header(header).map_err(|m| Error::parse(hline, m))?;
        if n == 0 || n > MAX_LENGTH {
            return Err(Error::Guard {
                what: "code length n",
                value: n as u64,
                limit: MAX_LENGTH as u64,
            });
        }
        let mut rows = Vec::with_capacity(k);
        for (line, row) in lines.by_ref() {
            if rows.len() == k {
                return Err(Error::parse(line, format!("more than k = {k} rows")));
            }
            rows.push(parse_word(row, n).map_err(|m| Error::parse(line, m))?);
        }
        if rows.len() != k {
            return Err(Error::parse(
                hline,
                format!("header declares k = {k} rows, found {}", rows.len()),
            ));
        }
        Self::new(n, rows)
    }
}

fn parse_header(header: &str) -> Result<(usize, usize), String> {
    let mut words = header.split_whitespace();
    if words.next() != Some("binary-code") {
        return Err("expected header `binary-code n=<n> k=<k>`".into());
    }
    let (mut n, mut k) = (None, None);
    for w in words {
        match w.split_once('=') {
            Some(("n", v)) => n = Some(v.parse().map_err(|_| format!("bad n `{v}`"))?),
            Some(("k", v)) => k = Some(v.parse().map_err(|_| format!("bad k `{v}`"))?),
            _ => return Err(format!("unexpected header token `{w}`")),
        }
    }
    Ok((n.ok_or("header missing n=")?, k.ok_or("header missing k=")?))
}

pub(crate) fn parse_word(s: &str, n: usize) -> Result<Word, String> {
    if s.len() != n {
        return Err(format!("row `{s}` has length {}, expected {n}", s.len()));
    }
    s.bytes().enumerate().try_fold(0, |acc, (j, b)| match b {
        b'0' => Ok(acc),
        b'1' => Ok(acc | 1 << j),
        _ => Err(format!("row `{s}` contains a character outside {{0,1}}")),
    })
}

pub fn word_to_string(w: Word, n: usize) -> String {
    (0..n)
        .map(|j| if w >> j & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Embeds a binary word into Z^n with coordinates in {0,1}.
pub fn lift(w: Word, n: usize) -> Vec<i64> {
    (0..n).map(|j| i64::from(w >> j & 1)).collect()
}

pub struct GrayCodewords<'a> {
    rows: &'a [Word],
    index: u64,
    current: Word,
    total: u64,
}

impl Iterator for GrayCodewords<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.index >= self.total {
            return None;
        }
        if self.index > 0 {
            self.current ^= self.rows[self.index.trailing_zeros() as usize];
        }
        self.index += 1;
        Some(self.current)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.index) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for GrayCodewords<'_> {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    counts: Vec<u64>,
}

impl WeightDistribution {
    /// Number of codewords of weight w, for w = 0..=n.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Nonzero entries only.
    pub fn as_map(&self) -> BTreeMap<usize, u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(w, &c)| (w, c))
            .collect()
    }

    /// Minimum nonzero weight; `None` for the zero code.
    pub fn min_distance(&self) -> Option<usize> {
        self.counts
            .iter()
            .skip(1)
            .position(|&c| c > 0)
            .map(|i| i + 1)
    }

    /// Number of codewords of minimum weight (0 for the zero code).
    pub fn light_count(&self) -> u64 {
        self.min_distance().map_or(0, |d| self.counts[d])
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Summary emitted by `kisslat code analyze`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeAnalysis {
    pub n: usize,
    pub k: usize,
    pub d: Option<usize>,
    #[serde(rename = "A_d")]
    pub a_d: u64,
    pub self_orthogonal: bool,
    pub weights: BTreeMap<String, u64>,
}

pub fn analyze(code: &BinaryCode) -> Result<CodeAnalysis> {
    let wd = code.weight_distribution()?;
    Ok(CodeAnalysis {
        n: code.n(),
        k: code.k(),
        d: wd.min_distance(),
        a_d: wd.light_count(),
        self_orthogonal: code.is_self_orthogonal(),
        weights: wd
            .as_map()
            .into_iter()
            .map(|(w, c)| (w.to_string(), c))
            .collect(),
    })
}

impl std::fmt::Display for BinaryCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}] binary code", self.n, self.k())?;
        for &r in &self.rows {
            f.write_char('\n')?;
            f.write_str(&word_to_string(r, self.n))?;
        }
        Ok(())
    }
}
