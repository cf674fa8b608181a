//! End-to-end certification of one binary code: parse, weights, span basis,
//! short-vector enumeration, closure probe, and a canonical JSON record.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::asymptotics::{round_sig, BoundsSnapshot};
use crate::binary_codes::BinaryCode;
use crate::error::{Error, Result};
use crate::lattice::{
    build_span_basis, closure_probe, default_cap, enumerate_short, span_contains_set_probe,
    Counterexample, EnumerationOptions, DEFAULT_MAX_ENUM_DIMENSION, MAX_SPAN_DIMENSION,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    pub seed: u64,
    /// Norm cap; defaults to max(d, 8).
    pub cap: Option<u64>,
    pub closure_trials: u64,
    pub span_samples: u64,
    pub workers: usize,
    pub allow_large: bool,
    pub record_timings: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            seed: 0,
            cap: None,
            closure_trials: 1000,
            span_samples: 1000,
            workers: 1,
            allow_large: false,
            record_timings: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeSection {
    pub n: usize,
    pub k: usize,
    pub d: Option<usize>,
    #[serde(rename = "A_d")]
    pub a_d: u64,
    pub self_orthogonal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSection {
    pub dimension: usize,
    /// Decimal; can exceed 64 bits.
    pub determinant: String,
    pub determinant_log2: u32,
    pub min_norm: Option<u64>,
    pub kissing: u64,
    pub per_norm: BTreeMap<u64, u64>,
    pub basis_digest: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    pub set_closed_sampled: bool,
    pub norm_equals_d: bool,
    #[serde(rename = "kissing_ge_Ad")]
    pub kissing_ge_ad: bool,
    pub span_contains_set_sampled: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureSection {
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool_version: String,
    pub seed: u64,
    pub cap: u64,
    pub closure_trials: u64,
    pub span_samples: u64,
    pub max_enum_dimension: Option<usize>,
    pub max_span_dimension: usize,
    /// Wall-clock milliseconds per stage; only present when requested, since
    /// they break byte-identical reruns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub code: CodeSection,
    pub lattice: LatticeSection,
    pub checks: Checks,
    pub closure: ClosureSection,
    pub bounds_snapshot: BoundsSnapshot,
    pub warnings: Vec<String>,
    pub meta: Meta,
}

struct Timer {
    enabled: bool,
    laps: BTreeMap<String, f64>,
}

impl Timer {
    fn stage<T>(&mut self, name: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f().map_err(|e| e.at_stage(name))?;
        if self.enabled {
            let ms = start.elapsed().as_secs_f64() * 1e3;
            self.laps
                .insert(name.to_string(), round_sig(ms, SIGNIFICANT_DIGITS));
        }
        Ok(out)
    }
}

/// Runs the whole pipeline on the text of a code file.
pub fn certify(code_text: &str, options: CertifyOptions) -> Result<Certificate> {
    let mut timer = Timer {
        enabled: options.record_timings,
        laps: BTreeMap::new(),
    };
    let code = timer.stage("parse_code", || BinaryCode::parse(code_text))?;
    certify_code_timed(&code, options, timer)
}

/// Same as [`certify`] for an already parsed code.
pub fn certify_code(code: &BinaryCode, options: CertifyOptions) -> Result<Certificate> {
    let timer = Timer {
        enabled: options.record_timings,
        laps: BTreeMap::new(),
    };
    certify_code_timed(code, options, timer)
}

fn certify_code_timed(
    code: &BinaryCode,
    options: CertifyOptions,
    mut timer: Timer,
) -> Result<Certificate> {
    let mut warnings = Vec::new();
    let self_orthogonal = code.is_self_orthogonal();
    if !self_orthogonal {
        warnings.push(
            "code is not self-orthogonal: the lattice is still built, but min norm = d and kissing >= A_d are not guaranteed"
                .to_string(),
        );
    }
    let wd = timer.stage("weight_distribution", || code.weight_distribution())?;
    let (d, a_d) = (wd.min_distance(), wd.light_count());

    let basis = timer.stage("span_basis", || build_span_basis(code))?;
    let cap = options.cap.unwrap_or_else(|| default_cap(d));
    let short = timer.stage("enumerate_short", || {
        enumerate_short(
            &basis,
            cap,
            EnumerationOptions {
                workers: options.workers,
                allow_large: options.allow_large,
            },
        )
    })?;
    let closure = timer.stage("closure_probe", || {
        Ok(closure_probe(code, options.closure_trials, options.seed))
    })?;
    let span_ok = timer.stage("span_contains_set", || {
        Ok(span_contains_set_probe(
            code,
            &basis,
            options.span_samples,
            options.seed.wrapping_add(1),
        ))
    })?;

    let norm_equals_d = matches!((short.min_norm, d), (Some(m), Some(d)) if m == d as u64);
    Ok(Certificate {
        code: CodeSection {
            n: code.n(),
            k: code.k(),
            d,
            a_d,
            self_orthogonal,
        },
        lattice: LatticeSection {
            dimension: basis.n(),
            determinant: basis.determinant().to_string(),
            determinant_log2: basis.determinant_log2(),
            min_norm: short.min_norm,
            kissing: short.kissing,
            per_norm: short.per_norm,
            basis_digest: basis.digest(),
        },
        checks: Checks {
            set_closed_sampled: closure.closed(),
            norm_equals_d,
            kissing_ge_ad: short.kissing >= a_d,
            span_contains_set_sampled: span_ok,
        },
        closure: ClosureSection {
            trials: closure.trials,
            passed: closure.passed,
            failed: closure.failed,
            counterexamples: closure.counterexamples,
        },
        bounds_snapshot: BoundsSnapshot::compute().rounded(SIGNIFICANT_DIGITS),
        warnings,
        meta: Meta {
            tool_version: TOOL_VERSION.to_string(),
            seed: options.seed,
            cap,
            closure_trials: options.closure_trials,
            span_samples: options.span_samples,
            max_enum_dimension: (!options.allow_large).then_some(DEFAULT_MAX_ENUM_DIMENSION),
            max_span_dimension: MAX_SPAN_DIMENSION,
            timings_ms: options.record_timings.then_some(timer.laps),
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    CsvSummary,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv-summary" => Ok(Format::CsvSummary),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

pub const CSV_HEADER: &str = "n,k,d,A_d,min_norm,kissing,verdicts";

/// Canonical text: JSON with sorted keys, or a one-row CSV summary.
pub fn emit(cert: &Certificate, format: Format) -> String {
    match format {
        Format::Json => {
            // serde_json's default map is ordered by key.
            let value = serde_json::to_value(cert).expect("certificate serializes");
            let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
            s.push('\n');
            s
        }
        Format::CsvSummary => {
            let opt = |v: Option<u64>| v.map_or(String::new(), |x| x.to_string());
            let c = &cert.checks;
            format!(
                "{CSV_HEADER}\n{},{},{},{},{},{},set_closed_sampled={};norm_equals_d={};kissing_ge_Ad={};span_contains_set_sampled={}\n",
                cert.code.n,
                cert.code.k,
                opt(cert.code.d.map(|d| d as u64)),
                cert.code.a_d,
                opt(cert.lattice.min_norm),
                cert.lattice.kissing,
                c.set_closed_sampled,
                c.norm_equals_d,
                c.kissing_ge_ad,
                c.span_contains_set_sampled,
            )
        }
    }
}

pub fn parse_certificate(json: &str) -> Result<Certificate> {
    serde_json::from_str(json).map_err(|e| Error::parse(e.line(), e.to_string()))
}
