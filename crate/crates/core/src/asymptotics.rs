//! Closed-form constants behind the exponential kissing-number bound.
//!
//! All logarithms are binary. Genus and point-count quantities are exact
//! rationals; everything else is `f64`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::outer_codes::rho0;

/// Slack subtracted in the headline constant.
pub const EXPONENT_SLACK: f64 = 1e-6;
/// The smaller slack used in the final display of the calculation.
pub const FINAL_DISPLAY_SLACK: f64 = 1e-7;
/// Illustrative linear-growth constant quoted alongside the bound.
pub const SUGGESTED_C0: f64 = 0.001;

const BISECTION_TOLERANCE: f64 = 1e-14;

/// Binary entropy −δ log δ − (1−δ) log(1−δ), zero at both endpoints.
pub fn entropy(delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain(format!(
            "entropy needs 0 <= δ <= 1, got {delta}"
        )));
    }
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.log2() };
    Ok(term(delta) + term(1.0 - delta))
}

/// E_s(δ) = H(δ) − 2s/(2^s − 1) − log(2^{2s}/(2^{2s} − 1)).
pub fn exponent(s: u32, delta: f64) -> Result<f64> {
    if !(2..=30).contains(&s) {
        return Err(Error::Domain(format!("s must lie in 2..=30, got {s}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("δ must lie in (0, 1), got {delta}")));
    }
    let two_s = 2f64.powi(s as i32);
    let q = two_s * two_s;
    Ok(entropy(delta)? - 2.0 * f64::from(s) / (two_s - 1.0) - (q / (q - 1.0)).log2())
}

/// Normalized exponent E_s(δ) / 2^{2s}.
pub fn rate_exponent(s: u32, delta: f64) -> Result<f64> {
    Ok(exponent(s, delta)? / 4f64.powi(s as i32))
}

/// The two zeros δ_1 < 1/2 < δ_2 of E_s.
pub fn exponent_zeros(s: u32) -> Result<(f64, f64)> {
    let peak = exponent(s, 0.5)?;
    if peak <= 0.0 {
        return Err(Error::Domain(format!(
            "E_{s}(1/2) = {peak} <= 0, no sign change"
        )));
    }
    let f = |d: f64| exponent(s, d).expect("δ inside (0, 1)");
    let low = bisect(f, 1e-12, 0.5);
    let high = bisect(f, 0.5, 1.0 - 1e-12);
    Ok((low, high))
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa_negative = f(a) < 0.0;
    while b - a > BISECTION_TOLERANCE {
        let mid = 0.5 * (a + b);
        if (f(mid) < 0.0) == fa_negative {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// (1/7 − log(64/63) − slack) / 64.
pub fn kissing_exponent_constant_with_slack(slack: f64) -> f64 {
    (1.0 / 7.0 - (64.0f64 / 63.0).log2() - slack) / 64.0
}

pub fn kissing_exponent_constant() -> f64 {
    kissing_exponent_constant_with_slack(EXPONENT_SLACK)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Delta0 {
    /// 6/7 − ρ_0(64)
    pub delta0: f64,
    /// δ_0 − 1/2, signed. Positive as computed.
    pub offset: f64,
    pub offset_magnitude: f64,
}

pub fn delta0() -> Delta0 {
    let rho = rho0(64).expect("64 is an even power of 2").rho0;
    let delta0 = 6.0 / 7.0 - rho;
    Delta0 {
        delta0,
        offset: delta0 - 0.5,
        offset_magnitude: (delta0 - 0.5).abs(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrinfeldParams {
    pub s: u32,
    pub k: u32,
    pub m: u32,
    /// (2^{ms} − 1)² / (2^{2s} − 1), reduced.
    pub genus: BigRational,
    /// 2^{sk}
    pub points_lower_bound: BigUint,
    /// 2^{sk} >= (2^{2s} − 1)·g_k
    pub ratio_check: bool,
}

impl DrinfeldParams {
    pub fn genus_is_integral(&self) -> bool {
        self.genus.is_integer()
    }
}

/// Genus and rational-point bound of the k-th curve in the tower over
/// GF(2^s), defined for even k only.
pub fn drinfeld_params(s: u32, k: u32) -> Result<DrinfeldParams> {
    if s < 2 || k < 2 {
        return Err(Error::Domain(format!(
            "need s >= 2 and k >= 2, got s={s}, k={k}"
        )));
    }
    if k % 2 == 1 {
        return Err(Error::Domain(format!(
            "genus formula is given for even k only, got k={k}"
        )));
    }
    let m = k / 2;
    let one = BigInt::one();
    let numerator = ((&one << (m * s) as usize) - &one).pow(2);
    let q_minus_one = (&one << (2 * s) as usize) - &one;
    let genus = BigRational::new(numerator, q_minus_one.clone());
    let points = BigUint::one() << (s * k) as usize;
    let ratio_check = BigRational::from_integer(BigInt::from(points.clone()))
        >= genus.clone() * BigRational::from_integer(q_minus_one);
    Ok(DrinfeldParams {
        s,
        k,
        m,
        genus,
        points_lower_bound: points,
        ratio_check,
    })
}

pub const MAX_TABLE_K: u32 = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamRow {
    pub k: u32,
    pub big_k: u32,
    pub n: u64,
    /// Exact genus as `p/q` or an integer; absent for odd k.
    pub genus: Option<String>,
    pub genus_integral: Option<bool>,
    pub target_dimension: u64,
    pub target_distance: u64,
    pub log2_ad_lower_bound: f64,
}

/// Planning table for N = 8^k, K = 3k − 1 with s = 3.
pub fn param_table(kmax: u32) -> Result<Vec<ParamRow>> {
    if kmax > MAX_TABLE_K {
        return Err(Error::Guard {
            what: "kmax",
            value: u64::from(kmax),
            limit: u64::from(MAX_TABLE_K),
        });
    }
    let rho = rho0(64)?.rho0;
    let d0 = delta0().delta0;
    let c = kissing_exponent_constant();
    Ok((1..=kmax)
        .map(|k| {
            let n = 8u64.pow(k);
            let params = drinfeld_params(3, k).ok();
            ParamRow {
                k,
                big_k: 3 * k - 1,
                n,
                genus: params.as_ref().map(|p| p.genus.to_string()),
                genus_integral: params.as_ref().map(DrinfeldParams::genus_is_integral),
                target_dimension: (rho * n as f64).floor() as u64,
                target_distance: (d0 * n as f64).floor() as u64,
                log2_ad_lower_bound: c * n as f64,
            }
        })
        .collect())
}

pub fn param_table_csv(rows: &[ParamRow]) -> String {
    let mut out = String::from(
        "k,K,N,genus,genus_integral,target_dimension,target_distance,log2_Ad_lower_bound\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.k,
            r.big_k,
            r.n,
            r.genus.as_deref().unwrap_or(""),
            r.genus_integral.map_or(String::new(), |b| b.to_string()),
            r.target_dimension,
            r.target_distance,
            format_sig(r.log2_ad_lower_bound, 12),
        ));
    }
    out
}

/// Rounds to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

pub(crate) fn format_sig(x: f64, digits: usize) -> String {
    format!("{}", round_sig(x, digits))
}

/// Every numeric constant of the bound calculation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsSnapshot {
    pub e3_half: f64,
    pub e3_half_over_64: f64,
    pub kissing_exponent_constant: f64,
    pub kissing_exponent_constant_final_display: f64,
    pub rho0_q64: f64,
    pub rho0_log_term: f64,
    pub delta0: f64,
    pub delta0_offset: f64,
    pub delta0_offset_magnitude: f64,
    pub delta0_offset_note: String,
    pub e3_delta0: f64,
    pub e3_budget_gap: f64,
    pub e3_zero_low: f64,
    pub e3_zero_high: f64,
    pub suggested_c0: f64,
}

impl BoundsSnapshot {
    pub fn compute() -> Self {
        let e3 = exponent(3, 0.5).expect("valid arguments");
        let rho = rho0(64).expect("valid q");
        let d0 = delta0();
        let e3_d0 = exponent(3, d0.delta0).expect("valid arguments");
        let (z1, z2) = exponent_zeros(3).expect("E_3(1/2) > 0");
        BoundsSnapshot {
            e3_half: e3,
            e3_half_over_64: e3 / 64.0,
            kissing_exponent_constant: kissing_exponent_constant(),
            kissing_exponent_constant_final_display: kissing_exponent_constant_with_slack(
                FINAL_DISPLAY_SLACK,
            ),
            rho0_q64: rho.rho0,
            rho0_log_term: rho.log_term,
            delta0: d0.delta0,
            delta0_offset: d0.offset,
            delta0_offset_magnitude: d0.offset_magnitude,
            delta0_offset_note:
                "6/7 - rho0 lies above 1/2; the offset is often printed as 0.5 - 5.78e-5"
                    .to_string(),
            e3_delta0: e3_d0,
            e3_budget_gap: e3 - e3_d0,
            e3_zero_low: z1,
            e3_zero_high: z2,
            suggested_c0: SUGGESTED_C0,
        }
    }

    /// Copy with every float rounded to `digits` significant digits.
    pub fn rounded(&self, digits: usize) -> Self {
        let r = |x: f64| round_sig(x, digits);
        BoundsSnapshot {
            e3_half: r(self.e3_half),
            e3_half_over_64: r(self.e3_half_over_64),
            kissing_exponent_constant: r(self.kissing_exponent_constant),
            kissing_exponent_constant_final_display: r(self.kissing_exponent_constant_final_display),
            rho0_q64: r(self.rho0_q64),
            rho0_log_term: r(self.rho0_log_term),
            delta0: r(self.delta0),
            delta0_offset: r(self.delta0_offset),
            delta0_offset_magnitude: r(self.delta0_offset_magnitude),
            delta0_offset_note: self.delta0_offset_note.clone(),
            e3_delta0: r(self.e3_delta0),
            e3_budget_gap: r(self.e3_budget_gap),
            e3_zero_low: r(self.e3_zero_low),
            e3_zero_high: r(self.e3_zero_high),
            suggested_c0: r(self.suggested_c0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(0.5).unwrap(), 1.0);
        assert_eq!(entropy(0.0).unwrap(), 0.0);
        assert_eq!(entropy(1.0).unwrap(), 0.0);
        assert!((entropy(0.11).unwrap() - 0.49992).abs() < 1e-5);
        assert!(entropy(-0.1).is_err());
        assert!(entropy(1.5).is_err());
        assert!(entropy(f64::NAN).is_err());
    }

    #[test]
    fn exponent_values() {
        let e3 = exponent(3, 0.5).unwrap();
        assert!((e3 - 0.120137).abs() < 1e-5);
        assert!((e3 - (1.0 / 7.0 - (64.0f64 / 63.0).log2())).abs() < 1e-15);
        assert!((rate_exponent(3, 0.5).unwrap() - 0.0018771).abs() < 1e-6);
        let e4 = exponent(4, 0.5).unwrap();
        assert!((e4 - (1.0 - 8.0 / 15.0 - (256.0f64 / 255.0).log2())).abs() < 1e-15);
        assert!((e4 - 0.46102).abs() < 1e-5);
        assert!(exponent(1, 0.5).is_err());
        assert!(exponent(3, 0.0).is_err());
        assert!(exponent(3, 1.0).is_err());
    }

    #[test]
    fn zeros_of_e3() {
        let (d1, d2) = exponent_zeros(3).unwrap();
        assert!(exponent(3, d1).unwrap().abs() < 1e-9);
        assert!(exponent(3, d2).unwrap().abs() < 1e-9);
        assert!((d1 + d2 - 1.0).abs() < 1e-9);
        assert!(d2 < 1.0 - 2f64.powi(-6));
        assert!(0.29 < d1 && d1 < 0.31);
    }

    #[test]
    fn zeros_need_positive_peak() {
        // E_2(1/2) = 1 - 4/3 - log(16/15) < 0
        assert!(matches!(exponent_zeros(2), Err(Error::Domain(_))));
    }

    #[test]
    fn headline_constant() {
        let c = kissing_exponent_constant();
        assert!((c - 0.00187713).abs() < 1e-7);
        let e3 = exponent(3, 0.5).unwrap();
        assert!((c * 64.0 + EXPONENT_SLACK - e3).abs() < 1e-15);
        let d0 = delta0();
        let via_delta0 = exponent(3, d0.delta0).unwrap() / 64.0;
        assert!((via_delta0 - c).abs() <= EXPONENT_SLACK / 64.0);
    }

    #[test]
    fn delta0_values() {
        let d = delta0();
        assert!((d.offset_magnitude - 5.78e-5).abs() < 1e-7);
        assert!(d.offset > 0.0);
        assert!((d.delta0 - 0.5000578).abs() < 1e-6);
        let gap = exponent(3, 0.5).unwrap() - exponent(3, d.delta0).unwrap();
        assert!((0.0..=1e-6).contains(&gap));
    }

    #[test]
    fn drinfeld_examples() {
        let p = drinfeld_params(3, 4).unwrap();
        assert_eq!(p.genus, BigRational::from_integer(63.into()));
        assert_eq!(p.points_lower_bound, BigUint::from(4096u32));
        assert!(p.ratio_check);

        let p = drinfeld_params(3, 2).unwrap();
        assert_eq!(p.genus, BigRational::new(49.into(), 63.into()));
        assert!(!p.genus_is_integral());

        let p = drinfeld_params(3, 6).unwrap();
        assert_eq!(p.points_lower_bound, BigUint::from(262_144u32));

        assert!(drinfeld_params(3, 3).is_err());
        assert!(drinfeld_params(1, 4).is_err());
    }

    #[test]
    fn table_rows() {
        let rows = param_table(6).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!((rows[0].n, rows[0].big_k), (8, 2));
        assert!(rows[0].genus.is_none());
        assert!((rows[1].log2_ad_lower_bound - 0.1201).abs() < 1e-3);
        assert_eq!(rows[3].n, 4096);
        assert_eq!(
            BigUint::from(rows[3].n),
            drinfeld_params(3, 4).unwrap().points_lower_bound
        );
        assert_eq!(rows[3].genus.as_deref(), Some("63"));
        assert!(param_table(13).is_err());
        let csv = param_table_csv(&rows);
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.lines().nth(1).unwrap().starts_with("1,2,8,,,"));
    }

    #[test]
    fn budget_ordering() {
        let c = kissing_exponent_constant();
        let e = exponent(3, 0.5).unwrap() / 64.0;
        assert!(c < e && e < c + EXPONENT_SLACK / 64.0 + 1e-12);
    }

    #[test]
    fn symmetry_and_sign_pattern() {
        let (d1, d2) = exponent_zeros(3).unwrap();
        for i in 1..1000 {
            let d = f64::from(i) / 1000.0;
            let e = exponent(3, d).unwrap();
            assert!((e - exponent(3, 1.0 - d).unwrap()).abs() < 1e-12);
            if d > d1 + 1e-9 && d < d2 - 1e-9 {
                assert!(e > 0.0, "δ = {d}");
            } else if d < d1 - 1e-9 || d > d2 + 1e-9 {
                assert!(e < 0.0, "δ = {d}");
            }
        }
    }

    #[test]
    fn entropy_is_concave_on_samples() {
        for i in 0..=20 {
            for j in 0..=20 {
                for l in 0..=10 {
                    let (a, b, lam) = (i as f64 / 20.0, j as f64 / 20.0, l as f64 / 10.0);
                    let mix = entropy(lam * a + (1.0 - lam) * b).unwrap();
                    let chord = lam * entropy(a).unwrap() + (1.0 - lam) * entropy(b).unwrap();
                    assert!(mix >= chord - 1e-12);
                }
            }
        }
    }

    #[test]
    fn significant_digit_rounding() {
        assert_eq!(round_sig(0.123456789012345, 12), 0.123456789012);
        assert_eq!(round_sig(0.0, 12), 0.0);
        assert_eq!(round_sig(-1234.5678, 4), -1235.0);
    }
}
