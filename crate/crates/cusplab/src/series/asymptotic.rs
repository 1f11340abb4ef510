use crate::cxmath::ln_gamma;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `scale · r̄^{rbar_power} · [e^{ir̄²}]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Prefactor {
    pub scale: Complex64,
    pub rbar_power: i32,
    pub oscillatory: bool,
}

impl Prefactor {
    pub fn eval(&self, rbar: f64) -> Complex64 {
        let mut v = self.scale * rbar.powi(self.rbar_power);
        if self.oscillatory {
            v *= Complex64::from_polar(1.0, rbar * rbar);
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Divergence {
    Terminating,
    Factorial,
}

/// `prefactor(r̄) · Σ_m A_m r̄^{-2m}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoticSeries {
    pub prefactor: Prefactor,
    pub coeffs: Vec<Complex64>,
    pub divergence: Divergence,
}

const LN_9: f64 = 2.197_224_577_336_219_6;

/// `ln|a_m|` and the power `k` in `a_m = |a_m| (-i)^k` for the decaying branch.
pub fn borel_coefficient_ln(m: usize) -> (f64, u32) {
    let mf = m as f64;
    // ln Γ is exact enough here; small m are handled exactly by `borel_coefficient`
    let ln = (mf + 4.0).ln() + ln_gamma(2.0 * mf + 7.0).unwrap_or(f64::INFINITY)
        - ln_gamma(mf + 2.0).unwrap_or(0.0)
        - (2.0 * mf + 5.0) * std::f64::consts::LN_2
        - LN_9;
    (ln, ((m + 1) % 4) as u32)
}

fn quarter_turn(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// `a_m = (-i)^{m+1}(m+4)(2m+6)! / ((m+1)! 2^{2m+5} · 9)`.
///
/// Accumulates the exact ratio `a_m / a_{m-1}` so no factorial is formed.
/// Magnitudes exceed `f64` beyond `m ≈ 150`; use `borel_coefficient_ln` there.
pub fn borel_coefficient(m: usize) -> Result<Complex64> {
    let mut mag = 10.0f64;
    for k in 1..=m {
        let kf = k as f64;
        mag *= (kf + 4.0) / (kf + 3.0) * (2.0 * kf + 6.0) * (2.0 * kf + 5.0) / (4.0 * (kf + 1.0));
    }
    if !mag.is_finite() {
        return Err(Error::Range(format!(
            "a_{m} has magnitude e^{:.1}, beyond double range",
            borel_coefficient_ln(m).0
        )));
    }
    Ok(quarter_turn(((m + 1) % 4) as u32) * mag)
}

impl AsymptoticSeries {
    /// `c₁(r̄³ + 9ir̄/2 - 9/(4r̄) + 3i/(8r̄³))`.
    pub fn c1_branch(c1: Complex64) -> Self {
        AsymptoticSeries {
            prefactor: Prefactor { scale: c1, rbar_power: 3, oscillatory: false },
            coeffs: vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 4.5),
                Complex64::new(-2.25, 0.0),
                Complex64::new(0.0, 0.375),
            ],
            divergence: Divergence::Terminating,
        }
    }

    /// `scale · e^{ir̄²}/r̄⁸ [1 + Σ_m a_m r̄^{-2m-2}]` with `terms` coefficients.
    pub fn c2_branch(scale: Complex64, terms: usize) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for m in 0..terms.saturating_sub(1) {
            coeffs.push(borel_coefficient(m)?);
        }
        Ok(AsymptoticSeries {
            prefactor: Prefactor { scale, rbar_power: -8, oscillatory: true },
            coeffs,
            divergence: Divergence::Factorial,
        })
    }

    /// Coefficients must be finite as stored.
    pub fn validate(&self) -> Result<()> {
        if self.coeffs.is_empty() {
            return Err(Error::Data("asymptotic series has no coefficients".into()));
        }
        if self.coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Data("asymptotic series has non-finite coefficients".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Data(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: AsymptoticSeries = serde_json::from_str(s).map_err(|e| Error::Data(e.to_string()))?;
        v.validate()?;
        Ok(v)
    }
}

/// Roundoff allowance per unit of `Σ|terms|` in the reported error.
const ROUNDING_FLOOR: f64 = 16.0 * f64::EPSILON;

/// Sum up to (excluding) the smallest term. The error estimate is the size of
/// the first omitted term plus a roundoff floor, scaled by `|prefactor|` so it
/// bounds the absolute error of the returned value.
pub fn asymptotic_eval_optimal(series: &AsymptoticSeries, rbar: f64) -> Result<(Complex64, f64)> {
    series.validate()?;
    if !(rbar > 0.0) {
        return Err(Error::Domain(format!("reduced radius must be > 0, got {rbar}")));
    }
    let x = 1.0 / (rbar * rbar);
    let terms: Vec<Complex64> = series
        .coeffs
        .iter()
        .enumerate()
        .map(|(m, a)| a * x.powi(m as i32))
        .collect();
    let pre = series.prefactor.eval(rbar);
    if series.divergence == Divergence::Terminating {
        let s: Complex64 = terms.iter().sum();
        return Ok((pre * s, 0.0));
    }
    let (mut best, mut best_mag) = (0usize, f64::INFINITY);
    for (m, t) in terms.iter().enumerate().skip(1) {
        let a = t.norm();
        if a < best_mag {
            best_mag = a;
            best = m;
        } else if a > best_mag {
            break;
        }
    }
    let s: Complex64 = terms[..best].iter().sum();
    let abs_sum: f64 = terms[..best].iter().map(|t| t.norm()).sum();
    if best == 0 || best_mag > 1e-3 * s.norm() {
        return Err(Error::TruncationUnavailable(format!(
            "smallest term {best_mag:.3e} is not below 1e-3 of the partial sum at r̄ = {rbar}"
        )));
    }
    let err = best_mag + ROUNDING_FLOOR * abs_sum;
    Ok((pre * s, err * pre.norm()))
}
