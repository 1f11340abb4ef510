//! Closed-form wavefunctions and short-time laws, Hartree atomic units.

use crate::cxmath::{self, faddeeva_asymptotic_remainder, faddeeva_w, ComplexValue, I};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

const SQRT_PI: f64 = 1.772_453_850_905_516;
pub const DEFAULT_LIGHT_SPEED: f64 = 137.035_999;
/// Below `r < SMALL_R·√t` the exact free solution uses its Taylor expansion.
pub const SMALL_R: f64 = 1e-4;
/// Asymptotic forms require `r ≥ VALIDITY·√t`.
pub const VALIDITY: f64 = 5.0;
/// Above this reduced radius the ξ₄ profile uses the remainder form.
const XI4_SWITCH: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    #[serde(rename = "Z")]
    pub z: f64,
    #[serde(default)]
    pub field: f64,
    #[serde(default = "default_dim")]
    pub dim: u8,
    #[serde(default = "default_light_speed")]
    pub light_speed: f64,
}

fn default_dim() -> u8 {
    3
}

fn default_light_speed() -> f64 {
    DEFAULT_LIGHT_SPEED
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams { z: 1.0, field: 0.0, dim: 3, light_speed: DEFAULT_LIGHT_SPEED }
    }
}

impl ModelParams {
    pub fn hydrogen(z: f64, field: f64) -> Self {
        ModelParams { z, field, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z > 0.0) || !self.z.is_finite() {
            return Err(Error::Config(format!("Z must be positive, got {}", self.z)));
        }
        if !self.field.is_finite() {
            return Err(Error::Config("field must be finite".into()));
        }
        if self.dim != 1 && self.dim != 3 {
            return Err(Error::Config(format!("dim must be 1 or 3, got {}", self.dim)));
        }
        if !(self.light_speed > 0.0) {
            return Err(Error::Config(format!(
                "light_speed must be positive, got {}",
                self.light_speed
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Angular {
    None,
    CosTheta,
}

/// One non-analytic term `A t^ν r^{-k} [cos θ] [e^{ir²/2t}]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPowerTerm {
    pub amplitude: ComplexValue,
    /// ν = `twice_nu / 2`.
    pub twice_nu: u32,
    pub r_power: u32,
    pub angular: Angular,
    pub oscillatory: bool,
}

impl HalfPowerTerm {
    pub fn nu(&self) -> f64 {
        self.twice_nu as f64 / 2.0
    }

    pub fn eval(&self, r: f64, ctheta: f64, t: f64) -> ComplexValue {
        let mut v = self.amplitude * t.powf(self.nu()) / r.powi(self.r_power as i32);
        if self.angular == Angular::CosTheta {
            v *= ctheta;
        }
        if self.oscillatory {
            v *= Complex64::from_polar(1.0, r * r / (2.0 * t));
        }
        v
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be ≥ 0, got {t}")));
    }
    Ok(())
}

fn check_validity(r: f64, t: f64) -> Result<()> {
    if r.abs() < VALIDITY * t.sqrt() {
        return Err(Error::Range(format!(
            "asymptotic form needs r ≥ 5√t (r = {r}, t = {t})"
        )));
    }
    Ok(())
}

/// Hydrogenic ground state `Z^{3/2} e^{-Zr}/√π`.
pub fn psi0_hydrogen(r: f64, p: &ModelParams) -> Result<ComplexValue> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("radius must be ≥ 0, got {r}")));
    }
    Ok(Complex64::new(p.z.powf(1.5) * (-p.z * r).exp() / SQRT_PI, 0.0))
}

/// `g(ρ) = (ρ + iZt) e^{Zρ} erfc((ρ + iZt)/√(2it))`.
fn free_g(rho: f64, t: f64, z: f64) -> Result<Complex64> {
    let a = Complex64::new(rho, z * t);
    let u = a * Complex64::new(1.0, -1.0) / (2.0 * t.sqrt());
    // Zρ - u² is purely imaginary
    let phase = Complex64::from_polar(1.0, rho * rho / (2.0 * t) - z * z * t / 2.0);
    if u.re >= 0.0 {
        Ok(a * phase * faddeeva_w(I * u)?)
    } else {
        Ok(a * (2.0 * (z * rho).exp() - phase * faddeeva_w(-I * u)?))
    }
}

/// Exact free evolution of the hydrogenic ground state after the nucleus is removed.
pub fn psi_exact_free(r: f64, t: f64, p: &ModelParams) -> Result<ComplexValue> {
    check_time(t)?;
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("radius must be ≥ 0, got {r}")));
    }
    if t == 0.0 {
        return psi0_hydrogen(r, p);
    }
    let z = p.z;
    let pref = z.powf(1.5) * Complex64::from_polar(1.0, z * z * t / 2.0);
    if r < SMALL_R * t.sqrt() {
        return Ok(pref * free_odd_taylor(r, t, z)? / SQRT_PI);
    }
    let d = free_g(r, t, z)? - free_g(-r, t, z)?;
    cxmath::check_finite(pref * d / (2.0 * SQRT_PI * r), "psi_exact_free")
}

/// `(g(r) - g(-r))/(2r) ≈ g'(0) + g'''(0) r²/6`.
fn free_odd_taylor(r: f64, t: f64, z: f64) -> Result<Complex64> {
    let a = Complex64::new(0.0, z * t);
    let kappa = Complex64::new(1.0, -1.0) / (2.0 * t.sqrt());
    let u = a * kappa;
    let e0 = cxmath::erfc_complex(u)?;
    let g = (-u * u).exp() / SQRT_PI;
    let e1 = -2.0 * kappa * g;
    let e2 = 4.0 * kappa * kappa * u * g;
    let e3 = 4.0 * kappa * kappa * kappa * (1.0 - 2.0 * u * u) * g;
    let p0 = a;
    let p1 = 1.0 + z * a;
    let p2 = 2.0 * z + z * z * a;
    let p3 = 3.0 * z * z + z * z * z * a;
    let f1 = p1 * e0 + p0 * e1;
    let f3 = p3 * e0 + 3.0 * p2 * e1 + 3.0 * p1 * e2 + p0 * e3;
    Ok(f1 + f3 * r * r / 6.0)
}

/// Summed Taylor-expansion solution for the vaporized nucleus.
pub fn psi_te_free(r: f64, t: f64, p: &ModelParams) -> Result<ComplexValue> {
    check_time(t)?;
    if r == 0.0 {
        return Err(Error::Divergent("TE solution is infinite at r = 0".into()));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius must be > 0, got {r}")));
    }
    let z = p.z;
    let e = Complex64::new(-z * r, z * z * t / 2.0).exp();
    Ok(z.powf(1.5) / SQRT_PI * e * Complex64::new(1.0, -z * t / r))
}

/// The `t^{5/2}` term of the vaporized-nucleus short-time expansion.
pub fn free_half_power_term(p: &ModelParams) -> HalfPowerTerm {
    HalfPowerTerm {
        amplitude: Complex64::new(-2.0, -2.0) * p.z.powf(2.5) / PI,
        twice_nu: 5,
        r_power: 4,
        angular: Angular::None,
        oscillatory: true,
    }
}

/// Short-time expansion of the vaporized-nucleus wavefunction for `r ≥ 5√t`.
pub fn short_time_free(r: f64, t: f64, p: &ModelParams, include_half_power: bool) -> Result<ComplexValue> {
    check_time(t)?;
    check_validity(r, t)?;
    let z = p.z;
    let e = (-z * r).exp() / SQRT_PI;
    let mut v = Complex64::new(z.powf(1.5) * e, 0.0);
    v += I * z.powf(2.5) * (z * r - 2.0) * e / (2.0 * r) * t;
    v -= Complex64::new(z.powf(4.5) * (z * r - 4.0) * e / (8.0 * r) * t * t, 0.0);
    if include_half_power && t > 0.0 {
        v += free_half_power_term(p).eval(r, 1.0, t);
    }
    Ok(v)
}

/// Fourth-order reduced TE term, `ψ₄ᵀᴱ(r̄, θ)`.
pub fn psi4_te(rbar: f64, ctheta: f64, p: &ModelParams) -> Result<ComplexValue> {
    let (l0, l1) = psi4_te_channels(rbar, p)?;
    Ok(l0 + l1 * ctheta)
}

/// `ψ₄ᵀᴱ` split into its angle-free part and the profile multiplying cos θ.
pub fn psi4_te_channels(rbar: f64, p: &ModelParams) -> Result<(ComplexValue, ComplexValue)> {
    if rbar == 0.0 {
        return Err(Error::Divergent("ψ₄ᵀᴱ field term diverges as r̄⁻² at r̄ = 0".into()));
    }
    if !(rbar > 0.0) {
        return Err(Error::Domain(format!("reduced radius must be > 0, got {rbar}")));
    }
    let z = p.z;
    let r2 = rbar * rbar;
    let l0 = z.powf(1.5) / (24.0 * SQRT_PI) * Complex64::new(-3.0 + 4.0 * r2 * r2, 12.0 * r2);
    let l1 = I * p.field / (12.0 * SQRT_PI * z.powf(1.5) * r2)
        * Complex64::new(1.0 + 24.0 * r2 * r2, 6.0 * r2);
    Ok((l0, l1))
}

/// `c₂` fixed by finiteness of `ψ₄ᵀᴱ + ξ₄` at the nucleus: `(1-i)ℰ/(√2 π Z^{3/2})`.
pub fn c2(p: &ModelParams) -> ComplexValue {
    Complex64::new(1.0, -1.0) * p.field / (SQRT_2 * PI * p.z.powf(1.5))
}

/// The published constant `(1-i)ℰ/(2π Z^{3/2})`, kept for comparison only.
pub fn c2_printed(p: &ModelParams) -> ComplexValue {
    Complex64::new(1.0, -1.0) * p.field / (2.0 * PI * p.z.powf(1.5))
}

/// `e^{S(r̄)}` for unit `c₂`: the Borel-resummed solution of the S equation.
pub fn xi4_exp_s(rbar: f64) -> Result<ComplexValue> {
    if rbar == 0.0 {
        return Err(Error::Divergent("ξ₄ profile diverges as r̄⁻³ at r̄ = 0".into()));
    }
    if !(rbar > 0.0) {
        return Err(Error::Domain(format!("reduced radius must be ≥ 0, got {rbar}")));
    }
    let pre = Complex64::new(1.0, 1.0) / (72.0 * rbar.powi(3));
    if rbar < XI4_SWITCH {
        let r2 = rbar * rbar;
        let poly = Complex64::new(-3.0 + 4.0 * r2 * r2, 16.0 * r2);
        let q = Complex64::new(-18.0 * r2 + 8.0 * r2 * r2 * r2, 3.0 + 36.0 * r2 * r2);
        let e = cxmath::erfc_complex(Complex64::new(1.0, -1.0) / SQRT_2 * rbar)?;
        let bracket = Complex64::new(2.0, 2.0) * Complex64::from_polar(1.0, r2) * rbar * poly
            - (2.0 * PI).sqrt() * q * e;
        return Ok(pre * bracket);
    }
    Ok(pre * Complex64::from_polar(1.0, rbar * rbar) * xi4_bracket_far(rbar)?)
}

/// `e^{-ir̄²}` times the bracket of the closed form, free of cancellation.
///
/// With `ζ = (1+i)r̄/√2` the bracket is `√2[P(ζ) - i√π Q(ζ) w(ζ)]` where
/// `P = 2ζ(-3 + 16ζ² - 4ζ⁴)` and `Q = 8ζ⁶ - 36ζ⁴ + 18ζ² + 3`. Splitting `w`
/// into its first `K` asymptotic terms plus remainder cancels every
/// non-negative power of `ζ` exactly in the coefficients.
fn xi4_bracket_far(rbar: f64) -> Result<Complex64> {
    const K: usize = 6;
    const P: [(i32, f64); 3] = [(1, -6.0), (3, 32.0), (5, -8.0)];
    const Q: [(i32, f64); 4] = [(0, 3.0), (2, 18.0), (4, -36.0), (6, 8.0)];
    let zeta = Complex64::new(1.0, 1.0) * rbar / SQRT_2;
    let mut coef = std::collections::BTreeMap::<i32, f64>::new();
    for &(k, c) in &P {
        *coef.entry(k).or_default() += c;
    }
    let mut a = 1.0;
    for n in 0..K {
        if n > 0 {
            a *= (2 * n - 1) as f64 / 2.0;
        }
        for &(k, c) in &Q {
            *coef.entry(k - 2 * n as i32 - 1).or_default() += c * a;
        }
    }
    debug_assert!(coef.range(0..).all(|(_, &c)| c == 0.0));
    let laurent: Complex64 = coef.range(..0).map(|(&k, &c)| c * zeta.powi(k)).sum();
    let q: Complex64 = Q.iter().map(|&(k, c)| c * zeta.powi(k)).sum();
    let rem = faddeeva_asymptotic_remainder(zeta, K)?;
    Ok(SQRT_2 * (laurent - I * SQRT_PI * q * rem))
}

/// Profile of ξ₄ multiplying cos θ for a given `c₂`: `c₂ r̄ e^{S(r̄)}`.
pub fn xi4_profile_with(rbar: f64, c2: ComplexValue) -> Result<ComplexValue> {
    Ok(c2 * rbar * xi4_exp_s(rbar)?)
}

/// Correction `ξ₄ = c₂ e^{S(r̄)} z̄` that keeps `ψ₄` finite at the nucleus.
pub fn xi4_closed(rbar: f64, ctheta: f64, p: &ModelParams) -> Result<ComplexValue> {
    Ok(xi4_profile_with(rbar, c2(p))? * ctheta)
}

/// `ψ₄ = ψ₄ᵀᴱ + ξ₄`.
pub fn psi4_full(rbar: f64, ctheta: f64, p: &ModelParams) -> Result<ComplexValue> {
    Ok(psi4_te(rbar, ctheta, p)? + xi4_closed(rbar, ctheta, p)?)
}

pub fn field_half_power_term(p: &ModelParams) -> HalfPowerTerm {
    HalfPowerTerm {
        amplitude: Complex64::new(-8.0, 8.0) * p.field * p.z.powf(2.5) / PI,
        twice_nu: 11,
        r_power: 7,
        angular: Angular::CosTheta,
        oscillatory: true,
    }
}

/// Leading `t^{11/2}` term for hydrogen in a suddenly applied static field.
pub fn leading_half_power_field(r: f64, ctheta: f64, t: f64, p: &ModelParams) -> Result<ComplexValue> {
    check_time(t)?;
    check_validity(r, t)?;
    Ok(field_half_power_term(p).eval(r, ctheta, t))
}

/// Leading `t^{9/2}` term for the 1D delta well in a static field.
pub fn leading_half_power_delta_well(x: f64, t: f64, p: &ModelParams) -> Result<ComplexValue> {
    check_time(t)?;
    check_validity(x, t)?;
    let amp = Complex64::new(-4.0, -4.0) * p.field * p.z.powf(1.5) / SQRT_PI;
    Ok(amp * Complex64::from_polar(1.0, x * x / (2.0 * t)) * t.powf(4.5) / x.powi(5))
}

/// Modulus of the `t^{9/2}` dipole coefficient per unit field, `256 Z⁵/(2835√π)`.
/// The induced dipole term itself carries a negative sign.
pub fn dipole_short_time_coefficient(p: &ModelParams) -> f64 {
    256.0 * p.z.powi(5) / (2835.0 * SQRT_PI)
}

/// High-frequency photoabsorption tail `16√2 Z⁵ π/(3c ω^{7/2})`.
pub fn sigma_tail(omega: f64, p: &ModelParams) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("frequency must be > 0, got {omega}")));
    }
    Ok(16.0 * SQRT_2 * p.z.powi(5) * PI / (3.0 * p.light_speed * omega.powf(3.5)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h1() -> ModelParams {
        ModelParams::default()
    }

    #[test]
    fn ground_state_values() {
        let p = h1();
        assert!((psi0_hydrogen(0.0, &p).unwrap().re - 0.564_189_583_547_756_3).abs() < 1e-15);
        assert!((psi0_hydrogen(1.0, &p).unwrap().re - 0.207_553_748_710_297_35).abs() < 1e-15);
        assert!(psi0_hydrogen(-1.0, &p).is_err());
    }

    #[test]
    fn exact_free_initial_condition() {
        let p = h1();
        let v = psi_exact_free(1.0, 1e-10, &p).unwrap();
        assert!((v - psi0_hydrogen(1.0, &p).unwrap()).norm() < 1e-8);
        assert_eq!(psi_exact_free(1.0, 0.0, &p).unwrap(), psi0_hydrogen(1.0, &p).unwrap());
        assert!(psi_exact_free(1.0, -1.0, &p).is_err());
    }

    #[test]
    fn exact_free_small_r_branch_is_continuous() {
        let p = ModelParams::hydrogen(1.3, 0.0);
        let t: f64 = 0.7;
        let rc = SMALL_R * t.sqrt();
        let a = psi_exact_free(rc * (1.0 - 1e-9), t, &p).unwrap();
        let b = psi_exact_free(rc * (1.0 + 1e-9), t, &p).unwrap();
        assert!((a - b).norm() < 1e-10 * a.norm());
        assert!(psi_exact_free(0.0, t, &p).unwrap().norm().is_finite());
    }

    #[test]
    fn te_free_values() {
        let p = h1();
        let v = psi_te_free(1.0, 1.0, &p).unwrap();
        let want = (-1.0f64).exp() / SQRT_PI * Complex64::from_polar(1.0, 0.5) * Complex64::new(1.0, -1.0);
        assert!((v - want).norm() < 1e-15);
        assert!((v - Complex64::new(0.281_65, -0.082_64)).norm() < 1e-5);
        assert_eq!(psi_te_free(2.0, 0.0, &p).unwrap(), psi0_hydrogen(2.0, &p).unwrap());
        assert!(matches!(psi_te_free(0.0, 0.2, &p), Err(Error::Divergent(_))));
    }

    #[test]
    fn te_free_small_r_divergence() {
        let p = h1();
        let t = 0.2;
        let r = 1e-7;
        let ratio = psi_te_free(r, t, &p).unwrap().norm() * r / (t / SQRT_PI);
        assert!((ratio - 1.0).abs() < 1e-6);
    }

    #[test]
    fn short_time_free_terms() {
        let p = h1();
        assert_eq!(short_time_free(2.0, 0.0, &p, true).unwrap(), psi0_hydrogen(2.0, &p).unwrap());
        let c = free_half_power_term(&p).amplitude.norm() / 16.0;
        assert!((c - 0.056_269_769_3).abs() < 1e-9);
        assert!(matches!(short_time_free(0.1, 1.0, &p, false), Err(Error::Range(_))));
    }

    #[test]
    fn short_time_matches_exact() {
        let p = h1();
        let t = 1e-3;
        let d = psi_exact_free(4.0, t, &p).unwrap() - short_time_free(4.0, t, &p, true).unwrap();
        assert!(d.norm() <= 1e-9, "{}", d.norm());
    }

    #[test]
    fn psi4_te_field_free_value() {
        let p = h1();
        let v = psi4_te(1.0, 0.3, &p).unwrap();
        let want = Complex64::new(1.0, 12.0) / (24.0 * SQRT_PI);
        assert!((v - want).norm() < 1e-15);
        assert!(matches!(psi4_te(0.0, 1.0, &p), Err(Error::Divergent(_))));
    }

    #[test]
    fn psi4_te_field_term_odd_and_linear() {
        let p = ModelParams::hydrogen(1.0, 0.01);
        let q = ModelParams::hydrogen(1.0, 0.02);
        let base = psi4_te(0.8, 0.0, &p).unwrap();
        let a = psi4_te(0.8, 0.6, &p).unwrap() - base;
        let b = psi4_te(0.8, -0.6, &p).unwrap() - base;
        assert!((a + b).norm() < 1e-16);
        let c = psi4_te(0.8, 0.6, &q).unwrap() - base;
        assert!((c - 2.0 * a).norm() < 1e-15);
    }

    #[test]
    fn c2_constants() {
        let p = ModelParams::hydrogen(1.0, 0.01);
        assert!((c2(&p) - Complex64::new(1.0, -1.0) * 0.002_250_790_790_392_765).norm() < 1e-15);
        assert!((c2_printed(&p) - Complex64::new(1.0, -1.0) * 0.001_591_549_430_918_953_4).norm() < 1e-15);
    }

    #[test]
    fn xi4_near_and_far_forms_agree() {
        let near = |r: f64| {
            let r2 = r * r;
            let pre = Complex64::new(1.0, 1.0) / (72.0 * r.powi(3));
            let poly = Complex64::new(-3.0 + 4.0 * r2 * r2, 16.0 * r2);
            let q = Complex64::new(-18.0 * r2 + 8.0 * r2 * r2 * r2, 3.0 + 36.0 * r2 * r2);
            let e = cxmath::erfc_complex(Complex64::new(1.0, -1.0) / SQRT_2 * r).unwrap();
            pre * (Complex64::new(2.0, 2.0) * Complex64::from_polar(1.0, r2) * r * poly - (2.0 * PI).sqrt() * q * e)
        };
        let far = |r: f64| {
            Complex64::new(1.0, 1.0) / (72.0 * r.powi(3)) * Complex64::from_polar(1.0, r * r) * xi4_bracket_far(r).unwrap()
        };
        for &r in &[3.5, 4.0, 4.5] {
            let (a, b) = (near(r), far(r));
            assert!((a - b).norm() < 1e-9 * b.norm(), "r̄ = {r}");
        }
    }

    #[test]
    fn xi4_reference_values() {
        // 50-digit evaluation of the closed form for unit c₂
        let refs = [
            (0.5, Complex64::new(0.907_683_058_293_299_23, 0.023_010_772_784_916_988)),
            (2.0, Complex64::new(0.001_243_587_375_814_273_6, -0.001_038_286_445_196_159_6)),
            (10.0, Complex64::new(-8.045_964_511_573_602_9e-9, 5.875_323_980_721_497_9e-9)),
            (50.0, Complex64::new(-1.938_467_836_819_541_4e-14, 1.672_083_671_232_261_8e-14)),
            (1e-3, Complex64::new(104_443_469.656_835_88, -104_442_218.120_475_28)),
        ];
        for (r, want) in refs {
            let v = xi4_exp_s(r).unwrap();
            assert!((v - want).norm() < 1e-12 * want.norm(), "r̄ = {r}: {v}");
        }
    }

    #[test]
    fn psi4_full_is_bounded_at_origin() {
        let p = ModelParams::hydrogen(1.0, 0.01);
        for &r in &[1e-3, 1e-2, 0.1] {
            let v = psi4_full(r, 1.0, &p).unwrap();
            assert!(v.norm() < 0.2, "r̄ = {r}: {v}");
        }
        let te = psi4_te(1e-3, 1.0, &p).unwrap().norm();
        assert!(te > 1e2);
    }

    #[test]
    fn leading_field_term_values() {
        let p = ModelParams::hydrogen(1.0, 0.01);
        let v = leading_half_power_field(3.0, 1.0, 1e-3, &p).unwrap();
        let want = 8.0 * SQRT_2 * 0.01 / (PI * 3f64.powi(7)) * 10f64.powf(-16.5);
        assert!((v.norm() - want).abs() < 1e-12 * want);
        assert!((v.norm() - 5.207_224_826e-22).abs() < 1e-30);
        let z = leading_half_power_field(3.0, 1.0, 1e-3, &ModelParams::hydrogen(1.0, 0.0)).unwrap();
        assert_eq!(z.norm(), 0.0);
        assert!(leading_half_power_field(0.01, 1.0, 1e-3, &p).is_err());
    }

    #[test]
    fn delta_well_term() {
        let p = ModelParams { dim: 1, ..ModelParams::hydrogen(1.0, 0.01) };
        let a = leading_half_power_delta_well(2.0, 1e-3, &p).unwrap();
        let b = leading_half_power_delta_well(-2.0, 1e-3, &p).unwrap();
        assert!((a.norm() - 3.153_915_652_5e-17).abs() < 1e-26);
        assert!((a.norm() - b.norm()).abs() < 1e-30);
        assert!((a + b).norm() < 1e-30);
        assert!(leading_half_power_delta_well(0.1, 1e-3, &p).is_err());
    }

    #[test]
    fn dipole_and_tail() {
        let p = h1();
        assert!((dipole_short_time_coefficient(&p) - 0.050_946_219_890_026_68).abs() < 1e-16);
        let p2 = ModelParams::hydrogen(2.0, 0.0);
        let r = dipole_short_time_coefficient(&p2) / dipole_short_time_coefficient(&p);
        assert!((r - 32.0).abs() < 1e-12);
        let s = sigma_tail(1.0, &ModelParams { light_speed: 137.036, ..p }).unwrap();
        assert!((s - 0.172_913).abs() < 1e-6);
        let ratio = sigma_tail(4.0, &p).unwrap() / sigma_tail(1.0, &p).unwrap();
        assert!((ratio - 1.0 / 128.0).abs() < 1e-15);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams { z: 0.0, ..h1() }.validate().is_err());
        assert!(ModelParams { dim: 2, ..h1() }.validate().is_err());
        let p: ModelParams = serde_json::from_str(r#"{"Z": 2.0, "field": 0.01}"#).unwrap();
        assert_eq!(p.dim, 3);
        assert!(serde_json::from_str::<ModelParams>(r#"{"Z": 1, "feild": 0.1}"#).is_err());
    }
}
