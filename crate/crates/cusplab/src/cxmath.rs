//! Complex special functions: the Faddeeva function, scaled complementary
//! error functions and the real Gamma function.
//!
//! `faddeeva_w` splits the upper half plane into three regions:
//!
//! * `|z| < 1.5`: power series `w(z) = e^{-z²} + iz Σ (-z²)^k / Γ(k + 3/2)`
//! * `1.5 ≤ |z| < 8`: trapezoidal rule for `(i/π)∫ e^{-t²}/(z - t) dt` with
//!   step 0.5 plus the exact pole correction
//! * `|z| ≥ 8`: Laplace continued fraction, 60 levels
//!
//! The lower half plane uses `w(z) = 2e^{-z²} - w(-z)`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

pub type ComplexValue = Complex64;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

const SQRT_PI: f64 = 1.772_453_850_905_516;
const SERIES_RADIUS: f64 = 1.5;
const CF_RADIUS: f64 = 8.0;
const CF_DEPTH: usize = 60;
const TRAP_STEP: f64 = 0.5;
const TRAP_NODES: i32 = 15;
/// Largest exponent accepted before `e^{x}` is declared out of range.
const EXP_LIMIT: f64 = 700.0;

pub fn check_finite(z: Complex64, what: &str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Range(format!("{what}: non-finite value {z}")))
    }
}

fn exp_checked(z: Complex64, what: &str) -> Result<Complex64> {
    if z.re > EXP_LIMIT {
        return Err(Error::Range(format!(
            "{what}: exponent {:.3e} overflows",
            z.re
        )));
    }
    Ok(z.exp())
}

fn w_series(z: Complex64) -> Complex64 {
    let mz2 = -z * z;
    let mut term = Complex64::new(2.0 / SQRT_PI, 0.0);
    let mut sum = term;
    let mut k = 0.0;
    loop {
        term *= mz2 / (k + 1.5);
        sum += term;
        k += 1.0;
        if term.norm() < 1e-17 * sum.norm() && k > 3.0 {
            break;
        }
    }
    mz2.exp() + I * z * sum
}

fn w_trapezoid(z: Complex64) -> Complex64 {
    let h = TRAP_STEP;
    let q = z.re / h;
    let shifted = (q - q.round()).abs() < 0.25;
    let off = if shifted { 0.5 } else { 0.0 };
    let mut s = Complex64::new(0.0, 0.0);
    for n in -TRAP_NODES..=TRAP_NODES {
        let t = (n as f64 + off) * h;
        s += (-t * t).exp() / (z - t);
    }
    s *= I * h / PI;
    let e = (-2.0 * PI * I * z / h).exp();
    let denom = if shifted { 1.0 + e } else { 1.0 - e };
    s + 2.0 * (-z * z).exp() / denom
}

fn w_contfrac(z: Complex64) -> Complex64 {
    let mut t = z;
    for k in (1..=CF_DEPTH).rev() {
        t = z - (k as f64 / 2.0) / t;
    }
    I / (SQRT_PI * t)
}

fn w_upper(z: Complex64) -> Complex64 {
    let a = z.norm();
    if a < SERIES_RADIUS {
        w_series(z)
    } else if a < CF_RADIUS {
        w_trapezoid(z)
    } else {
        w_contfrac(z)
    }
}

/// Faddeeva function `w(z) = e^{-z²} erfc(-iz)`.
pub fn faddeeva_w(z: ComplexValue) -> Result<ComplexValue> {
    check_finite(z, "faddeeva_w argument")?;
    if z.im >= 0.0 {
        return Ok(w_upper(z));
    }
    let e = exp_checked(-z * z, "faddeeva_w in the lower half plane")?;
    check_finite(2.0 * e - w_upper(-z), "faddeeva_w")
}

/// `e^{a} erfc(z)` with the Gaussian factor folded into one exponent.
pub fn exp_times_erfc(a: ComplexValue, z: ComplexValue) -> Result<ComplexValue> {
    check_finite(z, "erfc argument")?;
    if z.re >= 0.0 {
        let w = faddeeva_w(I * z)?;
        Ok(exp_checked(a - z * z, "erfc scaling")? * w)
    } else {
        let w = faddeeva_w(-I * z)?;
        let ea = exp_checked(a, "erfc scaling")?;
        Ok(2.0 * ea - exp_checked(a - z * z, "erfc scaling")? * w)
    }
}

/// Complementary error function for complex argument.
pub fn erfc_complex(z: ComplexValue) -> Result<ComplexValue> {
    exp_times_erfc(Complex64::new(0.0, 0.0), z)
}

/// `w(ζ)` minus its first `n` asymptotic terms
/// `(i/√π) Σ_{k<n} (2k-1)!! / (2^k ζ^{2k+1})`.
///
/// Computed from `(i/(π ζ^{2n})) ∫ e^{-t²} t^{2n} / (ζ - t) dt`, which has no
/// cancellation for `Im ζ ≥ 1`: a trapezoid sum plus the pole correction
/// `2e^{-ζ²}/(1 - e^{-2πiζ/h})`. Closer to the real axis the difference is
/// formed directly.
pub fn faddeeva_asymptotic_remainder(zeta: ComplexValue, n: usize) -> Result<ComplexValue> {
    check_finite(zeta, "remainder argument")?;
    if zeta.im < 1.0 {
        let w = faddeeva_w(zeta)?;
        let mut partial = Complex64::new(0.0, 0.0);
        let mut coef = 1.0;
        let z2 = zeta * zeta;
        let mut zpow = zeta;
        for k in 0..n {
            if k > 0 {
                coef *= (2 * k - 1) as f64 / 2.0;
                zpow *= z2;
            }
            partial += coef / zpow;
        }
        return Ok(w - I / SQRT_PI * partial);
    }
    let h = 0.3;
    let m = 2 * n as i32;
    let mut s = Complex64::new(0.0, 0.0);
    for j in -34..=34 {
        let t = j as f64 * h;
        s += (-t * t).exp() * t.powi(m) / (zeta - t);
    }
    // 2e^{-ζ²}/(1 - e^{-2πiζ/h}) rewritten so nothing overflows for Im ζ > 0
    let q = 2.0 * I * PI * zeta / h;
    let pole = -2.0 * (q - zeta * zeta).exp() / (1.0 - q.exp());
    check_finite(I / PI * h * s / zeta.powi(m) + pole, "asymptotic remainder")
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    // x shifted so that Γ(x + 1) = √(2π) t^{x+1/2} e^{-t} A(x)
    let mut a = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + k as f64);
    }
    a
}

/// Natural log of Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        return Ok(ln_gamma(x + 1.0)? - x.ln());
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (xm + 0.5) * t.ln() - t + lanczos_sum(xm).ln())
}

/// Γ(x) for x > 0.
pub fn gamma_real(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        return Ok(gamma_real(x + 1.0)? / x);
    }
    if x > 171.0 {
        return Err(Error::Range(format!("gamma({x}) overflows")));
    }
    // exact for small positive integers and half-integers via recurrence
    if x <= 20.0 && (2.0 * x).fract() == 0.0 {
        let mut base = if x.fract() == 0.0 { 1.0 } else { SQRT_PI };
        let mut y = if x.fract() == 0.0 { 1.0 } else { 0.5 };
        while y < x {
            base *= y;
            y += 1.0;
        }
        return Ok(base);
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * t.powf(xm + 0.5) * (-t).exp() * lanczos_sum(xm))
}

/// Principal `√(2it)` for `t ≥ 0`, i.e. `√(2t) e^{iπ/4}`.
pub fn sqrt_2it(t: f64) -> Complex64 {
    let m = (2.0 * t).sqrt();
    Complex64::from_polar(m, PI / 4.0)
}
