//! Power-law fits, frequency tails, the photoabsorption integral and figure tables.

use crate::cxmath::gamma_real;
use crate::error::{Error, Result};
use crate::models::{psi_exact_free, psi_te_free, ModelParams};
use crate::quad::integrate;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Modulus of the fitted prefactor.
    pub amplitude: f64,
    pub exponent: f64,
    pub stderr_exponent: f64,
    pub window: (f64, f64),
    pub r_probe: Option<f64>,
}

/// Least-squares fit of `log|R| = log A + ν log t`.
///
/// Phases are discarded: half-power residuals carry `e^{ir²/2t}`.
pub fn fit_half_power(samples: &[(f64, Complex64)]) -> Result<FitResult> {
    if samples.len() < 8 {
        return Err(Error::Data(format!("need at least 8 samples, got {}", samples.len())));
    }
    let mut xs = Vec::with_capacity(samples.len());
    let mut ys = Vec::with_capacity(samples.len());
    for &(t, v) in samples {
        let m = v.norm();
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Data(format!("sample time must be > 0, got {t}")));
        }
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::Data(format!("residual modulus must be positive and finite, got {m} at t = {t}")));
        }
        xs.push(t.ln());
        ys.push(m.ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    // condition number of the normal matrix [[n, Σx], [Σx, Σx²]]
    let (a, b, d) = (n, xs.iter().sum::<f64>(), xs.iter().map(|x| x * x).sum::<f64>());
    let tr = a + d;
    let disc = ((a - d).powi(2) + 4.0 * b * b).sqrt();
    let cond = (tr + disc) / (tr - disc).max(f64::MIN_POSITIVE);
    if sxx <= 0.0 || cond > 1e12 {
        return Err(Error::Data(format!("fit window is degenerate (condition number {cond:.3e})")));
    }
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx;
    let icpt = my - slope * mx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - icpt - slope * x).powi(2)).sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    let (lo, hi) = samples.iter().fold((f64::INFINITY, 0.0f64), |(l, h), s| (l.min(s.0), h.max(s.0)));
    Ok(FitResult { amplitude: icpt.exp(), exponent: slope, stderr_exponent: stderr, window: (lo, hi), r_probe: None })
}

/// Coefficient of `t^p` in the expansion of the summed TE solution.
pub fn free_te_coefficient(r: f64, p_order: usize, p: &ModelParams) -> Complex64 {
    let z = p.z;
    let a = Complex64::new(0.0, z * z / 2.0);
    let base = z.powf(1.5) * (-z * r).exp() / PI.sqrt();
    let mut term = Complex64::new(1.0, 0.0);
    let mut prev = Complex64::new(0.0, 0.0);
    for k in 1..=p_order {
        prev = term;
        term *= a / k as f64;
    }
    base * (term - Complex64::new(0.0, z / r) * prev)
}

/// `ψ_exact - Σ_{p ≤ order} c_p t^p` at radius `r` for each time.
pub fn free_te_residuals(r: f64, times: &[f64], p: &ModelParams, order: usize) -> Result<Vec<(f64, Complex64)>> {
    let c: Vec<Complex64> = (0..=order).map(|k| free_te_coefficient(r, k, p)).collect();
    times
        .iter()
        .map(|&t| {
            let te: Complex64 = c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, v| acc * t + v);
            Ok((t, psi_exact_free(r, t, p)? - te))
        })
        .collect()
}

/// `n` log-spaced times on `[a, b]`.
pub fn log_times(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a * (b / a).powf(k as f64 / (n - 1).max(1) as f64)).collect()
}

fn check_nu(nu: f64) -> Result<()> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("exponent must be positive, got {nu}")));
    }
    if nu.fract() == 0.0 {
        return Err(Error::Unsupported(format!(
            "integer exponent {nu} is analytic in t and has no algebraic frequency tail"
        )));
    }
    Ok(())
}

/// Tail coefficient `C` in `σ(ω) ≈ C ω^{1-ν}` for a dipole term `A t^ν`:
/// `(4π/c) A ν Γ(ν) |sin(πν/2)|`.
pub fn t_power_to_omega_tail(amplitude: f64, nu: f64, p: &ModelParams) -> Result<f64> {
    check_nu(nu)?;
    Ok(4.0 * PI / p.light_speed * amplitude * nu * gamma_real(nu)? * (PI * nu / 2.0).sin().abs())
}

/// The same coefficient by direct quadrature of `ν ∫ τ^{ν-1} e^{-ητ} sin τ dτ`
/// for several `η`, extrapolated to `η → 0`.
pub fn omega_tail_quadrature(amplitude: f64, nu: f64, p: &ModelParams) -> Result<f64> {
    check_nu(nu)?;
    let etas: Vec<f64> = (1..=8).map(|k| 0.025 * k as f64).collect();
    let mut vals = Vec::with_capacity(etas.len());
    for &eta in &etas {
        // the integrand is below 1e-18 of its peak past this point
        let end = ((nu - 1.0).max(0.0) * ((nu - 1.0).max(1.0) / eta).ln() + 45.0) / eta;
        let mut acc = 0.0;
        let mut a = 0.0;
        while a < end {
            let b = (a + PI).min(end);
            let (v, _) = integrate(
                |t| Complex64::new(t.powf(nu - 1.0) * (-eta * t).exp() * t.sin(), 0.0),
                a,
                b,
                1e-15,
                1e-13,
            )?;
            acc += v.re;
            a = b;
        }
        vals.push(acc);
    }
    // Neville at η = 0
    let mut q = vals.clone();
    let n = etas.len();
    for k in 1..n {
        for i in 0..n - k {
            q[i] = (etas[i + k] * q[i] - etas[i] * q[i + 1]) / (etas[i + k] - etas[i]);
        }
    }
    Ok(4.0 * PI / p.light_speed * amplitude * nu * q[0].abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumWindow {
    pub damping: f64,
    pub t_max: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub omegas: Vec<f64>,
    pub sigma: Vec<f64>,
    pub window: SpectrumWindow,
}

impl Spectrum {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "omega_au,sigma_au")?;
        for (o, s) in self.omegas.iter().zip(&self.sigma) {
            writeln!(w, "{},{}", crate::fmt17(*o), crate::fmt17(*s))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Data(e.to_string()))
    }
}

/// Error-free `a + b = s + e`.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Correctly rounded sum, kept as non-overlapping partials (Shewchuk).
fn fsum(terms: &[f64]) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for &t in terms {
        let mut x = t;
        let mut k = 0;
        for i in 0..partials.len() {
            let y = partials[i];
            let (hi, lo) = if x.abs() < y.abs() { two_sum(y, x) } else { two_sum(x, y) };
            if lo != 0.0 {
                partials[k] = lo;
                k += 1;
            }
            x = hi;
        }
        partials.truncate(k);
        partials.push(x);
    }
    // the partials are non-overlapping, so summing from the top loses nothing that matters
    let mut acc = 0.0;
    for p in partials.iter().rev() {
        acc += p;
    }
    acc
}

/// `σ(ω) = (4πω/c) ∫ μ̇(τ) e^{-ητ} sin(ωτ) dτ`.
///
/// `μ̇` uses 4th-order differences (one-sided at the ends) summed without
/// cancellation loss, and the trapezoid sum is exact before rounding: the dipole may
/// grow by many orders of magnitude before the damping takes over.
pub fn cross_section(mu: &[(f64, f64)], omegas: &[f64], damping: f64, p: &ModelParams) -> Result<Spectrum> {
    if mu.len() < 6 {
        return Err(Error::Data("need at least 6 dipole samples".into()));
    }
    if !(damping >= 0.0) {
        return Err(Error::Domain(format!("damping must be ≥ 0, got {damping}")));
    }
    let t0 = mu[0].0;
    let h = mu[1].0 - t0;
    if !(h > 0.0) || mu.windows(2).any(|w| ((w[1].0 - w[0].0) - h).abs() > 1e-9 * h) {
        return Err(Error::Data("dipole samples must be uniformly spaced in time".into()));
    }
    let nyquist = PI / h;
    if let Some(&o) = omegas.iter().find(|&&o| o > nyquist) {
        return Err(Error::Range(format!("ω = {o} exceeds the sampling Nyquist frequency {nyquist}")));
    }
    if omegas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Data("frequencies must be strictly increasing".into()));
    }
    let m: Vec<f64> = mu.iter().map(|s| s.1).collect();
    let n = m.len();
    let d = |c: &[(f64, usize)]| fsum(&c.iter().map(|&(w, j)| w * m[j]).collect::<Vec<_>>()) / (12.0 * h);
    let mut dmu = vec![0.0; n];
    dmu[0] = d(&[(-25.0, 0), (48.0, 1), (-36.0, 2), (16.0, 3), (-3.0, 4)]);
    dmu[1] = d(&[(-3.0, 0), (-10.0, 1), (18.0, 2), (-6.0, 3), (1.0, 4)]);
    for j in 2..n - 2 {
        dmu[j] = d(&[(1.0, j - 2), (-8.0, j - 1), (8.0, j + 1), (-1.0, j + 2)]);
    }
    dmu[n - 2] = d(&[(3.0, n - 1), (10.0, n - 2), (-18.0, n - 3), (6.0, n - 4), (-1.0, n - 5)]);
    dmu[n - 1] = d(&[(25.0, n - 1), (-48.0, n - 2), (36.0, n - 3), (-16.0, n - 4), (3.0, n - 5)]);
    let weights: Vec<f64> = (0..n)
        .map(|j| {
            let t = mu[j].0;
            let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            w * h * dmu[j] * (-damping * (t - t0)).exp()
        })
        .collect();
    let mut terms = vec![0.0; n];
    let sigma = omegas
        .iter()
        .map(|&om| {
            for j in 0..n {
                terms[j] = weights[j] * (om * mu[j].0).sin();
            }
            4.0 * PI * om / p.light_speed * fsum(&terms)
        })
        .collect();
    Ok(Spectrum {
        omegas: omegas.to_vec(),
        sigma,
        window: SpectrumWindow { damping, t_max: mu[n - 1].0, dt: h },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Figure1Row {
    pub t: f64,
    pub r: f64,
    pub rho_exact: f64,
    /// `+∞` at `r = 0` for `t > 0`.
    pub rho_te: f64,
}

/// Exact and TE densities of the vaporized-nucleus wavefunction.
pub fn figure1_data(times: &[f64], radii: &[f64], p: &ModelParams) -> Result<Vec<Figure1Row>> {
    p.validate()?;
    let mut rows = Vec::with_capacity(times.len() * radii.len());
    for &t in times {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("time must be ≥ 0, got {t}")));
        }
        for &r in radii {
            let rho_exact = psi_exact_free(r, t, p)?.norm_sqr();
            let rho_te = if t == 0.0 {
                rho_exact
            } else if r == 0.0 {
                f64::INFINITY
            } else {
                psi_te_free(r, t, p)?.norm_sqr()
            };
            rows.push(Figure1Row { t, r, rho_exact, rho_te });
        }
    }
    Ok(rows)
}

pub fn write_figure1_csv<W: Write>(rows: &[Figure1Row], mut w: W) -> Result<()> {
    writeln!(w, "t_au,r_bohr,rho_exact_au,rho_te_au")?;
    for row in rows {
        let te = if row.rho_te.is_infinite() { "inf".to_string() } else { crate::fmt17(row.rho_te) };
        writeln!(w, "{},{},{},{}", crate::fmt17(row.t), crate::fmt17(row.r), crate::fmt17(row.rho_exact), te)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let s: Vec<_> = log_times(1e-3, 1e-1, 12).into_iter().map(|t| (t, Complex64::new(0.0, 3.0 * t.powf(2.5)))).collect();
        let f = fit_half_power(&s).unwrap();
        assert!((f.exponent - 2.5).abs() < 1e-12);
        assert!((f.amplitude - 3.0).abs() < 1e-11);
        assert!(f.stderr_exponent < 1e-12);
        assert_eq!(f.window, (1e-3, s[11].0));
    }

    #[test]
    fn integer_power_dominates_naive_fit() {
        let s: Vec<_> = log_times(0.1, 1.0, 10)
            .into_iter()
            .map(|t| (t, Complex64::new(t * t + 0.01 * t.powf(2.5), 0.0)))
            .collect();
        let f = fit_half_power(&s).unwrap();
        assert!((f.exponent - 2.0).abs() < 0.01, "{}", f.exponent);
    }

    #[test]
    fn fit_rejects_bad_samples() {
        let s: Vec<_> = (1..=8).map(|k| (k as f64, Complex64::new(0.0, 0.0))).collect();
        assert!(matches!(fit_half_power(&s), Err(Error::Data(_))));
        assert!(matches!(fit_half_power(&s[..5]), Err(Error::Data(_))));
        let same: Vec<_> = (0..8).map(|_| (0.5, Complex64::new(1.0, 0.0))).collect();
        assert!(matches!(fit_half_power(&same), Err(Error::Data(_))));
    }

    #[test]
    fn te_coefficients_match_short_time_form() {
        let p = ModelParams::default();
        let r: f64 = 3.0;
        let e = (-r as f64).exp() / PI.sqrt();
        assert!((free_te_coefficient(r, 0, &p) - e).norm() < 1e-16);
        let c1 = Complex64::new(0.0, (r - 2.0) * e / (2.0 * r));
        assert!((free_te_coefficient(r, 1, &p) - c1).norm() < 1e-16);
        let c2 = Complex64::new(-(r - 4.0) * e / (8.0 * r), 0.0);
        assert!((free_te_coefficient(r, 2, &p) - c2).norm() < 1e-16);
    }

    #[test]
    fn tail_formula() {
        let p = ModelParams::default();
        assert!(matches!(t_power_to_omega_tail(1.0, 2.0, &p), Err(Error::Unsupported(_))));
        let a = t_power_to_omega_tail(1.0, 1.5, &p).unwrap();
        let want = 4.0 * PI / p.light_speed * 1.5 * PI.sqrt() / 2.0 * 2f64.sqrt() / 2.0;
        assert!((a - want).abs() < 1e-14 * want);
        assert!((t_power_to_omega_tail(2.0, 1.5, &p).unwrap() - 2.0 * a).abs() < 1e-15);
    }

    #[test]
    fn zero_dipole_has_zero_spectrum() {
        let mu: Vec<_> = (0..100).map(|k| (k as f64 * 0.1, 0.0)).collect();
        let s = cross_section(&mu, &[1.0, 2.0], 0.1, &ModelParams::default()).unwrap();
        assert!(s.sigma.iter().all(|&v| v == 0.0));
        assert!(matches!(cross_section(&mu, &[40.0], 0.0, &ModelParams::default()), Err(Error::Range(_))));
    }

    #[test]
    fn figure_rows_at_time_zero_agree() {
        let rows = figure1_data(&[0.0, 0.5], &[0.0, 1.0], &ModelParams::default()).unwrap();
        assert_eq!(rows[0].rho_exact, rows[0].rho_te);
        assert_eq!(rows[1].rho_exact, rows[1].rho_te);
        assert!(rows[2].rho_te.is_infinite());
        let mut buf = Vec::new();
        write_figure1_csv(&rows, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().lines().nth(3).unwrap().ends_with(",inf"));
    }
}
