//! Borel–Padé resummation with the leading Borel-plane singularity factored out.
//!
//! For `f(x) = Σ A_m x^m` with `x = r̄⁻²` the Borel transform is
//! `B(ζ) = Σ A_m ζ^m / m!` and `f(x) = ∫₀^∞ e^{-ζ} B(xζ) dζ`. A power-law
//! singularity `(1 - ζ/ζ₀)^{-γ}` is located by Domb–Sykes ratios, divided out,
//! and the regular remainder is represented by a diagonal Padé approximant.
//! Without the factoring the Padé denominators are too ill-conditioned in
//! double precision to reach better than about 1e-6.

use super::asymptotic::{AsymptoticSeries, Divergence};
use crate::error::{Error, Result};
use crate::linalg::{poly_roots, solve_dense};
use crate::quad::integrate;
use num_complex::Complex64;

pub const DEFAULT_RAY_ANGLE: f64 = -std::f64::consts::FRAC_PI_4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BorelOptions {
    /// Coefficients used for the singularity estimate.
    pub estimate_terms: usize,
    /// Ratios fed to Neville extrapolation.
    pub extrapolation_points: usize,
    /// `γ` is snapped to the nearest half-integer within this distance.
    pub snap_tolerance: f64,
    /// Factor out the estimated singularity.
    pub factor_singularity: bool,
    /// Angular half-width around the ray treated as obstructed.
    pub obstruction_angle: f64,
}

impl Default for BorelOptions {
    fn default() -> Self {
        BorelOptions {
            estimate_terms: 30,
            extrapolation_points: 8,
            snap_tolerance: 1e-3,
            factor_singularity: true,
            obstruction_angle: 1e-3,
        }
    }
}

fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i]);
        }
    }
    p[0]
}

/// Domb–Sykes estimate of `(ζ₀, γ)` from `c_n ≈ C n^{γ-1} ζ₀^{-n}`.
fn estimate_singularity(c: &[Complex64], k: usize) -> Option<(Complex64, f64)> {
    let n = c.len().checked_sub(1)?;
    if n < k + 2 || c[n - k..].iter().any(|v| v.norm() == 0.0) {
        return None;
    }
    let ns: Vec<usize> = (n - k + 1..=n).collect();
    let xs: Vec<f64> = ns.iter().map(|&j| 1.0 / j as f64).collect();
    let r: Vec<Complex64> = ns.iter().map(|&j| c[j] / c[j - 1]).collect();
    let inv = neville_at_zero(&xs, &r);
    if inv.norm() < 1e-6 * r[0].norm().max(1e-300) || inv.norm() < 1e-8 {
        return None;
    }
    let z0 = 1.0 / inv;
    let ys: Vec<Complex64> = ns.iter().zip(&r).map(|(&j, ri)| j as f64 * (ri * z0 - 1.0)).collect();
    let g = neville_at_zero(&xs, &ys).re + 1.0;
    g.is_finite().then_some((z0, g))
}

/// `[n/n]` Padé coefficients `(p, q)` with `q₀ = 1`.
fn pade(d: &[Complex64], n: usize) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let zero = Complex64::new(0.0, 0.0);
    let at = |k: i64| if k >= 0 { d[k as usize] } else { zero };
    let mut q = vec![Complex64::new(1.0, 0.0)];
    if n > 0 {
        let mut a = Vec::with_capacity(n * n);
        let mut b = Vec::with_capacity(n);
        for i in 0..n {
            for j in 0..n {
                a.push(at(n as i64 + i as i64 - j as i64));
            }
            b.push(-at(n as i64 + 1 + i as i64));
        }
        match solve_dense(a, b) {
            Ok(x) => q.extend(x),
            // an exactly rational remainder leaves the system degenerate; q = 1 then satisfies it
            Err(_) if d[n + 1..=2 * n].iter().all(|v| v.norm() == 0.0) => q.extend(vec![zero; n]),
            Err(e) => return Err(e),
        }
    }
    let p = (0..=n)
        .map(|i| (0..=i.min(n)).map(|j| q[j] * d[i - j]).sum())
        .collect();
    Ok((p, q))
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, v| acc * z + v)
}

/// Resum with default options. See [`borel_resum_with`].
pub fn borel_resum(series: &AsymptoticSeries, rbar: f64, ray_angle: f64, pade_order: usize) -> Result<Complex64> {
    borel_resum_with(series, rbar, ray_angle, pade_order, &BorelOptions::default())
}

pub fn borel_resum_with(
    series: &AsymptoticSeries,
    rbar: f64,
    ray_angle: f64,
    pade_order: usize,
    opts: &BorelOptions,
) -> Result<Complex64> {
    series.validate()?;
    if !(rbar > 0.0) {
        return Err(Error::Domain(format!("reduced radius must be > 0, got {rbar}")));
    }
    let need = 2 * pade_order + 1;
    if series.coeffs.len() < need {
        return Err(Error::Domain(format!(
            "Padé order {pade_order} needs {need} coefficients, series has {}",
            series.coeffs.len()
        )));
    }
    let pre = series.prefactor.eval(rbar);
    if series.divergence == Divergence::Terminating {
        let x = 1.0 / (rbar * rbar);
        return Ok(pre * horner(&series.coeffs, Complex64::new(x, 0.0)));
    }
    let mut c = Vec::with_capacity(series.coeffs.len());
    let mut fact = 1.0f64;
    for (m, a) in series.coeffs.iter().enumerate() {
        if m > 0 {
            fact *= m as f64;
        }
        c.push(a / fact);
    }
    let sing = if opts.factor_singularity {
        let k = opts.estimate_terms.min(c.len() - 1);
        estimate_singularity(&c[..=k], opts.extrapolation_points).map(|(z0, g)| {
            let snapped = (2.0 * g).round() / 2.0;
            (z0, if (g - snapped).abs() < opts.snap_tolerance { snapped } else { g })
        })
    } else {
        None
    };
    // regularized coefficients d = c · (1 - ζ/ζ₀)^γ
    let d: Vec<Complex64> = match sing {
        Some((z0, g)) => {
            let mut bin = vec![Complex64::new(1.0, 0.0)];
            for k in 1..need {
                let prev = bin[k - 1];
                bin.push(prev * (k as f64 - 1.0 - g) / (k as f64 * z0));
            }
            (0..need).map(|k| (0..=k).map(|j| c[j] * bin[k - j]).sum()).collect()
        }
        None => c[..need].to_vec(),
    };
    let (p, q) = pade(&d, pade_order)?;
    let x = 1.0 / (rbar * rbar);
    let dir = Complex64::from_polar(1.0, ray_angle);
    let blocked = |pole: Complex64| {
        let da = (pole.arg() - ray_angle + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI)
            - std::f64::consts::PI;
        da.abs() < opts.obstruction_angle
    };
    if let Some((z0, _)) = sing {
        if blocked(z0) {
            return Err(Error::RayObstruction(format!(
                "Borel singularity at ζ = {z0:.4} lies on the ray at angle {ray_angle:.4}; choose another angle"
            )));
        }
    }
    for pole in poly_roots(&q) {
        if horner(&p, pole).norm() > 1e-8 * horner(&p, Complex64::new(0.0, 0.0)).norm() && blocked(pole) {
            return Err(Error::RayObstruction(format!(
                "Padé pole at ζ = {pole:.4} lies on the ray at angle {ray_angle:.4}; choose another angle"
            )));
        }
    }
    let borel = |z: Complex64| {
        let mut v = horner(&p, z) / horner(&q, z);
        if let Some((z0, g)) = sing {
            v *= (1.0 - z / z0).powf(-g);
        }
        v
    };
    // e^{-ρ cos θ} is below 1e-17 past this point
    let reach = 40.0 / ray_angle.cos().max(0.05);
    let mut edges = vec![0.0, 1.0, 5.0, 20.0];
    while *edges.last().unwrap() < reach {
        let e = edges.last().unwrap() * 3.0;
        edges.push(e.min(reach));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for w in edges.windows(2) {
        let (v, _) = integrate(
            |rho| {
                let zeta = dir * rho;
                (-zeta).exp() * borel(x * zeta) * dir
            },
            w[0],
            w[1],
            1e-16,
            1e-13,
        )?;
        total += v;
    }
    if !total.re.is_finite() || !total.im.is_finite() {
        return Err(Error::Range("Laplace integral did not produce a finite value".into()));
    }
    Ok(pre * total)
}

#[cfg(test)]
mod tests {
    use super::super::asymptotic::Prefactor;
    use super::*;

    fn geometric(n: usize) -> AsymptoticSeries {
        AsymptoticSeries {
            prefactor: Prefactor { scale: Complex64::new(1.0, 0.0), rbar_power: 0, oscillatory: false },
            coeffs: vec![Complex64::new(1.0, 0.0); n],
            divergence: Divergence::Factorial,
        }
    }

    #[test]
    fn geometric_series_sums_to_two() {
        let v = borel_resum(&geometric(40), 2f64.sqrt(), 0.0, 12).unwrap();
        assert!((v - 2.0).norm() < 1e-6, "{v}");
    }

    #[test]
    fn singularity_estimate_for_known_branch_point() {
        // (1 + iζ)^{-11/2}
        let g = 5.5;
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for k in 1..=30 {
            let prev = c[k - 1];
            c.push(prev * (-(g + k as f64 - 1.0)) / k as f64 * Complex64::new(0.0, 1.0));
        }
        let (z0, gamma) = estimate_singularity(&c, 8).unwrap();
        // high-degree extrapolation trades truncation for roundoff; well inside the snap window
        assert!((z0 - Complex64::new(0.0, 1.0)).norm() < 1e-7);
        assert!((gamma - 5.5).abs() < 1e-5);
    }

    #[test]
    fn too_few_coefficients() {
        assert!(matches!(borel_resum(&geometric(5), 2.0, 0.0, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn ray_through_singularity_is_obstructed() {
        let s = AsymptoticSeries::c2_branch(Complex64::new(1.0, 0.0), 40).unwrap();
        let e = borel_resum(&s, 2.0, std::f64::consts::FRAC_PI_2, 6).unwrap_err();
        assert!(matches!(e, Error::RayObstruction(_)));
    }
}
