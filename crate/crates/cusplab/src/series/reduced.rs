//! Reduced variables `s = Z√t`, `r̄ = r/√(2t)` and the order-by-order
//! equations `{L - mi}ψ_m = -(2/Z²) Σ_p v_{p-2} ψ_{m-p}`.
//!
//! 3D fields are stored per Legendre channel: `ψ(r̄, θ) = Σ_ℓ g_ℓ(r̄) P_ℓ(cos θ)`.

use crate::error::{Error, Result};
use crate::field::{d1, d2, ComplexField, Grid};
use crate::models::ModelParams;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

const SQRT_PI: f64 = 1.772_453_850_905_516;

pub fn reduced_coords(r: f64, t: f64, p: &ModelParams) -> Result<(f64, f64)> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("reduced variables need t > 0, got {t}")));
    }
    Ok((p.z * t.sqrt(), r / (2.0 * t).sqrt()))
}

/// A field split into Legendre channels on one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelField {
    pub grid: Grid,
    pub channels: BTreeMap<u32, Vec<Complex64>>,
}

impl ChannelField {
    pub fn empty(grid: Grid) -> Self {
        ChannelField { grid, channels: BTreeMap::new() }
    }

    pub fn single(field: ComplexField, l: u32) -> Self {
        let mut channels = BTreeMap::new();
        channels.insert(l, field.values);
        ChannelField { grid: field.grid, channels }
    }

    pub fn from_fn<F>(grid: Grid, ls: &[u32], mut f: F) -> Result<Self>
    where
        F: FnMut(u32, f64) -> Result<Complex64>,
    {
        let mut channels = BTreeMap::new();
        for &l in ls {
            let v = grid.points().into_iter().map(|x| f(l, x)).collect::<Result<Vec<_>>>()?;
            channels.insert(l, v);
        }
        Ok(ChannelField { grid, channels })
    }

    pub fn channel(&self, l: u32) -> Result<ComplexField> {
        let v = self
            .channels
            .get(&l)
            .cloned()
            .unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); self.grid.len]);
        ComplexField::new(self.grid, v)
    }

    fn add_scaled(&mut self, l: u32, src: &[Complex64], w: &dyn Fn(usize) -> Complex64) {
        let n = self.grid.len;
        let dst = self.channels.entry(l).or_insert_with(|| vec![Complex64::new(0.0, 0.0); n]);
        for (i, d) in dst.iter_mut().enumerate() {
            *d += src[i] * w(i);
        }
    }

    /// Largest modulus over all channels and points within `[a, b]`.
    pub fn max_abs_in(&self, a: f64, b: f64) -> f64 {
        let pts = self.grid.points();
        let mut m = 0.0f64;
        for v in self.channels.values() {
            for (x, z) in pts.iter().zip(v) {
                if *x >= a && *x <= b {
                    m = m.max(z.norm());
                }
            }
        }
        m
    }
}

/// One term `v_p` of the reduced potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialTerm {
    /// `coef / r̄`
    Coulomb { coef: f64 },
    /// `coef · r̄ cos θ` (3D) or `coef · x̄` (1D)
    Linear { coef: f64 },
    /// `coef · δ(x̄)` in 1D
    Delta { coef: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedPotential {
    pub z: f64,
    pub dim: u8,
    pub terms: BTreeMap<i32, PotentialTerm>,
}

impl ReducedPotential {
    pub fn free(z: f64) -> Self {
        ReducedPotential { z, dim: 3, terms: BTreeMap::new() }
    }
}

/// Reduced expansion of `-Z/r + ℰz` (3D) or `-Zδ(x) + ℰx` (1D).
pub fn reduced_potential_terms(p: &ModelParams) -> Result<ReducedPotential> {
    p.validate()?;
    let mut terms = BTreeMap::new();
    let z = p.z;
    match p.dim {
        3 => {
            terms.insert(-1, PotentialTerm::Coulomb { coef: -z * z / SQRT_2 });
        }
        1 => {
            terms.insert(-1, PotentialTerm::Delta { coef: -z * z / SQRT_2 });
        }
        d => return Err(Error::Unsupported(format!("no reduced potential for dim {d}"))),
    }
    if p.field != 0.0 {
        terms.insert(1, PotentialTerm::Linear { coef: SQRT_2 * p.field / z });
    }
    Ok(ReducedPotential { z, dim: p.dim, terms })
}

fn check_resolution(g: &Grid) -> Result<()> {
    // the homogeneous solutions oscillate like e^{ir̄²}
    let k = 2.0 * g.end().abs().max(g.start.abs());
    if k * g.spacing > 1.0 {
        return Err(Error::Resolution(format!(
            "spacing {} too coarse for local wavenumber {k:.2}",
            g.spacing
        )));
    }
    Ok(())
}

/// `(L - mi)` applied to one channel.
fn apply_l(g: &Grid, dim: u8, l: u32, f: &[Complex64], m: usize) -> Result<Vec<Complex64>> {
    let h = g.spacing;
    let f1 = d1(f, h)?;
    let f2 = d2(f, h)?;
    let pts = g.points();
    let mi = Complex64::new(0.0, m as f64);
    let ll = (l * (l + 1)) as f64;
    Ok((0..f.len())
        .map(|i| {
            let x = pts[i];
            let lap = if dim == 3 { f2[i] + 2.0 * f1[i] / x - ll * f[i] / (x * x) } else { f2[i] };
            -0.5 * lap + Complex64::new(0.0, x) * f1[i] - mi * f[i]
        })
        .collect())
}

/// `{L - mi}ψ_m + (2/Z²) Σ_{p=0}^{m} v_{p-2} ψ_{m-p}` on the grid of `psi_m`.
pub fn reduced_residual(
    m: usize,
    psi_m: &ChannelField,
    lower: &[ChannelField],
    pot: &ReducedPotential,
) -> Result<ChannelField> {
    if lower.len() < m {
        return Err(Error::Domain(format!("order {m} needs ψ₀..ψ_{} as lower terms", m.max(1) - 1)));
    }
    let g = psi_m.grid;
    if lower.iter().any(|f| f.grid != g) {
        return Err(Error::Domain("all fields must share one grid".into()));
    }
    if pot.dim == 3 && g.start <= 0.0 {
        return Err(Error::Domain("3D reduced grids must start at r̄ > 0".into()));
    }
    check_resolution(&g)?;
    let pts = g.points();
    let mut out = ChannelField::empty(g);
    for (&l, f) in &psi_m.channels {
        if pot.dim == 1 && l > 1 {
            return Err(Error::Domain("1D fields carry only channel 0".into()));
        }
        let lf = apply_l(&g, pot.dim, l, f, m)?;
        out.add_scaled(l, &lf, &|_| Complex64::new(1.0, 0.0));
    }
    let k = 2.0 / (pot.z * pot.z);
    for p in 0..=m {
        let Some(term) = pot.terms.get(&(p as i32 - 2)) else { continue };
        let src = &lower[m - p];
        for (&l, f) in &src.channels {
            match *term {
                PotentialTerm::Coulomb { coef } => {
                    out.add_scaled(l, f, &|i| Complex64::new(k * coef / pts[i], 0.0));
                }
                PotentialTerm::Linear { coef } if pot.dim == 3 => {
                    let lf = l as f64;
                    let up = (lf + 1.0) / (2.0 * lf + 1.0);
                    out.add_scaled(l + 1, f, &|i| Complex64::new(k * coef * pts[i] * up, 0.0));
                    if l > 0 {
                        let down = lf / (2.0 * lf + 1.0);
                        out.add_scaled(l - 1, f, &|i| Complex64::new(k * coef * pts[i] * down, 0.0));
                    }
                }
                PotentialTerm::Linear { coef } => {
                    out.add_scaled(l, f, &|i| Complex64::new(k * coef * pts[i], 0.0));
                }
                PotentialTerm::Delta { .. } => {
                    if pts.iter().any(|&x| x == 0.0) || (g.start < 0.0 && g.end() > 0.0) {
                        return Err(Error::Unsupported(
                            "grids crossing x̄ = 0 cannot represent the delta term".into(),
                        ));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `S'' + (S')² - 2ir̄S' + 4S'/r̄ + 6i` by 4th-order differences.
pub fn s_ode_residual(s: &ComplexField) -> Result<ComplexField> {
    let g = s.grid;
    if g.start <= 0.0 {
        return Err(Error::Domain("S grid must start at r̄ > 0".into()));
    }
    check_resolution(&g)?;
    let s1 = d1(&s.values, g.spacing)?;
    let s2 = d2(&s.values, g.spacing)?;
    let i = Complex64::new(0.0, 1.0);
    let vals = g
        .points()
        .into_iter()
        .enumerate()
        .map(|(k, x)| s2[k] + s1[k] * s1[k] - 2.0 * i * x * s1[k] + 4.0 * s1[k] / x + 6.0 * i)
        .collect();
    ComplexField::new(g, vals)
}

/// Complex logarithm with the imaginary part made continuous along the samples.
pub fn log_unwrapped(values: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut out: Vec<Complex64> = Vec::with_capacity(values.len());
    for v in values {
        if v.norm() == 0.0 {
            return Err(Error::Range("log of zero sample".into()));
        }
        let mut l = v.ln();
        if let Some(prev) = out.last() {
            let tau = 2.0 * std::f64::consts::PI;
            l.im += tau * ((prev.im - l.im) / tau).round();
        }
        out.push(l);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TeScenario {
    /// Hydrogenic ground state evolving with no potential.
    VaporizedNucleus,
    /// Hydrogenic ground state with `-Z/r + ℰz` switched on at `t = 0`.
    HydrogenField,
}

/// `ψ_mᵀᴱ(r̄, θ) = Σ_{ℓ,d} b_{ℓ,d} r̄^d P_ℓ(cos θ)`, exact to first order in ℰ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedTeTerm {
    pub m: usize,
    pub coeffs: BTreeMap<(u32, i32), Complex64>,
}

impl ReducedTeTerm {
    pub fn channels(&self) -> Vec<u32> {
        let mut ls: Vec<u32> = self.coeffs.keys().map(|k| k.0).collect();
        ls.dedup();
        ls
    }

    pub fn eval_channel(&self, l: u32, rbar: f64) -> Complex64 {
        self.coeffs
            .range((l, i32::MIN)..=(l, i32::MAX))
            .map(|(&(_, d), &c)| c * rbar.powi(d))
            .sum()
    }

    /// Value at `(r̄, cos θ)`; only `P₀` and `P₁` occur to first order in ℰ.
    pub fn eval(&self, rbar: f64, ctheta: f64) -> Complex64 {
        self.channels()
            .into_iter()
            .map(|l| self.eval_channel(l, rbar) * legendre(l, ctheta))
            .sum()
    }

    pub fn to_field(&self, grid: Grid) -> Result<ChannelField> {
        ChannelField::from_fn(grid, &self.channels(), |l, x| Ok(self.eval_channel(l, x)))
    }
}

fn legendre(l: u32, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if l == 0 {
        return p0;
    }
    for k in 1..l {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

type Terms = BTreeMap<(u32, u32, i32), Complex64>;

/// `H` on `e^{-Zr} Σ a_{j,ℓ,k} r^k P_ℓ`, keeping ℰ-order `j ≤ 1`.
fn apply_h(terms: &Terms, z: f64, field: f64, coulomb: bool) -> Terms {
    let mut out = Terms::new();
    let mut put = |key: (u32, u32, i32), v: Complex64| {
        *out.entry(key).or_insert(Complex64::new(0.0, 0.0)) += v;
    };
    for (&(j, l, k), &a) in terms {
        let kf = k as f64;
        let ll = (l * (l + 1)) as f64;
        let c2 = -0.5 * (kf * (kf + 1.0) - ll);
        if c2 != 0.0 {
            put((j, l, k - 2), a * c2);
        }
        let c1 = z * (kf + 1.0);
        if c1 != 0.0 {
            put((j, l, k - 1), a * c1);
        }
        if coulomb {
            put((j, l, k - 1), a * -z);
        }
        put((j, l, k), a * (-0.5 * z * z));
        if field != 0.0 && j == 0 {
            let lf = l as f64;
            put((1, l + 1, k + 1), a * field * (lf + 1.0) / (2.0 * lf + 1.0));
            if l > 0 {
                put((1, l - 1, k + 1), a * field * lf / (2.0 * lf + 1.0));
            }
        }
    }
    out.retain(|_, v| *v != Complex64::new(0.0, 0.0));
    out
}

/// Re-expand the Taylor-expansion solution in `(s, r̄)` and return orders
/// `0..=m_max`. Orders whose contributions do not terminate are rejected.
pub fn te_reduced_terms(p: &ModelParams, scenario: TeScenario, m_max: usize) -> Result<Vec<ReducedTeTerm>> {
    p.validate()?;
    if p.dim != 3 {
        return Err(Error::Unsupported("reduced TE terms are implemented for 3D".into()));
    }
    let z = p.z;
    let (coulomb, field) = match scenario {
        TeScenario::VaporizedNucleus => (false, 0.0),
        TeScenario::HydrogenField => (true, p.field),
    };
    let mut out: Vec<ReducedTeTerm> =
        (0..=m_max).map(|m| ReducedTeTerm { m, coeffs: BTreeMap::new() }).collect();
    let mut c: Terms = Terms::new();
    c.insert((0, 0, 0), Complex64::new(z.powf(1.5) / SQRT_PI, 0.0));
    let cap = 8 * m_max + 40;
    let mut n = 0usize;
    loop {
        let kmin = c.keys().map(|k| k.2).min();
        let Some(kmin) = kmin else { break };
        // contributions need k ≤ m - 2n; the gap never shrinks since k drops at most 2 per step
        if kmin + 2 * n as i32 > m_max as i32 {
            break;
        }
        if n > cap {
            return Err(Error::Unsupported(format!(
                "TE re-expansion does not terminate at order ≤ {m_max}"
            )));
        }
        let tz = z.powi(-2 * n as i32);
        for (&(_, l, k), &a) in &c {
            for m in 0..=m_max {
                let q = m as i32 - 2 * n as i32 - k;
                if q < 0 {
                    continue;
                }
                let mut e = 1.0;
                for i in 1..=q {
                    e *= -SQRT_2 / i as f64;
                }
                let v = a * tz * (SQRT_2 / z).powi(k) * e;
                *out[m].coeffs.entry((l, m as i32 - 2 * n as i32)).or_insert(Complex64::new(0.0, 0.0)) += v;
            }
        }
        let f = Complex64::new(0.0, -1.0 / (n + 1) as f64);
        c = apply_h(&c, z, field, coulomb).into_iter().map(|(k, v)| (k, v * f)).collect();
        n += 1;
    }
    for t in &mut out {
        t.coeffs.retain(|_, v| v.norm() != 0.0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-13 * b.norm().max(1.0)
    }

    #[test]
    fn coords() {
        let p = ModelParams::default();
        let (s, rb) = reduced_coords(1.0, 1.0, &p).unwrap();
        assert_eq!(s, 1.0);
        assert!((rb - 1.0 / SQRT_2).abs() < 1e-15);
        let (_, rb2) = reduced_coords(3.0, 9.0, &p).unwrap();
        assert!((rb2 - reduced_coords(1.0, 1.0, &p).unwrap().1).abs() < 1e-15);
        assert!(reduced_coords(1.0, 0.0, &p).is_err());
    }

    #[test]
    fn potential_terms() {
        let p = ModelParams::hydrogen(2.0, 0.0);
        let v = reduced_potential_terms(&p).unwrap();
        assert_eq!(v.terms.len(), 1);
        match v.terms[&-1] {
            PotentialTerm::Coulomb { coef } => assert!((coef + 4.0 / SQRT_2).abs() < 1e-15),
            _ => panic!(),
        }
        let v = reduced_potential_terms(&ModelParams::hydrogen(1.0, 0.01)).unwrap();
        match v.terms[&1] {
            PotentialTerm::Linear { coef } => assert!((coef - 0.014_142_135_623_730_95).abs() < 1e-15),
            _ => panic!(),
        }
    }

    #[test]
    fn hydrogen_field_terms_match_hand_expansion() {
        let e = 0.01;
        let z = 1.3;
        let p = ModelParams::hydrogen(z, e);
        let t = te_reduced_terms(&p, TeScenario::HydrogenField, 4).unwrap();
        let n = z.powf(1.5) / SQRT_PI;
        let i = Complex64::new(0.0, 1.0);
        for &(rb, ct) in &[(0.7, 0.3), (2.0, -0.8)] {
            let r2 = rb * rb;
            assert!(close(t[0].eval(rb, ct), n.into()));
            assert!(close(t[1].eval(rb, ct), (-SQRT_2 * rb * n).into()));
            assert!(close(t[2].eval(rb, ct), n * (r2 + 0.5 * i)));
            let want3 = SQRT_2 * rb * (-6.0 * i * e * ct + z.powi(3) * (-2.0 * r2 - 3.0 * i))
                / (6.0 * SQRT_PI * z.powf(1.5));
            assert!(close(t[3].eval(rb, ct), want3));
            let want4 = crate::models::psi4_te(rb, ct, &p).unwrap();
            assert!(close(t[4].eval(rb, ct), want4), "{} vs {want4}", t[4].eval(rb, ct));
        }
    }

    #[test]
    fn order_five_does_not_terminate() {
        let p = ModelParams::hydrogen(1.0, 0.01);
        assert!(matches!(
            te_reduced_terms(&p, TeScenario::HydrogenField, 5),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn free_first_order_has_inverse_radius() {
        let p = ModelParams::default();
        let t = te_reduced_terms(&p, TeScenario::VaporizedNucleus, 3).unwrap();
        let n = 1.0 / SQRT_PI;
        let got = t[1].eval_channel(0, 0.5);
        let want = Complex64::new(-SQRT_2 * 0.5, -1.0 / (SQRT_2 * 0.5)) * n;
        assert!(close(got, want));
    }

    #[test]
    fn residual_of_constant_is_zero() {
        let g = Grid::new(0.5, 0.01, 200).unwrap();
        let f = ChannelField::from_fn(g, &[0], |_, _| Ok(Complex64::new(2.0, 0.0))).unwrap();
        let r = reduced_residual(0, &f, &[], &ReducedPotential::free(1.0)).unwrap();
        assert!(r.max_abs_in(0.5, 3.0) < 1e-12);
    }

    #[test]
    fn s_residual_of_zero_is_six_i() {
        let g = Grid::new(0.5, 0.01, 100).unwrap();
        let r = s_ode_residual(&ComplexField::zeros(g)).unwrap();
        assert!(r.values.iter().all(|v| *v == Complex64::new(0.0, 6.0)));
    }

    #[test]
    fn coarse_grid_rejected() {
        let g = Grid::new(1.0, 0.2, 60).unwrap();
        let f = ChannelField::from_fn(g, &[0], |_, _| Ok(Complex64::new(1.0, 0.0))).unwrap();
        assert!(matches!(
            reduced_residual(0, &f, &[], &ReducedPotential::free(1.0)),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn unwrap_follows_phase() {
        let v: Vec<Complex64> = (0..200).map(|k| Complex64::from_polar(2.0, 0.1 * k as f64)).collect();
        let l = log_unwrapped(&v).unwrap();
        assert!((l[199].im - 19.9).abs() < 1e-12);
    }
}
