//! Named numerical checks shared by the `verify` command and the acceptance suite.
//!
//! [`REGISTRY`] is the single list of checks. The table printed by
//! [`registry_markdown`] is what the README carries.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::{figure1_data, fit_half_power, free_te_residuals, log_times, omega_tail_quadrature, t_power_to_omega_tail};
use crate::cxmath::{erfc_complex, faddeeva_w, gamma_real};
use crate::field::{ComplexField, Grid};
use crate::models::{
    c2, dipole_short_time_coefficient, leading_half_power_field, psi0_hydrogen, psi4_te_channels, psi_exact_free,
    xi4_exp_s, xi4_profile_with, ModelParams,
};
use crate::propagate::{
    hydrogen_ground_channels, propagate_radial_coupled, propagate_radial_with, radial_density_l2_error, GridKind,
    GridSpec, RadialPotential,
};
use crate::series::{
    asymptotic_eval_optimal, borel_resum, log_unwrapped, reduced_potential_terms, reduced_residual, s_ode_residual,
    te_reduced_terms, AsymptoticSeries, ChannelField, TeScenario, DEFAULT_RAY_ANGLE,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Documented as out of reach; the entry names the checks that stand in for it.
    NonGoal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub passed: bool,
    pub measured: BTreeMap<String, f64>,
    pub tolerance: BTreeMap<String, f64>,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyOptions {
    /// Negative control: drop the finiteness constant from ψ₄.
    #[serde(default)]
    pub zero_c2: bool,
}

pub struct CheckInfo {
    pub name: &'static str,
    pub anchor: &'static str,
    pub summary: &'static str,
    run: fn(&VerifyOptions) -> Result<Report>,
}

/// Every check, in report order.
pub const REGISTRY: &[CheckInfo] = &[
    CheckInfo {
        name: "special_functions",
        anchor: "erfc[(r+iZt)/\\sqrt{2it}]",
        summary: "Faddeeva reflection on a 20×20 grid in [-5,5]², real-axis erfc on [-6,6], Γ(11/2)",
        run: special_functions,
    },
    CheckInfo {
        name: "free_oracle",
        anchor: "applying the free-particle TD Green's function",
        summary: "Crank–Nicolson radial density vs the exact free solution at t = 0.5; second-order in dt",
        run: free_oracle,
    },
    CheckInfo {
        name: "figure1",
        anchor: "TD exact density and TE density",
        summary: "TE density ≥ 10³ × exact at r = 0.01; agreement to 1e-4 relative for r ≥ 20Zt",
        run: figure1,
    },
    CheckInfo {
        name: "half_power_fit",
        anchor: "produces the correct short-time behavior",
        summary: "TE residual at r = 4 fits t^ν with ν = 2.5 ± 0.02 and amplitude 2√2/(πr⁴) within 2%",
        run: half_power_fit,
    },
    CheckInfo {
        name: "te_residual_m4",
        anchor: "a second-order differential equation",
        summary: "reduced recursion residuals for m ≤ 4 on [0.2, 8]; ψ₄ bounded to r̄ = 1e-3; ψ₄ᵀᴱ ∝ r̄⁻²",
        run: te_residual_m4,
    },
    CheckInfo {
        name: "borel_eq20",
        anchor: "we perform a Borel resummation, yielding",
        summary: "Borel–Padé sum of the c₂ branch vs the closed form at r̄ ∈ {1, 2, 5}; optimal truncation at r̄ = 10",
        run: borel_eq20,
    },
    CheckInfo {
        name: "s_equation",
        anchor: "ordinary differential equation for $S$",
        summary: "log of the ξ₄ profile satisfies the S equation on [0.5, 5]",
        run: s_equation,
    },
    CheckInfo {
        name: "tail_identity",
        anchor: "known high-frequency decay",
        summary: "t^{9/2} dipole coefficient maps to 16√2Z⁵π/(3c) ω^{-7/2}; damped quadrature within 3%",
        run: tail_identity,
    },
    CheckInfo {
        name: "ehrenfest",
        anchor: "time-dependent dipole moment $\\mu(t)$",
        summary: "hydrogen in a field (ℰ = 0.01, l_max = 2): μ(t) = -ℰt²/2 within 2% for t ≤ 0.05",
        run: ehrenfest,
    },
    CheckInfo {
        name: "t11_2_amplitude",
        anchor: "The leading time-half-power is then",
        summary: "non-goal: the t^{11/2} amplitude sits below double precision; covered by te_residual_m4, borel_eq20, s_equation",
        run: t11_2_amplitude,
    },
];

pub fn find(name: &str) -> Result<&'static CheckInfo> {
    REGISTRY.iter().find(|c| c.name == name).ok_or_else(|| {
        let names: Vec<&str> = REGISTRY.iter().map(|c| c.name).collect();
        Error::Config(format!("unknown check '{name}'; available: {}", names.join(", ")))
    })
}

pub fn registry_markdown() -> String {
    let mut s = String::from("| check | anchor | what is measured |\n|---|---|---|\n");
    for c in REGISTRY {
        s.push_str(&format!("| `{}` | \"{}\" | {} |\n", c.name, c.anchor.replace('|', "\\|"), c.summary));
    }
    s
}

pub fn run(name: &str, opts: &VerifyOptions) -> Result<CheckReport> {
    let info = find(name)?;
    let r = (info.run)(opts)?;
    let status = if r.non_goal {
        Status::NonGoal
    } else if r.ok {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(CheckReport {
        name: info.name.into(),
        anchor: info.anchor.into(),
        status,
        passed: status != Status::Fail,
        measured: r.measured,
        tolerance: r.tolerance,
        detail: r.detail,
    })
}

/// Runs the named checks on up to `threads` workers. Results keep the input order.
pub fn run_many(names: &[&str], opts: &VerifyOptions, threads: usize) -> Vec<Result<CheckReport>> {
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<Result<CheckReport>>>> = Mutex::new(names.iter().map(|_| None).collect());
    let workers = threads.clamp(1, names.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= names.len() {
                    break;
                }
                let r = run(names[i], opts);
                out.lock().unwrap_or_else(|e| e.into_inner())[i] = Some(r);
            });
        }
    });
    out.into_inner()
        .unwrap_or_else(|e| e.into_inner())
        .into_iter()
        .map(|r| r.unwrap_or_else(|| Err(Error::Data("check did not run".into()))))
        .collect()
}

#[derive(Default)]
struct Report {
    ok: bool,
    non_goal: bool,
    measured: BTreeMap<String, f64>,
    tolerance: BTreeMap<String, f64>,
    detail: String,
}

impl Report {
    fn new() -> Self {
        Report { ok: true, ..Default::default() }
    }

    /// Records `value ≤ tol`.
    fn at_most(&mut self, key: &str, value: f64, tol: f64) -> &mut Self {
        self.measured.insert(key.into(), value);
        self.tolerance.insert(key.into(), tol);
        if !(value <= tol) {
            self.ok = false;
        }
        self
    }

    /// Records `value ≥ bound`.
    fn at_least(&mut self, key: &str, value: f64, bound: f64) -> &mut Self {
        self.measured.insert(key.into(), value);
        self.tolerance.insert(key.into(), bound);
        if !(value >= bound) {
            self.ok = false;
        }
        self
    }

    fn note(&mut self, s: impl Into<String>) -> &mut Self {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(&s.into());
        self
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// erfc on the real axis, 40-digit reference values rounded to double.
const ERFC_REAL: [(f64, f64); 25] = [
    (-6.0, 2.0),
    (-5.5, 1.9999999999999927),
    (-5.0, 1.9999999999984626),
    (-4.5, 1.999999999803384),
    (-4.0, 1.999999984582742),
    (-3.5, 1.9999992569016276),
    (-3.0, 1.9999779095030015),
    (-2.5, 1.999593047982555),
    (-2.0, 1.9953222650189528),
    (-1.5, 1.9661051464753108),
    (-1.0, 1.8427007929497148),
    (-0.5, 1.5204998778130465),
    (0.0, 1.0),
    (0.5, 0.4795001221869535),
    (1.0, 0.15729920705028513),
    (1.5, 0.033894853524689274),
    (2.0, 0.004677734981047266),
    (2.5, 0.0004069520174449589),
    (3.0, 2.209049699858544e-05),
    (3.5, 7.430983723414128e-07),
    (4.0, 1.541725790028002e-08),
    (4.5, 1.9661604415428876e-10),
    (5.0, 1.537459794428035e-12),
    (5.5, 7.357847917974398e-15),
    (6.0, 2.1519736712498913e-17),
];

fn special_functions(_: &VerifyOptions) -> Result<Report> {
    let mut rep = Report::new();
    // relative to the largest term: near the real axis w(z) and w(-z) are
    // O(0.1) while 2e^{-z²} can be 1e-11, so the sum itself is ill-conditioned
    let mut worst = 0.0f64;
    for i in 0..20 {
        for j in 0..20 {
            let z = Complex64::new(-5.0 + 10.0 * i as f64 / 19.0, -5.0 + 10.0 * j as f64 / 19.0);
            let (a, b) = (faddeeva_w(z)?, faddeeva_w(-z)?);
            let e = 2.0 * (-z * z).exp();
            let scale = a.norm().max(b.norm()).max(e.norm());
            worst = worst.max((a + b - e).norm() / scale);
        }
    }
    rep.at_most("reflection_rel", worst, 1e-10);
    let mut worst = 0.0f64;
    for &(x, want) in &ERFC_REAL {
        let v = erfc_complex(Complex64::new(x, 0.0))?;
        worst = worst.max(rel(v, Complex64::new(want, 0.0)));
    }
    rep.at_most("erfc_real_rel", worst, 1e-10);
    let g = gamma_real(5.5)?;
    let want = 945.0 * PI.sqrt() / 32.0;
    rep.at_most("gamma_11_2_rel", (g / want - 1.0).abs(), 1e-12);
    Ok(rep)
}

fn vaporized_error(dt: f64) -> Result<(f64, Vec<String>)> {
    let p = ModelParams::hydrogen(1.0, 0.0);
    let spec = GridSpec {
        kind: GridKind::Radial,
        extent: 40.0,
        spacing: 0.01,
        dt,
        steps: (0.5 / dt).round() as usize,
        l_max: 0,
        absorber: None,
        snapshot_every: 0,
    };
    let g = spec.grid()?;
    let psi = hydrogen_ground_channels(&g, 1.0, 0)?;
    let tr = propagate_radial_with(&psi, &RadialPotential { coulomb_z: 0.0, field: 0.0 }, &spec)?;
    let last = tr.snapshots.last().ok_or_else(|| Error::Data("no snapshot".into()))?;
    let err = radial_density_l2_error(last, |r| psi_exact_free(r, last.time, &p))?;
    Ok((err, tr.warnings))
}

fn free_oracle(_: &VerifyOptions) -> Result<Report> {
    let mut rep = Report::new();
    let (e1, w1) = vaporized_error(2e-4)?;
    let (e2, w2) = vaporized_error(1e-4)?;
    rep.at_most("l2_error_dt_2e-4", e1, 1e-4).at_most("l2_error_dt_1e-4", e2, 1e-4);
    let ratio = e1 / e2;
    rep.at_least("halving_ratio", ratio, 3.5).at_most("halving_ratio_max", ratio, 4.5);
    for w in w1.into_iter().chain(w2) {
        rep.note(w);
    }
    Ok(rep)
}

fn figure1(_: &VerifyOptions) -> Result<Report> {
    let p = ModelParams::default();
    let mut rep = Report::new();
    let times = [0.2, 0.5, 1.0];
    let near = figure1_data(&times, &[0.01], &p)?;
    let ratio = near.iter().map(|r| r.rho_te / r.rho_exact).fold(f64::INFINITY, f64::min);
    rep.at_least("min_te_over_exact_r_0.01", ratio, 1e3);
    let mut worst = 0.0f64;
    let mut at = (0.0, 0.0);
    for &t in &times {
        let r0 = 20.0 * p.z * t;
        let radii: Vec<f64> = [1.0, 1.25, 1.5, 2.0, 3.0].iter().map(|k| k * r0).collect();
        for row in figure1_data(&[t], &radii, &p)? {
            let d = (row.rho_te / row.rho_exact - 1.0).abs();
            if d > worst {
                worst = d;
                at = (row.t, row.r);
            }
        }
    }
    rep.at_most("max_rel_dev_r_ge_20Zt", worst, 1e-4);
    rep.note(format!("largest far-field deviation at t = {}, r = {}", at.0, at.1));
    Ok(rep)
}

fn half_power_fit(_: &VerifyOptions) -> Result<Report> {
    let p = ModelParams::default();
    let r = 4.0;
    let f = fit_half_power(&free_te_residuals(r, &log_times(1e-3, 1e-2, 16), &p, 2)?)?;
    let want = 2.0 * 2f64.sqrt() / (PI * r.powi(4));
    let mut rep = Report::new();
    rep.at_most("exponent_dev", (f.exponent - 2.5).abs(), 0.02)
        .at_most("amplitude_rel_dev", (f.amplitude / want - 1.0).abs(), 0.02);
    rep.measured.insert("exponent".into(), f.exponent);
    rep.measured.insert("exponent_stderr".into(), f.stderr_exponent);
    rep.measured.insert("amplitude".into(), f.amplitude);
    Ok(rep)
}

fn psi4_residual(p: &ModelParams, c: Complex64, segments: &[(f64, f64, f64)]) -> Result<f64> {
    let pot = reduced_potential_terms(p)?;
    let terms = te_reduced_terms(p, TeScenario::HydrogenField, 3)?;
    let mut worst = 0.0f64;
    for &(a, b, h) in segments {
        // padding keeps the window clear of the one-sided end stencils
        let pad = 3.0 * h;
        let g = Grid::new(a - pad, h, ((b - a + 2.0 * pad) / h).round() as usize + 1)?;
        let lower = terms.iter().map(|t| t.to_field(g)).collect::<Result<Vec<_>>>()?;
        let f = ChannelField::from_fn(g, &[0, 1], |l, rb| {
            let (a, b) = psi4_te_channels(rb, p)?;
            Ok(if l == 0 { a } else { b + xi4_profile_with(rb, c)? })
        })?;
        worst = worst.max(reduced_residual(4, &f, &lower, &pot)?.max_abs_in(a, b));
    }
    Ok(worst)
}

fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>()
}

fn te_residual_m4(opts: &VerifyOptions) -> Result<Report> {
    let p = ModelParams::hydrogen(1.0, 0.01);
    let mut rep = Report::new();
    let g = Grid::span(0.2, 8.0, 781)?;
    let terms = te_reduced_terms(&p, TeScenario::HydrogenField, 3)?;
    let fields = terms.iter().map(|t| t.to_field(g)).collect::<Result<Vec<_>>>()?;
    let pot = reduced_potential_terms(&p)?;
    for m in 0..=3 {
        let r = reduced_residual(m, &fields[m], &fields[..m], &pot)?.max_abs_in(0.2, 8.0);
        rep.at_most(&format!("residual_m{m}"), r, 1e-6);
    }
    let c = if opts.zero_c2 { Complex64::new(0.0, 0.0) } else { c2(&p) };
    // the r̄⁻² part of ψ₄ᵀᴱ needs a finer step near r̄ = 0.2
    let res = psi4_residual(&p, c, &[(0.2, 1.0, 0.002), (1.0, 8.0, 0.01)])?;
    rep.at_most("residual_m4", res, 1e-6);
    let full = |rb: f64| -> Result<f64> { Ok((psi4_te_channels(rb, &p)?.1 + xi4_profile_with(rb, c)?).norm()) };
    let growth = full(1e-3)? / full(1.0)?;
    rep.at_most("psi4_growth_1e-3_over_1", growth, 10.0);
    if growth > 10.0 {
        rep.note(format!("ψ₄ diverges at small r̄: |ψ₄(1e-3)| / |ψ₄(1)| = {growth:.3e}"));
    }
    let xs: Vec<f64> = (0..10).map(|k| 1e-3 * 1.5f64.powi(k)).collect();
    let ys = xs.iter().map(|&x| Ok(psi4_te_channels(x, &p)?.1.norm())).collect::<Result<Vec<_>>>()?;
    let slope = log_slope(&xs, &ys);
    rep.at_most("te_only_slope_dev", (slope + 2.0).abs(), 0.05);
    rep.measured.insert("te_only_slope".into(), slope);
    if opts.zero_c2 {
        rep.note("negative control: c₂ set to zero");
    }
    Ok(rep)
}

fn borel_eq20(_: &VerifyOptions) -> Result<Report> {
    let mut rep = Report::new();
    let s = AsymptoticSeries::c2_branch(Complex64::new(-1.0, 0.0), 40)?;
    let mut worst = 0.0f64;
    for rb in [1.0, 2.0, 5.0] {
        worst = worst.max(rel(borel_resum(&s, rb, DEFAULT_RAY_ANGLE, 10)?, xi4_exp_s(rb)?));
    }
    rep.at_most("max_rel_dev_borel", worst, 1e-6);
    let long = AsymptoticSeries::c2_branch(Complex64::new(-1.0, 0.0), 120)?;
    let (v, est) = asymptotic_eval_optimal(&long, 10.0)?;
    rep.at_most("optimal_truncation_abs_dev_r10", (v - xi4_exp_s(10.0)?).norm(), est);
    Ok(rep)
}

fn s_equation(_: &VerifyOptions) -> Result<Report> {
    let g = Grid::span(0.5, 5.0, 4501)?;
    let vals = g.points().into_iter().map(xi4_exp_s).collect::<Result<Vec<_>>>()?;
    let s = ComplexField::new(g, log_unwrapped(&vals)?)?;
    let mut rep = Report::new();
    rep.at_most("max_residual", s_ode_residual(&s)?.max_abs(), 1e-5);
    Ok(rep)
}

fn tail_identity(_: &VerifyOptions) -> Result<Report> {
    let p = ModelParams::default();
    let a = dipole_short_time_coefficient(&p);
    let tail = t_power_to_omega_tail(a, 4.5, &p)?;
    let want = 16.0 * 2f64.sqrt() * p.z.powi(5) * PI / (3.0 * p.light_speed);
    let q = omega_tail_quadrature(a, 4.5, &p)?;
    let mut rep = Report::new();
    rep.at_most("identity_rel_dev", (tail / want - 1.0).abs(), 1e-12)
        .at_most("quadrature_rel_dev", (q / want - 1.0).abs(), 0.03);
    rep.measured.insert("tail_coefficient".into(), tail);
    Ok(rep)
}

fn ehrenfest(_: &VerifyOptions) -> Result<Report> {
    let e = 0.01;
    let p = ModelParams::hydrogen(1.0, e);
    let spec = GridSpec {
        kind: GridKind::Radial,
        extent: 30.0,
        spacing: 0.01,
        dt: 1e-4,
        steps: 500,
        l_max: 2,
        absorber: None,
        snapshot_every: 0,
    };
    let psi = hydrogen_ground_channels(&spec.grid()?, 1.0, 2)?;
    let tr = propagate_radial_coupled(&psi, &p, &spec)?;
    let mut worst = 0.0f64;
    for (&t, m) in tr.times.iter().zip(&tr.dipole_series).skip(1) {
        let want = -e * t * t / 2.0;
        worst = worst.max((m.re - want).abs() / want.abs());
    }
    let mut rep = Report::new();
    rep.at_most("max_rel_dev_t_le_0.05", worst, 0.02);
    rep.measured.insert("mu_0".into(), tr.dipole_series[0].norm());
    Ok(rep)
}

fn t11_2_amplitude(_: &VerifyOptions) -> Result<Report> {
    let p = ModelParams::hydrogen(1.0, 0.01);
    let (r, t) = (3.0, 1e-3);
    let amp = leading_half_power_field(r, 1.0, t, &p)?.norm();
    let ratio = amp / psi0_hydrogen(r, &p)?.norm();
    let mut rep = Report { non_goal: true, ..Report::new() };
    rep.measured.insert("amplitude_r3_t1e-3".into(), amp);
    rep.measured.insert("amplitude_over_psi0".into(), ratio);
    rep.tolerance.insert("amplitude_over_psi0".into(), f64::EPSILON);
    rep.note(
        "the term is below double-precision resolution of the state at reachable times, so a grid fit cannot \
         isolate it; its ingredients are verified by te_residual_m4, borel_eq20 and s_equation",
    );
    Ok(rep)
}
