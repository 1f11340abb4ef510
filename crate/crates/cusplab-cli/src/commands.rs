use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use cusplab::analysis::{cross_section, figure1_data, fit_half_power, t_power_to_omega_tail, write_figure1_csv};
use cusplab::models::{c2, psi_exact_free};
use cusplab::propagate::{
    delta_well_ground_state, hydrogen_ground_channels, propagate_line, propagate_radial_coupled,
    propagate_radial_with, radial_density_l2_error, write_csv, write_snapshot, GridSpec, LinePotential,
    RadialPotential, Trajectory,
};
use cusplab::series::{
    asymptotic_eval_optimal, borel_resum, te_reduced_terms, AsymptoticSeries, TeScenario,
};
use cusplab::verify::{self, CheckReport, REGISTRY};
use cusplab::{fmt17, Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::config::{RunConfig, Scenario};

/// What a command reports back to `main` for the exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ChecksFailed,
    /// Propagation warnings under `--strict`.
    Warnings,
}

pub struct Ctx {
    pub config: RunConfig,
    pub out: Option<PathBuf>,
    pub strict: bool,
    pub check: Option<String>,
    pub input: Option<PathBuf>,
    pub threads: usize,
}

/// Output directory; every file is written from the calling thread.
struct Outputs {
    dir: PathBuf,
    files: Vec<String>,
}

impl Outputs {
    /// Creates the directory and proves it writable before any compute starts.
    fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let probe = dir.join(".cusplab-write-test");
        File::create(&probe).map_err(|e| Error::Io(format!("{} is not writable: {e}", dir.display())))?;
        std::fs::remove_file(&probe)?;
        Ok(Outputs { dir: dir.to_path_buf(), files: Vec::new() })
    }

    fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let f = File::create(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.files.push(name.to_string());
        Ok(BufWriter::new(f))
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut w = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn manifest(mut self, command: &str, config: &RunConfig, start: Instant) -> Result<()> {
        let mut files = self.files.clone();
        files.sort();
        let m = json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "config": config,
            "outputs": files,
            "wall_time_s": start.elapsed().as_secs_f64(),
        });
        self.write_json("manifest.json", &m)
    }
}

fn out_dir(ctx: &Ctx) -> PathBuf {
    ctx.out.clone().or_else(|| ctx.config.outputs.clone()).unwrap_or_else(|| PathBuf::from("cusplab-out"))
}

pub fn figure1(ctx: &Ctx) -> Result<Outcome> {
    let start = Instant::now();
    let cfg = &ctx.config;
    if cfg.scenario != Scenario::FreeVaporized {
        return Err(Error::Config("figure1 requires scenario = free_vaporized".into()));
    }
    let mut out = Outputs::open(&out_dir(ctx))?;
    let opts = cfg.figure1.clone().unwrap_or_default();
    let rows = figure1_data(&opts.times, &opts.radii, &cfg.params)?;
    let mut w = out.create("figure1.csv")?;
    write_figure1_csv(&rows, &mut w)?;
    w.flush()?;
    for &t in opts.times.iter().filter(|&&t| t > 0.0) {
        let at: Vec<_> = rows.iter().filter(|r| r.t == t && r.r > 0.0).collect();
        if let (Some(a), Some(b)) = (at.first(), at.last()) {
            println!(
                "t = {t}: TE/exact = {:.3e} at r = {}, {:.3e} at r = {}",
                a.rho_te / a.rho_exact,
                a.r,
                b.rho_te / b.rho_exact,
                b.r
            );
        }
    }
    out.manifest("figure1", cfg, start)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    passed: bool,
    checks: &'a [CheckReport],
}

pub fn verify(ctx: &Ctx) -> Result<Outcome> {
    let start = Instant::now();
    let names: Vec<&str> = match &ctx.check {
        Some(n) => vec![verify::find(n)?.name],
        None => REGISTRY.iter().map(|c| c.name).collect(),
    };
    let mut out = match ctx.out.as_ref().or(ctx.config.outputs.as_ref()) {
        Some(d) => Some(Outputs::open(d)?),
        None => None,
    };
    let opts = ctx.config.verify.unwrap_or_default();
    let reports = verify::run_many(&names, &opts, ctx.threads).into_iter().collect::<Result<Vec<_>>>()?;
    let passed = reports.iter().all(|r| r.passed);
    let report = VerifyReport { passed, checks: &reports };
    println!("{}", serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?);
    if let Some(mut o) = out.take() {
        o.write_json("verify.json", &report)?;
        o.manifest("verify", &ctx.config, start)?;
    }
    Ok(if passed { Outcome::Success } else { Outcome::ChecksFailed })
}

pub fn propagate(ctx: &Ctx) -> Result<Outcome> {
    let start = Instant::now();
    let cfg = &ctx.config;
    if cfg.scenario == Scenario::Synthetic {
        return synthetic(ctx);
    }
    let spec = cfg.grid_spec().ok_or_else(|| Error::Config("grid is required".into()))?;
    let mut out = Outputs::open(&out_dir(ctx))?;
    let (traj, kind) = run_scenario(cfg, &spec)?;
    let mut w = out.create("trajectory.csv")?;
    write_csv(&traj, &mut w)?;
    w.flush()?;
    for (i, s) in traj.snapshots.iter().enumerate() {
        let mut w = out.create(&format!("snapshots/snapshot_{i:05}.bin"))?;
        write_snapshot(kind, s, &mut w)?;
        w.flush()?;
    }
    let n0 = traj.norm_series[0];
    let drift = traj.norm_series.iter().map(|n| (n - n0).abs()).fold(0.0, f64::max);
    println!("norm drift: {}", fmt17(drift));
    let mut summary = json!({ "norm_drift": drift, "warnings": traj.warnings });
    if cfg.scenario == Scenario::FreeVaporized {
        let last = traj.snapshots.last().ok_or_else(|| Error::Data("no snapshot".into()))?;
        let err = radial_density_l2_error(last, |r| psi_exact_free(r, last.time, &cfg.params))?;
        println!("L2 density error vs exact at t = {}: {}", fmt17(last.time), fmt17(err));
        summary["l2_density_error"] = json!(err);
    }
    for wmsg in &traj.warnings {
        eprintln!("warning: {wmsg}");
    }
    out.write_json("summary.json", &summary)?;
    out.manifest("propagate", cfg, start)?;
    Ok(if ctx.strict && !traj.warnings.is_empty() { Outcome::Warnings } else { Outcome::Success })
}

fn run_scenario(cfg: &RunConfig, spec: &GridSpec) -> Result<(Trajectory, cusplab::propagate::GridKind)> {
    let g = spec.grid()?;
    let p = &cfg.params;
    let traj = match cfg.scenario {
        Scenario::FreeVaporized => {
            let psi = hydrogen_ground_channels(&g, p.z, spec.l_max)?;
            propagate_radial_with(&psi, &RadialPotential { coulomb_z: 0.0, field: 0.0 }, spec)?
        }
        Scenario::HydrogenField => {
            let psi = hydrogen_ground_channels(&g, p.z, spec.l_max)?;
            propagate_radial_coupled(&psi, p, spec)?
        }
        Scenario::DeltaWellField => {
            let (psi, _) = delta_well_ground_state(&g, p.z)?;
            propagate_line(&psi, &LinePotential { delta_z: p.z, field: p.field }, spec)?
        }
        Scenario::Synthetic => unreachable!("handled by the caller"),
    };
    Ok((traj, spec.kind))
}

/// Synthetic dipole: trajectory CSV, power-law fit and cross-section.
fn synthetic(ctx: &Ctx) -> Result<Outcome> {
    let start = Instant::now();
    let cfg = &ctx.config;
    let s = cfg.synthetic.clone().unwrap_or_default();
    let mut out = Outputs::open(&out_dir(ctx))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = (s.t_max / s.dt).floor() as usize + 1;
    let mu: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = k as f64 * s.dt;
            let noise = if s.noise > 0.0 { rng.gen_range(-s.noise..=s.noise) } else { 0.0 };
            (t, s.amplitude * t.powf(s.exponent) * (-s.damping * t).exp() + noise)
        })
        .collect();
    let mut w = out.create("trajectory.csv")?;
    writeln!(w, "t_au,norm,mu_re_au,mu_im_au")?;
    for &(t, m) in &mu {
        writeln!(w, "{},{},{},{}", fmt17(t), fmt17(1.0), fmt17(m), fmt17(0.0))?;
    }
    w.flush()?;
    let [a, b] = s.fit_window;
    let window: Vec<(f64, Complex64)> =
        mu.iter().filter(|(t, _)| *t >= a && *t <= b).map(|&(t, m)| (t, Complex64::new(m, 0.0))).collect();
    let fit = fit_half_power(&window)?;
    println!("fitted exponent {} ± {}", fmt17(fit.exponent), fmt17(fit.stderr_exponent));
    out.write_json("fit.json", &fit)?;
    let spectrum = cross_section(&mu, &s.omegas, 0.0, &cfg.params)?;
    let mut w = out.create("spectrum.csv")?;
    spectrum.write_csv(&mut w)?;
    w.flush()?;
    let tail = t_power_to_omega_tail(s.amplitude, s.exponent, &cfg.params).ok();
    out.write_json("summary.json", &json!({ "fit": fit, "predicted_tail_coefficient": tail }))?;
    out.manifest("propagate", cfg, start)?;
    Ok(Outcome::Success)
}

pub fn series(ctx: &Ctx) -> Result<Outcome> {
    let start = Instant::now();
    let cfg = &ctx.config;
    let opts = cfg.series.clone().unwrap_or_default();
    let scenario = match cfg.scenario {
        Scenario::FreeVaporized => TeScenario::VaporizedNucleus,
        Scenario::HydrogenField => TeScenario::HydrogenField,
        _ => return Err(Error::Config("series requires scenario free_vaporized or hydrogen_field".into())),
    };
    let mut out = Outputs::open(&out_dir(ctx))?;
    let terms = te_reduced_terms(&cfg.params, scenario, opts.m_max)?;
    let mut w = out.create("te_terms.csv")?;
    writeln!(w, "m,l,power,re,im")?;
    for t in &terms {
        for (&(l, d), c) in &t.coeffs {
            writeln!(w, "{},{l},{d},{},{}", t.m, fmt17(c.re), fmt17(c.im))?;
        }
    }
    w.flush()?;
    // unit c₂: the series is e^S, so ξ₄ = c₂ r̄ times its sum
    let c2_branch = AsymptoticSeries::c2_branch(Complex64::new(-1.0, 0.0), opts.terms)?;
    out.write_json("c2_branch.json", &c2_branch)?;
    out.write_json("c1_branch.json", &AsymptoticSeries::c1_branch(Complex64::new(1.0, 0.0)))?;
    if scenario == TeScenario::HydrogenField {
        let c = c2(&cfg.params);
        out.write_json("constants.json", &json!({ "c2": [c.re, c.im] }))?;
    }
    println!("{} TE terms, {} asymptotic coefficients", terms.len(), opts.terms);
    out.manifest("series", cfg, start)?;
    Ok(Outcome::Success)
}

pub fn borel(ctx: &Ctx) -> Result<Outcome> {
    let start = Instant::now();
    let cfg = &ctx.config;
    let opts = cfg.borel.clone().unwrap_or_default();
    let path = ctx
        .input
        .clone()
        .or(opts.coefficients.clone())
        .ok_or_else(|| Error::Config("borel needs a coefficient file (argument or borel.coefficients)".into()))?;
    let text = std::fs::read_to_string(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let series = AsymptoticSeries::from_json(&text)?;
    let mut out = Outputs::open(&out_dir(ctx))?;
    let mut w = out.create("borel.csv")?;
    writeln!(w, "rbar,re,im,truncated_re,truncated_im,truncation_error")?;
    for &rb in &opts.radii {
        let v = borel_resum(&series, rb, opts.ray_angle, opts.pade_order)?;
        let trunc = match asymptotic_eval_optimal(&series, rb) {
            Ok((t, e)) => format!("{},{},{}", fmt17(t.re), fmt17(t.im), fmt17(e)),
            Err(Error::TruncationUnavailable(_)) => ",,".into(),
            Err(e) => return Err(e),
        };
        writeln!(w, "{},{},{},{trunc}", fmt17(rb), fmt17(v.re), fmt17(v.im))?;
        println!("r̄ = {rb}: {} + {}i", fmt17(v.re), fmt17(v.im));
    }
    w.flush()?;
    out.manifest("borel", cfg, start)?;
    Ok(Outcome::Success)
}
