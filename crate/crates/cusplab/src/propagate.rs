//! Crank–Nicolson propagation on a 1D line and on coupled radial channels.
//!
//! Radial states are stored as `u_ℓ(r)` on `r_j = jΔr, j = 1..N`, with
//! `ψ(r, θ) = Σ_ℓ u_ℓ(r) Y_ℓ0(θ) / r` and `Σ_ℓ ∫|u_ℓ|² dr = 1`. The kinetic
//! term uses the 5-point 4th-order stencil; the ghost value at `r = -Δr` comes
//! from the parity of `u_ℓ` (and its cusp for ℓ = 0 with a Coulomb term).
//! Line states use the 3-point stencil, for which the single-cell delta well
//! has the exact lattice ground state `λ^{|j|}`.

use crate::error::{Error, Result};
use crate::field::{ComplexField, Grid};
use crate::linalg::Banded;
use crate::models::ModelParams;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    Line,
    Radial,
}

/// `cos²` ramp over the outer `width` of the box; `strength ∈ (0, 1]` is the
/// per-step attenuation at the wall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Absorber {
    pub width: f64,
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub kind: GridKind,
    /// Box size: `[0, extent]` for radial grids, `[-extent/2, extent/2]` for lines.
    pub extent: f64,
    pub spacing: f64,
    pub dt: f64,
    pub steps: usize,
    #[serde(default)]
    pub l_max: u32,
    #[serde(default)]
    pub absorber: Option<Absorber>,
    /// Keep a snapshot every this many steps; 0 keeps only the first and last.
    #[serde(default)]
    pub snapshot_every: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{what} must be > 0, got {v}")))
            }
        };
        pos(self.extent, "grid.extent")?;
        pos(self.spacing, "grid.spacing")?;
        pos(self.dt, "grid.dt")?;
        if self.extent < 10.0 * self.spacing {
            return Err(Error::Config("grid.extent must span at least 10 points".into()));
        }
        if let Some(a) = self.absorber {
            pos(a.width, "grid.absorber.width")?;
            if !(a.strength > 0.0 && a.strength <= 1.0) {
                return Err(Error::Config(format!("grid.absorber.strength must be in (0, 1], got {}", a.strength)));
            }
            let half = match self.kind {
                GridKind::Line => self.extent / 2.0,
                GridKind::Radial => self.extent,
            };
            if a.width >= half {
                return Err(Error::Config("grid.absorber.width must be smaller than the box".into()));
            }
        }
        Ok(())
    }

    /// Sample points of the grid this spec describes.
    pub fn grid(&self) -> Result<Grid> {
        self.validate()?;
        match self.kind {
            GridKind::Radial => {
                let n = (self.extent / self.spacing).round() as usize;
                Grid::new(self.spacing, self.spacing, n)
            }
            GridKind::Line => {
                let m = (self.extent / (2.0 * self.spacing)).round() as usize;
                Grid::new(-(m as f64) * self.spacing, self.spacing, 2 * m + 1)
            }
        }
    }

    fn mask(&self, grid: &Grid) -> Option<Vec<f64>> {
        let a = self.absorber?;
        let wall = match self.kind {
            GridKind::Line => self.extent / 2.0,
            GridKind::Radial => self.extent,
        };
        Some(
            grid.points()
                .iter()
                .map(|&x| {
                    let depth = x.abs() - (wall - a.width);
                    if depth <= 0.0 {
                        1.0
                    } else {
                        let c = (std::f64::consts::FRAC_PI_2 * (depth / a.width).min(1.0)).cos();
                        1.0 - a.strength * (1.0 - c * c)
                    }
                })
                .collect(),
        )
    }
}

/// Channel fields at one instant. Line states have a single channel.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub channels: Vec<ComplexField>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub kind: GridKind,
    pub times: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
    pub norm_series: Vec<f64>,
    pub dipole_series: Vec<Complex64>,
    pub warnings: Vec<String>,
}

/// Potential on a line: `-Z δ(x) + ℰx`, the delta well as one cell of depth `-Z/Δx`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinePotential {
    #[serde(default)]
    pub delta_z: f64,
    #[serde(default)]
    pub field: f64,
}

impl LinePotential {
    pub fn sample(&self, grid: &Grid) -> Vec<f64> {
        grid.points()
            .iter()
            .map(|&x| {
                let well = if x.abs() < 0.5 * grid.spacing { -self.delta_z / grid.spacing } else { 0.0 };
                well + self.field * x
            })
            .collect()
    }
}

/// `-Z/r + ℰz` for the radial solver; `coulomb_z = 0` removes the nucleus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialPotential {
    pub coulomb_z: f64,
    pub field: f64,
}

impl From<&ModelParams> for RadialPotential {
    fn from(p: &ModelParams) -> Self {
        RadialPotential { coulomb_z: p.z, field: p.field }
    }
}

/// `⟨ℓ|cos θ|ℓ+1⟩`.
fn cos_element(l: u32) -> f64 {
    let l = l as f64;
    (l + 1.0) / ((2.0 * l + 1.0) * (2.0 * l + 3.0)).sqrt()
}

/// Lattice ground state of the single-cell delta well, normalized on `grid`.
/// Returns the state and its lattice energy `-(λ + ZΔx - 1)/Δx²`.
pub fn delta_well_ground_state(grid: &Grid, z: f64) -> Result<(ComplexField, f64)> {
    let h = grid.spacing;
    let lambda = -z * h + (z * z * h * h + 1.0).sqrt();
    let j0 = (-grid.start / h).round();
    if (grid.start + j0 * h).abs() > 1e-9 * h {
        return Err(Error::Domain("delta-well grids must contain x = 0".into()));
    }
    let vals: Vec<f64> = (0..grid.len).map(|i| lambda.powf((i as f64 - j0).abs())).collect();
    let norm = (vals.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
    let f = ComplexField::new(*grid, vals.iter().map(|v| Complex64::new(v / norm, 0.0)).collect())?;
    Ok((f, -(lambda + z * h - 1.0) / (h * h)))
}

/// `u₀ = 2 Z^{3/2} r e^{-Zr}` on the radial grid, ℓ = 0 only, padded to `l_max`.
pub fn hydrogen_ground_channels(grid: &Grid, z: f64, l_max: u32) -> Result<Vec<ComplexField>> {
    let mut out = vec![ComplexField::from_fn(*grid, |r| Ok(Complex64::new(2.0 * z.powf(1.5) * r * (-z * r).exp(), 0.0)))?];
    for _ in 0..l_max {
        out.push(ComplexField::zeros(*grid));
    }
    Ok(out)
}

fn norm_sq(v: &[Complex64], h: f64) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>() * h
}

struct Stepper {
    lhs: crate::linalg::BandedLu,
    rhs: Banded,
    mask: Option<Vec<f64>>,
    buf: Vec<Complex64>,
}

impl Stepper {
    fn new(h: Banded, dt: f64, mask: Option<Vec<f64>>) -> Result<Self> {
        let half = Complex64::new(0.0, 0.5 * dt);
        let mut lhs = Banded::zeros(h.n, h.w);
        let mut rhs = Banded::zeros(h.n, h.w);
        for i in 0..h.n {
            lhs.add(i, i, Complex64::new(1.0, 0.0));
            rhs.add(i, i, Complex64::new(1.0, 0.0));
            for j in i.saturating_sub(h.w)..=(i + h.w).min(h.n - 1) {
                let v = h.get(i, j);
                if v != ZERO {
                    lhs.add(i, j, half * v);
                    rhs.add(i, j, -half * v);
                }
            }
        }
        let buf = vec![ZERO; h.n];
        Ok(Stepper { lhs: lhs.factor()?, rhs, mask, buf })
    }

    fn step(&mut self, state: &mut [Complex64]) {
        self.rhs.mul_vec(state, &mut self.buf);
        self.lhs.solve_in_place(&mut self.buf);
        state.copy_from_slice(&self.buf);
        if let Some(m) = &self.mask {
            for (s, f) in state.iter_mut().zip(m) {
                *s *= f;
            }
        }
    }
}

/// `⟨|H|⟩`-scale accuracy heuristic: Crank–Nicolson phase error grows once
/// `Δt·√⟨H²⟩` is no longer small.
fn accuracy_warning(h: &Banded, state: &[Complex64], dt: f64) -> Option<String> {
    let mut hv = vec![ZERO; h.n];
    h.mul_vec(state, &mut hv);
    let e2: f64 = hv.iter().map(|c| c.norm_sqr()).sum::<f64>() / state.iter().map(|c| c.norm_sqr()).sum::<f64>();
    let scale = dt * e2.sqrt();
    (scale > 0.1).then(|| format!("time step {dt} is coarse for this state: Δt·√⟨H²⟩ = {scale:.3}"))
}

const EDGE_THRESHOLD: f64 = 1e-6;

/// Probability within the outer 10% of the box (or the absorber region).
fn edge_population(points: &[f64], state: &[Complex64], nch: usize, wall: f64, width: f64, h: f64) -> f64 {
    points
        .iter()
        .enumerate()
        .filter(|(_, x)| x.abs() > wall - width)
        .map(|(j, _)| (0..nch).map(|c| state[j * nch + c].norm_sqr()).sum::<f64>())
        .sum::<f64>()
        * h
}

/// Propagate a line state under `-½∂²ₓ + V(x)`.
pub fn propagate_line(psi0: &ComplexField, potential: &LinePotential, g: &GridSpec) -> Result<Trajectory> {
    if g.kind != GridKind::Line {
        return Err(Error::Config("propagate_line needs grid.kind = line".into()));
    }
    let grid = g.grid()?;
    if psi0.grid != grid {
        return Err(Error::Domain("initial state does not lie on the configured grid".into()));
    }
    let h = grid.spacing;
    let n = grid.len;
    let v = potential.sample(&grid);
    let mut ham = Banded::zeros(n, 1);
    let k = Complex64::new(0.5 / (h * h), 0.0);
    for i in 0..n {
        ham.add(i, i, 2.0 * k + v[i]);
        if i + 1 < n {
            ham.add(i, i + 1, -k);
            ham.add(i + 1, i, -k);
        }
    }
    let points = grid.points();
    let dip = |s: &[Complex64]| -> Complex64 {
        Complex64::new(s.iter().zip(&points).map(|(c, x)| c.norm_sqr() * x).sum::<f64>() * h, 0.0)
    };
    let mut state = psi0.values.clone();
    let n0 = norm_sq(&state, h);
    if (n0 - 1.0).abs() > 1e-6 {
        return Err(Error::Domain(format!("initial state must be normalized, norm = {n0}")));
    }
    let wall = g.extent / 2.0;
    let width = g.absorber.map(|a| a.width).unwrap_or(0.1 * wall);
    run(g, &grid, ham, &mut state, 1, dip, |s| edge_population(&points, s, 1, wall, width, h))
}

/// Propagate radial channels `u_0..u_{l_max}` under `-Z/r + ℰz`.
pub fn propagate_radial_coupled(psi0: &[ComplexField], p: &ModelParams, g: &GridSpec) -> Result<Trajectory> {
    p.validate()?;
    propagate_radial_with(psi0, &RadialPotential::from(p), g)
}

pub fn propagate_radial_with(psi0: &[ComplexField], pot: &RadialPotential, g: &GridSpec) -> Result<Trajectory> {
    if g.kind != GridKind::Radial {
        return Err(Error::Config("radial propagation needs grid.kind = radial".into()));
    }
    if pot.field != 0.0 && g.l_max < 1 {
        return Err(Error::Config("a nonzero field couples ℓ to ℓ ± 1 and needs grid.l_max ≥ 1".into()));
    }
    let grid = g.grid()?;
    let nch = g.l_max as usize + 1;
    if psi0.len() != nch {
        return Err(Error::Domain(format!("expected {nch} channels, got {}", psi0.len())));
    }
    if psi0.iter().any(|f| f.grid != grid) {
        return Err(Error::Domain("initial channels do not lie on the configured grid".into()));
    }
    let h = grid.spacing;
    let n = grid.len;
    let r = grid.points();
    let idx = |j: usize, l: usize| j * nch + l;
    let mut ham = Banded::zeros(n * nch, 2 * nch);
    let k = -0.5 / (12.0 * h * h);
    for l in 0..nch {
        let ll = (l * (l + 1)) as f64;
        for j in 0..n {
            let mut diag = -30.0;
            if j == 0 {
                // ghost u(-h) = (-1)^{ℓ+1} u(h); the Coulomb cusp of ℓ = 0 adds -2Zh² to it
                diag += if l % 2 == 0 { 1.0 } else { -1.0 };
                if l == 0 {
                    diag += 2.0 * pot.coulomb_z * h;
                }
            }
            let v = ll / (2.0 * r[j] * r[j]) - pot.coulomb_z / r[j];
            ham.add(idx(j, l), idx(j, l), Complex64::new(k * diag + v, 0.0));
            for (off, c) in [(1usize, 16.0), (2, -1.0)] {
                if j + off < n {
                    ham.add(idx(j, l), idx(j + off, l), Complex64::new(k * c, 0.0));
                    ham.add(idx(j + off, l), idx(j, l), Complex64::new(k * c, 0.0));
                }
            }
            if l + 1 < nch && pot.field != 0.0 {
                let c = Complex64::new(pot.field * r[j] * cos_element(l as u32), 0.0);
                ham.add(idx(j, l), idx(j, l + 1), c);
                ham.add(idx(j, l + 1), idx(j, l), c);
            }
        }
    }
    let mut state = vec![ZERO; n * nch];
    for (l, f) in psi0.iter().enumerate() {
        for j in 0..n {
            state[idx(j, l)] = f.values[j];
        }
    }
    let n0 = norm_sq(&state, h);
    if (n0 - 1.0).abs() > 1e-6 {
        return Err(Error::Domain(format!("initial state must be normalized, norm = {n0}")));
    }
    let coef: Vec<f64> = (0..nch.saturating_sub(1)).map(|l| cos_element(l as u32)).collect();
    let dip = |s: &[Complex64]| -> Complex64 {
        let mut acc = ZERO;
        for j in 0..n {
            for (l, c) in coef.iter().enumerate() {
                let a = s[idx(j, l)];
                let b = s[idx(j, l + 1)];
                acc += (a.conj() * b + b.conj() * a) * (c * r[j]);
            }
        }
        acc * h
    };
    let width = g.absorber.map(|a| a.width).unwrap_or(0.1 * g.extent);
    run(g, &grid, ham, &mut state, nch, dip, |s| edge_population(&r, s, nch, g.extent, width, h))
}

fn run<D, E>(
    g: &GridSpec,
    grid: &Grid,
    ham: Banded,
    state: &mut [Complex64],
    nch: usize,
    dip: D,
    edge: E,
) -> Result<Trajectory>
where
    D: Fn(&[Complex64]) -> Complex64,
    E: Fn(&[Complex64]) -> f64,
{
    let h = grid.spacing;
    let mut warnings: Vec<String> = accuracy_warning(&ham, state, g.dt).into_iter().collect();
    let mut stepper = Stepper::new(ham, g.dt, g.mask(grid))?;
    let snap = |t: f64, s: &[Complex64]| -> Result<Snapshot> {
        let channels = (0..nch)
            .map(|c| ComplexField::new(*grid, (0..grid.len).map(|j| s[j * nch + c]).collect()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Snapshot { time: t, channels })
    };
    let mut traj = Trajectory {
        kind: g.kind,
        times: vec![0.0],
        snapshots: vec![snap(0.0, state)?],
        norm_series: vec![norm_sq(state, h)],
        dipole_series: vec![dip(state)],
        warnings: Vec::new(),
    };
    let mut edge_max = edge(state);
    for step in 1..=g.steps {
        stepper.step(state);
        let t = step as f64 * g.dt;
        let nrm = norm_sq(state, h);
        if !nrm.is_finite() {
            return Err(Error::Range(format!("propagation produced a non-finite state at t = {t}")));
        }
        traj.times.push(t);
        traj.norm_series.push(nrm);
        traj.dipole_series.push(dip(state));
        edge_max = edge_max.max(edge(state));
        let keep = if g.snapshot_every == 0 { step == g.steps } else { step % g.snapshot_every == 0 || step == g.steps };
        if keep {
            traj.snapshots.push(snap(t, state)?);
        }
    }
    if edge_max > EDGE_THRESHOLD {
        let region = if g.absorber.is_some() { "absorber" } else { "outer 10% of the box" };
        warnings.push(format!(
            "population {edge_max:.3e} reached the {region}; boundary reflection may contaminate observables"
        ));
    }
    traj.warnings = warnings;
    Ok(traj)
}

/// Observables sampled at the snapshot times.
#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    pub times: Vec<f64>,
    pub norm: Vec<f64>,
    pub mu: Vec<Complex64>,
    /// `(t, density)`; radial densities are `Σ_ℓ |u_ℓ|²` per unit `r`.
    pub density: Vec<(f64, Vec<f64>)>,
}

pub fn observables(traj: &Trajectory) -> Result<Observables> {
    if traj.times.is_empty() {
        return Err(Error::Data("empty trajectory".into()));
    }
    let density = traj
        .snapshots
        .iter()
        .map(|s| {
            let n = s.channels[0].values.len();
            let d = (0..n).map(|j| s.channels.iter().map(|c| c.values[j].norm_sqr()).sum()).collect();
            (s.time, d)
        })
        .collect();
    Ok(Observables {
        times: traj.times.clone(),
        norm: traj.norm_series.clone(),
        mu: traj.dipole_series.clone(),
        density,
    })
}

/// `[∫(|ψ|² - |ψ_ref|²)² d³r]^{1/2}` for an ℓ = 0 radial snapshot.
pub fn radial_density_l2_error<F>(snap: &Snapshot, mut reference: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let f = &snap.channels[0];
    let h = f.grid.spacing;
    let four_pi = 4.0 * std::f64::consts::PI;
    let mut acc = 0.0;
    for (j, r) in f.grid.points().into_iter().enumerate() {
        let rho = f.values[j].norm_sqr() / (four_pi * r * r);
        let d = rho - reference(r)?.norm_sqr();
        acc += d * d * four_pi * r * r;
    }
    Ok((acc * h).sqrt())
}

pub fn write_csv<W: Write>(traj: &Trajectory, mut w: W) -> Result<()> {
    writeln!(w, "t_au,norm,mu_re_au,mu_im_au")?;
    for i in 0..traj.times.len() {
        let m = traj.dipole_series[i];
        let row = [traj.times[i], traj.norm_series[i], m.re, m.im].map(crate::fmt17);
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub const SNAPSHOT_MAGIC: [u8; 8] = *b"CUSPSNAP";
pub const SNAPSHOT_VERSION: u32 = 1;

/// Binary snapshot, all little-endian:
///
/// | bytes | content |
/// |---|---|
/// | 8 | magic `CUSPSNAP` |
/// | 4 | version (u32, currently 1) |
/// | 4 | grid kind (u32: 0 line, 1 radial) |
/// | 4 | channel count (u32) |
/// | 8 | point count (u64) |
/// | 8 | grid start (f64) |
/// | 8 | grid spacing (f64) |
/// | 8 | time (f64) |
/// | 16·count·channels | `(re, im)` f64 pairs, channel-major |
pub fn write_snapshot<W: Write>(kind: GridKind, snap: &Snapshot, mut w: W) -> Result<()> {
    let g = snap.channels.first().ok_or_else(|| Error::Data("snapshot has no channels".into()))?.grid;
    w.write_all(&SNAPSHOT_MAGIC)?;
    w.write_all(&SNAPSHOT_VERSION.to_le_bytes())?;
    w.write_all(&(kind as u32).to_le_bytes())?;
    w.write_all(&(snap.channels.len() as u32).to_le_bytes())?;
    w.write_all(&(g.len as u64).to_le_bytes())?;
    for v in [g.start, g.spacing, snap.time] {
        w.write_all(&v.to_le_bytes())?;
    }
    for c in &snap.channels {
        for v in &c.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_snapshot<R: Read>(mut r: R) -> Result<(GridKind, Snapshot)> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if magic != SNAPSHOT_MAGIC {
        return Err(Error::Data("not a snapshot file".into()));
    }
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    let mut u32_ = |r: &mut R| -> Result<u32> {
        r.read_exact(&mut b4)?;
        Ok(u32::from_le_bytes(b4))
    };
    let version = u32_(&mut r)?;
    if version != SNAPSHOT_VERSION {
        return Err(Error::Data(format!("unsupported snapshot version {version}")));
    }
    let kind = match u32_(&mut r)? {
        0 => GridKind::Line,
        1 => GridKind::Radial,
        k => return Err(Error::Data(format!("unknown grid kind {k}"))),
    };
    let nch = u32_(&mut r)? as usize;
    let mut f64_ = |r: &mut R| -> Result<f64> {
        r.read_exact(&mut b8)?;
        Ok(f64::from_le_bytes(b8))
    };
    let mut len = [0u8; 8];
    r.read_exact(&mut len)?;
    let len = u64::from_le_bytes(len) as usize;
    let (start, spacing, time) = (f64_(&mut r)?, f64_(&mut r)?, f64_(&mut r)?);
    let grid = Grid::new(start, spacing, len)?;
    let mut channels = Vec::with_capacity(nch);
    for _ in 0..nch {
        let mut vals = Vec::with_capacity(len);
        for _ in 0..len {
            let re = f64_(&mut r)?;
            let im = f64_(&mut r)?;
            vals.push(Complex64::new(re, im));
        }
        channels.push(ComplexField::new(grid, vals)?);
    }
    Ok((kind, Snapshot { time, channels }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_spec(extent: f64, h: f64, dt: f64, steps: usize) -> GridSpec {
        GridSpec { kind: GridKind::Line, extent, spacing: h, dt, steps, l_max: 0, absorber: None, snapshot_every: 0 }
    }

    #[test]
    fn lattice_delta_well_energy() {
        let g = line_spec(40.0, 0.02, 0.01, 0).grid().unwrap();
        let (_, e) = delta_well_ground_state(&g, 1.0).unwrap();
        assert!((e + 0.5).abs() < 0.005 * 0.5);
    }

    #[test]
    fn zero_steps_keeps_initial_state() {
        let spec = line_spec(40.0, 0.05, 0.01, 0);
        let g = spec.grid().unwrap();
        let (psi, _) = delta_well_ground_state(&g, 1.0).unwrap();
        let tr = propagate_line(&psi, &LinePotential { delta_z: 1.0, field: 0.0 }, &spec).unwrap();
        assert_eq!(tr.times, vec![0.0]);
        assert_eq!(tr.snapshots.len(), 1);
        assert_eq!(tr.snapshots[0].channels[0], psi);
    }

    #[test]
    fn field_without_channels_is_config_error() {
        let spec = GridSpec { kind: GridKind::Radial, extent: 10.0, spacing: 0.1, dt: 0.01, steps: 1, l_max: 0, absorber: None, snapshot_every: 0 };
        let g = spec.grid().unwrap();
        let psi = hydrogen_ground_channels(&g, 1.0, 0).unwrap();
        let e = propagate_radial_coupled(&psi, &ModelParams::hydrogen(1.0, 0.01), &spec).unwrap_err();
        assert!(matches!(e, Error::Config(_)));
    }

    #[test]
    fn snapshot_round_trip() {
        let g = Grid::new(0.1, 0.1, 5).unwrap();
        let f = ComplexField::from_fn(g, |x| Ok(Complex64::new(x, -x * x))).unwrap();
        let s = Snapshot { time: 0.25, channels: vec![f.clone(), f] };
        let mut buf = Vec::new();
        write_snapshot(GridKind::Radial, &s, &mut buf).unwrap();
        assert_eq!(buf.len(), 52 + 16 * 10);
        let (k, back) = read_snapshot(buf.as_slice()).unwrap();
        assert_eq!(k, GridKind::Radial);
        assert_eq!(back, s);
        buf[0] = b'X';
        assert!(read_snapshot(buf.as_slice()).is_err());
    }

    #[test]
    fn absorber_validation() {
        let mut spec = line_spec(20.0, 0.1, 0.01, 1);
        spec.absorber = Some(Absorber { width: 15.0, strength: 0.1 });
        assert!(matches!(spec.validate(), Err(Error::Config(_))));
    }
}
