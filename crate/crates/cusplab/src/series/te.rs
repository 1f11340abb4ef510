use crate::error::{Error, Result};
use crate::field::{d2, ComplexField};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesVariable {
    T,
    S,
}

/// Coefficient fields `c_p` of `Σ c_p t^p` (or `s^p`), all on one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimePowerSeries {
    pub order: usize,
    pub variable: SeriesVariable,
    pub coeffs: Vec<ComplexField>,
}

impl TimePowerSeries {
    pub fn new(variable: SeriesVariable, coeffs: Vec<ComplexField>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("a series needs at least c₀".into()));
        }
        if coeffs.iter().any(|c| !c.same_grid(&coeffs[0])) {
            return Err(Error::Domain("coefficient fields must share one grid".into()));
        }
        Ok(TimePowerSeries { order: coeffs.len() - 1, variable, coeffs })
    }

    /// `Σ_{p ≤ upto} c_p x^p` on the grid.
    pub fn partial_sum(&self, x: f64, upto: usize) -> Vec<Complex64> {
        let n = self.coeffs[0].values.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        let mut xp = 1.0;
        for c in self.coeffs.iter().take(upto.min(self.order) + 1) {
            for (o, v) in out.iter_mut().zip(&c.values) {
                *o += v * xp;
            }
            xp *= x;
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Data(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: TimePowerSeries = serde_json::from_str(s).map_err(|e| Error::Data(e.to_string()))?;
        TimePowerSeries::new(v.variable, v.coeffs)
    }
}

/// Discretized Hamiltonian for repeated application.
///
/// `Radial` acts on one angular channel of a 3D wavefunction through
/// `u = rψ`: `Hu = -u''/2 + (ℓ(ℓ+1)/(2r²) - Z/r) u`, with `coulomb_z = 0`
/// for free motion. `Line` is `-ψ''/2 + Vψ` with `V` sampled on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Hamiltonian {
    Radial { l: u32, coulomb_z: f64 },
    Line { potential: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeGrid {
    pub series: TimePowerSeries,
    pub warnings: Vec<String>,
}

/// Roundoff amplification of `P` applications of the 5-point Laplacian.
fn amplification(lambda: f64, order: usize) -> f64 {
    let mut a = f64::EPSILON;
    for p in 1..=order {
        a *= lambda / p as f64;
    }
    a
}

/// `c_p = (-iH)^p ψ₀ / p!` by repeated application of the 4th-order
/// discretized Hamiltonian. Grid ends use one-sided stencils, so the
/// coefficients are those of the analytic continuation of `ψ₀` past the ends.
pub fn te_coefficients_grid(h: &Hamiltonian, psi0: &ComplexField, order: usize) -> Result<TeGrid> {
    let g = psi0.grid;
    let r = g.points();
    let (to_u, pot): (Vec<f64>, Vec<f64>) = match h {
        Hamiltonian::Radial { l, coulomb_z } => {
            if g.start <= 0.0 {
                return Err(Error::Domain("radial TE grids must start at r > 0".into()));
            }
            let ll = (*l * (*l + 1)) as f64;
            (r.clone(), r.iter().map(|&x| ll / (2.0 * x * x) - coulomb_z / x).collect())
        }
        Hamiltonian::Line { potential } => {
            if potential.len() != g.len {
                return Err(Error::Domain("potential and grid lengths differ".into()));
            }
            (vec![1.0; g.len], potential.clone())
        }
    };
    let vmax = pot.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let lambda = 8.0 / (3.0 * g.spacing * g.spacing) + vmax;
    let mut warnings = Vec::new();
    let amp = amplification(lambda, order);
    if amp > 1.0 {
        warnings.push(format!(
            "order {order} exceeds grid resolution: roundoff in c_P amplified to {amp:.2e}·|ψ₀| (spectral radius {lambda:.3e})"
        ));
    }
    let mut u: Vec<Complex64> = psi0.values.iter().zip(&to_u).map(|(v, s)| v * s).collect();
    let mut coeffs = vec![psi0.clone()];
    for p in 1..=order {
        let lap = d2(&u, g.spacing)?;
        let f = Complex64::new(0.0, -1.0 / p as f64);
        u = u
            .iter()
            .zip(&lap)
            .zip(&pot)
            .map(|((v, l), w)| f * (-0.5 * l + w * v))
            .collect();
        let psi = u.iter().zip(&to_u).map(|(v, s)| v / s).collect();
        coeffs.push(ComplexField::new(g, psi)?);
    }
    Ok(TeGrid { series: TimePowerSeries::new(SeriesVariable::T, coeffs)?, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid;
    use crate::models::{psi0_hydrogen, ModelParams};

    fn hydrogen_field(g: Grid) -> ComplexField {
        let p = ModelParams::default();
        ComplexField::from_fn(g, |r| psi0_hydrogen(r, &p)).unwrap()
    }

    #[test]
    fn order_zero_is_psi0() {
        let g = Grid::span(0.5, 5.0, 50).unwrap();
        let f = hydrogen_field(g);
        let s = te_coefficients_grid(&Hamiltonian::Radial { l: 0, coulomb_z: 0.0 }, &f, 0).unwrap();
        assert_eq!(s.series.coeffs[0], f);
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn free_first_coefficient_vanishes_at_two_bohr() {
        let g = Grid::new(1.0, 0.01, 201).unwrap();
        let f = hydrogen_field(g);
        let s = te_coefficients_grid(&Hamiltonian::Radial { l: 0, coulomb_z: 0.0 }, &f, 1).unwrap();
        let c1 = &s.series.coeffs[1].values;
        for (i, r) in g.points().into_iter().enumerate() {
            let want = Complex64::new(0.0, 0.5 - 1.0 / r) * f.values[i];
            // one-sided closures at the two outermost points on each end
            let tol = if i < 2 || i + 2 >= g.len { 1e-6 } else { 1e-9 };
            assert!((c1[i] - want).norm() < tol, "r = {r}");
        }
        assert!(c1[100].norm() < 1e-9);
    }

    #[test]
    fn hydrogen_ground_state_only_gains_phase() {
        let g = Grid::new(0.5, 0.02, 200).unwrap();
        let f = hydrogen_field(g);
        let s = te_coefficients_grid(&Hamiltonian::Radial { l: 0, coulomb_z: 1.0 }, &f, 3).unwrap();
        // c_p = (i/2)^p / p! ψ₀
        let c3 = &s.series.coeffs[3].values;
        for i in 10..190 {
            let want = Complex64::new(0.0, 0.5).powu(3) / 6.0 * f.values[i];
            assert!((c3[i] - want).norm() < 1e-6, "i = {i}");
        }
    }

    #[test]
    fn high_order_on_coarse_grid_warns() {
        let g = Grid::new(0.5, 0.01, 300).unwrap();
        let f = hydrogen_field(g);
        let s = te_coefficients_grid(&Hamiltonian::Radial { l: 0, coulomb_z: 0.0 }, &f, 14).unwrap();
        assert_eq!(s.warnings.len(), 1);
    }

    #[test]
    fn json_round_trip() {
        let g = Grid::span(0.5, 2.0, 8).unwrap();
        let f = hydrogen_field(g);
        let s = te_coefficients_grid(&Hamiltonian::Radial { l: 0, coulomb_z: 0.0 }, &f, 2).unwrap();
        let j = s.series.to_json().unwrap();
        assert!(j.contains('['));
        assert_eq!(TimePowerSeries::from_json(&j).unwrap(), s.series);
    }
}
