//! Uniform 1D grids, complex fields sampled on them, and 4th-order finite
//! differences with one-sided closures at both ends.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub spacing: f64,
    pub len: usize,
}

impl Grid {
    pub fn new(start: f64, spacing: f64, len: usize) -> Result<Self> {
        if !(spacing > 0.0) || !start.is_finite() {
            return Err(Error::Domain(format!(
                "grid needs finite start and positive spacing, got {start}, {spacing}"
            )));
        }
        Ok(Grid { start, spacing, len })
    }

    /// `n` points spanning `[a, b]` inclusive.
    pub fn span(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 || !(b > a) {
            return Err(Error::Domain(format!("bad span [{a}, {b}] with {n} points")));
        }
        Grid::new(a, (b - a) / (n - 1) as f64, n)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + self.spacing * i as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.point(i)).collect()
    }

    pub fn end(&self) -> f64 {
        self.point(self.len.saturating_sub(1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexField {
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len {
            return Err(Error::Domain(format!(
                "field has {} values for a grid of {}",
                values.len(),
                grid.len
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Range("field contains non-finite values".into()));
        }
        Ok(ComplexField { grid, values })
    }

    pub fn from_fn<F>(grid: Grid, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        let values = grid.points().into_iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        ComplexField::new(grid, values)
    }

    pub fn zeros(grid: Grid) -> Self {
        ComplexField { grid, values: vec![Complex64::new(0.0, 0.0); grid.len] }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn same_grid(&self, other: &ComplexField) -> bool {
        self.grid == other.grid
    }
}

const MIN_POINTS: usize = 6;

fn check_len(n: usize) -> Result<()> {
    if n < MIN_POINTS {
        return Err(Error::Resolution(format!(
            "4th-order stencils need at least {MIN_POINTS} points, got {n}"
        )));
    }
    Ok(())
}

/// First derivative, 4th order.
pub fn d1(f: &[Complex64], h: f64) -> Result<Vec<Complex64>> {
    let n = f.len();
    check_len(n)?;
    let c = 1.0 / (12.0 * h);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 2..n - 2 {
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * c;
    }
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * c;
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * c;
    let m = n - 1;
    out[m] = -(-25.0 * f[m] + 48.0 * f[m - 1] - 36.0 * f[m - 2] + 16.0 * f[m - 3] - 3.0 * f[m - 4]) * c;
    out[m - 1] =
        -(-3.0 * f[m] - 10.0 * f[m - 1] + 18.0 * f[m - 2] - 6.0 * f[m - 3] + f[m - 4]) * c;
    Ok(out)
}

/// Second derivative, 4th order.
pub fn d2(f: &[Complex64], h: f64) -> Result<Vec<Complex64>> {
    let n = f.len();
    check_len(n)?;
    let c = 1.0 / (12.0 * h * h);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 2..n - 2 {
        out[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) * c;
    }
    let one_sided0 = |g: &dyn Fn(usize) -> Complex64| {
        (45.0 * g(0) - 154.0 * g(1) + 214.0 * g(2) - 156.0 * g(3) + 61.0 * g(4) - 10.0 * g(5)) * c
    };
    let one_sided1 = |g: &dyn Fn(usize) -> Complex64| {
        (10.0 * g(0) - 15.0 * g(1) - 4.0 * g(2) + 14.0 * g(3) - 6.0 * g(4) + g(5)) * c
    };
    let fwd = |k: usize| f[k];
    let bwd = |k: usize| f[n - 1 - k];
    out[0] = one_sided0(&fwd);
    out[1] = one_sided1(&fwd);
    out[n - 1] = one_sided0(&bwd);
    out[n - 2] = one_sided1(&bwd);
    Ok(out)
}
