//! Small dense complex linear algebra and banded solves.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
/// `a` is row-major `n × n`.
pub fn solve_dense(mut a: Vec<Complex64>, mut b: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let n = b.len();
    if a.len() != n * n {
        return Err(Error::Domain("matrix and right-hand side sizes differ".into()));
    }
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))
            .unwrap_or(col);
        if a[piv * n + col].norm() <= 1e-300_f64.max(scale * 1e-300) {
            return Err(Error::Range("singular linear system".into()));
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for i in col + 1..n {
            let f = a[i * n + col] / d;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in col..n {
                let v = a[col * n + k];
                a[i * n + k] -= f * v;
            }
            let v = b[col];
            b[i] -= f * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= a[i * n + k] * x[k];
        }
        x[i] = s / a[i * n + i];
    }
    Ok(x)
}

/// Roots of `Σ c_k z^k` by Durand–Kerner iteration.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.len() > 1 && c.last().map(|v| v.norm() == 0.0).unwrap_or(false) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|v| v / lead).collect();
    let bound = 1.0 + monic[..deg].iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32) * bound.min(10.0)).collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, v| acc * x + v);
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-12, 0.0);
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / z[i].norm().max(1.0));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Banded matrix with `kl = ku = w`, stored row-wise as `2w + 1` diagonals.
#[derive(Debug, Clone)]
pub struct Banded {
    pub n: usize,
    pub w: usize,
    pub data: Vec<Complex64>,
}

impl Banded {
    pub fn zeros(n: usize, w: usize) -> Self {
        Banded { n, w, data: vec![Complex64::new(0.0, 0.0); n * (2 * w + 1)] }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * (2 * self.w + 1) + (j + self.w - i)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if i.abs_diff(j) > self.w {
            Complex64::new(0.0, 0.0)
        } else {
            self.data[self.idx(i, j)]
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn mul_vec(&self, x: &[Complex64], out: &mut [Complex64]) {
        for i in 0..self.n {
            let lo = i.saturating_sub(self.w);
            let hi = (i + self.w).min(self.n - 1);
            let mut s = Complex64::new(0.0, 0.0);
            for j in lo..=hi {
                s += self.data[self.idx(i, j)] * x[j];
            }
            out[i] = s;
        }
    }

    /// In-place LU without pivoting. Valid for matrices whose Hermitian part is
    /// positive definite, such as `1 + iΔt H/2` with Hermitian `H`.
    pub fn factor(mut self) -> Result<BandedLu> {
        let (n, w) = (self.n, self.w);
        for k in 0..n {
            let d = self.data[self.idx(k, k)];
            if d.norm() < 1e-300 {
                return Err(Error::Range("zero pivot in banded factorization".into()));
            }
            for i in k + 1..(k + w + 1).min(n) {
                let li = self.idx(i, k);
                let f = self.data[li] / d;
                self.data[li] = f;
                for j in k + 1..(k + w + 1).min(n) {
                    let kj = self.data[self.idx(k, j)];
                    let ij = self.idx(i, j);
                    self.data[ij] -= f * kj;
                }
            }
        }
        Ok(BandedLu { m: self })
    }
}

#[derive(Debug, Clone)]
pub struct BandedLu {
    m: Banded,
}

impl BandedLu {
    pub fn solve_in_place(&self, b: &mut [Complex64]) {
        let (n, w) = (self.m.n, self.m.w);
        for i in 0..n {
            let lo = i.saturating_sub(w);
            let mut s = b[i];
            for j in lo..i {
                s -= self.m.data[self.m.idx(i, j)] * b[j];
            }
            b[i] = s;
        }
        for i in (0..n).rev() {
            let hi = (i + w).min(n - 1);
            let mut s = b[i];
            for j in i + 1..=hi {
                s -= self.m.data[self.m.idx(i, j)] * b[j];
            }
            b[i] = s / self.m.data[self.m.idx(i, i)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dense_solve() {
        let a = vec![c(0.0, 1.0), c(2.0, 0.0), c(1.0, 1.0), c(3.0, -1.0)];
        let x = vec![c(1.0, -2.0), c(0.5, 0.5)];
        let b = vec![a[0] * x[0] + a[1] * x[1], a[2] * x[0] + a[3] * x[1]];
        let y = solve_dense(a, b).unwrap();
        assert!((y[0] - x[0]).norm() < 1e-14 && (y[1] - x[1]).norm() < 1e-14);
    }

    #[test]
    fn singular_is_error() {
        let a = vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)];
        assert!(solve_dense(a, vec![c(1.0, 0.0), c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn roots_of_cubic() {
        // (z - 1)(z + 2i)(z - 3) = z³ + (2i - 4) z² + (3 - 8i) z + 6i
        let r = poly_roots(&[c(0.0, 6.0), c(3.0, -8.0), c(-4.0, 2.0), c(1.0, 0.0)]);
        for want in [c(1.0, 0.0), c(0.0, -2.0), c(3.0, 0.0)] {
            assert!(r.iter().any(|z| (z - want).norm() < 1e-10), "{want} not in {r:?}");
        }
    }

    #[test]
    fn banded_roundtrip() {
        let n = 9;
        let mut m = Banded::zeros(n, 2);
        for i in 0..n {
            m.add(i, i, c(4.0, 1.0));
            if i + 1 < n {
                m.add(i, i + 1, c(-1.0, 0.2));
                m.add(i + 1, i, c(-1.0, 0.2));
            }
            if i + 2 < n {
                m.add(i, i + 2, c(0.1, 0.0));
                m.add(i + 2, i, c(0.1, 0.0));
            }
        }
        let x: Vec<Complex64> = (0..n).map(|k| c(k as f64, 1.0 - k as f64)).collect();
        let mut b = vec![c(0.0, 0.0); n];
        m.mul_vec(&x, &mut b);
        let lu = m.factor().unwrap();
        lu.solve_in_place(&mut b);
        for k in 0..n {
            assert!((b[k] - x[k]).norm() < 1e-12);
        }
    }
}
