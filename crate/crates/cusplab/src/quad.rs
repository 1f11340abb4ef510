//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands.

use crate::error::{Error, Result};
use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Integrate `f` over `[a, b]` to `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Complex64,
{
    const MAX_INTERVALS: usize = 4000;
    let (v, e) = gk15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total: Complex64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if !total.re.is_finite() || !total.im.is_finite() {
            return Err(Error::Range("integrand produced non-finite values".into()));
        }
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok((total, err));
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::Resolution(format!(
                "quadrature did not converge: error {err:.3e} after {MAX_INTERVALS} intervals"
            )));
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (lo, hi, _, _) = parts.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Integrate over `[a, ∞)` with the substitution `x = a + u/(1-u)`.
pub fn integrate_to_infinity<F>(mut f: F, a: f64, abs_tol: f64, rel_tol: f64) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Complex64,
{
    integrate(
        |u| {
            if u >= 1.0 {
                return Complex64::new(0.0, 0.0);
            }
            let d = 1.0 - u;
            let v = f(a + u / d) / (d * d);
            if v.re.is_finite() && v.im.is_finite() {
                v
            } else {
                Complex64::new(0.0, 0.0)
            }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}
