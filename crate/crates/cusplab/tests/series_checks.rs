use cusplab::field::{ComplexField, Grid};
use cusplab::models::{psi4_te_channels, xi4_exp_s, xi4_profile_with, c2, ModelParams};
use cusplab::series::{
    asymptotic_eval_optimal, borel_resum, log_unwrapped, reduced_potential_terms, reduced_residual,
    s_ode_residual, te_reduced_terms, AsymptoticSeries, ChannelField, TeScenario, DEFAULT_RAY_ANGLE,
};
use num_complex::Complex64;

fn c2_series(n: usize) -> AsymptoticSeries {
    // e^S ≈ -e^{ir̄²}/r̄⁸ [1 + ...] for unit c₂
    AsymptoticSeries::c2_branch(Complex64::new(-1.0, 0.0), n).unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn borel_matches_closed_form() {
    for &rb in &[1.0, 2.0, 5.0] {
        let v = borel_resum(&c2_series(40), rb, DEFAULT_RAY_ANGLE, 10).unwrap();
        let want = xi4_exp_s(rb).unwrap();
        println!("r̄ = {rb}: rel {:e}", rel(v, want));
        assert!(rel(v, want) < 1e-6, "r̄ = {rb}: {}", rel(v, want));
    }
}

#[test]
fn borel_is_stable_in_pade_order() {
    let a = borel_resum(&c2_series(40), 2.0, DEFAULT_RAY_ANGLE, 8).unwrap();
    let b = borel_resum(&c2_series(40), 2.0, DEFAULT_RAY_ANGLE, 10).unwrap();
    println!("pade stability {:e}", rel(a, b));
    assert!(rel(a, b) < 1e-8);
}

#[test]
fn optimal_truncation_within_its_estimate() {
    let s = c2_series(120);
    let (v, err) = asymptotic_eval_optimal(&s, 10.0).unwrap();
    let want = xi4_exp_s(10.0).unwrap();
    println!("opt r̄=10: diff {:e} est {:e}", (v - want).norm(), err);
    assert!((v - want).norm() <= err);
    let mut last = f64::INFINITY;
    for k in 0..=15 {
        let rb = 5.0 + k as f64;
        let (_, e) = asymptotic_eval_optimal(&s, rb).unwrap();
        let e = e * rb.powi(8);
        assert!(e < last, "r̄ = {rb}");
        last = e;
    }
}

#[test]
fn borel_and_optimal_truncation_agree_at_large_radius() {
    let s = c2_series(120);
    for &rb in &[5.0, 7.0, 10.0] {
        let (v, err) = asymptotic_eval_optimal(&s, rb).unwrap();
        let b = borel_resum(&s, rb, DEFAULT_RAY_ANGLE, 10).unwrap();
        println!("r̄={rb}: {:e} vs {:e}", (v - b).norm(), err);
        assert!((v - b).norm() <= err);
    }
}

fn hydrogen() -> ModelParams {
    ModelParams::hydrogen(1.0, 0.01)
}

#[test]
fn te_orders_up_to_three_solve_the_recursion() {
    let p = hydrogen();
    let g = Grid::span(0.2, 8.0, 781).unwrap();
    let terms = te_reduced_terms(&p, TeScenario::HydrogenField, 3).unwrap();
    let fields: Vec<ChannelField> = terms.iter().map(|t| t.to_field(g).unwrap()).collect();
    let pot = reduced_potential_terms(&p).unwrap();
    for m in 0..=3 {
        let r = reduced_residual(m, &fields[m], &fields[..m], &pot).unwrap();
        let worst = r.max_abs_in(0.2, 8.0);
        println!("m = {m}: {worst:e}");
        assert!(worst <= 1e-6, "m = {m}: {worst:e}");
    }
}

fn psi4_fields(g: Grid, with_xi: bool, p: &ModelParams) -> ChannelField {
    ChannelField::from_fn(g, &[0, 1], |l, rb| {
        let (a, b) = psi4_te_channels(rb, p)?;
        Ok(match l {
            0 => a,
            _ if with_xi => b + xi4_profile_with(rb, c2(p))?,
            _ => b,
        })
    })
    .unwrap()
}

/// Worst residual of order 4 over `[a, b]` split into segments `(a, b, h)`.
fn psi4_residual(segments: &[(f64, f64, f64)], with_xi: bool, p: &ModelParams) -> f64 {
    let pot = reduced_potential_terms(p).unwrap();
    let terms = te_reduced_terms(p, TeScenario::HydrogenField, 3).unwrap();
    let mut worst = 0.0f64;
    for &(a, b, h) in segments {
        // pad by three points so the window avoids the one-sided closures
        let pad = 3.0 * h;
        let n = ((b - a + 2.0 * pad) / h).round() as usize + 1;
        let g = Grid::new(a - pad, h, n).unwrap();
        let lower: Vec<ChannelField> = terms.iter().map(|t| t.to_field(g).unwrap()).collect();
        let r = reduced_residual(4, &psi4_fields(g, with_xi, p), &lower, &pot).unwrap();
        worst = worst.max(r.max_abs_in(a, b));
    }
    worst
}

#[test]
fn full_fourth_order_term_solves_the_recursion_and_stays_finite() {
    let p = hydrogen();
    // the r̄⁻² part of ψ₄ᵀᴱ needs a finer grid near r̄ = 0.2
    let segments = [(0.2, 1.0, 0.002), (1.0, 8.0, 0.01)];
    for with_xi in [true, false] {
        let worst = psi4_residual(&segments, with_xi, &p);
        println!("ψ₄ (ξ₄ = {with_xi}): {worst:e}");
        assert!(worst <= 1e-6);
    }
    // bounded near the nucleus with ξ₄, r̄⁻² growth without
    let full = |rb: f64| {
        let (_, b) = psi4_te_channels(rb, &p).unwrap();
        (b + xi4_profile_with(rb, c2(&p)).unwrap()).norm()
    };
    assert!(full(1e-3) < 10.0 * full(1.0));
    let xs: Vec<f64> = (0..10).map(|k| 1e-3 * 1.5f64.powi(k)).collect();
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = xs.iter().map(|&x| psi4_te_channels(x, &p).unwrap().1.norm().ln()).collect();
    let n = xs.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let slope = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((slope + 2.0).abs() < 0.05, "{slope}");
}

#[test]
fn zeroed_c2_leaves_the_nucleus_divergent() {
    let p = hydrogen();
    let near = |c: Complex64| {
        let (_, b) = psi4_te_channels(1e-3, &p).unwrap();
        (b + xi4_profile_with(1e-3, c).unwrap()).norm()
    };
    assert!(near(Complex64::new(0.0, 0.0)) > 1e3 * near(c2(&p)));
}

#[test]
fn c1_branch_is_annihilated() {
    let p = ModelParams::hydrogen(1.0, 0.0);
    let pot = reduced_potential_terms(&p).unwrap();
    // r̄ e^S reaches 1e4 at r̄ = 10, where input rounding alone puts the
    // discrete residual near 1e-8; the bound is taken relative to max |f| there
    for (a, b, h) in [(1.0f64, 3.0, 0.005), (3.0, 10.0, 0.02)] {
        let pad = 3.0 * h;
        let n = ((b - a + 2.0 * pad) / h).round() as usize + 1;
        let g = Grid::new(a - pad, h, n).unwrap();
        let f = ChannelField::from_fn(g, &[1], |_, r| {
            // r̄ e^S on the terminating branch
            Ok(Complex64::new(r.powi(4) - 2.25, 4.5 * r * r + 0.375 / (r * r)))
        })
        .unwrap();
        let zeros: Vec<ChannelField> = (0..4).map(|_| ChannelField::empty(g)).collect();
        let r = reduced_residual(4, &f, &zeros, &pot).unwrap();
        let scale = f.max_abs_in(a, b).max(1.0);
        let worst = r.max_abs_in(a, b);
        println!("annihilation on [{a}, {b}]: {worst:e} (scale {scale:e})");
        assert!(worst <= 1e-8 * scale);
    }
}

fn s_residual_of(g: Grid, f: impl Fn(f64) -> Complex64) -> f64 {
    let vals: Vec<Complex64> = g.points().into_iter().map(f).collect();
    let s = ComplexField::new(g, log_unwrapped(&vals).unwrap()).unwrap();
    s_ode_residual(&s).unwrap().max_abs()
}

#[test]
fn s_equation_holds_for_both_branches() {
    let g = Grid::span(0.5, 5.0, 4501).unwrap();
    let worst = s_residual_of(g, |rb| xi4_exp_s(rb).unwrap());
    println!("S from ξ₄: {worst:e}");
    assert!(worst <= 1e-5);
    let g = Grid::span(1.0, 10.0, 1801).unwrap();
    let worst = s_residual_of(g, |r| {
        Complex64::new(r.powi(3) - 2.25 / r, 4.5 * r + 0.375 / r.powi(3))
    });
    println!("S from c₁ branch: {worst:e}");
    assert!(worst <= 1e-5);
}

#[test]
fn constant_s_leaves_6i() {
    let g = Grid::span(0.5, 5.0, 50).unwrap();
    let s = ComplexField::zeros(g);
    for v in s_ode_residual(&s).unwrap().values {
        assert_eq!(v, Complex64::new(0.0, 6.0));
    }
}
