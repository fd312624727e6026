use std::f64::consts::{PI, SQRT_2, TAU};

use proptest::prelude::*;
use robinlab::Error;
use robinlab::circle_ops::{Arc, PiecewiseCoefficient, TrigPoly};
use robinlab::special_fn::gauss_legendre;
use robinlab::symbol_constants::{
    FormulaId, Sign, c_cut_positive, c_neumann_dirichlet, c_neumann_dirichlet_scaled,
    c_psido_product, c_robin_pair, c_selfadjoint_part,
};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

/// Per-piece Gauss-Legendre oracle for `(1/π) ∫ g(b(θ)) dθ` over an arc.
fn oracle(b: &PiecewiseCoefficient, arc: Arc, g: impl Fn(f64) -> f64, nodes: usize) -> f64 {
    let rule = gauss_legendre(nodes).unwrap();
    let mut total = 0.0;
    for (a, _) in b.pieces() {
        let lo = a.start().max(arc.start());
        let hi = a.end().min(arc.end());
        if hi > lo {
            total += rule.integrate(lo, hi, |t| g(b.value_at_turns(t).norm()));
        }
    }
    TAU * total / PI
}

#[test]
fn neumann_dirichlet_on_the_disk() {
    let r = c_neumann_dirichlet(2).unwrap();
    assert_eq!(r.formula_id, FormulaId::NeumannDirichlet);
    assert!(close(r.value, SQRT_2, 1e-13));
    assert!(close(r.predicted_limit(2.0), 2.0, 1e-13));
    let doubled = c_neumann_dirichlet_scaled(2, 2.0).unwrap();
    assert!(close(doubled.value, 2.0 * r.value, 1e-14));
    assert!(c_neumann_dirichlet(1).is_err());
}

#[test]
fn neumann_dirichlet_on_the_ball() {
    // Product rule on S² x S¹: Gauss-Legendre in cos(polar angle), uniform
    // in azimuth, doubled until stable.
    let integrand = 0.5; // (2^{-1/2})^2
    let sphere = |nodes: usize| {
        let rule = gauss_legendre(nodes).unwrap();
        let polar = rule.integrate(-1.0, 1.0, |_| 1.0);
        let azimuth: f64 = (0..2 * nodes).map(|_| TAU / (2 * nodes) as f64).sum();
        polar * azimuth
    };
    let (coarse, fine) = (sphere(8), sphere(16));
    assert!((coarse - fine).abs() < 1e-12);
    let want = integrand * fine * TAU / (2.0 * TAU * TAU);
    let r = c_neumann_dirichlet(3).unwrap();
    assert!(r.value > 0.0 && close(r.value, want, 1e-12), "{} vs {want}", r.value);
}

#[test]
fn robin_pair_examples() {
    assert_eq!(c_robin_pair(&PiecewiseCoefficient::zero(), 2).unwrap().value, 0.0);
    for c in [0.5, 3.0, -7.0] {
        let r = c_robin_pair(&PiecewiseCoefficient::real_constant(c), 2).unwrap();
        assert!(close(r.predicted_limit(3.0), 4.0 * c.abs(), 1e-12));
    }
    let r = c_robin_pair(&PiecewiseCoefficient::half_step(1.0, 4.0), 2).unwrap();
    assert!(close(r.value, 2f64.powf(-1.0 / 3.0) + 2f64.cbrt(), 1e-12));
    assert!(close(r.predicted_limit(3.0), 8.661, 1e-4));
    let r = c_robin_pair(&PiecewiseCoefficient::half_step(1.0, 8.0), 2).unwrap();
    let want = (2f64.powf(-1.0 / 3.0) + 4f64.cbrt()).powi(3);
    assert!(close(r.predicted_limit(3.0), want, 1e-12));
    assert!(close(want, 13.50, 1e-3));
}

#[test]
fn robin_pair_through_a_zero() {
    // ∫_0^{2π} |cos θ|^{1/3} dθ to 30 digits.
    let integral = 5.174_219_118_459_581;
    let b = PiecewiseCoefficient::smooth(TrigPoly::from_real_series(0.0, &[1.0], &[]).unwrap());
    let r = c_robin_pair(&b, 2).unwrap();
    let want = 0.5f64.cbrt() * integral / PI;
    assert!(close(r.value, want, 1e-10), "{} vs {want}", r.value);
    assert!(r.quadrature_error <= 1e-8 * r.value);
}

#[test]
fn psido_product_examples() {
    let one = PiecewiseCoefficient::real_constant(1.0);
    let r = c_psido_product(&[one.clone(), one.clone()], &[-1.0], 1).unwrap();
    assert_eq!(r.formula_id, FormulaId::PsidoProduct);
    assert!(close(r.value, 2.0, 1e-13));

    let half = PiecewiseCoefficient::half_step(1.0, 2.0);
    let r = c_psido_product(&[half, one.clone()], &[-1.0], 1).unwrap();
    assert!(close(r.value, 3.0, 1e-13));

    let gate = PiecewiseCoefficient::half_step(0.0, 1.0);
    let r = c_psido_product(&[one.clone(), gate, one.clone()], &[-0.5, -0.5], 1).unwrap();
    assert!(close(r.value, 1.0, 1e-13));

    let r = c_psido_product(&[one.clone(), PiecewiseCoefficient::zero()], &[-1.0], 1).unwrap();
    assert_eq!(r.value, 0.0);

    assert!(c_psido_product(std::slice::from_ref(&one), &[-1.0], 1).is_err());
    assert!(c_psido_product(&[one.clone(), one], &[0.5], 1).is_err());
}

#[test]
fn positive_cut_examples() {
    let one = PiecewiseCoefficient::real_constant(1.0);
    let full = c_cut_positive(&one, 1.0, 1, Arc::full()).unwrap();
    let product = c_psido_product(&[one.clone(), one.clone()], &[-1.0], 1).unwrap();
    assert!(close(full.value, product.value, 1e-14));

    let half = c_cut_positive(&one, 1.0, 1, Arc::upper_half()).unwrap();
    assert!(close(half.value, 0.5 * full.value, 1e-13));

    let b = PiecewiseCoefficient::smooth(
        TrigPoly::from_real_series(2.0, &[0.7, -0.3], &[0.4]).unwrap(),
    )
    .add(&PiecewiseCoefficient::real_step(&[0.3], &[0.0, 0.5]).unwrap());
    let arc = Arc::new(0.1, 0.6).unwrap();
    for t in [1.0, 1.5] {
        let got = c_cut_positive(&b, t, 1, arc).unwrap();
        let want = oracle(&b.split_at(0.1).split_at(0.6), arc, |x| x.powf(1.0 / t), 400);
        assert!(close(got.value, want, 1e-10), "t={t}: {} vs {want}", got.value);
    }

    let negative = PiecewiseCoefficient::half_step(1.0, -1.0);
    assert!(matches!(
        c_cut_positive(&negative, 1.0, 1, Arc::full()),
        Err(Error::NegativeSymbol(_))
    ));
    assert!(c_cut_positive(&negative, 1.0, 1, Arc::upper_half()).is_ok());
}

#[test]
fn selfadjoint_parts() {
    let b = PiecewiseCoefficient::half_step(1.0, -2.0);
    let plus = c_selfadjoint_part(&b, 1.0, 1, Sign::Plus).unwrap();
    let minus = c_selfadjoint_part(&b, 1.0, 1, Sign::Minus).unwrap();
    assert!(close(plus.value, 1.0, 1e-13));
    assert!(close(minus.value, 2.0, 1e-13));
}

fn step_strategy() -> impl Strategy<Value = PiecewiseCoefficient> {
    (0.05f64..0.95, -5.0f64..5.0, -5.0f64..5.0)
        .prop_map(|(t, a, b)| PiecewiseCoefficient::real_step(&[t], &[a, b]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn robin_constant_is_homogeneous(b in step_strategy(), s in 0.1f64..10.0) {
        let base = c_robin_pair(&b, 2).unwrap().predicted_limit(3.0);
        let scaled = c_robin_pair(&b.scale(s.into()), 2).unwrap().predicted_limit(3.0);
        prop_assert!((scaled - s * base).abs() <= 1e-9 * (s * base).max(1e-12));
    }

    #[test]
    fn constants_are_monotone(b in step_strategy(), bump in 0.0f64..3.0, t in 0.3f64..0.7) {
        let bigger = b.combine(
            &PiecewiseCoefficient::real_step(&[t], &[0.0, bump]).unwrap(),
            |x, y| {
                let c = x.coefficient(0).re;
                let d = y.coefficient(0).re;
                TrigPoly::real_constant(c.signum() * (c.abs() + d))
            },
        );
        let small = c_robin_pair(&b, 2).unwrap().value;
        let large = c_robin_pair(&bigger, 2).unwrap().value;
        prop_assert!(large >= small * (1.0 - 1e-12));
        let one = PiecewiseCoefficient::real_constant(1.0);
        let ps = c_psido_product(&[b.clone(), one.clone()], &[-1.0], 1).unwrap().value;
        let pl = c_psido_product(&[bigger, one], &[-1.0], 1).unwrap().value;
        prop_assert!(pl >= ps * (1.0 - 1e-12));
    }

    #[test]
    fn splitting_pieces_changes_nothing(b in step_strategy(), cut in 0.01f64..0.99) {
        let split = b.split_at(cut);
        let a = c_robin_pair(&b, 2).unwrap().value;
        let c = c_robin_pair(&split, 2).unwrap().value;
        prop_assert!((a - c).abs() <= 1e-10 * a.max(1e-12));
        let one = PiecewiseCoefficient::real_constant(1.0);
        let pa = c_psido_product(&[b, one.clone()], &[-1.5], 1).unwrap().value;
        let pc = c_psido_product(&[split, one], &[-1.5], 1).unwrap().value;
        prop_assert!((pa - pc).abs() <= 1e-10 * pa.max(1e-12));
    }
}
