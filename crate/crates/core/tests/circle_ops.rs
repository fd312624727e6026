use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use robinlab::circle_ops::{
    Arc, CutSide, PiecewiseCoefficient, TrigPoly, TruncatedOperator, diagonal_multiplier,
    fourier_coefficient, indicator_cut, multiplication_operator, real_multiplier,
};
use robinlab::special_fn::gauss_legendre;

/// `(1/2 pi) int b e^{-ik theta}` by high-order Gauss-Legendre on each piece.
fn quadrature_coefficient(b: &PiecewiseCoefficient, k: i64) -> C64 {
    let rule = gauss_legendre(200).unwrap();
    let mut acc = C64::new(0.0, 0.0);
    for (arc, _) in b.pieces() {
        let (a, e) = (arc.start() * TAU, arc.end() * TAU);
        let re = rule.integrate(a, e, |th| {
            (b.value_at(th) * C64::from_polar(1.0, -(k as f64) * th)).re
        });
        let im = rule.integrate(a, e, |th| {
            (b.value_at(th) * C64::from_polar(1.0, -(k as f64) * th)).im
        });
        acc += C64::new(re, im);
    }
    acc / TAU
}

fn max_entry_diff(a: &TruncatedOperator, b: &TruncatedOperator, radius: i64) -> f64 {
    let mut worst: f64 = 0.0;
    for m in -radius..=radius {
        for k in -radius..=radius {
            worst = worst.max((a.entry(m, k) - b.entry(m, k)).norm());
        }
    }
    worst
}

fn sample_coefficient() -> PiecewiseCoefficient {
    let p1 = TrigPoly::from_real_series(0.5, &[1.0, 0.25], &[-0.75]).unwrap();
    let p2 = TrigPoly::from_coefficients(vec![
        C64::new(0.2, 0.1),
        C64::new(-1.0, 0.5),
        C64::new(0.0, 0.3),
    ])
    .unwrap();
    let p3 = TrigPoly::real_constant(2.0);
    PiecewiseCoefficient::from_pieces(vec![
        (Arc::new(0.0, 0.3).unwrap(), p1),
        (Arc::new(0.3, 0.55).unwrap(), p2),
        (Arc::new(0.55, 1.0).unwrap(), p3),
    ])
    .unwrap()
}

#[test]
fn constant_one_has_single_coefficient() {
    let b = PiecewiseCoefficient::real_constant(1.0);
    assert_eq!(fourier_coefficient(&b, 0), C64::new(1.0, 0.0));
    for k in [-3, -1, 1, 7] {
        assert_eq!(fourier_coefficient(&b, k), C64::new(0.0, 0.0));
    }
}

#[test]
fn half_indicator_mean_and_first_mode() {
    let b = PiecewiseCoefficient::indicator(Arc::upper_half());
    assert_eq!(fourier_coefficient(&b, 0), C64::new(0.5, 0.0));
    let c1 = fourier_coefficient(&b, 1);
    assert!((c1 - C64::new(0.0, -1.0 / PI)).norm() < 1e-16);
}

#[test]
fn closed_form_coefficients_match_quadrature() {
    let b = sample_coefficient();
    for k in -12..=12 {
        let exact = fourier_coefficient(&b, k);
        let oracle = quadrature_coefficient(&b, k);
        assert!((exact - oracle).norm() < 1e-13, "k={k}: {exact} vs {oracle}");
    }
}

#[test]
fn multiplication_examples() {
    let c = C64::new(1.5, -0.5);
    let op = multiplication_operator(&PiecewiseCoefficient::constant(c), 6);
    assert!(max_entry_diff(&op, &TruncatedOperator::identity(6).scale(c), 6) == 0.0);

    let half = PiecewiseCoefficient::indicator(Arc::upper_half());
    let op = multiplication_operator(&half, 16);
    assert!(op.is_hermitian());
    assert!((op.entry(1, 0) - quadrature_coefficient(&half, 1)).norm() < 1e-14);

    let b1 = sample_coefficient();
    let diff = multiplication_operator(&b1.sub(&b1), 10);
    assert_eq!(diff.frobenius_norm(), 0.0);
}

#[test]
fn diagonal_multiplier_examples() {
    let id = diagonal_multiplier(|_| C64::new(1.0, 0.0), 5);
    assert_eq!(id, TruncatedOperator::identity(5));

    let bessel_like = real_multiplier(|m| (1.0 + (m * m) as f64).powf(-0.5), 32);
    let diag = bessel_like.diagonal().unwrap();
    let max = diag.iter().map(|z| z.re).fold(f64::MIN, f64::max);
    assert_eq!(max, 1.0);
    assert_eq!(bessel_like.entry(0, 0).re, 1.0);

    let t = 1.5;
    let n = 40usize;
    let op = real_multiplier(|m| (1.0 + (m * m) as f64).powf(-t / 2.0), n).with_order(-t);
    let want = (1.0 + (n * n) as f64).powf(-t / 2.0);
    assert_eq!(op.entry(n as i64, n as i64).re, want);
    assert_eq!(op.order(), Some(-t));
}

#[test]
fn composition_identities() {
    let a = multiplication_operator(&sample_coefficient(), 12);
    let b = multiplication_operator(&PiecewiseCoefficient::half_step(1.0, -2.0), 12);
    let id = TruncatedOperator::identity(12);
    assert_eq!(max_entry_diff(&a.compose(&id).unwrap(), &a, 12), 0.0);

    let lhs = a.compose(&b).unwrap().adjoint();
    let rhs = b.adjoint().compose(&a.adjoint()).unwrap();
    assert!(max_entry_diff(&lhs, &rhs, 12) < 1e-13);

    let d1 = real_multiplier(|m| 1.0 / (1.0 + m.abs() as f64), 12);
    let d2 = diagonal_multiplier(|m| C64::new(m as f64, 1.0), 12);
    let comm = d1.compose(&d2).unwrap().sub(&d2.compose(&d1).unwrap()).unwrap();
    assert!(comm.frobenius_norm() < 1e-13);
}

/// Truncated square of the half-indicator compared with itself on the
/// interior block `|m|, |m'| <= N/2`.
fn projection_defect(cutoff: usize) -> (f64, f64) {
    let e = multiplication_operator(&PiecewiseCoefficient::indicator(Arc::upper_half()), cutoff);
    let sq = e.compose(&e).unwrap();
    let n = cutoff as i64;
    (max_entry_diff(&sq, &e, n / 2), max_entry_diff(&sq, &e, n))
}

#[test]
fn indicator_square_converges_away_from_the_cutoff() {
    let (inner_256, _) = projection_defect(256);
    let (inner_512, whole_512) = projection_defect(512);
    assert!(inner_512 < 2e-2, "interior defect {inner_512}");
    assert!(inner_512 < inner_256);
    // Corner entries carry the truncated tail of a 1/k sequence and do not
    // shrink with N.
    assert!(whole_512 > 0.1);
}

#[test]
fn operator_norm_examples() {
    assert_eq!(TruncatedOperator::identity(20).operator_norm().unwrap(), 1.0);
    let d = real_multiplier(|m| (m as f64 - 3.0).abs(), 10);
    assert_eq!(d.operator_norm().unwrap(), 13.0);

    let b = PiecewiseCoefficient::half_step(1.0, 2.0);
    let op = multiplication_operator(&b, 1024);
    let norm = op.operator_norm().unwrap();
    assert!((norm - 2.0).abs() / 2.0 < 0.02, "norm {norm}");
    assert!(norm <= 2.0 + 1e-10);
}

#[test]
fn indicator_cut_examples() {
    let p = real_multiplier(|m| (1.0 + (m * m) as f64).powf(-0.5), 64);
    let full = indicator_cut(&p, Arc::full(), CutSide::Plus).unwrap();
    assert_eq!(max_entry_diff(&full, &p, 64), 0.0);
    let cross = indicator_cut(&p, Arc::full(), CutSide::Cross).unwrap();
    assert_eq!(cross.frobenius_norm(), 0.0);

    // 1_A 1_{A^c} vanishes away from the truncation corner.
    let n = 512usize;
    let id = TruncatedOperator::identity(n);
    let cross = indicator_cut(&id, Arc::upper_half(), CutSide::Cross).unwrap();
    let r = (n / 2) as i64;
    let inner = TruncatedOperator::from_fn(r as usize, |m, k| cross.entry(m, k));
    let inner_norm = inner.operator_norm().unwrap();
    assert!(inner_norm < 0.1, "interior cross norm {inner_norm}");

    let plus = indicator_cut(&p, Arc::upper_half(), CutSide::Plus).unwrap();
    assert!(plus.is_hermitian());
}

fn random_dense(cutoff: usize, entries: &[(f64, f64)]) -> TruncatedOperator {
    let n = 2 * cutoff + 1;
    TruncatedOperator::from_fn(cutoff, |m, k| {
        let (re, im) = entries[((m + cutoff as i64) as usize * n + (k + cutoff as i64) as usize)
            % entries.len()];
        C64::new(re, im)
    })
}

fn step_strategy() -> impl Strategy<Value = PiecewiseCoefficient> {
    (
        prop::collection::vec(0.01f64..0.99, 0..4),
        prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 5),
        prop::collection::vec(-1.0f64..1.0, 0..3),
    )
        .prop_map(|(mut breaks, vals, cos)| {
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
            let values: Vec<C64> = vals
                .iter()
                .take(breaks.len() + 1)
                .map(|&(a, b)| C64::new(a, b))
                .collect();
            let step = PiecewiseCoefficient::step(&breaks, &values).unwrap();
            let smooth = PiecewiseCoefficient::smooth(TrigPoly::from_real_series(0.0, &cos, &[]).unwrap());
            step.add(&smooth)
        })
}

fn real_step_strategy() -> impl Strategy<Value = PiecewiseCoefficient> {
    (
        prop::collection::vec(0.01f64..0.99, 0..4),
        prop::collection::vec(-3.0f64..3.0, 5),
        prop::collection::vec(-1.0f64..1.0, 0..3),
    )
        .prop_map(|(mut breaks, vals, sin)| {
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
            let step = PiecewiseCoefficient::real_step(&breaks, &vals[..breaks.len() + 1]).unwrap();
            let smooth = PiecewiseCoefficient::smooth(TrigPoly::from_real_series(0.3, &[], &sin).unwrap());
            step.add(&smooth)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_toeplitz(b in step_strategy()) {
        let op = multiplication_operator(&b, 9);
        for m in -9i64..9 {
            for k in -9i64..9 {
                prop_assert_eq!(op.entry(m, k), op.entry(m + 1, k + 1));
            }
        }
    }

    #[test]
    fn real_coefficients_give_hermitian_matrices(b in real_step_strategy()) {
        prop_assert!(b.is_real());
        for k in 0..20 {
            prop_assert_eq!(fourier_coefficient(&b, -k), fourier_coefficient(&b, k).conj());
        }
        let op = multiplication_operator(&b, 10);
        prop_assert!(op.is_hermitian());
        prop_assert_eq!(op.hermitian_defect(), 0.0);
    }

    #[test]
    fn operator_norm_is_submultiplicative(
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 81),
        b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 81),
    ) {
        let a = random_dense(4, &a);
        let b = random_dense(4, &b);
        let ab = a.compose(&b).unwrap().operator_norm().unwrap();
        let bound = a.operator_norm().unwrap() * b.operator_norm().unwrap();
        prop_assert!(ab <= bound + 1e-10);
    }
}
