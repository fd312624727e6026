use proptest::prelude::*;
use robinlab::disk_model::{
    DiskModes, DiskParameters, build_boundary_operators, dtn_eigenvalue, gram_certified,
    ntd_eigenvalue, poisson_gram,
};
use robinlab::special_fn::gauss_legendre;

/// `I_m(x)` by naive power series; independent of the library evaluator.
fn series_i(m: u32, x: f64) -> f64 {
    let mut term = 1.0;
    for k in 1..=m {
        term *= 0.5 * x / k as f64;
    }
    let mut sum = term;
    let mut k = 0.0;
    while term > 1e-18 * sum || k < 2.0 {
        k += 1.0;
        term *= 0.25 * x * x / (k * (k + m as f64));
        sum += term;
    }
    sum
}

/// Gram integral straight in `r`, with the series oracle as integrand.
fn gram_oracle(m: u32, kappa: f64) -> f64 {
    let rule = gauss_legendre(160).unwrap();
    let top = series_i(m, kappa);
    rule.integrate(0.0, 1.0, |r| (series_i(m, kappa * r) / top).powi(2) * r)
}

/// `(1/2)[1 - 2m ρ/κ - ρ²]` with `ρ = I_{m+1}/I_m`; only safe for small `m`.
fn gram_closed_form(m: u32, kappa: f64) -> f64 {
    let rho = series_i(m + 1, kappa) / series_i(m, kappa);
    0.5 * (1.0 - 2.0 * m as f64 * rho / kappa - rho * rho)
}

fn params(kappa: f64, n: usize) -> DiskParameters {
    DiskParameters::new(kappa, n).unwrap()
}

#[test]
fn dtn_examples() {
    let p = params(1.0, 512);
    let d0 = dtn_eigenvalue(0, &p).unwrap();
    let want = -series_i(1, 1.0) / series_i(0, 1.0);
    assert!((d0 - want).abs() < 1e-14);
    assert!((d0 + 0.446_389_965_896_534_5).abs() < 1e-15);

    let ratio = dtn_eigenvalue(512, &p).unwrap() / -512.0;
    assert!((0.999..=1.001).contains(&ratio), "{ratio}");
    assert_eq!(dtn_eigenvalue(-7, &p).unwrap(), dtn_eigenvalue(7, &p).unwrap());
}

#[test]
fn ntd_examples() {
    let p = params(1.0, 512);
    for m in [0i64, 1, 17, 300] {
        assert_eq!(
            ntd_eigenvalue(m, &p).unwrap(),
            1.0 / dtn_eigenvalue(m, &p).unwrap()
        );
    }
    assert!((ntd_eigenvalue(0, &p).unwrap() + 2.240_193_723_870_09).abs() < 1e-13);
    let s = (512.0 * ntd_eigenvalue(512, &p).unwrap()).abs();
    assert!((0.999..=1.001).contains(&s));
}

#[test]
fn gram_matches_direct_quadrature_and_closed_form() {
    for &kappa in &[0.5, 1.0, 3.0, 8.0] {
        for m in [0u32, 1, 2, 5, 10] {
            let p = params(kappa, 16);
            let g = poisson_gram(m as i64, &p).unwrap();
            let direct = gram_oracle(m, kappa);
            let closed = gram_closed_form(m, kappa);
            assert!(((g - direct) / direct).abs() < 1e-9, "m={m} kappa={kappa}");
            assert!(((g - closed) / closed).abs() < 1e-9, "m={m} kappa={kappa}");
        }
    }
    let g0 = poisson_gram(0, &params(1.0, 8)).unwrap();
    assert!((g0 - 0.4003679991734454).abs() < 1e-12, "{g0}");
}

#[test]
fn gram_positive_and_harmonic_limit() {
    let modes = DiskModes::new(params(1.0, 512)).unwrap();
    assert!(modes.gram().iter().all(|&g| g > 0.0));
    let g = modes.gram_at(256);
    assert!((512.0 * g - 1.0).abs() < 0.01);
    assert!(modes.gram_error().iter().zip(modes.gram()).all(|(e, g)| *e <= 1e-9 * g));
}

#[test]
fn symbol_consistency_at_mode_256() {
    for &kappa in &[1.0, 8.0] {
        let p = params(kappa, 256);
        let m = 256.0;
        let ntd = ntd_eigenvalue(256, &p).unwrap();
        assert!((m * ntd + 1.0).abs() < 0.01, "kappa={kappa}");
        let g = poisson_gram(256, &p).unwrap();
        assert!((2.0 * m * g - 1.0).abs() < 0.01, "kappa={kappa}");
    }
}

#[test]
fn boundary_operator_structure() {
    let ops = build_boundary_operators(&params(2.0, 64)).unwrap();
    let p2 = ops.p2.diagonal().unwrap();
    let p1 = ops.p1.diagonal().unwrap();
    for (a, b) in p2.iter().zip(p1) {
        assert!(((a * a) - b).norm() < 1e-14 * b.norm().max(1e-300) + 1e-30);
    }
    assert!(ops.ntd.is_hermitian() && ops.p1.is_hermitian() && ops.p2.is_hermitian());
    assert!(p2.iter().all(|z| z.re > 0.0));
    let pairs = [(&ops.ntd, &ops.p1), (&ops.ntd, &ops.p2), (&ops.p1, &ops.p2)];
    for (a, b) in pairs {
        let ab = a.compose(b).unwrap();
        let ba = b.compose(a).unwrap();
        assert_eq!(ab, ba);
    }
    let d0 = dtn_eigenvalue(0, &params(2.0, 64)).unwrap();
    assert_eq!(ops.ntd.operator_norm().unwrap(), (1.0 / d0).abs());
}

#[test]
fn ntd_norm_times_kappa_is_bessel_quotient() {
    // kappa ||P_ntd|| = I_0(kappa)/I_1(kappa), which tends to 1 from above.
    let mut last = f64::INFINITY;
    for &kappa in &[1.0, 2.0, 4.0, 8.0, 16.0] {
        let ops = build_boundary_operators(&params(kappa, 32)).unwrap();
        let scaled = kappa * ops.ntd.operator_norm().unwrap();
        let want = series_i(0, kappa) / series_i(1, kappa);
        assert!(((scaled - want) / want).abs() < 1e-12);
        assert!(scaled < last && scaled > 1.0);
        last = scaled;
    }
}

#[test]
fn order_tags() {
    let ops = build_boundary_operators(&params(1.0, 8)).unwrap();
    assert_eq!(ops.ntd.order(), Some(-1.0));
    assert_eq!(ops.p1.order(), Some(-1.0));
    assert_eq!(ops.p2.order(), Some(-0.5));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mode_sequences_are_monotone(kappa in 0.05f64..80.0) {
        let modes = DiskModes::new(params(kappa, 64)).unwrap();
        for w in modes.dtn().windows(2) {
            prop_assert!(w[0] < 0.0 && w[1] < w[0]);
        }
        for w in modes.gram().windows(2) {
            prop_assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn gram_certified_everywhere(kappa in 0.01f64..500.0, m in 0u32..4000) {
        let g = gram_certified(m, kappa).unwrap();
        prop_assert!(g.value > 0.0 && g.value <= 0.5 / (m as f64 + 1.0) + 1e-15);
    }
}
