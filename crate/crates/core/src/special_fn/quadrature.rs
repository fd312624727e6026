use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MAX_NODES: usize = 4096;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate `f` over `[a, b]` with the affinely mapped rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n_f = n as f64;
    let dp = n_f * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > MAX_NODES {
        return Err(Error::Domain(format!(
            "Gauss-Legendre node count must be in 1..={MAX_NODES}, got {n}"
        )));
    }
    if n == 1 {
        return Ok(QuadratureRule {
            nodes: vec![0.0],
            weights: vec![2.0],
        });
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let n_f = n as f64;
    // Roots in the upper half, largest first; mirrored afterwards.
    for i in 0..n / 2 {
        let theta = std::f64::consts::PI * (i as f64 + 0.75) / (n_f + 0.5);
        let mut x = theta.cos() * (1.0 - (n_f - 1.0) / (8.0 * n_f * n_f * n_f));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 4.0 * f64::EPSILON * x.abs() {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d.is_finite() { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        let (_, d) = legendre_with_derivative(n, 0.0);
        nodes[n / 2] = 0.0;
        weights[n / 2] = 2.0 / (d * d);
    }
    Ok(QuadratureRule { nodes, weights })
}

fn panel_rules() -> &'static (QuadratureRule, QuadratureRule) {
    static RULES: OnceLock<(QuadratureRule, QuadratureRule)> = OnceLock::new();
    RULES.get_or_init(|| (gauss_legendre(20).unwrap(), gauss_legendre(40).unwrap()))
}

/// Integral with an error estimate obtained from node doubling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certified {
    pub value: f64,
    pub error: f64,
}

/// Adaptive bisection driven by a 20/40-node comparison on each panel.
///
/// Panels are split until the doubled-rule difference falls below
/// `max(rel_tol * |panel value|, abs_tol)`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Certified> {
    if b <= a {
        return Ok(Certified { value: 0.0, error: 0.0 });
    }
    let (coarse, fine) = panel_rules();
    let mut stack = vec![(a, b, 0u32)];
    let mut value = 0.0;
    let mut error = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let c = coarse.integrate(lo, hi, f);
        let v = fine.integrate(lo, hi, f);
        let diff = (v - c).abs();
        let allowed = (rel_tol * v.abs()).max(abs_tol);
        if diff <= allowed || depth >= 48 {
            if depth >= 48 && diff > allowed {
                return Err(Error::Quadrature(format!(
                    "adaptive bisection exhausted near [{lo}, {hi}] (difference {diff:e})"
                )));
            }
            value += v;
            error += diff;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Ok(Certified { value, error })
}
