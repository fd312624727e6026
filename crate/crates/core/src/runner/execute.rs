use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use super::config::{ExperimentConfig, ExperimentKind};
use super::record::{ResultRecord, ResultRow, append_jsonl, write_csv};
use crate::circle_ops::{Arc, PiecewiseCoefficient};
use crate::disk_model::DiskParameters;
use crate::error::{Error, Result};
use crate::krein_reduction::{InverseMethod, KreinModel};
use crate::psido_lab::{cut_decay_experiment, positive_cut_experiment, product_experiment};
use crate::spectral::{FitWindow, tail_fit, window_sup};
use crate::symbol_constants::{
    SymbolConstantReport, c_cut_positive, c_neumann_dirichlet, c_psido_product, c_robin_pair,
};

/// Relative tolerance used when a config gives none.
pub const DEFAULT_TOLERANCE: f64 = 0.1;

/// Name of the append-only results log inside the output directory.
pub const RESULTS_LOG: &str = "results.jsonl";

fn arc(turns: [f64; 2]) -> Result<Arc> {
    Arc::new(turns[0], turns[1])
}

fn build_all(specs: &[super::config::CoefficientSpec]) -> Result<Vec<PiecewiseCoefficient>> {
    specs.iter().map(|s| s.build()).collect()
}

/// Analytic constant raised to the law exponent, where one exists.
fn analytic(cfg: &ExperimentConfig) -> Result<Option<SymbolConstantReport>> {
    Ok(match &cfg.kind {
        ExperimentKind::NeumannDirichlet => Some(c_neumann_dirichlet(2)?),
        ExperimentKind::RobinPair { b1, b2, .. } => {
            Some(c_robin_pair(&b2.build()?.sub(&b1.build()?), 2)?)
        }
        ExperimentKind::PositiveCut { t, arc_turns } => Some(c_cut_positive(
            &PiecewiseCoefficient::real_constant(1.0),
            *t,
            1,
            arc(*arc_turns)?,
        )?),
        ExperimentKind::PsidoProduct {
            coefficients,
            orders,
        } => Some(c_psido_product(&build_all(coefficients)?, orders, 1)?),
        ExperimentKind::LinftyBound { .. } | ExperimentKind::CutDecay { .. } => None,
    })
}

fn disk_model(cfg: &ExperimentConfig, n: usize) -> Result<KreinModel> {
    let kappa = cfg
        .kappa
        .ok_or_else(|| Error::Config("kappa is required".into()))?;
    KreinModel::new(&DiskParameters::new(kappa, n)?)
}

fn relative_gap(fit: f64, target: f64) -> f64 {
    if target == 0.0 {
        fit.abs()
    } else {
        (fit - target).abs() / target.abs()
    }
}

/// Evaluates one grid point.
fn evaluate_point(cfg: &ExperimentConfig, n: usize, target: Option<f64>) -> Result<ResultRow> {
    let p = cfg.fit_exponent();
    let window = || FitWindow::from_fractions(cfg.window[0], cfg.window[1], n);
    let fitted_row = |limit: f64, residual: f64, w: FitWindow| ResultRow {
        n,
        j_lo: w.j_lo,
        j_hi: w.j_hi,
        fitted_limit: limit,
        residual,
        analytic: target,
        rel_gap: target.map(|a| relative_gap(limit, a)),
    };
    match &cfg.kind {
        ExperimentKind::NeumannDirichlet => {
            let km = disk_model(cfg, n)?;
            let s = km.snumbers(&km.neumann_dirichlet_kernel())?;
            let fit = tail_fit(&s, p, window()?)?;
            Ok(fitted_row(fit.limit, fit.residual, fit.window))
        }
        ExperimentKind::RobinPair {
            b1,
            b2,
            variant,
            method,
        } => {
            let km = disk_model(cfg, n)?;
            let s = km.robin_pair_snumbers(&b1.build()?, &b2.build()?, *variant, method.method())?;
            let fit = tail_fit(&s, p, window()?)?;
            Ok(fitted_row(fit.limit, fit.residual, fit.window))
        }
        ExperimentKind::LinftyBound { b1, b2, variant, .. } => {
            let b2 = b2
                .as_ref()
                .ok_or_else(|| Error::Config("linfty_bound needs b2 after expansion".into()))?;
            let km = disk_model(cfg, n)?;
            let s = km.robin_pair_snumbers(&b1.build()?, &b2.build()?, *variant, InverseMethod::Direct)?;
            let w = window()?;
            let sup = window_sup(&s, p, w)?;
            let low = (w.j_lo..=w.j_hi)
                .map(|j| s.s(j) * (j as f64).powf(p))
                .fold(f64::INFINITY, f64::min);
            let spread = if sup > 0.0 { (sup - low) / sup } else { 0.0 };
            Ok(ResultRow {
                n,
                j_lo: w.j_lo,
                j_hi: w.j_hi,
                fitted_limit: sup,
                residual: spread,
                analytic: None,
                rel_gap: None,
            })
        }
        ExperimentKind::CutDecay { t, arc_turns, .. } => {
            let fit = cut_decay_experiment(*t, n, arc(*arc_turns)?)?;
            Ok(ResultRow {
                n,
                j_lo: fit.j_lo,
                j_hi: fit.j_hi,
                fitted_limit: fit.exponent,
                residual: fit.residual,
                analytic: Some(*t),
                rel_gap: Some(fit.exponent - t),
            })
        }
        ExperimentKind::PositiveCut { t, arc_turns } => {
            let c = positive_cut_experiment(*t, n, arc(*arc_turns)?, Some(window()?))?;
            Ok(fitted_row(c.fit.limit, c.fit.residual, c.fit.window))
        }
        ExperimentKind::PsidoProduct {
            coefficients,
            orders,
        } => {
            let c = product_experiment(&build_all(coefficients)?, orders, n, Some(window()?))?;
            Ok(fitted_row(c.fit.limit, c.fit.residual, c.fit.window))
        }
    }
}

fn kind_name(kind: &ExperimentKind) -> &'static str {
    match kind {
        ExperimentKind::NeumannDirichlet => "neumann_dirichlet",
        ExperimentKind::RobinPair { .. } => "robin_pair",
        ExperimentKind::LinftyBound { .. } => "linfty_bound",
        ExperimentKind::CutDecay { .. } => "cut_decay",
        ExperimentKind::PositiveCut { .. } => "positive_cut",
        ExperimentKind::PsidoProduct { .. } => "psido_product",
    }
}

/// Pass/fail verdict and diagnostic from the finished rows.
fn judge(cfg: &ExperimentConfig, rows: &mut [ResultRow]) -> (bool, Option<String>) {
    let tol = cfg.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    let last = rows.last().expect("at least one cutoff");
    let mut problems = Vec::new();
    match &cfg.kind {
        ExperimentKind::LinftyBound { .. } => {
            for i in 1..rows.len() {
                let prev = rows[i - 1].fitted_limit;
                rows[i].rel_gap = Some(relative_gap(rows[i].fitted_limit, prev));
            }
            if rows.iter().any(|r| !r.fitted_limit.is_finite()) {
                problems.push("window sup is not finite".to_string());
            }
            for r in rows.iter().skip(1) {
                let change = r.rel_gap.unwrap_or(0.0);
                if !(change < tol) {
                    problems.push(format!("N={}: sup moved by {change:.4} >= {tol}", r.n));
                }
            }
        }
        ExperimentKind::CutDecay { t, margin, .. } => {
            if !(last.fitted_limit >= t + margin) {
                problems.push(format!(
                    "N={}: decay exponent {:.4} below t + margin = {}",
                    last.n,
                    last.fitted_limit,
                    t + margin
                ));
            }
        }
        _ => {
            let gap = last.rel_gap.unwrap_or(f64::INFINITY);
            if !(gap <= tol) {
                problems.push(format!("N={}: relative gap {gap:.4} > {tol}", last.n));
            }
        }
    }
    if let Some(trend_tol) = cfg.trend_tolerance
        && let [.., a, b] = &*rows {
            let change = relative_gap(b.fitted_limit, a.fitted_limit);
            if !(change < trend_tol) {
                problems.push(format!(
                    "N={} -> {}: fitted limit moved by {change:.4} >= {trend_tol}",
                    a.n, b.n
                ));
            }
        }
    if problems.is_empty() {
        (true, None)
    } else {
        (false, Some(problems.join("; ")))
    }
}

fn seed_of(cfg: &ExperimentConfig) -> Option<u64> {
    match &cfg.kind {
        ExperimentKind::LinftyBound { seed, .. } => Some(*seed),
        _ => None,
    }
}

fn failed(cfg: &ExperimentConfig, diagnostic: String, secs: f64) -> ResultRecord {
    ResultRecord {
        name: cfg.name.clone(),
        kind: kind_name(&cfg.kind).into(),
        config_digest: cfg.digest(),
        rows: Vec::new(),
        analytic: None,
        quadrature_error: None,
        tolerance: cfg.tolerance,
        passed: false,
        diagnostic: Some(diagnostic),
        seed: seed_of(cfg),
        wall_clock_s: secs,
        version: env!("CARGO_PKG_VERSION").into(),
    }
}

fn assemble(
    cfg: &ExperimentConfig,
    constant: Option<SymbolConstantReport>,
    points: Vec<(Result<ResultRow>, f64)>,
) -> ResultRecord {
    let secs: f64 = points.iter().map(|p| p.1).sum();
    let mut rows = Vec::with_capacity(points.len());
    for (point, _) in points {
        match point {
            Ok(r) => rows.push(r),
            Err(e) => return failed(cfg, e.to_string(), secs),
        }
    }
    let (passed, diagnostic) = judge(cfg, &mut rows);
    ResultRecord {
        name: cfg.name.clone(),
        kind: kind_name(&cfg.kind).into(),
        config_digest: cfg.digest(),
        rows,
        analytic: constant.map(|c| c.predicted_limit(cfg.law_exponent())),
        quadrature_error: constant.map(|c| c.quadrature_error),
        tolerance: cfg.tolerance,
        passed,
        diagnostic,
        seed: seed_of(cfg),
        wall_clock_s: secs,
        version: env!("CARGO_PKG_VERSION").into(),
    }
}

/// An expanded config with its analytic constant, or the config that was
/// rejected and why.
type Prepared = (ExperimentConfig, Result<Option<SymbolConstantReport>>);

fn prepare(configs: &[ExperimentConfig]) -> Vec<Prepared> {
    let mut out = Vec::new();
    for cfg in configs {
        match cfg.validate().and_then(|_| cfg.expand()) {
            Ok(list) => out.extend(list.into_iter().map(|c| {
                let a = analytic(&c);
                (c, a)
            })),
            Err(e) => out.push((cfg.clone(), Err(e))),
        }
    }
    out
}

fn timed(cfg: &ExperimentConfig, n: usize, target: Option<f64>) -> (Result<ResultRow>, f64) {
    let start = Instant::now();
    let r = evaluate_point(cfg, n, target);
    (r, start.elapsed().as_secs_f64())
}

/// Runs one experiment sequentially; every error ends up in a failed
/// record.
pub fn run(config: &ExperimentConfig) -> Vec<ResultRecord> {
    run_all(std::slice::from_ref(config), 1)
}

/// Runs all experiments with grid points spread over `threads` workers.
///
/// Dense kernels run single-threaded inside each point, so results do not
/// depend on the thread count.
pub fn run_all(configs: &[ExperimentConfig], threads: usize) -> Vec<ResultRecord> {
    faer::set_global_parallelism(faer::Par::Seq);
    let prepared = prepare(configs);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool");
    let jobs: Vec<(usize, usize)> = prepared
        .iter()
        .enumerate()
        .filter(|(_, p)| p.1.is_ok())
        .flat_map(|(i, p)| p.0.cutoffs.iter().map(move |&n| (i, n)))
        .collect();
    let results: Vec<(Result<ResultRow>, f64)> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, n)| {
                let (cfg, constant) = &prepared[i];
                let target = constant
                    .as_ref()
                    .ok()
                    .and_then(|c| c.map(|c| c.predicted_limit(cfg.law_exponent())));
                timed(cfg, n, target)
            })
            .collect()
    });
    let mut results = results.into_iter();
    prepared
        .iter()
        .map(|(cfg, constant)| match constant {
            Ok(constant) => {
                let points: Vec<_> = results.by_ref().take(cfg.cutoffs.len()).collect();
                assemble(cfg, *constant, points)
            }
            Err(e) => failed(cfg, e.to_string(), 0.0),
        })
        .collect()
}

/// Writes one CSV per record and appends all records to the results log.
pub fn persist(records: &[ResultRecord], configs: &[ExperimentConfig], out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::Config(format!("{}: {e}", out_dir.display())))?;
    for r in records {
        let name = configs
            .iter()
            .find(|c| c.name == r.name)
            .map(|c| c.csv_name())
            .unwrap_or_else(|| format!("{}.csv", r.name));
        // A rejected config may carry a name that is not a safe file name.
        let safe = !r.name.is_empty()
            && r.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c));
        if safe {
            write_csv(r, &out_dir.join(name))?;
        }
    }
    append_jsonl(records, &out_dir.join(RESULTS_LOG))
}
