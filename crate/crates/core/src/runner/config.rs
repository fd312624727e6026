use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::circle_ops::{Arc, PiecewiseCoefficient, TrigPoly};
use crate::error::{Error, Result};
use crate::krein_reduction::{DEFAULT_SERIES_DELTA, InverseMethod, PairVariant};
use crate::spectral::FitWindow;

/// Real piecewise trigonometric polynomial: `breaks_turns` are the interior
/// jump points in `(0, 1)`, and piece `i` is
/// `a0 + Σ cos[k-1] cos kθ + Σ sin[k-1] sin kθ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    #[serde(default)]
    pub breaks_turns: Vec<f64>,
    pub pieces: Vec<PieceSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    #[serde(default)]
    pub a0: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl CoefficientSpec {
    pub fn constant(c: f64) -> Self {
        Self {
            breaks_turns: Vec::new(),
            pieces: vec![PieceSpec {
                a0: c,
                cos: Vec::new(),
                sin: Vec::new(),
            }],
        }
    }

    pub fn build(&self) -> Result<PiecewiseCoefficient> {
        if self.pieces.len() != self.breaks_turns.len() + 1 {
            return Err(Error::Config(format!(
                "{} breaks need {} pieces, got {}",
                self.breaks_turns.len(),
                self.breaks_turns.len() + 1,
                self.pieces.len()
            )));
        }
        let mut edges = vec![0.0];
        edges.extend_from_slice(&self.breaks_turns);
        edges.push(1.0);
        let pieces = edges
            .windows(2)
            .zip(&self.pieces)
            .map(|(e, p)| {
                Ok((
                    Arc::new(e[0], e[1])?,
                    TrigPoly::from_real_series(p.a0, &p.cos, &p.sin)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        PiecewiseCoefficient::from_pieces(pieces)
    }
}

fn zero_spec() -> CoefficientSpec {
    CoefficientSpec::constant(0.0)
}

fn default_margin() -> f64 {
    0.5
}

fn default_bound() -> f64 {
    4.0
}

fn default_samples() -> usize {
    1
}

/// How the Robin inverse is computed.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodSpec {
    #[default]
    Direct,
    Series,
}

/// Experiment family and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExperimentKind {
    /// `s_j j^2` of the Neumann minus Dirichlet resolvent against `C₀²`.
    NeumannDirichlet,
    /// `s_j j^3` of a Robin pair difference against `C(g⁰)³`.
    RobinPair {
        #[serde(default = "zero_spec")]
        b1: CoefficientSpec,
        b2: CoefficientSpec,
        #[serde(default = "full_variant")]
        variant: PairVariant,
        #[serde(default)]
        method: MethodSpec,
    },
    /// `max s_j j^3` over the window, compared across cutoffs. Without `b2`,
    /// `samples` random coefficients with sup norm at most `bound` are drawn
    /// from `seed`.
    LinftyBound {
        #[serde(default = "zero_spec")]
        b1: CoefficientSpec,
        #[serde(default)]
        b2: Option<CoefficientSpec>,
        #[serde(default = "default_samples")]
        samples: usize,
        #[serde(default)]
        seed: u64,
        #[serde(default = "default_bound")]
        bound: f64,
        #[serde(default = "full_variant")]
        variant: PairVariant,
    },
    /// Decay exponent of the cross cut `1_A P 1_{A^c}`; passes when it
    /// exceeds `t + margin`.
    CutDecay {
        t: f64,
        arc_turns: [f64; 2],
        #[serde(default = "default_margin")]
        margin: f64,
    },
    /// `s_j j^t` of `1_A P 1_A` against `c(P₍₊₎)^t`.
    PositiveCut { t: f64, arc_turns: [f64; 2] },
    /// `s_j j^t` of `b₁ P₁ ... P_l b_{l+1}` against `c(P)^t`.
    PsidoProduct {
        coefficients: Vec<CoefficientSpec>,
        orders: Vec<f64>,
    },
}

fn full_variant() -> PairVariant {
    PairVariant::Full
}

fn default_window() -> [f64; 2] {
    [0.125, 0.25]
}

/// One experiment over a list of cutoffs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Names the CSV file and the records.
    pub name: String,
    #[serde(flatten)]
    pub kind: ExperimentKind,
    /// `κ` with `λ = -κ²`; disk experiments only.
    #[serde(default)]
    pub kappa: Option<f64>,
    /// Strictly increasing cutoffs `N`.
    pub cutoffs: Vec<usize>,
    /// Fit exponent `p`; defaults to the law's own exponent.
    #[serde(default)]
    pub exponent: Option<f64>,
    /// Fit window as fractions of `N`.
    #[serde(default = "default_window")]
    pub window: [f64; 2],
    /// Largest accepted relative gap at the largest cutoff (for `cut_decay`
    /// this is unused; for `linfty_bound` it bounds the change across
    /// consecutive cutoffs).
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// Largest accepted relative change of the fitted limit between the
    /// last two cutoffs.
    #[serde(default)]
    pub trend_tolerance: Option<f64>,
    /// CSV path, relative to the output directory; defaults to `<name>.csv`.
    #[serde(default)]
    pub output: Option<String>,
}

/// A config file: a list of `[[experiment]]` tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub experiment: Vec<ExperimentConfig>,
}

pub fn parse_config(text: &str) -> Result<Vec<ExperimentConfig>> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    Ok(file.experiment)
}

pub fn load_config(path: &Path) -> Result<Vec<ExperimentConfig>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

impl ExperimentConfig {
    /// Natural exponent of the law being tested.
    pub fn law_exponent(&self) -> f64 {
        match &self.kind {
            ExperimentKind::NeumannDirichlet => 2.0,
            ExperimentKind::RobinPair { .. } | ExperimentKind::LinftyBound { .. } => 3.0,
            ExperimentKind::CutDecay { t, .. } | ExperimentKind::PositiveCut { t, .. } => *t,
            ExperimentKind::PsidoProduct { orders, .. } => -orders.iter().sum::<f64>(),
        }
    }

    pub fn fit_exponent(&self) -> f64 {
        self.exponent.unwrap_or_else(|| self.law_exponent())
    }

    pub fn needs_kappa(&self) -> bool {
        matches!(
            self.kind,
            ExperimentKind::NeumannDirichlet
                | ExperimentKind::RobinPair { .. }
                | ExperimentKind::LinftyBound { .. }
        )
    }

    pub fn csv_name(&self) -> String {
        self.output.clone().unwrap_or_else(|| format!("{}.csv", self.name))
    }

    /// Structural checks that need no numerics.
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty()
            || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
        {
            return Err(Error::Config(format!(
                "experiment name {:?} must be nonempty ASCII letters, digits, '-', '_' or '.'",
                self.name
            )));
        }
        if self.cutoffs.is_empty() || self.cutoffs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("cutoffs must be nonempty and strictly increasing".into()));
        }
        if self.needs_kappa() && !self.kappa.is_some_and(|k| k > 0.0 && k.is_finite()) {
            return Err(Error::Config("this experiment needs kappa > 0".into()));
        }
        if !matches!(self.kind, ExperimentKind::CutDecay { .. }) {
            for &n in &self.cutoffs {
                FitWindow::from_fractions(self.window[0], self.window[1], n)?;
            }
        }
        Ok(())
    }

    /// Config digest: SHA-256 of the canonical JSON encoding.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("configs serialize");
        Sha256::digest(&json)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// Random-sample experiments expand to one experiment per sample with
    /// the drawn coefficient written out; everything else is returned as is.
    pub fn expand(&self) -> Result<Vec<ExperimentConfig>> {
        let ExperimentKind::LinftyBound {
            b1,
            b2: None,
            samples,
            seed,
            bound,
            variant,
        } = &self.kind
        else {
            return Ok(vec![self.clone()]);
        };
        let mut rng = ChaCha8Rng::seed_from_u64(*seed);
        (0..*samples)
            .map(|i| {
                let spec = random_bounded_spec(&mut rng, *bound)?;
                let mut c = self.clone();
                c.name = format!("{}_s{i}", self.name);
                c.output = None;
                c.kind = ExperimentKind::LinftyBound {
                    b1: b1.clone(),
                    b2: Some(spec),
                    samples: 1,
                    seed: *seed,
                    bound: *bound,
                    variant: *variant,
                };
                Ok(c)
            })
            .collect()
    }
}

impl MethodSpec {
    pub fn method(self) -> InverseMethod {
        match self {
            Self::Direct => InverseMethod::Direct,
            Self::Series => InverseMethod::NeumannSeries {
                delta: DEFAULT_SERIES_DELTA,
            },
        }
    }
}

/// Random real coefficient: one to three jumps, piece constants, and a
/// shared trigonometric part of degree at most 3, scaled so the sampled sup
/// norm lies in `[bound/2, bound]`.
pub fn random_bounded_spec(rng: &mut ChaCha8Rng, bound: f64) -> Result<CoefficientSpec> {
    if !(bound > 0.0) {
        return Err(Error::Config(format!("bound {bound} must be positive")));
    }
    let jumps = rng.random_range(1..=3usize);
    let mut breaks: Vec<f64> = (0..jumps)
        .map(|_| (rng.random_range(0.05..0.95f64) * 64.0).round() / 64.0)
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let degree = rng.random_range(0..=3usize);
    let cos: Vec<f64> = (0..degree).map(|_| rng.random_range(-0.5..0.5)).collect();
    let sin: Vec<f64> = (0..degree).map(|_| rng.random_range(-0.5..0.5)).collect();
    let pieces: Vec<PieceSpec> = (0..=breaks.len())
        .map(|_| PieceSpec {
            a0: rng.random_range(-1.0..1.0),
            cos: cos.clone(),
            sin: sin.clone(),
        })
        .collect();
    let raw = CoefficientSpec {
        breaks_turns: breaks,
        pieces,
    };
    let sup = raw.build()?.sup_norm();
    let target = bound * rng.random_range(0.5..1.0);
    let s = if sup > 0.0 { target / sup } else { 1.0 };
    Ok(CoefficientSpec {
        breaks_turns: raw.breaks_turns,
        pieces: raw
            .pieces
            .into_iter()
            .map(|p| PieceSpec {
                a0: p.a0 * s,
                cos: p.cos.iter().map(|c| c * s).collect(),
                sin: p.sin.iter().map(|c| c * s).collect(),
            })
            .collect(),
    })
}
