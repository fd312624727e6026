use serde::{Deserialize, Serialize};

use super::spectrum::SingularSpectrum;
use crate::error::{Error, Result};

/// Smallest admissible first index of a fit window.
pub const MIN_J_LO: usize = 16;

/// Residual above which no power law is reported.
pub const MAX_RESIDUAL: f64 = 0.5;

/// Inclusive 1-based index window `[j_lo, j_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitWindow {
    pub j_lo: usize,
    pub j_hi: usize,
}

impl FitWindow {
    /// Window checked against the truncation margin `j_lo >= 16`, `j_hi <= N/4`.
    pub fn checked(j_lo: usize, j_hi: usize, source_n: usize) -> Result<Self> {
        let w = Self { j_lo, j_hi };
        w.validate(source_n)?;
        Ok(w)
    }

    /// `[N/8, N/4]`.
    pub fn default_for(source_n: usize) -> Result<Self> {
        Self::checked(source_n / 8, source_n / 4, source_n)
    }

    /// `[round(lo N), round(hi N)]`.
    pub fn from_fractions(lo: f64, hi: f64, source_n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi < 0.0 {
            return Err(Error::WindowTooSmall(format!("invalid fractions [{lo}, {hi}]")));
        }
        let n = source_n as f64;
        Self::checked((lo * n).round() as usize, (hi * n).round() as usize, source_n)
    }

    pub fn validate(&self, source_n: usize) -> Result<()> {
        if self.j_lo < MIN_J_LO {
            return Err(Error::WindowTooSmall(format!(
                "j_lo = {} is below {MIN_J_LO}",
                self.j_lo
            )));
        }
        if self.j_hi > source_n / 4 {
            return Err(Error::WindowTooSmall(format!(
                "j_hi = {} exceeds N/4 = {} for N = {source_n}",
                self.j_hi,
                source_n / 4
            )));
        }
        if self.j_hi <= self.j_lo {
            return Err(Error::WindowTooSmall(format!(
                "empty window [{}, {}]",
                self.j_lo, self.j_hi
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.j_hi + 1 - self.j_lo
    }

    pub fn is_empty(&self) -> bool {
        self.j_hi < self.j_lo
    }
}

/// Estimated limit of `s_j j^p` over a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub exponent: f64,
    pub limit: f64,
    pub window: FitWindow,
    /// `max_j |s_j j^p - limit| / limit` over the window.
    pub residual: f64,
    pub source_n: usize,
}

fn scaled_window(s: &SingularSpectrum, p: f64, window: FitWindow) -> Result<Vec<f64>> {
    window.validate(s.source_n())?;
    if window.j_hi > s.len() {
        return Err(Error::WindowTooSmall(format!(
            "window end {} beyond spectrum length {}",
            window.j_hi,
            s.len()
        )));
    }
    Ok((window.j_lo..=window.j_hi)
        .map(|j| s.s(j) * (j as f64).powf(p))
        .collect())
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Median of `s_j j^p` over the window, refusing when the spread exceeds 50%.
///
/// The median is insensitive to the two-fold staircase created by the `±m`
/// symmetry of the disk.
pub fn tail_fit(s: &SingularSpectrum, p: f64, window: FitWindow) -> Result<AsymptoticFit> {
    let mut v = scaled_window(s, p, window)?;
    let limit = median(&mut v);
    let residual = if limit == 0.0 {
        if v.iter().all(|&x| x == 0.0) { 0.0 } else { f64::INFINITY }
    } else {
        v.iter()
            .map(|x| (x - limit).abs() / limit)
            .fold(0.0, f64::max)
    };
    if residual > MAX_RESIDUAL {
        return Err(Error::NoPowerLaw {
            exponent: p,
            residual,
        });
    }
    Ok(AsymptoticFit {
        exponent: p,
        limit,
        window,
        residual,
        source_n: s.source_n(),
    })
}

/// `max_j s_j j^p` over the window (upper-bound experiments).
pub fn window_sup(s: &SingularSpectrum, p: f64, window: FitWindow) -> Result<f64> {
    Ok(scaled_window(s, p, window)?.into_iter().fold(0.0, f64::max))
}

/// Least-squares decay exponent `q` in `s_j ~ j^{-q}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub j_lo: usize,
    pub j_hi: usize,
    /// Root-mean-square residual of `ln s_j` about the fitted line.
    pub residual: f64,
    /// Values at or below this level are rounding noise and excluded.
    pub floor: f64,
}

/// Fits `ln s_j = c - q ln j` over `[j_lo, j_max]`, stopping early at the
/// resolution floor `len * eps * s_1`.
///
/// A zero spectrum decays infinitely fast and yields `q = +inf`.
pub fn decay_exponent_fit(s: &SingularSpectrum, j_lo: usize, j_max: usize) -> Result<DecayFit> {
    let s1 = s.values().first().copied().unwrap_or(0.0);
    if s1 == 0.0 {
        return Ok(DecayFit {
            exponent: f64::INFINITY,
            j_lo,
            j_hi: j_lo,
            residual: 0.0,
            floor: 0.0,
        });
    }
    let floor = s.len() as f64 * f64::EPSILON * s1;
    let j_max = j_max.min(s.len());
    let mut j_hi = j_lo;
    while j_hi < j_max && s.s(j_hi + 1) > floor {
        j_hi += 1;
    }
    if j_lo > s.len() || s.s(j_lo) <= floor || j_hi < j_lo + 3 {
        return Err(Error::WindowTooSmall(format!(
            "fewer than 4 singular values above the floor {floor:e} from j = {j_lo}"
        )));
    }
    let pts: Vec<(f64, f64)> = (j_lo..=j_hi)
        .map(|j| ((j as f64).ln(), s.s(j).ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let residual = (pts
        .iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(DecayFit {
        exponent: -slope,
        j_lo,
        j_hi,
        residual,
        floor,
    })
}
