use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Descending nonnegative sequence `s_1 >= s_2 >= ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    values: Vec<f64>,
    source_n: usize,
}

impl SingularSpectrum {
    /// Validates order and sign; entries down to `-1e-12 * s_1` are clamped to 0.
    pub fn new(values: Vec<f64>, source_n: usize) -> Result<Self> {
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("singular values must be finite".into()));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Domain("singular values must be sorted descending".into()));
        }
        let floor = -1e-12 * values.first().copied().unwrap_or(0.0).abs();
        if values.iter().any(|&x| x < floor) {
            return Err(Error::Domain("singular values must be nonnegative".into()));
        }
        let values = values.into_iter().map(|x| x.max(0.0)).collect();
        Ok(Self { values, source_n })
    }

    /// Sorts before validating.
    pub fn from_unsorted(mut values: Vec<f64>, source_n: usize) -> Result<Self> {
        values.sort_by(|a, b| b.total_cmp(a));
        Self::new(values, source_n)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source_n(&self) -> usize {
        self.source_n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `s_j` with 1-based `j`.
    pub fn s(&self, j: usize) -> f64 {
        self.values[j - 1]
    }

    /// Union of two spectra counted with multiplicity.
    pub fn merge(&self, other: &Self) -> Self {
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        values.sort_by(|a, b| b.total_cmp(a));
        Self {
            values,
            source_n: self.source_n.max(other.source_n),
        }
    }
}

/// `#{j : s_j >= 1/a}`; zero for `a <= 0`.
pub fn counting_function(s: &SingularSpectrum, a: f64) -> usize {
    if !(a > 0.0) {
        return 0;
    }
    let threshold = 1.0 / a;
    s.values.partition_point(|&x| x >= threshold)
}
