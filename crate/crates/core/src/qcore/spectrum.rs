use crate::error::{Error, Result};

/// Values in `[-CONSTRUCTION_CLAMP, 0)` are treated as rounding noise.
const CONSTRUCTION_CLAMP: f64 = 1e-12;
/// Eigensolver output is noisier; this wider window applies there.
pub(crate) const EIGEN_CLAMP: f64 = 1e-10;
const TRACE_TOLERANCE: f64 = 1e-9;

/// Eigenvalues of a density matrix: nonnegative, summing to one, stored in
/// descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Validates, clamps tiny negatives to zero, renormalizes to unit sum and
    /// sorts descending.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_clamp(values, CONSTRUCTION_CLAMP)
    }

    pub(crate) fn with_clamp(mut values: Vec<f64>, clamp: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum("empty spectrum".into()));
        }
        for v in values.iter_mut() {
            if !v.is_finite() {
                return Err(Error::InvalidSpectrum(format!("non-finite value {v}")));
            }
            if *v < -clamp {
                return Err(Error::InvalidSpectrum(format!("negative value {v}")));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidSpectrum(format!("values sum to {sum}, not 1")));
        }
        for v in values.iter_mut() {
            *v /= sum;
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    /// The maximally mixed spectrum `{1/m, ..., 1/m}`.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSpectrum("dimension must be positive".into()));
        }
        Ok(Self {
            values: vec![1.0 / m as f64; m],
        })
    }

    /// The spectrum `{1, 0, ..., 0}` of a pure state.
    pub fn pure(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSpectrum("dimension must be positive".into()));
        }
        let mut values = vec![0.0; m];
        values[0] = 1.0;
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Largest eigenvalue.
    pub fn max(&self) -> f64 {
        self.values[0]
    }

    /// True when `self` majorizes `other` (same dimension required).
    pub fn majorizes(&self, other: &Spectrum, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let mut a = 0.0;
        let mut b = 0.0;
        self.values
            .iter()
            .zip(&other.values)
            .all(|(x, y)| {
                a += x;
                b += y;
                a + tol >= b
            })
    }

    /// Spectrum of the tensor product of two states.
    pub fn tensor(&self, other: &Spectrum) -> Spectrum {
        let mut values: Vec<f64> = self
            .values
            .iter()
            .flat_map(|a| other.values.iter().map(move |b| a * b))
            .collect();
        values.sort_by(|a, b| b.total_cmp(a));
        Spectrum { values }
    }
}

impl AsRef<[f64]> for Spectrum {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}
