use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use super::spectrum::EIGEN_CLAMP;
use super::{shannon_entropy, subentropy, von_neumann_entropy, CMatrix, Spectrum};
use crate::error::{Error, Result};

const HERMITIAN_TOLERANCE: f64 = 1e-12;
const TRACE_TOLERANCE: f64 = 1e-9;
const NORM_TOLERANCE: f64 = 1e-12;
const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
}

impl DensityMatrix {
    /// Validates hermiticity, trace and positivity.
    pub fn new(entries: CMatrix) -> Result<Self> {
        let rho = Self::check_structure(entries)?;
        let (values, _) = hermitian_eigen(&rho.entries)?;
        if let Some(v) = values.iter().find(|&&v| v < -EIGEN_CLAMP) {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {v}"
            )));
        }
        Ok(rho)
    }

    fn check_structure(entries: CMatrix) -> Result<Self> {
        let m = entries.nrows();
        if m == 0 || entries.ncols() != m {
            return Err(Error::InvalidDensityMatrix(format!(
                "shape {}x{} is not square and nonempty",
                entries.nrows(),
                entries.ncols()
            )));
        }
        for i in 0..m {
            for j in i..m {
                let d = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                if !d.is_finite() || d > HERMITIAN_TOLERANCE {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "not Hermitian at ({i}, {j}): deviation {d:e}"
                    )));
                }
            }
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs() > TRACE_TOLERANCE || tr.im.abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} is not 1")));
        }
        Ok(Self { entries })
    }

    /// Hermitizes `(A + A†)/2` and divides by the trace. Used by samplers whose
    /// output is positive semidefinite by construction.
    pub(crate) fn from_psd_unnormalized(mut a: CMatrix) -> Self {
        let m = a.nrows();
        for i in 0..m {
            for j in i..m {
                let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
                a[(i, j)] = avg;
                a[(j, i)] = avg.conj();
            }
        }
        let tr = a.trace().re;
        a /= Complex64::new(tr, 0.0);
        for i in 0..m {
            a[(i, i)].im = 0.0;
        }
        Self { entries: a }
    }

    /// `diag(p)` for a probability vector.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        let m = p.len();
        let entries = CMatrix::from_fn(m, m, |i, j| {
            if i == j {
                Complex64::new(p[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::new(entries)
    }

    /// `1/m` times the identity.
    pub fn maximally_mixed(m: usize) -> Result<Self> {
        Self::diagonal(&vec![1.0 / m as f64; m])
    }

    /// `|psi><psi|` for a normalized vector.
    pub fn projector(psi: &PureState) -> Self {
        let v = psi.amplitudes();
        Self::from_psd_unnormalized(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    /// Real diagonal, i.e. the outcome probabilities in the incoherent basis.
    pub fn diagonal_probabilities(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).collect()
    }

    /// `U rho U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: u.nrows(),
            });
        }
        Ok(Self::from_psd_unnormalized(u * &self.entries * u.adjoint()))
    }

    /// Convex combination `q self + (1 - q) other`.
    pub fn mix(&self, other: &DensityMatrix, q: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidArgument(format!("mixing weight {q}")));
        }
        let a = &self.entries * Complex64::new(q, 0.0) + &other.entries * Complex64::new(1.0 - q, 0.0);
        Ok(Self::from_psd_unnormalized(a))
    }

    /// Trace norm `||self - other||_1`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        let diff = &self.entries - &other.entries;
        let (values, _) = hermitian_eigen(&diff)?;
        Ok(values.iter().map(|v| v.abs()).sum())
    }
}

/// A normalized vector in `C^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidPureState("empty state".into()));
        }
        let norm = amplitudes.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidPureState(format!("norm {norm} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(v: DVector<Complex64>) -> Result<Self> {
        let norm = v.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidPureState(format!("cannot normalize, norm {norm}")));
        }
        Ok(Self {
            amplitudes: v / Complex64::new(norm, 0.0),
        })
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidPureState(format!("index {index} out of {dim}")));
        }
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// Euclidean distance between the amplitude vectors.
    pub fn distance(&self, other: &PureState) -> f64 {
        (&self.amplitudes - &other.amplitudes).norm()
    }
}

/// Entropy, subentropy and coherence of one state, in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Functionals {
    pub entropy: f64,
    pub subentropy: f64,
    pub coherence: f64,
    /// Entropy of the dephased state; `coherence = dephased_entropy - entropy`.
    pub dephased_entropy: f64,
}

impl Functionals {
    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        let spec = spectrum_of(rho)?;
        let entropy = von_neumann_entropy(&spec);
        let dephased_entropy = shannon_entropy(rho.diagonal_probabilities());
        Ok(Self {
            entropy,
            subentropy: subentropy(&spec),
            coherence: (dephased_entropy - entropy).max(0.0),
            dephased_entropy,
        })
    }
}

/// Eigenvalues (ascending order not guaranteed) and eigenvectors of a
/// Hermitian matrix.
pub(crate) fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let m = a.nrows();
    let eig = SymmetricEigen::try_new(a.clone(), f64::EPSILON, 1000 * m.max(8))
        .ok_or_else(|| Error::ConvergenceFailure(format!("{m}x{m} Hermitian eigenproblem")))?;
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

/// Spectrum of a density matrix, with a residual check on every eigenpair.
pub fn spectrum_of(rho: &DensityMatrix) -> Result<Spectrum> {
    let a = rho.entries();
    let m = rho.dim();
    let (values, vectors) = hermitian_eigen(a)?;
    for (k, &lambda) in values.iter().enumerate() {
        let v = vectors.column(k);
        let residual = (a * v - v * Complex64::new(lambda, 0.0)).norm();
        if residual > RESIDUAL_TOLERANCE * m as f64 {
            return Err(Error::ConvergenceFailure(format!(
                "eigenpair residual {residual:e} exceeds {:e}",
                RESIDUAL_TOLERANCE * m as f64
            )));
        }
    }
    Spectrum::with_clamp(values, EIGEN_CLAMP)
}

/// Completely dephases `rho` in the computational basis.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let m = rho.dim();
    let entries = CMatrix::from_fn(m, m, |i, j| {
        if i == j {
            rho.entries[(i, i)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    DensityMatrix { entries }
}

/// `S(diag rho) - S(rho)`, clamped at zero from below.
pub fn relative_entropy_coherence(rho: &DensityMatrix) -> Result<f64> {
    Ok(Functionals::of(rho)?.coherence)
}

/// Reduced state on the first factor of a row-major `m x n` bipartite vector.
pub fn partial_trace(psi: &PureState, m: usize, n: usize) -> Result<DensityMatrix> {
    if m == 0 || n == 0 || psi.dim() != m * n {
        return Err(Error::DimensionMismatch {
            expected: m * n,
            actual: psi.dim(),
        });
    }
    let a = CMatrix::from_row_slice(m, n, psi.amplitudes().as_slice());
    Ok(DensityMatrix::from_psd_unnormalized(&a * a.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus_state() -> DensityMatrix {
        let h = 0.5;
        DensityMatrix::new(CMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(h, 0.0)]))
            .unwrap()
    }

    #[test]
    fn rejects_invalid_matrices() {
        let non_herm = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0)]);
        assert!(DensityMatrix::new(non_herm).is_err());
        let bad_trace = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.6, 0.0)]);
        assert!(DensityMatrix::new(bad_trace).is_err());
        let indefinite = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.9, 0.0), c(0.9, 0.0), c(0.5, 0.0)]);
        assert!(matches!(
            DensityMatrix::new(indefinite),
            Err(Error::InvalidDensityMatrix(_))
        ));
        assert!(DensityMatrix::new(CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn dephase_examples() {
        let mm = DensityMatrix::maximally_mixed(3).unwrap();
        assert_eq!(dephase(&mm), mm);
        let d = dephase(&plus_state());
        assert_eq!(d.entries()[(0, 1)], c(0.0, 0.0));
        assert_eq!(d.entries()[(0, 0)], c(0.5, 0.0));
        assert_eq!(d.entries().trace(), plus_state().entries().trace());
    }

    #[test]
    fn coherence_examples() {
        let diag = DensityMatrix::diagonal(&[0.7, 0.2, 0.1]).unwrap();
        assert_eq!(relative_entropy_coherence(&diag).unwrap(), 0.0);
        assert_abs_diff_eq!(relative_entropy_coherence(&plus_state()).unwrap(), LN_2, epsilon = 1e-12);
        for m in 1..6 {
            let mm = DensityMatrix::maximally_mixed(m).unwrap();
            assert_abs_diff_eq!(relative_entropy_coherence(&mm).unwrap(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn spectrum_examples() {
        let s = spectrum_of(&DensityMatrix::maximally_mixed(4).unwrap()).unwrap();
        assert!(s.values().iter().all(|v| (v - 0.25).abs() < 1e-14));
        let s = spectrum_of(&DensityMatrix::diagonal(&[0.3, 0.7]).unwrap()).unwrap();
        assert_abs_diff_eq!(s.values()[0], 0.7, epsilon = 1e-14);
        assert_abs_diff_eq!(s.values()[1], 0.3, epsilon = 1e-14);
        let s = spectrum_of(&plus_state()).unwrap();
        assert_abs_diff_eq!(s.values()[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.values()[1], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn partial_trace_examples() {
        let prod = PureState::basis(6, 0).unwrap();
        let rho = partial_trace(&prod, 2, 3).unwrap();
        assert_eq!(rho.diagonal_probabilities(), vec![1.0, 0.0]);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::new(DVector::from_vec(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]))
            .unwrap();
        let rho = partial_trace(&bell, 2, 2).unwrap();
        assert_abs_diff_eq!(rho.entries()[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.entries()[(0, 1)].norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.entries().trace().re, 1.0, epsilon = 1e-15);

        assert!(matches!(
            partial_trace(&bell, 3, 2),
            Err(Error::DimensionMismatch { expected: 6, actual: 4 })
        ));
    }

    #[test]
    fn pure_state_norm_contract() {
        let v = DVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(PureState::new(v.clone()).is_err());
        let p = PureState::normalized(v).unwrap();
        assert_abs_diff_eq!(p.amplitudes().norm(), 1.0, epsilon = 1e-15);
        assert!(PureState::normalized(DVector::zeros(3)).is_err());
    }

    #[test]
    fn functionals_identity() {
        let rho = plus_state().mix(&DensityMatrix::diagonal(&[0.9, 0.1]).unwrap(), 0.4).unwrap();
        let f = Functionals::of(&rho).unwrap();
        assert_abs_diff_eq!(f.coherence, f.dephased_entropy - f.entropy, epsilon = 1e-9);
        assert!(f.subentropy <= crate::qcore::SUBENTROPY_SUPREMUM + 1e-9);
    }
}
