//! Core state types and deterministic spectral functionals.
//!
//! All entropic quantities are in nats. The incoherent basis is the
//! computational basis of the stored matrix, and bipartite amplitudes are
//! indexed row-major as `(i, j) -> i * n + j`.

mod spectrum;
mod state;
mod subentropy;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use spectrum::Spectrum;
pub use state::{
    dephase, partial_trace, relative_entropy_coherence, spectrum_of, DensityMatrix, Functionals,
    PureState,
};
pub use subentropy::{subentropy, x_pow_m_log_x_taylor_coefficient};

/// Dense complex matrix used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;

/// Euler–Mascheroni constant, to 30 digits (rounded to `f64`).
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// Supremum of the subentropy over all states of any dimension.
pub const SUBENTROPY_SUPREMUM: f64 = 1.0 - EULER_GAMMA;

/// `-sum_j p_j ln p_j` with `0 ln 0 = 0`.
pub(crate) fn shannon_entropy<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

/// Von Neumann entropy of a state with the given spectrum, in nats.
pub fn von_neumann_entropy(spec: &Spectrum) -> f64 {
    let m = spec.dim() as f64;
    shannon_entropy(spec.values().iter().copied()).clamp(0.0, m.ln())
}
