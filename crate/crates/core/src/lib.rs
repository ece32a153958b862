//! Random mixed quantum states drawn from induced measures, together with
//! their entropy, subentropy and relative entropy of coherence.
//!
//! The crate is split into:
//!
//! - [`qcore`]: spectra, density matrices, pure states and the spectral
//!   functionals (von Neumann entropy, subentropy, dephasing, coherence).
//! - [`sampling`]: reproducible Ginibre, Haar and induced-measure samplers.
//! - [`closedform`]: exact rational and log-Gamma evaluation of the average
//!   subentropy, entropy and coherence, Selberg-type integrals and the
//!   concentration bounds.
//! - [`identities`]: exact and quadrature oracles for the combinatorial and
//!   integral identities behind the closed forms.
//! - [`montecarlo`]: chunked, worker-count independent Monte Carlo estimation.
//! - [`entangle`]: maximally correlated states built with a generalized CNOT.
//! - [`functional`]: a name-keyed registry of the functionals that the
//!   estimators and the CLI can select at runtime.

pub mod closedform;
pub mod entangle;
pub mod error;
pub mod functional;
pub mod identities;
pub mod montecarlo;
pub mod qcore;
pub mod quadrature;
pub mod sampling;

pub use error::{Error, Result};
pub use functional::{Functional, FunctionalRegistry};
pub use qcore::{DensityMatrix, Functionals, PureState, Spectrum};
