//! Name-keyed registry of state functionals.
//!
//! Estimators and the CLI look functionals up by name, so new quantities plug
//! in by implementing [`Functional`] and registering an instance.

use num_rational::BigRational;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::closedform::{avg_coherence, avg_entropy_page, avg_subentropy_closed};
use crate::error::{Error, Result};
use crate::qcore::{
    relative_entropy_coherence, shannon_entropy, spectrum_of, subentropy, von_neumann_entropy,
    DensityMatrix,
};

/// A real-valued function of a density matrix.
pub trait Functional: Send + Sync {
    fn name(&self) -> &str;

    fn evaluate(&self, rho: &DensityMatrix) -> Result<f64>;

    /// Exact mean over the induced measure on `m x m` marginals of `C^m ⊗ C^n`
    /// states, when a closed form is known.
    fn induced_average(&self, _m: usize, _n: usize) -> Result<Option<BigRational>> {
        Ok(None)
    }

    /// Lipschitz constant of `psi -> self(Tr_B |psi><psi|)` on the unit sphere
    /// of `C^m ⊗ C^n`, when one is known.
    fn lipschitz_constant(&self, _m: usize) -> Option<f64> {
        None
    }
}

fn sqrt8_ln(m: usize) -> f64 {
    8f64.sqrt() * (m as f64).ln()
}

pub struct Entropy;

impl Functional for Entropy {
    fn name(&self) -> &str {
        "entropy"
    }

    fn evaluate(&self, rho: &DensityMatrix) -> Result<f64> {
        Ok(von_neumann_entropy(&spectrum_of(rho)?))
    }

    fn induced_average(&self, m: usize, n: usize) -> Result<Option<BigRational>> {
        avg_entropy_page(m, n).map(Some)
    }

    fn lipschitz_constant(&self, m: usize) -> Option<f64> {
        Some(sqrt8_ln(m))
    }
}

pub struct Subentropy;

impl Functional for Subentropy {
    fn name(&self) -> &str {
        "subentropy"
    }

    fn evaluate(&self, rho: &DensityMatrix) -> Result<f64> {
        Ok(subentropy(&spectrum_of(rho)?))
    }

    fn induced_average(&self, m: usize, n: usize) -> Result<Option<BigRational>> {
        avg_subentropy_closed(m, n).map(Some)
    }
}

pub struct Coherence;

impl Functional for Coherence {
    fn name(&self) -> &str {
        "coherence"
    }

    fn evaluate(&self, rho: &DensityMatrix) -> Result<f64> {
        relative_entropy_coherence(rho)
    }

    fn induced_average(&self, m: usize, n: usize) -> Result<Option<BigRational>> {
        avg_coherence(m, n).map(Some)
    }

    fn lipschitz_constant(&self, m: usize) -> Option<f64> {
        Some(2.0 * sqrt8_ln(m))
    }
}

/// Entropy of the diagonal of `rho` in the computational basis.
pub struct DephasedEntropy;

impl Functional for DephasedEntropy {
    fn name(&self) -> &str {
        "dephased_entropy"
    }

    fn evaluate(&self, rho: &DensityMatrix) -> Result<f64> {
        Ok(shannon_entropy(rho.diagonal_probabilities()))
    }

    fn induced_average(&self, m: usize, n: usize) -> Result<Option<BigRational>> {
        Ok(Some(avg_entropy_page(m, n)? + avg_coherence(m, n)?))
    }

    fn lipschitz_constant(&self, m: usize) -> Option<f64> {
        Some(sqrt8_ln(m))
    }
}

/// Registry of functionals keyed by name, iterated in name order.
#[derive(Clone, Default)]
pub struct FunctionalRegistry {
    entries: BTreeMap<String, Arc<dyn Functional>>,
}

impl FunctionalRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Entropy, subentropy, coherence, dephased entropy and class-X entanglement.
    pub fn with_builtins() -> Self {
        let mut reg = Self::new();
        reg.register(Arc::new(Entropy));
        reg.register(Arc::new(Subentropy));
        reg.register(Arc::new(Coherence));
        reg.register(Arc::new(DephasedEntropy));
        reg.register(Arc::new(crate::entangle::ClassXEntanglement));
        reg
    }

    /// Adds or replaces the functional under its own name.
    pub fn register(&mut self, f: Arc<dyn Functional>) {
        self.entries.insert(f.name().to_string(), f);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Functional>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownFunctional(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}
