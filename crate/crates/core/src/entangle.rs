//! Maximally correlated bipartite states `sum_ij rho_ij |ii><jj|`.
//!
//! Applying the generalized CNOT `|i><i| ⊗ |i + j mod m><j|` to
//! `rho ⊗ |0><0|` yields a state whose relative entropy of entanglement and
//! distillable entanglement both equal the relative entropy of coherence of
//! `rho`. The ancilla dimension is fixed at `m`.

use num_complex::Complex64;
use num_rational::BigRational;
use std::sync::OnceLock;

use crate::closedform::avg_coherence;
use crate::error::{Error, Result};
use crate::functional::{Coherence, Functional};
use crate::montecarlo::{estimate_functional, MonteCarloEstimate, RunConfig};
use crate::qcore::{relative_entropy_coherence, CMatrix, DensityMatrix};

/// A class-X state, stored through its source; the `m^2 x m^2` matrix is built
/// on first use.
#[derive(Debug, Clone)]
pub struct ClassXState {
    source: DensityMatrix,
    embedded: OnceLock<CMatrix>,
}

impl ClassXState {
    pub fn dim_a(&self) -> usize {
        self.source.dim()
    }

    pub fn source(&self) -> &DensityMatrix {
        &self.source
    }

    /// Entry `<ab| chi |cd>`; row index `a m + b`, column index `c m + d`.
    pub fn entry(&self, row: (usize, usize), col: (usize, usize)) -> Complex64 {
        if row.0 == row.1 && col.0 == col.1 {
            self.source.entries()[(row.0, col.0)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// The full `m^2 x m^2` matrix.
    pub fn embedded(&self) -> &CMatrix {
        self.embedded.get_or_init(|| {
            let m = self.dim_a();
            let mut chi = CMatrix::zeros(m * m, m * m);
            for i in 0..m {
                for j in 0..m {
                    chi[(i * m + i, j * m + j)] = self.source.entries()[(i, j)];
                }
            }
            chi
        })
    }

    pub fn is_materialized(&self) -> bool {
        self.embedded.get().is_some()
    }

    /// `Tr_B chi`, which is the dephased source.
    pub fn marginal_a(&self) -> CMatrix {
        let m = self.dim_a();
        let chi = self.embedded();
        CMatrix::from_fn(m, m, |i, k| (0..m).map(|j| chi[(i * m + j, k * m + j)]).sum())
    }
}

/// `sum_ij rho_ij |ii><jj|` for `m >= 2`.
pub fn cnot_embed(rho: &DensityMatrix) -> Result<ClassXState> {
    if rho.dim() < 2 {
        return Err(Error::InvalidArgument(format!(
            "class-X embedding needs m >= 2, got {}",
            rho.dim()
        )));
    }
    Ok(ClassXState {
        source: rho.clone(),
        embedded: OnceLock::new(),
    })
}

/// Relative entropy of entanglement and distillable entanglement, in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementPair {
    pub relative_entropy: f64,
    pub distillable: f64,
}

/// Both measures, read off as the coherence of the source.
pub fn entanglement_measures(chi: &ClassXState) -> Result<EntanglementPair> {
    let c = relative_entropy_coherence(chi.source())?;
    Ok(EntanglementPair {
        relative_entropy: c,
        distillable: c,
    })
}

/// Relative entropy of entanglement of the class-X state built from `rho`.
pub struct ClassXEntanglement;

impl Functional for ClassXEntanglement {
    fn name(&self) -> &str {
        "class_x_entanglement"
    }

    fn evaluate(&self, rho: &DensityMatrix) -> Result<f64> {
        if rho.dim() < 2 {
            return Ok(0.0);
        }
        Ok(entanglement_measures(&cnot_embed(rho)?)?.relative_entropy)
    }

    fn induced_average(&self, m: usize, n: usize) -> Result<Option<BigRational>> {
        avg_coherence(m, n).map(Some)
    }

    fn lipschitz_constant(&self, m: usize) -> Option<f64> {
        Coherence.lipschitz_constant(m)
    }
}

/// Monte Carlo mean of `E_r` over class-X states with induced-measure sources.
pub fn average_class_x_entanglement(m: usize, n: usize, cfg: &RunConfig) -> Result<MonteCarloEstimate> {
    if m < 3 {
        return Err(Error::DomainError(format!("class-X average needs m >= 3, got {m}")));
    }
    estimate_functional(m, n, &ClassXEntanglement, cfg)
}
