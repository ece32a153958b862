//! Reproducible random matrices and states.
//!
//! Every sampler draws from an explicit [`RngStream`], a ChaCha20 keystream
//! addressed by `(seed, stream_id)`. Parallel callers give each worker its own
//! stream id; there is no shared generator state.

use nalgebra::DVector;
use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::qcore::{CMatrix, DensityMatrix, PureState, Spectrum};

const UNITARITY_TOLERANCE: f64 = 1e-10;

/// A counter-based random stream. Identical `(seed, stream_id)` pairs produce
/// identical sequences; distinct stream ids select disjoint ChaCha streams.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    core: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut core = ChaCha20Rng::seed_from_u64(seed);
        core.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            core,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.core.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    fn uniform_open_low(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    /// Complex Gaussian with real and imaginary parts i.i.d. `N(0, 1/2)`,
    /// via Box–Muller.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let radius = (-self.uniform_open_low().ln()).sqrt();
        let angle = TAU * self.uniform();
        Complex64::from_polar(radius, angle)
    }

    /// Real standard normal (the real part of a Box–Muller pair, rescaled).
    pub fn standard_normal(&mut self) -> f64 {
        self.complex_gaussian().re * std::f64::consts::SQRT_2
    }
}

/// A matrix with `U† U = I` to within `1e-10` in max norm.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    entries: CMatrix,
}

impl UnitaryMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let d = entries.nrows();
        if d == 0 || entries.ncols() != d {
            return Err(Error::InvalidArgument("unitary must be square and nonempty".into()));
        }
        let dev = unitarity_defect(&entries);
        if dev > UNITARITY_TOLERANCE {
            return Err(Error::InvalidArgument(format!("not unitary: defect {dev:e}")));
        }
        Ok(Self { entries })
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
}

/// `max |(U† U - I)_ij|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let d = u.nrows();
    let g = u.adjoint() * u;
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// `rows x cols` matrix of i.i.d. complex Gaussians, filled row by row.
pub fn ginibre(rows: usize, cols: usize, rng: &mut RngStream) -> Result<CMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(format!("Ginibre shape {rows}x{cols}")));
    }
    let data: Vec<Complex64> = (0..rows * cols).map(|_| rng.complex_gaussian()).collect();
    Ok(CMatrix::from_row_slice(rows, cols, &data))
}

/// Haar-distributed unitary from the QR decomposition of a square Ginibre
/// matrix, with column `j` of `Q` multiplied by `r_jj / |r_jj|`.
pub fn haar_unitary(dim: usize, rng: &mut RngStream) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return Err(Error::InvalidArgument("unitary dimension must be positive".into()));
    }
    for _ in 0..2 {
        let g = ginibre(dim, dim, rng)?;
        let qr = g.qr();
        let r = qr.r();
        if (0..dim).any(|j| r[(j, j)].norm() == 0.0) {
            continue;
        }
        let mut q = qr.q();
        for j in 0..dim {
            let phase = r[(j, j)] / r[(j, j)].norm();
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
        return UnitaryMatrix::new(q).map_err(|_| Error::SingularSample);
    }
    Err(Error::SingularSample)
}

/// Uniformly distributed unit vector in `C^dim`.
pub fn haar_pure_state(dim: usize, rng: &mut RngStream) -> Result<PureState> {
    if dim == 0 {
        return Err(Error::InvalidArgument("state dimension must be positive".into()));
    }
    let v = DVector::from_fn(dim, |_, _| rng.complex_gaussian());
    PureState::normalized(v)
}

/// Density matrix from the induced measure: `G G† / Tr(G G†)` with `G` an
/// `m x n` Ginibre matrix. Same law as the `m`-dimensional marginal of a Haar
/// pure state on `C^m ⊗ C^n`.
pub fn induced_mixed_state(m: usize, n: usize, rng: &mut RngStream) -> Result<DensityMatrix> {
    if m == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if m > n {
        return Err(Error::DimensionOrder { m, n });
    }
    let g = ginibre(m, n, rng)?;
    Ok(DensityMatrix::from_psd_unnormalized(&g * g.adjoint()))
}

/// `U diag(spec) U†` with `U` Haar distributed.
pub fn isospectral_state(spec: &Spectrum, rng: &mut RngStream) -> Result<DensityMatrix> {
    let m = spec.dim();
    let u = haar_unitary(m, rng)?;
    let lambda = CMatrix::from_diagonal(&DVector::from_iterator(
        m,
        spec.values().iter().map(|&v| Complex64::new(v, 0.0)),
    ));
    let u = u.entries();
    Ok(DensityMatrix::from_psd_unnormalized(u * lambda * u.adjoint()))
}
