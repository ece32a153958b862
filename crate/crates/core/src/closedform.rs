//! Closed-form averages, Selberg-type integrals and concentration bounds.
//!
//! Averages under the induced measure are harmonic-number combinations and
//! are computed exactly as [`BigRational`]s. Gamma products for real
//! parameters are evaluated in log space.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::{LN_2, PI};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::qcore::{subentropy, von_neumann_entropy, Spectrum};

static HARMONIC: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());
static FACTORIAL: Mutex<Vec<BigInt>> = Mutex::new(Vec::new());

/// `H_k = sum_{i=1}^k 1/i`, with `H_0 = 0`.
pub fn harmonic(k: usize) -> BigRational {
    let mut table = HARMONIC.lock().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(BigRational::zero());
    }
    while table.len() <= k {
        let i = table.len();
        let next = &table[i - 1] + BigRational::new(BigInt::one(), BigInt::from(i));
        table.push(next);
    }
    table[k].clone()
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    let mut table = FACTORIAL.lock().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(BigInt::one());
    }
    while table.len() <= n {
        let i = table.len();
        let next = &table[i - 1] * BigInt::from(i);
        table.push(next);
    }
    table[n].clone()
}

/// Float projection of an exact rational.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `psi(a) - psi(b)` for positive integers, i.e. `H_{a-1} - H_{b-1}`.
pub fn digamma_integer_diff(a: usize, b: usize) -> Result<BigRational> {
    if a == 0 || b == 0 {
        return Err(Error::DomainError(format!(
            "digamma arguments must be positive integers, got ({a}, {b})"
        )));
    }
    Ok(harmonic(a - 1) - harmonic(b - 1))
}

fn is_positive_finite(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// Parameters of an eigenvalue measure: either a bipartite split `(m, n)`
/// with `m <= n`, or raw exponents `(alpha, gamma)` for dimension `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureParams {
    Induced { m: usize, n: usize },
    Raw { m: usize, alpha: f64, gamma: f64 },
}

impl MeasureParams {
    pub fn induced(m: usize, n: usize) -> Result<Self> {
        check_order(m, n)?;
        Ok(Self::Induced { m, n })
    }

    pub fn raw(m: usize, alpha: f64, gamma: f64) -> Result<Self> {
        if m == 0 || !is_positive_finite(alpha) || !is_positive_finite(gamma) {
            return Err(Error::DomainError(format!(
                "need m >= 1, alpha > 0, gamma > 0; got ({m}, {alpha}, {gamma})"
            )));
        }
        Ok(Self::Raw { m, alpha, gamma })
    }

    pub fn dim(&self) -> usize {
        match *self {
            Self::Induced { m, .. } | Self::Raw { m, .. } => m,
        }
    }

    /// `(alpha, gamma)`; the induced measure has `alpha = n - m + 1`, `gamma = 1`.
    pub fn alpha_gamma(&self) -> (f64, f64) {
        match *self {
            Self::Induced { m, n } => ((n - m + 1) as f64, 1.0),
            Self::Raw { alpha, gamma, .. } => (alpha, gamma),
        }
    }

    /// Integer `alpha` when the parameters come from a bipartite split.
    pub fn integer_alpha(&self) -> Option<usize> {
        match *self {
            Self::Induced { m, n } => Some(n - m + 1),
            Self::Raw { .. } => None,
        }
    }
}

fn check_order(m: usize, n: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if m > n {
        return Err(Error::DimensionOrder { m, n });
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Log of the Selberg integral
/// `int_[0,1]^m prod x^(a-1) (1-x)^(b-1) |Delta(x)|^(2g) dx`.
pub fn ln_selberg_full(m: usize, alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::DomainError("m must be positive".into()));
    }
    check_positive("alpha", alpha)?;
    check_positive("beta", beta)?;
    let limit = if m == 1 {
        1.0
    } else {
        (1.0 / m as f64)
            .min(alpha / (m - 1) as f64)
            .min(beta / (m - 1) as f64)
    };
    if !(gamma.is_finite() && gamma > -limit) {
        return Err(Error::DomainError(format!("gamma = {gamma} must exceed {}", -limit)));
    }
    let mut acc = 0.0;
    for j in 1..=m {
        let jm1 = (j - 1) as f64;
        acc += ln_gamma(alpha + gamma * jm1) + ln_gamma(beta + gamma * jm1) + ln_gamma(1.0 + gamma * j as f64)
            - ln_gamma(alpha + beta + gamma * (m + j - 2) as f64)
            - ln_gamma(1.0 + gamma);
    }
    Ok(acc)
}

pub fn selberg_full(m: usize, alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    ln_selberg_full(m, alpha, beta, gamma).map(f64::exp)
}

/// Correction factor `prod_{j=1}^k (a + g(m-j)) / (a + b + g(2m-j-1))` for the
/// Selberg integral weighted by `x_1 ... x_k`. Empty product for `k = 0`.
pub fn aomoto_factor(m: usize, k: usize, alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    if k > m {
        return Err(Error::DomainError(format!("k = {k} exceeds m = {m}")));
    }
    ln_selberg_full(m, alpha, beta, gamma)?;
    Ok((1..=k)
        .map(|j| {
            (alpha + gamma * (m - j) as f64) / (alpha + beta + gamma * (2 * m - j - 1) as f64)
        })
        .product())
}

/// `ln prod_{j=1}^m Gamma(a + g(j-1)) Gamma(1 + g j) / Gamma(1 + g)`, the
/// unconstrained Laguerre-type integral.
fn ln_laguerre_product(m: usize, alpha: f64, gamma: f64) -> f64 {
    (1..=m)
        .map(|j| {
            ln_gamma(alpha + gamma * (j - 1) as f64) + ln_gamma(1.0 + gamma * j as f64) - ln_gamma(1.0 + gamma)
        })
        .sum()
}

fn check_family(m: usize, alpha: f64, gamma: f64) -> Result<()> {
    if m == 0 {
        return Err(Error::DomainError("m must be positive".into()));
    }
    check_positive("alpha", alpha)?;
    check_positive("gamma", gamma)
}

/// Log of the simplex integral
/// `int delta(1 - sum x) |Delta(x)|^(2g) prod x^(a-1) dx`.
pub fn ln_integral_family(m: usize, alpha: f64, gamma: f64) -> Result<f64> {
    ln_integral_family_moment(m, 0, alpha, gamma)
}

pub fn integral_family_i(m: usize, alpha: f64, gamma: f64) -> Result<f64> {
    ln_integral_family(m, alpha, gamma).map(f64::exp)
}

/// Normalization constant of the eigenvalue measure: the reciprocal of the
/// simplex integral.
pub fn normalization_constant(m: usize, alpha: f64, gamma: f64) -> Result<f64> {
    ln_integral_family(m, alpha, gamma).map(|v| (-v).exp())
}

/// Log of the simplex integral weighted by `x_1 ... x_k`:
/// `prod_{j=1}^k (a + g(m-j)) * laguerre / Gamma(a m + g m (m-1) + k)`.
pub fn ln_integral_family_moment(m: usize, k: usize, alpha: f64, gamma: f64) -> Result<f64> {
    check_family(m, alpha, gamma)?;
    if k > m {
        return Err(Error::DomainError(format!("k = {k} exceeds m = {m}")));
    }
    let mf = m as f64;
    let moment: f64 = (1..=k).map(|j| (alpha + gamma * (m - j) as f64).ln()).sum();
    Ok(moment + ln_laguerre_product(m, alpha, gamma) - ln_gamma(alpha * mf + gamma * mf * (mf - 1.0) + k as f64))
}

pub fn integral_family_moment(m: usize, k: usize, alpha: f64, gamma: f64) -> Result<f64> {
    ln_integral_family_moment(m, k, alpha, gamma).map(f64::exp)
}

/// An exact rational with its float projection.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactValue {
    pub exact: BigRational,
    pub float: f64,
}

impl From<BigRational> for ExactValue {
    fn from(exact: BigRational) -> Self {
        let float = to_f64(&exact);
        Self { exact, float }
    }
}

/// The integer `(-1)^k Gamma(2(m-1)+a+1-k) / (k! Gamma(m-k) Gamma(m+a-1-k))`.
pub fn u_coefficient(m: usize, k: usize, alpha: usize) -> BigInt {
    let v = factorial(2 * m + alpha - 2 - k) / (factorial(k) * factorial(m - k - 1) * factorial(m + alpha - 2 - k));
    if k % 2 == 1 {
        -v
    } else {
        v
    }
}

/// `psi(m(m+a-1)+1) - psi(2(m-1)+a+1-k)` as a harmonic difference.
pub fn g_coefficient(m: usize, k: usize, alpha: usize) -> BigRational {
    harmonic(m * (m + alpha - 1)) - harmonic(2 * m + alpha - 2 - k)
}

/// Average subentropy under the eigenvalue measure with integer `alpha` and
/// `gamma = 1`, from the alternating sum
/// `1/(m(m+a-1)) sum_{k=0}^{m-1} g_mk u_mk`, in exact arithmetic.
pub fn prop1_average_subentropy(m: usize, alpha: usize) -> Result<ExactValue> {
    if m == 0 || alpha == 0 {
        return Err(Error::DomainError(format!("need m >= 1 and alpha >= 1, got ({m}, {alpha})")));
    }
    let sum = (0..m).fold(BigRational::zero(), |acc, k| {
        acc + g_coefficient(m, k, alpha) * BigRational::from_integer(u_coefficient(m, k, alpha))
    });
    let prefactor = BigRational::new(BigInt::one(), BigInt::from(m * (m + alpha - 1)));
    Ok((sum * prefactor).into())
}

/// Average subentropy under the induced measure: `1 + H_mn - H_m - H_n`.
pub fn avg_subentropy_closed(m: usize, n: usize) -> Result<BigRational> {
    check_order(m, n)?;
    Ok(BigRational::one() + harmonic(m * n) - harmonic(m) - harmonic(n))
}

/// Average entanglement entropy of the marginal: `H_mn - H_n - (m-1)/(2n)`.
pub fn avg_entropy_page(m: usize, n: usize) -> Result<BigRational> {
    check_order(m, n)?;
    Ok(harmonic(m * n) - harmonic(n) - coherence_ratio(m, n))
}

fn coherence_ratio(m: usize, n: usize) -> BigRational {
    BigRational::new(BigInt::from(m - 1), BigInt::from(2 * n))
}

/// Average relative entropy of coherence under the induced measure: `(m-1)/(2n)`.
pub fn avg_coherence(m: usize, n: usize) -> Result<BigRational> {
    check_order(m, n)?;
    Ok(coherence_ratio(m, n))
}

/// `(H_m - 1) + avg subentropy - avg entropy`; equals [`avg_coherence`].
pub fn avg_coherence_assembled(m: usize, n: usize) -> Result<BigRational> {
    Ok(harmonic(m) - BigRational::one() + avg_subentropy_closed(m, n)? - avg_entropy_page(m, n)?)
}

/// Haar average of the coherence of `U diag(spec) U†`: `H_m - 1 + Q - S`.
pub fn iso_avg_coherence(spec: &Spectrum) -> f64 {
    let h = to_f64(&harmonic(spec.dim()));
    h - 1.0 + subentropy(spec) - von_neumann_entropy(spec)
}

/// `144 pi^3 ln 2`, the denominator constant of the coherence tail bound.
pub fn levy_constant() -> f64 {
    144.0 * PI.powi(3) * LN_2
}

/// `2 exp(-m n eps^2 / (144 pi^3 ln2 (ln m)^2))`. Values above one are
/// returned unclamped.
pub fn levy_bound(m: usize, n: usize, eps: f64) -> Result<f64> {
    if m < 3 {
        return Err(Error::DomainError(format!("tail bound needs m >= 3, got {m}")));
    }
    check_order(m, n)?;
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::DomainError(format!("eps must be positive, got {eps}")));
    }
    let lnm = (m as f64).ln();
    let exponent = (m * n) as f64 * eps * eps / (levy_constant() * lnm * lnm);
    Ok(2.0 * (-exponent).exp())
}

/// `2 exp(-m^2 eps^2 / (576 pi^3 ln2 (ln m)^2))`, the bound on deviations from
/// `1/2` at `n = m`. Requires `m > 1/eps`.
pub fn levy_bound_corollary(m: usize, eps: f64) -> Result<f64> {
    if m < 3 {
        return Err(Error::DomainError(format!("tail bound needs m >= 3, got {m}")));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::DomainError(format!("eps must be positive, got {eps}")));
    }
    if m as f64 <= 1.0 / eps {
        return Err(Error::DomainError(format!("need m > 1/eps, got m = {m}, eps = {eps}")));
    }
    let lnm = (m as f64).ln();
    let exponent = (m * m) as f64 * eps * eps / (4.0 * levy_constant() * lnm * lnm);
    Ok(2.0 * (-exponent).exp())
}
