//! Independent oracles for the identities behind the closed forms.
//!
//! Combinatorial identities are checked exactly with big integers and
//! rationals. Simplex integrals are checked by quadrature after eliminating
//! the trace constraint `x_m = 1 - sum of the others`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::closedform::{factorial, harmonic, integral_family_moment};
use crate::error::{Error, Result};
use crate::quadrature::Adaptive;

/// Outcome of an exact identity check. `holds` is true exactly when
/// `lhs == rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub name: String,
    pub parameters: Vec<i64>,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

impl IdentityReport {
    pub fn new(name: &str, parameters: Vec<i64>, lhs: BigRational, rhs: BigRational) -> Self {
        let holds = lhs == rhs;
        Self {
            name: name.to_string(),
            parameters,
            lhs,
            rhs,
            holds,
        }
    }
}

fn check_order(m: usize, n: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::DimensionOrder { m, n });
    }
    Ok(())
}

/// `Gamma(m+n-k) / (k! Gamma(m-k) Gamma(n-k))`, an integer for `k < m <= n`.
fn gamma_ratio(m: usize, n: usize, k: usize) -> BigInt {
    factorial(m + n - k - 1) / (factorial(k) * factorial(m - k - 1) * factorial(n - k - 1))
}

fn signed(k: usize, v: BigInt) -> BigInt {
    if k % 2 == 1 {
        -v
    } else {
        v
    }
}

fn int(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `sum_{k=0}^{m-1} (-1)^k Gamma(m+n-k) / (k! Gamma(m-k) Gamma(n-k)) = m n`.
pub fn gamma_ratio_sum_plain(m: usize, n: usize) -> Result<IdentityReport> {
    check_order(m, n)?;
    let lhs: BigInt = (0..m).map(|k| signed(k, gamma_ratio(m, n, k))).sum();
    Ok(IdentityReport::new(
        "gamma_ratio_sum_plain",
        vec![m as i64, n as i64],
        BigRational::from_integer(lhs),
        int(m * n),
    ))
}

/// The same alternating sum weighted by `H_{m+n-1-k}` equals `m n (H_m + H_n - 1)`.
pub fn gamma_ratio_sum_harmonic(m: usize, n: usize) -> Result<IdentityReport> {
    check_order(m, n)?;
    let lhs = (0..m).fold(BigRational::zero(), |acc, k| {
        acc + BigRational::from_integer(signed(k, gamma_ratio(m, n, k))) * harmonic(m + n - 1 - k)
    });
    let rhs = int(m * n) * (harmonic(m) + harmonic(n) - BigRational::one());
    Ok(IdentityReport::new(
        "gamma_ratio_sum_harmonic",
        vec![m as i64, n as i64],
        lhs,
        rhs,
    ))
}

/// Generalized binomial coefficient `z (z-1) ... (z-k+1) / k!`.
pub fn binomial(z: &BigRational, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * (z - int(i)) / int(i + 1);
    }
    acc
}

/// Left and right sides of
/// `C(z,m) C(z,n) = sum_{k=0}^m (m+n-k)!/(k!(m-k)!(n-k)!) C(z, m+n-k)` at `z`.
pub fn riordan_sides(m: usize, n: usize, z: &BigRational) -> (BigRational, BigRational) {
    let lhs = binomial(z, m) * binomial(z, n);
    let rhs = (0..=m).fold(BigRational::zero(), |acc, k| {
        let multinomial = factorial(m + n - k) / (factorial(k) * factorial(m - k) * factorial(n - k));
        acc + BigRational::from_integer(multinomial) * binomial(z, m + n - k)
    });
    (lhs, rhs)
}

/// Both sides are polynomials in `z` of degree `m + n`, so agreement at the
/// `m + n + 1` integers `z = -1, 0, ..., m + n - 1` proves the identity.
///
/// The report packs the per-point values into a single integer per side,
/// `sum_i v_i X^i` with `X` exceeding twice every `|v_i|`; this encoding is
/// injective, so `lhs == rhs` holds exactly when every point agrees.
pub fn riordan_identity_check(m: usize, n: usize) -> Result<IdentityReport> {
    check_order(m, n)?;
    let points: Vec<(BigRational, BigRational)> = (-1..(m + n) as i64)
        .map(|z| riordan_sides(m, n, &BigRational::from_integer(BigInt::from(z))))
        .collect();
    let bound = points
        .iter()
        .flat_map(|(l, r)| [l.abs(), r.abs()])
        .max()
        .unwrap_or_else(BigRational::zero);
    let base = bound * int(2) + BigRational::one();
    let pack = |side: fn(&(BigRational, BigRational)) -> &BigRational| {
        let mut acc = BigRational::zero();
        let mut weight = BigRational::one();
        for p in &points {
            acc += side(p) * &weight;
            weight *= &base;
        }
        acc
    };
    let lhs = pack(|p| &p.0);
    let rhs = pack(|p| &p.1);
    Ok(IdentityReport::new("riordan", vec![m as i64, n as i64], lhs, rhs))
}

/// A quadrature value compared against its Gamma-product closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureCheck {
    pub name: String,
    pub m: usize,
    pub k: usize,
    pub alpha: f64,
    pub quadrature: f64,
    pub error_estimate: f64,
    pub closed_form: f64,
    pub relative_error: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// Relative accuracy required of the quadrature oracles.
pub fn quadrature_tolerance(m: usize) -> f64 {
    if m == 2 {
        1e-6
    } else {
        1e-4
    }
}

fn vandermonde_sq(xs: &[f64]) -> f64 {
    let mut acc = 1.0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            acc *= (xs[i] - xs[j]).powi(2);
        }
    }
    acc
}

/// `int delta(1 - sum x) (x_1..x_k) |Delta(x)|^2 prod x^(a-1) dx` by quadrature,
/// for `m` in `{2, 3}`.
pub fn simplex_moment_quadrature(m: usize, k: usize, alpha: f64) -> Result<(f64, f64)> {
    if !(m == 2 || m == 3) {
        return Err(Error::InvalidArgument(format!("quadrature oracle supports m in {{2, 3}}, got {m}")));
    }
    if k > m {
        return Err(Error::DomainError(format!("k = {k} exceeds m = {m}")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::DomainError(format!("alpha must be positive, got {alpha}")));
    }
    let integrand = |xs: &[f64]| -> f64 {
        if xs.iter().any(|&x| x <= 0.0) && alpha < 1.0 {
            return 0.0;
        }
        let weight: f64 = xs.iter().map(|&x| x.max(0.0).powf(alpha - 1.0)).product();
        let moment: f64 = xs[..k].iter().product();
        moment * vandermonde_sq(xs) * weight
    };
    let target = quadrature_tolerance(m);
    let estimate = if m == 2 {
        Adaptive::new(1e-14, 50).integrate(|x| integrand(&[x, 1.0 - x]), 0.0, 1.0)
    } else {
        Adaptive::new(1e-12, 30).integrate_triangle(|x, y| integrand(&[x, y, (1.0 - x - y).max(0.0)]))
    };
    let estimate = estimate.require_relative(target)?;
    Ok((estimate.value, estimate.error))
}

fn quadrature_check(name: &str, m: usize, k: usize, alpha: f64) -> Result<QuadratureCheck> {
    let (quadrature, error_estimate) = simplex_moment_quadrature(m, k, alpha)?;
    let closed_form = integral_family_moment(m, k, alpha, 1.0)?;
    let relative_error = ((quadrature - closed_form) / closed_form).abs();
    let tolerance = quadrature_tolerance(m);
    Ok(QuadratureCheck {
        name: name.to_string(),
        m,
        k,
        alpha,
        quadrature,
        error_estimate,
        closed_form,
        relative_error,
        tolerance,
        holds: relative_error <= tolerance,
    })
}

/// Quadrature of the normalization integral against its Gamma product.
pub fn selberg_quadrature_oracle(m: usize, alpha: f64) -> Result<QuadratureCheck> {
    quadrature_check("selberg_quadrature", m, 0, alpha)
}

/// Quadrature of the `k`-moment simplex integral against its Gamma product.
pub fn aomoto_quadrature_oracle(m: usize, k: usize, alpha: f64) -> Result<QuadratureCheck> {
    if k == 0 {
        return Err(Error::DomainError("moment order k must be at least 1".into()));
    }
    quadrature_check("aomoto_quadrature", m, k, alpha)
}

/// Every identity report for `1 <= m <= n` within the given limits.
pub fn sweep(max_m: usize, max_n: usize, riordan_max: usize) -> Vec<IdentityReport> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for m in 1..=n.min(max_m) {
            out.push(gamma_ratio_sum_plain(m, n).expect("m <= n"));
            out.push(gamma_ratio_sum_harmonic(m, n).expect("m <= n"));
            if n <= riordan_max {
                out.push(riordan_identity_check(m, n).expect("m <= n"));
            }
        }
    }
    out
}

/// The quadrature grid `alpha in {1, 1.5, 2, 3}`, `m in {2, 3}`, every `k`.
pub fn quadrature_sweep() -> Result<Vec<QuadratureCheck>> {
    let mut out = Vec::new();
    for m in [2, 3] {
        for alpha in [1.0, 1.5, 2.0, 3.0] {
            out.push(selberg_quadrature_oracle(m, alpha)?);
            for k in 1..=m {
                out.push(aomoto_quadrature_oracle(m, k, alpha)?);
            }
        }
    }
    Ok(out)
}
