//! Subentropy as a divided difference.
//!
//! For a spectrum `x_1..x_m`, `Q = -f[x_1, ..., x_m]` with `f(x) = x^m ln x`,
//! the (m-1)-th divided difference. Nodes are first rescaled by the largest
//! eigenvalue `s`, using `f[s y] = s (f[y] + ln s * sum(y))`, so that powers
//! like `x^m` stay representable for large `m`.
//!
//! Nodes whose relative spread is at most [`CLUSTER_SPREAD`] form a cluster.
//! Divided differences whose nodes all lie in one cluster are evaluated from
//! the Taylor expansion of `f` about the cluster centre,
//!
//! ```text
//! f[x_i..x_j] = sum_{r >= k} a_r(c) h_{r-k}(x_i - c, ..., x_j - c),
//! ```
//!
//! where `k = j - i`, `a_r = f^{(r)}(c)/r!` and `h_p` is the complete
//! homogeneous symmetric polynomial. Exact ties reduce to `a_k(c)`, the
//! confluent limit. All other entries use the ordinary Newton recurrence,
//! whose node gaps are then bounded below by the cluster spread.

use super::Spectrum;

/// Maximum relative spread `(x_max - x_min) / x_min` inside one cluster.
const CLUSTER_SPREAD: f64 = 0.1;
/// Upper limit on Taylor terms beyond the leading one; the series is cut as
/// soon as it has converged to working precision.
const MAX_TAYLOR_TERMS: usize = 400;

/// Subentropy `Q(spec)` in nats.
pub fn subentropy(spec: &Spectrum) -> f64 {
    let m = spec.dim();
    if m == 1 {
        return 0.0;
    }
    let scale = spec.max();
    let mut nodes: Vec<f64> = spec.values().iter().map(|v| v / scale).collect();
    nodes.sort_by(f64::total_cmp);
    let dd = divided_difference(&nodes, m as u32);
    let sum: f64 = nodes.iter().sum();
    // f[x] = s (f[y] + ln s * sum(y)) and Q = -f[x].
    let q = -scale * (dd + scale.ln() * sum);
    q.max(0.0)
}

/// `f^{(r)}(c) / r!` for `f(x) = x^m ln x` at `c > 0`.
pub fn x_pow_m_log_x_taylor_coefficient(m: u32, r: usize, c: f64) -> f64 {
    scaled_coefficient(m, r, c) * c.powi(m as i32 - r as i32)
}

/// `f^{(r)}(c) c^(r-m) / r!`, which never overflows.
fn scaled_coefficient(m: u32, r: usize, c: f64) -> f64 {
    let m_us = m as usize;
    if r <= m_us {
        // C(m, r) (ln c + H_m - H_(m-r))
        let harmonic_gap: f64 = ((m_us - r + 1)..=m_us).map(|i| 1.0 / i as f64).sum();
        binomial_f64(m_us, r) * (c.ln() + harmonic_gap)
    } else {
        // f^(m+s)(c) = m! (-1)^(s-1) (s-1)! c^(-s); divide by (m+s)!.
        let s = r - m_us;
        let mut coef = 1.0;
        for i in 1..s {
            coef *= i as f64 / (m_us + i) as f64;
        }
        coef /= (m_us + s) as f64;
        if s % 2 == 1 {
            coef
        } else {
            -coef
        }
    }
}

/// Confluent limit at the origin: `lim_{c->0} f^{(r)}(c)/r!`, which is zero for
/// `r < m` and diverges otherwise.
fn origin_coefficient(m: u32, r: usize) -> f64 {
    if r < m as usize {
        0.0
    } else {
        f64::NEG_INFINITY
    }
}

fn f(m: u32, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powi(m as i32) * x.ln()
    }
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Assigns a cluster index to each node of an ascending slice.
fn clusters(nodes: &[f64]) -> Vec<usize> {
    let mut ids = Vec::with_capacity(nodes.len());
    let mut id = 0;
    let mut first = nodes[0];
    for (i, &x) in nodes.iter().enumerate() {
        if i > 0 && x - first > CLUSTER_SPREAD * first {
            id += 1;
            first = x;
        }
        ids.push(id);
    }
    ids
}

/// Divided difference of one cluster's nodes via a Taylor expansion.
fn cluster_divided_difference(m: u32, nodes: &[f64]) -> f64 {
    let k = nodes.len() - 1;
    let centre = nodes.iter().sum::<f64>() / nodes.len() as f64;
    if centre == 0.0 {
        return origin_coefficient(m, k);
    }
    // Offsets relative to the centre; a_r(c) (x - c)^p = c^(m-k) b_r (d/c)^p.
    let offsets: Vec<f64> = nodes.iter().map(|x| (x - centre) / centre).collect();
    if offsets.iter().all(|&d| d == 0.0) {
        return x_pow_m_log_x_taylor_coefficient(m, k, centre);
    }
    let h = complete_homogeneous(&offsets, MAX_TAYLOR_TERMS);
    let mut sum = 0.0;
    let mut quiet = 0;
    for (p, hp) in h.iter().enumerate() {
        let term = scaled_coefficient(m, k + p, centre) * hp;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            quiet += 1;
            if quiet >= 4 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    sum * centre.powi(m as i32 - k as i32)
}

/// `h_0..=h_degree` of the given variables.
fn complete_homogeneous(vars: &[f64], degree: usize) -> Vec<f64> {
    let mut h = vec![0.0; degree + 1];
    h[0] = 1.0;
    for &v in vars {
        for p in 1..=degree {
            h[p] += v * h[p - 1];
        }
    }
    h
}

/// Highest-order divided difference of `x^m ln x` over ascending nodes.
fn divided_difference(nodes: &[f64], m: u32) -> f64 {
    let n = nodes.len();
    let ids = clusters(nodes);
    // table[i] holds f[x_i .. x_{i+k}] for the current order k.
    let mut table: Vec<f64> = nodes.iter().map(|&x| f(m, x)).collect();
    for k in 1..n {
        for i in 0..n - k {
            let j = i + k;
            table[i] = if ids[i] == ids[j] {
                cluster_divided_difference(m, &nodes[i..=j])
            } else {
                (table[i + 1] - table[i]) / (nodes[j] - nodes[i])
            };
        }
    }
    table[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    fn q(v: &[f64]) -> f64 {
        subentropy(&Spectrum::new(v.to_vec()).unwrap())
    }

    #[test]
    fn pure_and_uniform() {
        assert_eq!(q(&[1.0]), 0.0);
        assert_abs_diff_eq!(q(&[1.0, 0.0]), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q(&[1.0, 0.0, 0.0, 0.0]), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q(&[0.5, 0.5]), LN_2 - 0.5, epsilon = 1e-15);
        // Q(1/m) = ln m - H_m + 1
        for m in 2..=12usize {
            let h: f64 = (1..=m).map(|i| 1.0 / i as f64).sum();
            let expected = (m as f64).ln() - h + 1.0;
            assert_abs_diff_eq!(q(&vec![1.0 / m as f64; m]), expected, epsilon = 1e-13);
        }
    }

    #[test]
    fn two_level_closed_form() {
        // -(4/3) ln 2 + ln 3
        assert_abs_diff_eq!(q(&[2.0 / 3.0, 1.0 / 3.0]), -(4.0 / 3.0) * LN_2 + 3f64.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(q(&[2.0 / 3.0, 1.0 / 3.0]), 0.174416, epsilon = 1e-6);
    }

    #[test]
    fn taylor_coefficients_match_finite_differences() {
        let (m, c) = (3u32, 0.4);
        let fd1 = (f(m, c + 1e-6) - f(m, c - 1e-6)) / 2e-6;
        assert_abs_diff_eq!(x_pow_m_log_x_taylor_coefficient(m, 1, c), fd1, epsilon = 1e-8);
        let fd2 = (f(m, c + 1e-4) - 2.0 * f(m, c) + f(m, c - 1e-4)) / 1e-8 / 2.0;
        assert_abs_diff_eq!(x_pow_m_log_x_taylor_coefficient(m, 2, c), fd2, epsilon = 1e-6);
        // r = m + 1: f^(4)(c)/4! = 3!/(4! c)
        assert_abs_diff_eq!(x_pow_m_log_x_taylor_coefficient(m, 4, c), 6.0 / 24.0 / c, epsilon = 1e-14);
    }

    #[test]
    fn continuous_across_cluster_boundary() {
        // Gap straddling CLUSTER_SPREAD: values on both sides agree smoothly.
        let base = 0.3;
        let below = q(&[1.0 - base - base * (1.0 + 0.0999), base, base * (1.0 + 0.0999)]);
        let above = q(&[1.0 - base - base * (1.0 + 0.1001), base, base * (1.0 + 0.1001)]);
        assert!((below - above).abs() < 1e-4);
    }

    #[test]
    fn near_ties_converge_to_tie() {
        let tie = q(&[0.5, 0.25, 0.25]);
        for d in [1e-3, 1e-6, 1e-9, 1e-12] {
            let near = q(&[0.5, 0.25 + d, 0.25 - d]);
            assert!((near - tie).abs() < 10.0 * d * d + 1e-14, "d={d}");
        }
    }

    #[test]
    fn large_dimension_no_underflow() {
        let m = 400;
        let expected = (m as f64).ln() - (1..=m).map(|i| 1.0 / i as f64).sum::<f64>() + 1.0;
        assert_abs_diff_eq!(q(&vec![1.0 / m as f64; m]), expected, epsilon = 1e-12);
    }
}
