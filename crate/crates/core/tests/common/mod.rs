//! Independent oracles and random generators shared by integration tests.
#![allow(dead_code)]

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use subent::quadrature::Adaptive;
use subent::sampling::{induced_mixed_state, RngStream};
use subent::{DensityMatrix, Spectrum};

/// A random probability vector of length `m`, drawn from a mixture of
/// shapes so that both flat and sharply peaked spectra occur.
pub fn random_spectrum(rng: &mut RngStream, m: usize) -> Spectrum {
    let shape = rng.next_u64() % 4;
    let mut w: Vec<f64> = (0..m)
        .map(|_| {
            let u = rng.uniform().max(1e-300);
            match shape {
                0 => -u.ln(),
                1 => u,
                2 => u.powi(6),
                _ => {
                    if rng.uniform() < 0.3 {
                        0.0
                    } else {
                        -u.ln()
                    }
                }
            }
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[0] = 1.0;
    }
    let s: f64 = w.iter().sum();
    Spectrum::new(w.iter().map(|x| x / s).collect()).expect("valid probability vector")
}

/// A spectrum with at least one exact tie, built from well separated
/// distinct levels of multiplicity at most three.
pub fn degenerate_spectrum(rng: &mut RngStream, m: usize) -> Vec<f64> {
    assert!(m >= 2);
    loop {
        let mut mults = Vec::new();
        let mut left = m;
        while left > 0 {
            let k = 1 + (rng.next_u64() % 3) as usize;
            let k = k.min(left);
            mults.push(k);
            left -= k;
        }
        if mults.iter().all(|&k| k == 1) {
            continue;
        }
        let levels: Vec<f64> = (0..mults.len()).map(|_| 0.05 + rng.uniform()).collect();
        let separated = levels.iter().enumerate().all(|(i, a)| {
            levels[i + 1..]
                .iter()
                .all(|b| (a - b).abs() > 0.1 * a.max(*b))
        });
        if !separated {
            continue;
        }
        let total: f64 = levels.iter().zip(&mults).map(|(l, &k)| l * k as f64).sum();
        let mut out = Vec::with_capacity(m);
        for (l, &k) in levels.iter().zip(&mults) {
            for _ in 0..k {
                out.push(l / total);
            }
        }
        return out;
    }
}

/// `-sum_i l_i^m ln l_i / prod_{j != i} (l_i - l_j)` for pairwise distinct nodes.
pub fn lagrange_subentropy(nodes: &[f64]) -> f64 {
    let m = nodes.len() as i32;
    let mut acc = 0.0;
    for (i, &a) in nodes.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let denom: f64 = nodes
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &b)| a - b)
            .product();
        acc += a.powi(m) * a.ln() / denom;
    }
    -acc
}

type Big = FBig<HalfEven, 2>;

const ORACLE_BITS: usize = 256;
const ORACLE_DELTA: f64 = 1e-8;

fn big(x: f64) -> Big {
    Big::try_from(x).expect("finite").with_precision(ORACLE_BITS).value()
}

/// Splits every group of exactly equal nodes symmetrically by `delta`
/// relative to the group value, in 256-bit arithmetic.
fn split_ties(nodes: &[f64], delta: &Big) -> Vec<Big> {
    let mut sorted = nodes.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut out = Vec::with_capacity(sorted.len());
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let k = j - i;
        let c = big(sorted[i]);
        for t in 0..k {
            let offset = big(t as f64 - (k - 1) as f64 / 2.0);
            out.push(&c * (big(1.0) + delta * offset));
        }
        i = j;
    }
    out
}

/// Lagrange form at tied nodes split apart by `1e-8`, evaluated with
/// 256-bit floats so the cancellation between near-equal nodes is harmless.
pub fn perturbation_oracle(nodes: &[f64]) -> f64 {
    let split = split_ties(nodes, &big(ORACLE_DELTA));
    let m = split.len();
    let mut acc = big(0.0);
    for (i, a) in split.iter().enumerate() {
        if *a == big(0.0) {
            continue;
        }
        let mut denom = big(1.0);
        for (j, b) in split.iter().enumerate() {
            if j != i {
                denom *= a - b;
            }
        }
        let mut pow = big(1.0);
        for _ in 0..m {
            pow *= a;
        }
        acc += pow * a.ln() / denom;
    }
    -acc.to_f64().value()
}

/// `int_0^inf [t/(1+t) - prod_i t/(t+l_i)] dt`, an integral form of the
/// subentropy that needs no special handling of ties.
pub fn integral_oracle(nodes: &[f64]) -> f64 {
    let quad = Adaptive::new(1e-15, 50);
    let near = |t: f64| t / (1.0 + t) - nodes.iter().map(|l| t / (t + l)).product::<f64>();
    // Power sums for the tail series after t = 1/x.
    let p: Vec<f64> = (0..80).map(|k| nodes.iter().map(|l| l.powi(k)).sum()).collect();
    let far = |x: f64| {
        if x == 0.0 {
            return (1.0 - p[2]) / 2.0;
        }
        let s = if x <= 0.25 {
            let mut s = 0.0;
            let mut xk = 1.0;
            for (k, pk) in p.iter().enumerate().skip(2) {
                let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
                s += sign * xk * (pk - 1.0) / k as f64;
                xk *= x;
                if xk < 1e-20 {
                    break;
                }
            }
            s
        } else {
            (nodes.iter().map(|l| (l * x).ln_1p()).sum::<f64>() - x.ln_1p()) / (x * x)
        };
        // The difference of the two products is -exp(b) expm1(-x^2 s).
        let y = -x * x * s;
        let ratio = if y == 0.0 { 1.0 } else { y.exp_m1() / y };
        (-x.ln_1p()).exp() * s * ratio
    };
    let a = quad.integrate(near, 0.0, 1.0);
    let b = quad.integrate(far, 0.0, 1.0);
    a.value + b.value
}

/// A random full-rank-ish density matrix of dimension `m`.
pub fn random_density(rng: &mut RngStream, m: usize) -> DensityMatrix {
    let n = m + (rng.next_u64() % 3) as usize;
    induced_mixed_state(m, n, rng).expect("m <= n")
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_distance(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j) = (0, 0);
    let mut best: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        best = best.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    best
}

/// `-x ln x`, zero at the origin.
pub fn eta(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}
