//! Adaptive Gauss–Legendre quadrature on intervals and on the 2-simplex.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 1..=n {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        Self { nodes, weights }
    }

    /// Applies the rule on `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integral value with an a-posteriori error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Adaptive bisection driven by a fixed Gauss–Legendre rule.
#[derive(Debug, Clone)]
pub struct Adaptive {
    rule: GaussLegendre,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for Adaptive {
    fn default() -> Self {
        Self::new(1e-13, 40)
    }
}

impl Adaptive {
    pub fn new(abs_tol: f64, max_depth: u32) -> Self {
        Self {
            rule: GaussLegendre::new(12),
            abs_tol,
            max_depth,
        }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> Estimate {
        let whole = self.rule.integrate(&mut f, a, b);
        self.refine(&mut f, a, b, whole, self.abs_tol, 0)
    }

    fn refine<F: FnMut(f64) -> f64>(&self, f: &mut F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> Estimate {
        let mid = 0.5 * (a + b);
        let left = self.rule.integrate(&mut *f, a, mid);
        let right = self.rule.integrate(&mut *f, mid, b);
        let diff = (left + right - whole).abs();
        if diff <= tol || depth >= self.max_depth {
            return Estimate {
                value: left + right,
                error: diff,
            };
        }
        let l = self.refine(f, a, mid, left, 0.5 * tol, depth + 1);
        let r = self.refine(f, mid, b, right, 0.5 * tol, depth + 1);
        Estimate {
            value: l.value + r.value,
            error: l.error + r.error,
        }
    }

    /// Integral over the triangle `x, y >= 0, x + y <= 1` by nested 1-D
    /// adaptive quadrature.
    pub fn integrate_triangle<F: Fn(f64, f64) -> f64>(&self, f: F) -> Estimate {
        let mut inner_error: f64 = 0.0;
        let outer = self.integrate(
            |x| {
                let inner = self.integrate(|y| f(x, y), 0.0, 1.0 - x);
                inner_error = inner_error.max(inner.error);
                inner.value
            },
            0.0,
            1.0,
        );
        Estimate {
            value: outer.value,
            error: outer.error + inner_error,
        }
    }
}

impl Estimate {
    /// Fails when the relative error estimate exceeds `rel_target`.
    pub fn require_relative(self, rel_target: f64) -> Result<Self> {
        let scale = self.value.abs().max(f64::MIN_POSITIVE);
        if self.error / scale > rel_target || !self.value.is_finite() {
            Err(Error::QuadratureFailure {
                estimate: self.error / scale,
                target: rel_target,
            })
        } else {
            Ok(self)
        }
    }
}
