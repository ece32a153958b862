use num_rational::BigRational;
use num_traits::{One, Zero};
use subent::closedform::*;
use subent::qcore::SUBENTROPY_SUPREMUM;
use statrs::function::gamma::ln_gamma;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn harmonic_oracle(k: usize) -> BigRational {
    (1..=k).fold(BigRational::zero(), |acc, i| acc + rat(1, i as i64))
}

#[test]
fn prop1_matches_harmonic_closed_form() {
    for n in 1..=32usize {
        for m in 1..=n {
            let got = prop1_average_subentropy(m, n - m + 1).unwrap().exact;
            let want = BigRational::one() + harmonic_oracle(m * n) - harmonic_oracle(m) - harmonic_oracle(n);
            assert_eq!(got, want, "m={m} n={n}");
            assert_eq!(avg_subentropy_closed(m, n).unwrap(), want);
        }
    }
}

#[test]
fn theorem_one_assembly_is_exact() {
    for n in 1..=64usize {
        for m in 1..=n {
            let lhs = (harmonic(m) - BigRational::one()) + avg_subentropy_closed(m, n).unwrap()
                - avg_entropy_page(m, n).unwrap();
            assert_eq!(lhs, rat(m as i64 - 1, 2 * n as i64), "m={m} n={n}");
            assert_eq!(avg_coherence(m, n).unwrap(), lhs);
        }
    }
}

#[test]
fn small_values() {
    assert_eq!(avg_subentropy_closed(2, 2).unwrap(), rat(1, 12));
    assert_eq!(avg_entropy_page(2, 2).unwrap(), rat(1, 3));
    assert_eq!(avg_coherence(2, 2).unwrap(), rat(1, 4));
    assert_eq!(avg_coherence(1, 5).unwrap(), BigRational::zero());
    assert!(avg_subentropy_closed(3, 2).is_err());
    assert!(avg_subentropy_closed(0, 2).is_err());
}

#[test]
fn subentropy_average_within_bounds() {
    for n in 1..=40usize {
        for m in 1..=n {
            let v = to_f64(&avg_subentropy_closed(m, n).unwrap());
            assert!((0.0..=SUBENTROPY_SUPREMUM).contains(&v), "{m} {n} {v}");
        }
    }
}

#[test]
fn hilbert_schmidt_gap_is_negative_and_shrinking() {
    let mut prev = f64::INFINITY;
    for m in 2..=64 {
        let gap = to_f64(&avg_subentropy_closed(m, m).unwrap()) - SUBENTROPY_SUPREMUM;
        assert!(gap < 0.0);
        assert!(gap.abs() < prev);
        prev = gap.abs();
    }
}

#[test]
fn selberg_ratio_form_at_gamma_one() {
    // I(m, alpha, 1) Gamma(alpha m + m(m-1)) = prod_j Gamma(alpha + j - 1) Gamma(1 + j)
    for m in 1..=8usize {
        for alpha in [0.5, 1.0, 1.5, 2.0, 3.0, 7.25] {
            let lhs = ln_integral_family(m, alpha, 1.0).unwrap() + ln_gamma(alpha * m as f64 + (m * (m - 1)) as f64);
            let rhs: f64 = (1..=m).map(|j| ln_gamma(alpha + j as f64 - 1.0) + ln_gamma(1.0 + j as f64)).sum();
            assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0), "m={m} alpha={alpha}");
        }
    }
}

#[test]
fn moments_without_repulsion_are_dirichlet() {
    // As gamma -> 0 the family tends to a Dirichlet(alpha, ..., alpha) integral.
    for m in 1..=6usize {
        for alpha in [0.5, 1.0, 2.5] {
            let base = ln_integral_family(m, alpha, 1e-9).unwrap();
            let dirichlet = m as f64 * ln_gamma(alpha) - ln_gamma(m as f64 * alpha);
            assert!((base - dirichlet).abs() < 1e-6);
            for k in 0..=m {
                let ratio = ln_integral_family_moment(m, k, alpha, 1e-9).unwrap() - base;
                let want = k as f64 * alpha.ln() + ln_gamma(m as f64 * alpha) - ln_gamma(m as f64 * alpha + k as f64);
                assert!((ratio - want).abs() < 1e-6, "m={m} k={k} alpha={alpha}");
            }
        }
    }
}

#[test]
fn harmonic_and_digamma() {
    assert_eq!(harmonic(0), BigRational::zero());
    assert_eq!(harmonic(4), rat(25, 12));
    for a in 1..30 {
        for b in 1..30 {
            assert_eq!(digamma_integer_diff(a, b).unwrap(), harmonic_oracle(a - 1) - harmonic_oracle(b - 1));
        }
    }
    assert!(digamma_integer_diff(0, 1).is_err());
}

#[test]
fn levy_constant_and_bound() {
    let c = levy_constant();
    assert!((c - 144.0 * std::f64::consts::PI.powi(3) * std::f64::consts::LN_2).abs() < 1e-9);
    assert!((levy_bound(3, 3, 0.1).unwrap() - 1.99995).abs() < 5e-6);
    for m in [3, 5, 9] {
        let a = levy_bound_corollary(m, 0.5).unwrap();
        let b = levy_bound(m, m, 0.25).unwrap();
        assert!((a - b).abs() <= 1e-14 * b);
    }
    assert!(levy_bound_corollary(2, 0.1).is_err());
}
