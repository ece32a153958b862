mod common;

use common::*;
use proptest::prelude::*;
use subent::qcore::{
    relative_entropy_coherence, spectrum_of, subentropy, von_neumann_entropy, CMatrix, SUBENTROPY_SUPREMUM,
};
use subent::sampling::RngStream;
use subent::{DensityMatrix, Spectrum};
use num_complex::Complex64;

fn probability_vector(max_m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 1..=max_m).prop_filter_map("nonzero mass", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-6).then(|| w.iter().map(|x| x / s).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn bounded_by_supremum_and_min_entropy(p in probability_vector(8)) {
        let spec = Spectrum::new(p).unwrap();
        let q = subentropy(&spec);
        prop_assert!(q >= -1e-12);
        prop_assert!(q <= SUBENTROPY_SUPREMUM + 1e-12);
        prop_assert!(q <= -spec.max().ln() + 1e-12);
        prop_assert!(q <= von_neumann_entropy(&spec) + 1e-12);
    }

    #[test]
    fn permutation_invariant(p in probability_vector(8), rot in 0usize..8) {
        let mut r = p.clone();
        let len = r.len();
        r.rotate_left(rot % len);
        let a = subentropy(&Spectrum::new(p).unwrap());
        let b = subentropy(&Spectrum::new(r).unwrap());
        prop_assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn zero_padding_does_not_change_value(p in probability_vector(6)) {
        let mut padded = p.clone();
        padded.push(0.0);
        let a = subentropy(&Spectrum::new(p).unwrap());
        let b = subentropy(&Spectrum::new(padded).unwrap());
        prop_assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn schur_concave_under_transfers(p in probability_vector(8), t in 0.0f64..1.0) {
        // A Robin Hood transfer from the largest to the smallest entry moves
        // the vector down in the majorization order.
        let spec = Spectrum::new(p).unwrap();
        let mut v = spec.values().to_vec();
        let last = v.len() - 1;
        let moved = t * (v[0] - v[last]) / 2.0;
        v[0] -= moved;
        v[last] += moved;
        let flatter = Spectrum::new(v).unwrap();
        prop_assert!(spec.majorizes(&flatter, 1e-12));
        prop_assert!(subentropy(&spec) <= subentropy(&flatter) + 1e-9);
    }

    #[test]
    fn subadditive_on_tensor_products(p in probability_vector(4), r in probability_vector(4)) {
        let a = Spectrum::new(p).unwrap();
        let b = Spectrum::new(r).unwrap();
        let q = subentropy(&a.tensor(&b));
        prop_assert!((-1e-12..=SUBENTROPY_SUPREMUM + 1e-12).contains(&q));
        prop_assert!(q <= subentropy(&a) + subentropy(&b) + 1e-9, "{q}");
    }
}

#[test]
fn bounds_on_many_random_spectra() {
    let mut rng = RngStream::new(20_240_101, 0);
    for i in 0..20_000 {
        let m = 2 + i % 7;
        let spec = random_spectrum(&mut rng, m);
        let q = subentropy(&spec);
        assert!((-1e-12..=SUBENTROPY_SUPREMUM + 1e-12).contains(&q), "{q} at {:?}", spec.values());
        assert!(q <= -spec.max().ln() + 1e-12);
    }
}

#[test]
fn concave_on_density_matrices() {
    let mut rng = RngStream::new(5, 1);
    for i in 0..400 {
        let m = 2 + i % 5;
        let a = random_density(&mut rng, m);
        let b = random_density(&mut rng, m);
        let q = rng.uniform();
        let mixed = a.mix(&b, q).unwrap();
        let lhs = subentropy(&spectrum_of(&mixed).unwrap());
        let rhs = q * subentropy(&spectrum_of(&a).unwrap()) + (1.0 - q) * subentropy(&spectrum_of(&b).unwrap());
        assert!(lhs >= rhs - 1e-9, "{lhs} < {rhs}");
    }
}

#[test]
fn continuity_bound_holds_for_nearby_states() {
    let mut rng = RngStream::new(6, 2);
    for i in 0..400 {
        let m = 2 + i % 6;
        let a = random_density(&mut rng, m);
        let b = random_density(&mut rng, m);
        let q = 1.0 - 0.3 * rng.uniform();
        let near = a.mix(&b, q).unwrap();
        let t = a.trace_distance(&near).unwrap();
        if t > (-1.0f64).exp() {
            continue;
        }
        let qa = subentropy(&spectrum_of(&a).unwrap());
        let qb = subentropy(&spectrum_of(&near).unwrap());
        assert!((qa - qb).abs() <= (m as f64).ln() * t + eta(t) + 1e-10);
    }
}

#[test]
fn ties_match_perturbation_oracle() {
    let mut rng = RngStream::new(7, 3);
    for i in 0..1000 {
        let m = 2 + i % 7;
        let nodes = degenerate_spectrum(&mut rng, m);
        let got = subentropy(&Spectrum::new(nodes.clone()).unwrap());
        let want = perturbation_oracle(&nodes);
        assert!((got - want).abs() < 1e-7, "{nodes:?}: {got} vs {want}");
    }
}

#[test]
fn half_quarter_quarter_tie() {
    let nodes = [0.5, 0.25, 0.25];
    let got = subentropy(&Spectrum::new(nodes.to_vec()).unwrap());
    assert!((got - perturbation_oracle(&nodes)).abs() < 1e-12);
    assert!((got - integral_oracle(&nodes)).abs() < 1e-10);
}

#[test]
fn distinct_nodes_match_lagrange_form() {
    let mut rng = RngStream::new(8, 4);
    let mut checked = 0;
    while checked < 500 {
        let m = 2 + checked % 5;
        let spec = random_spectrum(&mut rng, m);
        let v = spec.values();
        let min_gap = v.windows(2).map(|w| (w[0] - w[1]) / w[0].max(1e-300)).fold(f64::INFINITY, f64::min);
        if min_gap < 0.2 || v.contains(&0.0) {
            continue;
        }
        let got = subentropy(&spec);
        let want = lagrange_subentropy(v);
        assert!((got - want).abs() < 1e-11, "{v:?}: {got} vs {want}");
        checked += 1;
    }
}

#[test]
fn agrees_with_integral_representation() {
    let mut rng = RngStream::new(10, 6);
    for i in 0..300 {
        let m = 2 + i % 7;
        let spec = if i % 2 == 0 {
            random_spectrum(&mut rng, m)
        } else {
            Spectrum::new(degenerate_spectrum(&mut rng, m)).unwrap()
        };
        let got = subentropy(&spec);
        let want = integral_oracle(spec.values());
        assert!((got - want).abs() < 1e-9, "{:?}: {got} vs {want}", spec.values());
    }
}

#[test]
fn near_degenerate_values_stay_continuous() {
    for base in [vec![0.5, 0.5], vec![0.3, 0.3, 0.4], vec![0.25; 4]] {
        let tied = subentropy(&Spectrum::new(base.clone()).unwrap());
        for e in [1e-3, 1e-6, 1e-9, 1e-12] {
            let mut v = base.clone();
            v[0] += e;
            v[1] -= e;
            let q = subentropy(&Spectrum::new(v).unwrap());
            assert!((q - tied).abs() < 10.0 * e, "{base:?} e={e}: {q} vs {tied}");
        }
    }
}

#[test]
fn coherence_ignores_diagonal_phases() {
    let mut rng = RngStream::new(9, 5);
    for i in 0..200 {
        let m = 2 + i % 6;
        let rho = random_density(&mut rng, m);
        let phases = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(m, |_, _| {
            Complex64::from_polar(1.0, std::f64::consts::TAU * rng.uniform())
        }));
        let rotated = rho.conjugate_by(&phases).unwrap();
        let a = relative_entropy_coherence(&rho).unwrap();
        let b = relative_entropy_coherence(&rotated).unwrap();
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn incoherent_states_have_zero_coherence() {
    let rho = DensityMatrix::diagonal(&[0.2, 0.3, 0.5]).unwrap();
    assert!(relative_entropy_coherence(&rho).unwrap().abs() < 1e-14);
}
