mod common;

use mminv::invariants::obs_diam::obs_diam_exact;
use mminv::order::{
    dominates_exact, dominates_exact_with, necessary_conditions, pushforward_space,
    DominationWitness,
};
use mminv::space::AmbientMetric;
use mminv::{FiniteMMSpace, KappaGrid};
use proptest::prelude::*;

fn dominates(x: &FiniteMMSpace, y: &FiniteMMSpace) -> Option<DominationWitness> {
    dominates_exact(x, y).unwrap().witness().cloned()
}

#[test]
fn reflexive_and_point_is_minimal() {
    let mut rng = common::rng(3);
    for n in 1..=5 {
        let x = common::random_space(&mut rng, n);
        let w = dominates(&x, &x).expect("X dominates itself");
        assert!(w.is_valid(&x, &x));
        assert!(dominates(&x, &FiniteMMSpace::one_point()).is_some());
        if n > 1 {
            assert!(dominates(&FiniteMMSpace::one_point(), &x).is_none());
        }
    }
}

#[test]
fn contraction_is_dominated() {
    let x = common::complete_graph(4);
    for t in [0.25, 0.5, 1.0] {
        assert!(dominates(&x, &x.scale(t).unwrap()).is_some(), "t = {t}");
    }
    assert!(dominates(&x, &x.scale(1.5).unwrap()).is_none());
}

#[test]
fn mass_must_split_exactly() {
    // K3 with uniform mass cannot produce a (1/2, 1/2) two-point space
    let x = common::complete_graph(3);
    assert!(dominates(&x, &FiniteMMSpace::two_point(1.0, 0.5)).is_none());
    assert!(dominates(&x, &FiniteMMSpace::two_point(1.0, 1.0 / 3.0)).is_some());
}

#[test]
fn budget_is_enforced() {
    let x = common::complete_graph(6);
    let err = dominates_exact_with(&x, &x, 1000).unwrap_err();
    assert!(err.to_string().contains("necessary_conditions"), "{err}");
}

#[test]
fn necessary_conditions_refute_a_larger_space() {
    let x = common::complete_graph(4);
    let y = x.scale(2.0).unwrap();
    let r = necessary_conditions(&x, &y, &KappaGrid::default()).unwrap();
    assert!(r.refutes());
    let r = necessary_conditions(&y, &x, &KappaGrid::default()).unwrap();
    assert!(!r.refutes());
}

#[test]
fn pushforward_rejects_expanding_maps() {
    let x = FiniteMMSpace::on_line(&[0.0, 1.0], vec![0.5, 0.5]);
    let target = AmbientMetric::from_fn(2, |i, j| if i == j { 0.0 } else { 2.0 });
    let err = pushforward_space(&x, &[0, 1], &target).unwrap_err();
    assert!(err.to_string().contains("1-Lipschitz"));
    let merged = pushforward_space(&x, &[1, 1], &target).unwrap();
    assert_eq!(merged.len(), 1);
}

/// Image of `x` under `i ↦ i mod k`, with the target metric shrunk until
/// the map is 1-Lipschitz.
fn collapse(x: &FiniteMMSpace, k: usize) -> FiniteMMSpace {
    let n = x.len();
    let map: Vec<usize> = (0..n).map(|i| i % k).collect();
    let mut t = 1.0f64;
    for a in 0..n {
        for b in 0..n {
            let d = x.dist(map[a], map[b]);
            if d > 0.0 {
                t = t.min(x.dist(a, b) / d);
            }
        }
    }
    let target = AmbientMetric::from_fn(n, |i, j| t * x.dist(i, j));
    pushforward_space(x, &map, &target).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // any 1-Lipschitz image is dominated, with ObsDiam going down
    #[test]
    fn images_are_dominated(seed in any::<u64>(), n in 2usize..6, k in 1usize..4) {
        let mut rng = common::rng(seed);
        let x = common::random_space(&mut rng, n);
        let y = collapse(&x, k.min(n));
        let w = dominates(&x, &y);
        prop_assert!(w.is_some());
        prop_assert!(w.unwrap().is_valid(&x, &y));
        for kappa in [0.1, 0.3, 0.6] {
            let ox = obs_diam_exact(&x, kappa).unwrap().value;
            let oy = obs_diam_exact(&y, kappa).unwrap().value;
            prop_assert!(oy <= ox + 1e-9);
        }
        prop_assert!(!necessary_conditions(&x, &y, &KappaGrid::default()).unwrap().refutes());
    }

    #[test]
    fn domination_composes(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let x = common::random_space(&mut rng, 4);
        let half = x.scale(0.5).unwrap();
        let merge = collapse(&half, 3);
        let f = dominates(&x, &half).unwrap();
        let g = dominates(&half, &merge).unwrap();
        prop_assert!(f.compose(&g).is_valid(&x, &merge));
    }

    #[test]
    fn witnesses_pass_the_necessary_conditions(seed in any::<u64>(), n in 1usize..5, m in 1usize..5) {
        let mut rng = common::rng(seed);
        let x = common::random_space(&mut rng, n);
        let y = common::random_space(&mut rng, m).scale(0.2).unwrap();
        if let Some(w) = dominates(&x, &y) {
            prop_assert!(w.is_valid(&x, &y));
            prop_assert!(!necessary_conditions(&x, &y, &KappaGrid::default()).unwrap().refutes());
        }
        if necessary_conditions(&x, &y, &KappaGrid::default()).unwrap().refutes() {
            prop_assert!(dominates(&x, &y).is_none());
        }
    }
}
