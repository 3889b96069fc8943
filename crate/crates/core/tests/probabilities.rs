mod common;

use common::fock::{FockReference, NORM_FLOOR};
use nalgebra::DMatrix;
use num_complex::Complex64;
use ppnrd_gbs::components::{build_components, GaussianComponentSet, Hypothesis};
use ppnrd_gbs::config::UnitarySpec;
use ppnrd_gbs::pattern::{BinPattern, ClickPattern};
use ppnrd_gbs::probability::{all_click_patterns, CompensatedSum, ProbabilityEngine};
use ppnrd_gbs::state::GaussianState;

#[test]
fn ppnrd_probabilities_match_fock_reference() {
    for (name, cfg) in common::oracle_suite() {
        let set = build_components(&cfg, Hypothesis::GroundTruth).unwrap();
        assert!(set.mean_photon_number() <= 3.0, "{name}");
        let engine = ProbabilityEngine::new(&set);
        let fock = FockReference::ground_truth(&cfg);
        assert!(fock.min_norm >= NORM_FLOOR, "{name}: norm {}", fock.min_norm);
        let mut worst: f64 = 0.0;
        for p in all_click_patterns(cfg.num_modes, cfg.fanout) {
            let a = engine.ppnrd_pattern_probability(&p).unwrap();
            let b = fock.ppnrd_probability(&p);
            worst = worst.max((a - b).abs());
        }
        assert!(worst < 1e-6, "{name}: max deviation {worst:e}");
    }
}

#[test]
fn threshold_probabilities_match_fock_reference() {
    for (name, cfg) in common::oracle_suite() {
        let set = build_components(&cfg, Hypothesis::GroundTruth).unwrap();
        let engine = ProbabilityEngine::new(&set);
        let fock = FockReference::ground_truth(&cfg);
        let bins = cfg.num_bins();
        for mask in 0u32..(1 << bins) {
            let p = BinPattern((0..bins).map(|b| mask >> b & 1 == 1).collect());
            let diff = (engine.threshold_pattern_probability(&p).unwrap() - fock.threshold_probability(&p)).abs();
            assert!(diff < 1e-6, "{name}: {p:?} off by {diff:e}");
        }
    }
}

#[test]
fn click_number_distribution_matches_fock_reference() {
    for (name, cfg) in common::oracle_suite() {
        let set = build_components(&cfg, Hypothesis::GroundTruth).unwrap();
        let exact = ProbabilityEngine::new(&set).exact_click_number_distribution().unwrap();
        let fock = FockReference::ground_truth(&cfg);
        let mut reference = vec![0.0; cfg.num_bins() + 1];
        for (mask, p) in fock.bin_sets.iter().enumerate() {
            reference[mask.count_ones() as usize] += p;
        }
        for (n, (a, b)) in exact.iter().zip(&reference).enumerate() {
            assert!((a - b).abs() < 1e-6, "{name}: P(n = {n}) {a} vs {b}");
        }
    }
}

#[test]
fn ppnrd_distributions_are_normalised_for_every_hypothesis() {
    for (name, cfg) in common::normalisation_suite() {
        for h in [
            Hypothesis::GroundTruth,
            Hypothesis::Thermal,
            Hypothesis::Squashed,
            Hypothesis::Coherent,
        ] {
            let engine = ProbabilityEngine::new(&build_components(&cfg, h).unwrap());
            let mut acc = CompensatedSum::default();
            for p in all_click_patterns(cfg.num_modes, cfg.fanout) {
                acc.add(engine.ppnrd_pattern_probability(&p).unwrap());
            }
            assert!((acc.value() - 1.0).abs() < 1e-9, "{name}/{}: {}", h.name(), acc.value());
            let dist: f64 = engine.exact_click_number_distribution().unwrap().iter().sum();
            assert!(
                (dist - 1.0).abs() < 1e-9,
                "{name}/{}: click numbers sum to {dist}",
                h.name()
            );
        }
    }
}

#[test]
fn thermal_mode_closed_form() {
    // A thermal mode with mean n split over F bins: P(no click) = 1 / (1 + n).
    for nbar in [0.1, 0.7, 2.5] {
        for fanout in 1..=3 {
            let set = GaussianComponentSet::single(GaussianState::thermal(nbar).unwrap(), fanout).unwrap();
            let engine = ProbabilityEngine::new(&set);
            let all: Vec<usize> = (0..fanout).collect();
            let p = engine.vacuum_probability(&all).unwrap();
            assert!((p - 1.0 / (1.0 + nbar)).abs() < 1e-12);
            let one = engine.vacuum_probability(&[0]).unwrap();
            assert!((one - 1.0 / (1.0 + nbar / fanout as f64)).abs() < 1e-12);
        }
    }
}

#[test]
fn probabilities_do_not_depend_on_thread_count() {
    let cfg = &common::normalisation_suite()[1].1;
    let set = build_components(cfg, Hypothesis::GroundTruth).unwrap();
    let compute = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let engine = ProbabilityEngine::new(&set);
            let probs: Vec<f64> = all_click_patterns(cfg.num_modes, cfg.fanout)
                .iter()
                .map(|p| engine.ppnrd_pattern_probability(p).unwrap())
                .collect();
            (probs, engine.exact_click_number_distribution().unwrap())
        })
    };
    let (a, da) = compute(1);
    let (b, db) = compute(4);
    for (x, y) in a.iter().zip(&b).chain(da.iter().zip(&db)) {
        assert!((x - y).abs() <= 1e-12);
    }
}

#[test]
fn invalid_patterns_are_rejected() {
    let cfg = &common::oracle_suite()[1].1;
    let engine = ProbabilityEngine::new(&build_components(cfg, Hypothesis::GroundTruth).unwrap());
    assert!(engine.ppnrd_pattern_probability(&ClickPattern(vec![3, 0])).is_err());
    assert!(engine.ppnrd_pattern_probability(&ClickPattern(vec![1, 0, 0])).is_err());
    assert!(engine.vacuum_probability(&[7]).is_err());
}

#[test]
fn lossless_pair_clicks_respect_photon_pairing() {
    // Identity interferometer, no loss: both arms hold the same photon
    // number, so exactly one arm clicking is impossible.
    let cfg = common::instance(2, 2, vec![common::source(0, 1, 0.5, 1.0)], vec![1.0; 2], 0)
        .with_unitary(UnitarySpec::Explicit(DMatrix::identity(2, 2)));
    let engine = ProbabilityEngine::new(&build_components(&cfg, Hypothesis::GroundTruth).unwrap());
    let fock = FockReference::ground_truth(&cfg);
    for p in all_click_patterns(2, 2) {
        let a = engine.ppnrd_pattern_probability(&p).unwrap();
        assert!((a - fock.ppnrd_probability(&p)).abs() < 1e-8, "{p}");
        let c = p.counts();
        if (c[0] == 0) != (c[1] == 0) {
            assert!(a.abs() < 1e-15, "{p}: {a}");
        }
    }
}

#[test]
fn distinguishable_sources_do_not_interfere() {
    // A phase on one source's input changes the click statistics only when
    // the sources share a component.
    let base = common::oracle_suite()
        .into_iter()
        .find(|(n, _)| *n == "four-mode-x0")
        .unwrap()
        .1;
    let u = base.unitary_matrix();
    let mut phase = DMatrix::<Complex64>::identity(4, 4);
    phase[(0, 0)] = Complex64::from_polar(1.0, 1.1);
    let shifted_u = &u * phase;
    let distance = |x: f64| {
        let mut cfg = base.clone();
        for s in &mut cfg.sources {
            s.indistinguishability = x;
        }
        let shifted = cfg.clone().with_unitary(UnitarySpec::Explicit(shifted_u.clone()));
        let a = ProbabilityEngine::new(
            &build_components(
                &cfg.with_unitary(UnitarySpec::Explicit(u.clone())),
                Hypothesis::GroundTruth,
            )
            .unwrap(),
        );
        let b = ProbabilityEngine::new(&build_components(&shifted, Hypothesis::GroundTruth).unwrap());
        all_click_patterns(4, base.fanout)
            .iter()
            .map(|p| (a.ppnrd_pattern_probability(p).unwrap() - b.ppnrd_pattern_probability(p).unwrap()).abs())
            .fold(0.0, f64::max)
    };
    assert!(distance(0.0) < 1e-12);
    assert!(distance(1.0) > 1e-4);
}
