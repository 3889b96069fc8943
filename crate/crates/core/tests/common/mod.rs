//! Shared fixtures for the integration tests.
#![allow(dead_code)]

pub mod fock;

use ppnrd_gbs::config::{ExperimentConfig, Source, UnitarySpec};

pub fn source(a: usize, b: usize, r: f64, x: f64) -> Source {
    Source {
        modes: (a, b),
        squeezing: r,
        indistinguishability: x,
    }
}

pub fn instance(
    num_modes: usize,
    fanout: usize,
    sources: Vec<Source>,
    efficiency: Vec<f64>,
    seed: u64,
) -> ExperimentConfig {
    let cfg = ExperimentConfig {
        num_modes,
        fanout,
        sources,
        efficiency,
        unitary: UnitarySpec::Haar { seed },
        power_scale: 1.0,
    };
    cfg.validate().expect("valid fixture");
    cfg
}

/// Small instances checked against the Fock reference: every one has at
/// most six detector bins and at most three photons on average.
pub fn oracle_suite() -> Vec<(&'static str, ExperimentConfig)> {
    let mut suite = vec![
        (
            "tmss-lossless-f1",
            instance(2, 1, vec![source(0, 1, 0.8, 1.0)], vec![1.0; 2], 1),
        ),
        (
            "tmss-lossy-f2",
            instance(2, 2, vec![source(0, 1, 0.7, 1.0)], vec![0.6, 0.85], 2),
        ),
        ("tmss-f3", instance(2, 3, vec![source(0, 1, 0.6, 1.0)], vec![0.8; 2], 3)),
        (
            "tmss-distinguishable-f2",
            instance(2, 2, vec![source(0, 1, 0.7, 0.0)], vec![0.7; 2], 4),
        ),
        (
            "vacuum-spectator-f2",
            instance(3, 2, vec![source(0, 2, 0.6, 0.5)], vec![0.75, 0.9, 0.6], 5),
        ),
        (
            "six-mode-f1",
            instance(
                6,
                1,
                vec![source(0, 1, 0.45, 0.5), source(2, 3, 0.4, 1.0), source(4, 5, 0.35, 0.0)],
                vec![0.9, 0.8, 0.7, 0.85, 0.95, 0.6],
                6,
            ),
        ),
    ];
    for (name, x) in [("four-mode-x0", 0.0), ("four-mode-x05", 0.5), ("four-mode-x1", 1.0)] {
        suite.push((
            name,
            instance(4, 1, vec![source(0, 1, 0.55, x), source(2, 3, 0.5, x)], vec![0.7; 4], 7),
        ));
    }
    suite.push((
        "three-mode-f2-x05",
        instance(3, 2, vec![source(1, 2, 0.65, 0.5)], vec![0.8; 3], 8),
    ));
    suite
}

/// Instances with up to twelve bins for normalisation checks.
pub fn normalisation_suite() -> Vec<(&'static str, ExperimentConfig)> {
    let mut suite = oracle_suite();
    suite.push((
        "four-mode-f3",
        instance(
            4,
            3,
            vec![source(0, 1, 0.6, 0.7), source(2, 3, 0.6, 0.7)],
            vec![0.65; 4],
            9,
        ),
    ));
    suite.push((
        "six-mode-f2",
        instance(
            6,
            2,
            vec![source(0, 3, 0.6, 1.0), source(1, 4, 0.5, 0.5), source(2, 5, 0.7, 0.0)],
            vec![0.7; 6],
            10,
        ),
    ));
    suite.push((
        "twelve-mode-f1",
        instance(
            12,
            1,
            (0..6).map(|k| source(2 * k, 2 * k + 1, 0.5, 0.8)).collect(),
            vec![0.6; 12],
            11,
        ),
    ));
    suite
}
