//! Draws exact samples and compares pattern frequencies with probabilities.
//!
//! cargo run --release --example sampling

use std::collections::HashMap;

use ppnrd_gbs::components::{build_components, Hypothesis};
use ppnrd_gbs::config::ExperimentConfig;
use ppnrd_gbs::probability::ProbabilityEngine;
use ppnrd_gbs::samplers::exact_sampler;

fn main() -> ppnrd_gbs::Result<()> {
    let config = ExperimentConfig::uniform(4, 2, ExperimentConfig::paired_sources(4, 0.7, 1.0), 0.7, 3)?;
    let set = build_components(&config, Hypothesis::GroundTruth)?;
    let samples = exact_sampler(&set, 200_000, 1)?;

    let mut counts: HashMap<_, usize> = HashMap::new();
    for s in samples.samples() {
        *counts.entry(s.clone()).or_default() += 1;
    }
    let mut top: Vec<_> = counts.into_iter().collect();
    top.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let engine = ProbabilityEngine::new(&set);
    let n = samples.len() as f64;
    println!("{:<12}{:>12}{:>12}{:>8}", "pattern", "frequency", "exact", "z");
    for (pattern, count) in top.iter().take(12) {
        let p = engine.ppnrd_pattern_probability(pattern)?;
        let f = *count as f64 / n;
        let z = (f - p) / (p * (1.0 - p) / n).sqrt();
        println!("{:<12}{f:>12.5}{p:>12.5}{z:>8.2}", pattern.to_string());
    }
    Ok(())
}
