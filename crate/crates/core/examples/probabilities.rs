//! Click-pattern probabilities for a small instance under every hypothesis.
//!
//! cargo run --release --example probabilities

use ppnrd_gbs::components::{build_components, Hypothesis};
use ppnrd_gbs::config::ExperimentConfig;
use ppnrd_gbs::pattern::ClickPattern;
use ppnrd_gbs::probability::ProbabilityEngine;

fn main() -> ppnrd_gbs::Result<()> {
    let config = ExperimentConfig::load(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/small.toml"))?;
    let patterns = [
        ClickPattern(vec![0; 6]),
        ClickPattern(vec![1, 1, 0, 0, 0, 0]),
        ClickPattern(vec![2, 0, 0, 1, 0, 1]),
        ClickPattern(vec![1, 1, 1, 1, 0, 0]),
    ];
    println!(
        "{:<16}{:>14}{:>14}{:>14}{:>14}",
        "pattern", "ground-truth", "thermal", "squashed", "coherent"
    );
    let engines: Vec<ProbabilityEngine> = [
        Hypothesis::GroundTruth,
        Hypothesis::Thermal,
        Hypothesis::Squashed,
        Hypothesis::Coherent,
    ]
    .into_iter()
    .map(|h| build_components(&config, h).map(|s| ProbabilityEngine::new(&s)))
    .collect::<Result<_, _>>()?;
    for p in &patterns {
        print!("{:<16}", p.to_string());
        for e in &engines {
            print!("{:>14.3e}", e.ppnrd_pattern_probability(p)?);
        }
        println!();
    }

    println!("\nclick-number distribution (ground truth):");
    for (n, p) in engines[0].exact_click_number_distribution()?.iter().enumerate() {
        println!("  n = {n:>2}: {p:.5}");
    }
    Ok(())
}
