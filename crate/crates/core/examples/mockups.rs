//! Every sampler on one instance: mean and spread of the total click number.
//!
//! cargo run --release --example mockups

use ppnrd_gbs::config::ExperimentConfig;
use ppnrd_gbs::samplers::{sample, SamplerKind};
use ppnrd_gbs::validation::click_stats;

fn main() -> ppnrd_gbs::Result<()> {
    let config = ExperimentConfig::uniform(8, 2, ExperimentConfig::paired_sources(8, 0.6, 1.0), 0.6, 808)?;
    println!("{:<16}{:>8}{:>8}", "sampler", "mean", "std");
    for kind in SamplerKind::ALL {
        let s = click_stats(&sample(&config, kind, 50_000, 5)?)?;
        println!("{:<16}{:>8.3}{:>8.3}", kind.id(), s.mean, s.std_dev);
    }
    Ok(())
}
