//! Bayesian score of exact samples against the thermal and squashed mockups,
//! on the full system and on random subsystems.
//!
//! cargo run --release --example bayesian_validation

use ppnrd_gbs::components::{build_components, Hypothesis};
use ppnrd_gbs::config::ExperimentConfig;
use ppnrd_gbs::samplers::exact_sampler;
use ppnrd_gbs::validation::{bayesian_score, bayesian_subsystem_sweep};

fn main() -> ppnrd_gbs::Result<()> {
    let config = ExperimentConfig::uniform(8, 2, ExperimentConfig::paired_sources(8, 0.6, 1.0), 0.6, 21)?;
    let gt = build_components(&config, Hypothesis::GroundTruth)?;
    let samples = exact_sampler(&gt, 30_000, 9)?;
    let modes: Vec<usize> = (0..8).collect();

    for h in [Hypothesis::Thermal, Hypothesis::Squashed] {
        let alt = build_components(&config, h)?;
        let r = bayesian_score(&samples, &gt, &alt, &modes, 2)?;
        println!(
            "{:<9} n = 2: Delta H = {:.4} +/- {:.4} over {} samples",
            h.name(),
            r.delta_h,
            r.std_error,
            r.n_samples
        );
        for p in bayesian_subsystem_sweep(&samples, &gt, &alt, &[2, 4, 6, 8], &[2], 20, 1)? {
            println!("    size {:>2}: {:.4} +/- {:.4}", p.size, p.mean_delta_h, p.std_error);
        }
    }
    Ok(())
}
