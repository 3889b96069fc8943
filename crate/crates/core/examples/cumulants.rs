//! Second- and third-order click cumulants: exact values, sample estimates,
//! and the D / K comparison for a greedy spoofer.
//!
//! cargo run --release --example cumulants

use ppnrd_gbs::components::{build_components, Hypothesis};
use ppnrd_gbs::config::ExperimentConfig;
use ppnrd_gbs::samplers::{exact_sampler, sample, SamplerKind};
use ppnrd_gbs::validation::{all_tuples, compare_correlations, cumulants_empirical, cumulants_exact, ClickVariable};

fn main() -> ppnrd_gbs::Result<()> {
    let config = ExperimentConfig::uniform(6, 2, ExperimentConfig::paired_sources(6, 0.6, 1.0), 0.6, 4)?;
    let gt = build_components(&config, Hypothesis::GroundTruth)?;
    let exact_samples = exact_sampler(&gt, 200_000, 2)?;
    let greedy = sample(&config, SamplerKind::Greedy, 200_000, 3)?;

    for order in [2, 3] {
        let tuples = all_tuples(config.num_bins(), order);
        let exact = cumulants_exact(&gt, ClickVariable::Bin, order, &tuples)?;
        let emp = cumulants_empirical(&exact_samples, ClickVariable::Bin, order, &tuples)?;
        println!("order {order}, first tuples:");
        for (t, e) in exact.entries.iter().take(4) {
            let s = &emp.entries[t];
            println!(
                "  {t:?}: exact {:+.5}  sampled {:+.5} +/- {:.5}",
                e.value, s.value, s.std_error
            );
        }
        let a = compare_correlations(&emp, &exact)?;
        let b = compare_correlations(
            &cumulants_empirical(&greedy, ClickVariable::Bin, order, &tuples)?,
            &exact,
        )?;
        println!("  exact sampler: D = {:.4}, K = {:.3}", a.d, a.k_slope);
        println!("  greedy:        D = {:.4}, K = {:.3}\n", b.d, b.k_slope);
    }
    Ok(())
}
