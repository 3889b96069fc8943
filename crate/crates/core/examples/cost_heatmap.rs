//! Classical simulation-time estimates for sampled patterns. The patterns
//! come from the distinguishable-photon mockup, which is cheap at any width.
//!
//! cargo run --release --example cost_heatmap

use ppnrd_gbs::config::ExperimentConfig;
use ppnrd_gbs::cost::{cost_heatmap, g_factor, simulation_time, CostModel};
use ppnrd_gbs::pattern::ClickPattern;
use ppnrd_gbs::samplers::{sample, SamplerKind};

fn main() -> ppnrd_gbs::Result<()> {
    let model = CostModel::new(1e-9, 144)?;
    for counts in [vec![1, 1, 0, 0], vec![2, 1, 1, 0], vec![8, 0, 0, 0]] {
        let p = ClickPattern(counts);
        let g = g_factor(&p)?;
        let t = simulation_time(&p, &model)?;
        println!("{p}: N = {}, G = {:.4}, log10 T = {:.3}", g.n, g.g, t.log10_seconds());
    }

    let config = ExperimentConfig::uniform(24, 8, ExperimentConfig::paired_sources(24, 1.0, 1.0), 0.7, 12)?;
    let samples = sample(&config, SamplerKind::Distinguishable, 20_000, 1)?;
    let heat = cost_heatmap(&samples, &model, 0.25)?;
    println!(
        "\nhardest sample {}: N = {}, G = {:.3}, log10 T = {:.2}",
        samples.samples()[heat.hardest_index],
        heat.hardest_g.n,
        heat.hardest_g.g,
        heat.hardest.log10_seconds()
    );
    println!("mean log10 T = {:.2}", heat.mean_log10_seconds);
    println!("\n{:>8}{:>4}{:>8}", "G from", "N", "count");
    for c in heat.cells.iter().filter(|c| c.count >= 500) {
        println!("{:>8.2}{:>4}{:>8}", c.g_bin_low, c.n, c.count);
    }
    Ok(())
}
