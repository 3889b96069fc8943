//! Statistical tests on sample sets: Bayesian score, cumulants, correlation
//! comparison, HOG score and click-number statistics.

mod bayes;
mod cumulants;

pub use bayes::{
    bayesian_score, bayesian_score_with_engines, bayesian_subsystem_sweep, random_subsets, BayesianResult, SweepPoint,
};
pub use cumulants::{
    all_tuples, cumulants_empirical, cumulants_empirical_blocks, cumulants_exact, cumulants_exact_with_engine,
    cumulants_from_moments, moments_from_cumulants, set_partitions, ClickVariable, CumulantEntry, CumulantTable,
    JACKKNIFE_BLOCKS, MAX_ORDER,
};

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pattern::ClickPattern;
use crate::probability::{ClickNumberDistribution, ProbabilityEngine};
use crate::samplers::SampleSet;

/// Relative distance and least-squares slope of one cumulant table against a
/// reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonMetrics {
    /// `|a - b| / |b|`.
    pub d: f64,
    /// `(b . a) / (b . b)`.
    pub k_slope: f64,
}

/// Compares `a` against the reference `b`; both must cover the same tuples.
pub fn compare_correlations(a: &CumulantTable, b: &CumulantTable) -> Result<ComparisonMetrics> {
    if a.entries.len() != b.entries.len() || a.entries.keys().ne(b.entries.keys()) {
        return Err(Error::InvalidParameter("cumulant tables cover different tuples".into()));
    }
    let (mut diff2, mut bb, mut ba) = (0.0, 0.0, 0.0);
    for (ea, eb) in a.entries.values().zip(b.entries.values()) {
        diff2 += (ea.value - eb.value).powi(2);
        bb += eb.value * eb.value;
        ba += eb.value * ea.value;
    }
    if bb == 0.0 {
        return Err(Error::InvalidParameter("reference cumulant table has zero norm".into()));
    }
    Ok(ComparisonMetrics {
        d: diff2.sqrt() / bb.sqrt(),
        k_slope: ba / bb,
    })
}

/// Heavy-output score: wins and ties of H0 over H1 across the samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HogScore {
    pub wins: usize,
    pub ties: usize,
    pub total: usize,
}

impl HogScore {
    /// Fraction with `P0 > P1`, ties counted as one half.
    pub fn value(&self) -> f64 {
        (2 * self.wins + self.ties) as f64 / (2 * self.total) as f64
    }

    /// Reported next to every score: a spoofer can game this statistic.
    pub const CAVEAT: &'static str =
        "HOG compares single-sample likelihoods and can be spoofed by samplers targeting high-probability patterns";
}

pub fn hog_score(samples: &SampleSet, h0: &ProbabilityEngine, h1: &ProbabilityEngine) -> Result<HogScore> {
    if samples.is_empty() {
        return Err(Error::Empty("HOG score needs samples"));
    }
    let mut distinct: Vec<ClickPattern> = samples.samples().to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let probs: Vec<(f64, f64)> = distinct
        .par_iter()
        .map(|p| Ok((h0.ppnrd_pattern_probability(p)?, h1.ppnrd_pattern_probability(p)?)))
        .collect::<Result<_>>()?;
    let (mut wins, mut ties) = (0, 0);
    for s in samples.samples() {
        let k = distinct.binary_search(s).expect("pattern is in the distinct list");
        match probs[k].0.partial_cmp(&probs[k].1) {
            Some(Ordering::Greater) => wins += 1,
            Some(Ordering::Equal) => ties += 1,
            _ => {}
        }
    }
    Ok(HogScore {
        wins,
        ties,
        total: samples.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClickStats {
    pub mean: f64,
    pub std_dev: f64,
}

/// Unbiased mean and standard deviation of the total click number.
pub fn click_stats(samples: &SampleSet) -> Result<ClickStats> {
    let totals: Vec<f64> = samples.samples().iter().map(|s| s.total_clicks() as f64).collect();
    let n = totals.len();
    if n == 0 {
        return Err(Error::Empty("click statistics need samples"));
    }
    let mean = totals.iter().sum::<f64>() / n as f64;
    let std_dev = if n > 1 {
        (totals.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(ClickStats { mean, std_dev })
}

/// Exact mean and standard deviation of a click-number distribution.
pub fn click_stats_exact(dist: &ClickNumberDistribution) -> Result<ClickStats> {
    if dist.probabilities.is_empty() {
        return Err(Error::Empty("click-number distribution is empty"));
    }
    let mean: f64 = dist.probabilities.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let var: f64 = dist
        .probabilities
        .iter()
        .enumerate()
        .map(|(n, p)| (n as f64 - mean).powi(2) * p)
        .sum();
    Ok(ClickStats {
        mean,
        std_dev: var.max(0.0).sqrt(),
    })
}
