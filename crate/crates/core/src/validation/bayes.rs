//! Bayesian log-likelihood-ratio score conditioned on the total click number.

use rand::seq::index::sample as sample_indices;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::components::GaussianComponentSet;
use crate::error::{Error, Result};
use crate::pattern::ClickPattern;
use crate::probability::{CompensatedSum, ProbabilityEngine};
use crate::samplers::SampleSet;
use crate::seeding::derive_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct BayesianResult {
    /// Mean log-likelihood ratio in nats per sample.
    pub delta_h: f64,
    pub std_error: f64,
    pub n_samples: usize,
    /// Total click number the samples were conditioned on.
    pub n_clicks: usize,
    pub subsystem: Vec<usize>,
}

/// Mean and standard error of a sequence, summed in order.
pub(crate) fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    let mut acc = CompensatedSum::default();
    for &v in values {
        acc.add(v);
    }
    let mean = acc.value() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let mut sq = CompensatedSum::default();
    for &v in values {
        sq.add((v - mean).powi(2));
    }
    let sd = (sq.value() / (n - 1) as f64).sqrt();
    (mean, sd / (n as f64).sqrt())
}

/// Log-probabilities of each distinct pattern, computed in parallel.
fn log_probabilities(engine: &ProbabilityEngine, patterns: &[ClickPattern]) -> Result<Vec<f64>> {
    patterns
        .par_iter()
        .map(|p| engine.ppnrd_pattern_probability(p).map(f64::ln))
        .collect()
}

/// Scores `samples` on an already-restricted pair of engines.
///
/// `subsystem` selects the modes of each sample that the engines describe.
pub fn bayesian_score_with_engines(
    samples: &SampleSet,
    h0: &ProbabilityEngine,
    h1: &ProbabilityEngine,
    subsystem: &[usize],
    n: usize,
) -> Result<BayesianResult> {
    if h0.num_modes() != subsystem.len() || h1.num_modes() != subsystem.len() {
        return Err(Error::DimensionMismatch {
            expected: subsystem.len(),
            actual: h0.num_modes(),
        });
    }
    let selected: Vec<(usize, ClickPattern)> = samples
        .samples()
        .iter()
        .enumerate()
        .map(|(i, s)| (i, s.restrict(subsystem)))
        .filter(|(_, s)| s.total_clicks() == n)
        .collect();
    if selected.is_empty() {
        return Err(Error::NoSamples { n });
    }
    let mut distinct: Vec<ClickPattern> = selected.iter().map(|(_, s)| s.clone()).collect();
    distinct.sort_unstable();
    distinct.dedup();

    let lp0 = log_probabilities(h0, &distinct)?;
    let lp1 = log_probabilities(h1, &distinct)?;
    let log_pn0 = h0.click_number_probability(n)?.ln();
    let log_pn1 = h1.click_number_probability(n)?.ln();

    let mut terms = Vec::with_capacity(selected.len());
    for (index, pattern) in &selected {
        let k = distinct
            .binary_search(pattern)
            .expect("pattern is in the distinct list");
        for (lp, hypothesis) in [(lp0[k], "H0"), (lp1[k], "H1")] {
            if !lp.is_finite() {
                return Err(Error::ZeroProbability {
                    index: *index,
                    pattern: pattern.counts().to_vec(),
                    hypothesis,
                });
            }
        }
        terms.push((lp0[k] - lp1[k]) + (log_pn1 - log_pn0));
    }
    let (delta_h, std_error) = mean_and_std_error(&terms);
    Ok(BayesianResult {
        delta_h,
        std_error,
        n_samples: terms.len(),
        n_clicks: n,
        subsystem: subsystem.to_vec(),
    })
}

/// `Delta H = (1/N) sum_i ln[P0(s_i) P1(n) / (P1(s_i) P0(n))]` over the
/// samples whose click total on `subsystem` equals `n`.
pub fn bayesian_score(
    samples: &SampleSet,
    h0: &GaussianComponentSet,
    h1: &GaussianComponentSet,
    subsystem: &[usize],
    n: usize,
) -> Result<BayesianResult> {
    let e0 = ProbabilityEngine::new(&h0.restrict_modes(subsystem)?);
    let e1 = ProbabilityEngine::new(&h1.restrict_modes(subsystem)?);
    bayesian_score_with_engines(samples, &e0, &e1, subsystem, n)
}

/// Averaged score for one `(subsystem size, click number)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub size: usize,
    pub n_clicks: usize,
    pub mean_delta_h: f64,
    /// `sqrt(sum se_j^2) / J` over the J subsets used.
    pub std_error: f64,
    /// Standard deviation of the per-subset scores.
    pub spread: f64,
    pub results: Vec<BayesianResult>,
}

/// Random mode subsets of each size (a single full subset when size = M).
pub fn random_subsets(num_modes: usize, size: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    if size >= num_modes {
        return vec![(0..num_modes).collect()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &format!("subsets-{size}")));
    (0..count)
        .map(|_| {
            let mut s = sample_indices(&mut rng, num_modes, size).into_vec();
            s.sort_unstable();
            s
        })
        .collect()
}

pub fn bayesian_subsystem_sweep(
    samples: &SampleSet,
    h0: &GaussianComponentSet,
    h1: &GaussianComponentSet,
    sizes: &[usize],
    n_values: &[usize],
    n_subsets: usize,
    seed: u64,
) -> Result<Vec<SweepPoint>> {
    let m = h0.num_modes();
    if let Some(&bad) = sizes.iter().find(|&&s| s == 0 || s > m) {
        return Err(Error::InvalidParameter(format!("subsystem size {bad} outside 1..={m}")));
    }
    let mut points = Vec::new();
    for &size in sizes {
        let subsets = random_subsets(m, size, n_subsets, seed);
        let mut per_n: Vec<Vec<BayesianResult>> = vec![Vec::new(); n_values.len()];
        for subset in &subsets {
            let e0 = ProbabilityEngine::new(&h0.restrict_modes(subset)?);
            let e1 = ProbabilityEngine::new(&h1.restrict_modes(subset)?);
            for (slot, &n) in per_n.iter_mut().zip(n_values) {
                match bayesian_score_with_engines(samples, &e0, &e1, subset, n) {
                    Ok(r) => slot.push(r),
                    Err(Error::NoSamples { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        for (results, &n) in per_n.into_iter().zip(n_values) {
            if results.is_empty() {
                return Err(Error::NoSamples { n });
            }
            let j = results.len() as f64;
            let scores: Vec<f64> = results.iter().map(|r| r.delta_h).collect();
            let mean = scores.iter().sum::<f64>() / j;
            let spread = if results.len() > 1 {
                (scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (j - 1.0)).sqrt()
            } else {
                0.0
            };
            let std_error = results.iter().map(|r| r.std_error.powi(2)).sum::<f64>().sqrt() / j;
            points.push(SweepPoint {
                size,
                n_clicks: n,
                mean_delta_h: mean,
                std_error,
                spread,
                results,
            });
        }
    }
    Ok(points)
}
