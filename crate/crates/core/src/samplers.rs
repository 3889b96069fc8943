//! Sample generation from the ground truth and from classical mockups.

use std::fmt;
use std::str::FromStr;

use dashmap::DashMap;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::components::{build_components, input_mean_photon_numbers, GaussianComponentSet, Hypothesis};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::pattern::ClickPattern;
use crate::probability::ProbabilityEngine;
use crate::seeding::{derive_seed, stream_rng};

/// A tagged collection of click patterns.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub config_fingerprint: String,
    pub sampler_id: String,
    pub seed: u64,
    pub num_modes: usize,
    pub fanout: usize,
    samples: Vec<ClickPattern>,
}

impl SampleSet {
    pub fn new(
        config_fingerprint: impl Into<String>,
        sampler_id: impl Into<String>,
        seed: u64,
        num_modes: usize,
        fanout: usize,
        samples: Vec<ClickPattern>,
    ) -> Result<Self> {
        for (i, s) in samples.iter().enumerate() {
            if s.num_modes() != num_modes {
                return Err(Error::InvalidParameter(format!(
                    "sample {i} has {} modes, expected {num_modes}",
                    s.num_modes()
                )));
            }
            s.check_bounds(fanout)?;
        }
        Ok(Self {
            config_fingerprint: config_fingerprint.into(),
            sampler_id: sampler_id.into(),
            seed,
            num_modes,
            fanout,
            samples,
        })
    }

    pub fn samples(&self) -> &[ClickPattern] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn total_clicks(&self) -> Vec<usize> {
        self.samples.iter().map(|s| s.total_clicks()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamplerKind {
    Exact,
    Thermal,
    Squashed,
    Coherent,
    Distinguishable,
    Ips,
    Greedy,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 7] = [
        SamplerKind::Exact,
        SamplerKind::Thermal,
        SamplerKind::Squashed,
        SamplerKind::Coherent,
        SamplerKind::Distinguishable,
        SamplerKind::Ips,
        SamplerKind::Greedy,
    ];

    pub fn id(self) -> &'static str {
        match self {
            SamplerKind::Exact => "exact",
            SamplerKind::Thermal => "thermal",
            SamplerKind::Squashed => "squashed",
            SamplerKind::Coherent => "coherent",
            SamplerKind::Distinguishable => "distinguishable",
            SamplerKind::Ips => "ips-like",
            SamplerKind::Greedy => "greedy",
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ips" => Ok(SamplerKind::Ips),
            _ => SamplerKind::ALL
                .into_iter()
                .find(|k| k.id() == s)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown sampler {s:?}"))),
        }
    }
}

/// Runs `n` independent draws in parallel, each with its own RNG stream.
fn draw_parallel<F>(n: usize, seed: u64, draw: F) -> Result<Vec<ClickPattern>>
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> Result<ClickPattern> + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| draw(&mut stream_rng(seed, i as u64)))
        .collect()
}

fn collapse(bins: &[bool], fanout: usize) -> ClickPattern {
    ClickPattern(
        bins.chunks(fanout)
            .map(|c| c.iter().filter(|&&b| b).count() as u8)
            .collect(),
    )
}

/// Chain-rule sampler over bins with a shared cache of prefix probabilities.
struct ChainSampler<'a> {
    engine: &'a ProbabilityEngine,
    cache: DashMap<(usize, u64), f64>,
}

impl<'a> ChainSampler<'a> {
    fn new(engine: &'a ProbabilityEngine) -> Result<Self> {
        if engine.num_bins() > 64 {
            return Err(Error::InvalidParameter(format!(
                "exact sampling supports at most 64 bins, got {}",
                engine.num_bins()
            )));
        }
        Ok(Self {
            engine,
            cache: DashMap::new(),
        })
    }

    /// Probability of the outcome `bits` on bins `0..len`, others traced out.
    fn prefix_probability(&self, len: usize, bits: u64) -> Result<f64> {
        if len == 0 {
            return Ok(1.0);
        }
        if let Some(p) = self.cache.get(&(len, bits)) {
            return Ok(*p);
        }
        let clicked: Vec<usize> = (0..len).filter(|&b| bits >> b & 1 == 1).collect();
        let dark: Vec<usize> = (0..len).filter(|&b| bits >> b & 1 == 0).collect();
        let p = match self.engine.marginal_probability(&clicked, &dark) {
            Ok(p) => p,
            Err(Error::SubsetCapExceeded { cap, .. }) => {
                let prefix = (0..len).map(|b| (bits >> b & 1) as u8).collect();
                return Err(Error::ChainCapExceeded { prefix, cap });
            }
            Err(e) => return Err(e),
        };
        self.cache.insert((len, bits), p);
        Ok(p)
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> Result<Vec<bool>> {
        let nb = self.engine.num_bins();
        let mut bits = 0u64;
        let mut p_prefix = 1.0;
        for k in 0..nb {
            let p_dark = self.prefix_probability(k + 1, bits)?;
            let p_click = if p_prefix > 0.0 {
                (1.0 - p_dark / p_prefix).clamp(0.0, 1.0)
            } else {
                0.0
            };
            if rng.random::<f64>() < p_click {
                bits |= 1 << k;
                p_prefix -= p_dark;
            } else {
                p_prefix = p_dark;
            }
        }
        Ok((0..nb).map(|b| bits >> b & 1 == 1).collect())
    }
}

fn exact_with_id(set: &GaussianComponentSet, sampler_id: &str, n_samples: usize, seed: u64) -> Result<SampleSet> {
    let engine = ProbabilityEngine::new(set);
    let chain = ChainSampler::new(&engine)?;
    let stream = derive_seed(seed, sampler_id);
    let fanout = set.fanout();
    let samples = draw_parallel(n_samples, stream, |rng| Ok(collapse(&chain.draw(rng)?, fanout)))?;
    SampleSet::new(
        set.fingerprint().unwrap_or_default(),
        sampler_id,
        seed,
        set.num_modes(),
        fanout,
        samples,
    )
}

/// Exact chain-rule sampling: bin `k` clicks with probability
/// `1 - P(prefix, bin k dark) / P(prefix)`, marginals obtained by
/// restricting the covariance to the bins seen so far.
pub fn exact_sampler(set: &GaussianComponentSet, n_samples: usize, seed: u64) -> Result<SampleSet> {
    exact_with_id(set, SamplerKind::Exact.id(), n_samples, seed)
}

/// Complex field transfer from input modes to output modes, including loss.
fn transfer_matrix(config: &ExperimentConfig) -> DMatrix<Complex64> {
    let u = config.unitary_matrix();
    DMatrix::from_fn(config.num_modes, config.num_modes, |i, k| {
        u[(i, k)] * config.efficiency[i].sqrt()
    })
}

fn coherent_sampler(config: &ExperimentConfig, n_samples: usize, seed: u64) -> Result<Vec<ClickPattern>> {
    let m = config.num_modes;
    let fanout = config.fanout;
    let amplitudes: Vec<f64> = input_mean_photon_numbers(config).iter().map(|n| n.sqrt()).collect();
    let t = transfer_matrix(config);
    let stream = derive_seed(seed, SamplerKind::Coherent.id());
    draw_parallel(n_samples, stream, |rng| {
        let alpha: Vec<Complex64> = amplitudes
            .iter()
            .map(|&a| Complex64::from_polar(a, rng.random::<f64>() * std::f64::consts::TAU))
            .collect();
        let mut counts = vec![0u8; m];
        for (i, count) in counts.iter_mut().enumerate() {
            let beta: Complex64 = (0..m).map(|k| t[(i, k)] * alpha[k]).sum();
            let p_click = 1.0 - (-beta.norm_sqr() / fanout as f64).exp();
            for _ in 0..fanout {
                if rng.random::<f64>() < p_click {
                    *count += 1;
                }
            }
        }
        Ok(ClickPattern(counts))
    })
}

/// Mockup samplers. Thermal and squashed run the exact sampler on the mockup
/// component set; the coherent mockup redraws input phases for every sample
/// and clicks each bin independently with `1 - exp(-|beta|^2)`.
pub fn mockup_sampler(
    config: &ExperimentConfig,
    hypothesis: Hypothesis,
    n_samples: usize,
    seed: u64,
) -> Result<SampleSet> {
    match hypothesis {
        Hypothesis::Thermal | Hypothesis::Squashed => {
            let set = build_components(config, hypothesis)?;
            exact_with_id(&set, hypothesis.name(), n_samples, seed)
        }
        Hypothesis::Coherent => SampleSet::new(
            config.fingerprint(),
            SamplerKind::Coherent.id(),
            seed,
            config.num_modes,
            config.fanout,
            coherent_sampler(config, n_samples, seed)?,
        ),
        Hypothesis::GroundTruth => Err(Error::InvalidParameter(
            "ground truth is not a mockup; use exact_sampler".into(),
        )),
    }
}

/// Geometric pair number `P(m) = (1 - q) q^m`, `q = tanh^2 r`.
fn draw_pairs<R: Rng>(rng: &mut R, q: f64) -> usize {
    if q <= 0.0 {
        return 0;
    }
    let u: f64 = 1.0 - rng.random::<f64>();
    (u.ln() / q.ln()).floor() as usize
}

fn categorical<R: Rng>(rng: &mut R, cumulative: &[f64]) -> usize {
    let total = *cumulative.last().expect("non-empty distribution");
    let u = rng.random::<f64>() * total;
    cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
}

fn cumulative(weights: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    weights
        .into_iter()
        .map(|w| {
            acc += w;
            acc
        })
        .collect()
}

fn place_photon<R: Rng>(rng: &mut R, bins: &mut [bool], mode: usize, fanout: usize) {
    let j = rng.random_range(0..fanout);
    bins[mode * fanout + j] = true;
}

/// Distinguishable-photon mockup: photon pairs are drawn per source and every
/// photon travels independently with probabilities `|U_ki|^2`.
pub fn distinguishable_sampler(config: &ExperimentConfig, n_samples: usize, seed: u64) -> Result<SampleSet> {
    config.validate()?;
    let m = config.num_modes;
    let fanout = config.fanout;
    let u = config.unitary_matrix();
    let routes: Vec<Vec<f64>> = (0..m)
        .map(|input| cumulative((0..m).map(|k| u[(k, input)].norm_sqr())))
        .collect();
    let sources: Vec<(f64, usize, usize)> = (0..config.sources.len())
        .map(|k| {
            let s = &config.sources[k];
            (config.effective_squeezing(k).tanh().powi(2), s.modes.0, s.modes.1)
        })
        .collect();
    let stream = derive_seed(seed, SamplerKind::Distinguishable.id());
    let samples = draw_parallel(n_samples, stream, |rng| {
        let mut bins = vec![false; m * fanout];
        for &(q, a, b) in &sources {
            for _ in 0..draw_pairs(rng, q) {
                for input in [a, b] {
                    let out = categorical(rng, &routes[input]);
                    if rng.random::<f64>() < config.efficiency[out] {
                        place_photon(rng, &mut bins, out, fanout);
                    }
                }
            }
        }
        Ok(collapse(&bins, fanout))
    })?;
    SampleSet::new(
        config.fingerprint(),
        SamplerKind::Distinguishable.id(),
        seed,
        m,
        fanout,
        samples,
    )
}

/// Pair amplitude matrix `B = U A U^T` with `A_ab = A_ba = tanh r` per source.
pub fn pair_amplitude_matrix(config: &ExperimentConfig) -> DMatrix<Complex64> {
    let m = config.num_modes;
    let u = config.unitary_matrix();
    let mut a = DMatrix::<Complex64>::zeros(m, m);
    for k in 0..config.sources.len() {
        let (i, j) = config.sources[k].modes;
        let t = Complex64::new(config.effective_squeezing(k).tanh(), 0.0);
        a[(i, j)] = t;
        a[(j, i)] = t;
    }
    &u * a * u.transpose()
}

/// Normalised placement distribution over unordered output pairs `(i, j)`,
/// `i <= j`: weight `|B_ij|^2` off the diagonal and `|B_ii|^2 / 2` on it.
pub fn pair_placement_distribution(config: &ExperimentConfig) -> Vec<((usize, usize), f64)> {
    let b = pair_amplitude_matrix(config);
    let m = config.num_modes;
    let mut out = Vec::with_capacity(m * (m + 1) / 2);
    for i in 0..m {
        for j in i..m {
            let w = if i == j {
                b[(i, i)].norm_sqr() / 2.0
            } else {
                b[(i, j)].norm_sqr()
            };
            out.push(((i, j), w));
        }
    }
    let total: f64 = out.iter().map(|(_, w)| w).sum();
    if total > 0.0 {
        for (_, w) in out.iter_mut() {
            *w /= total;
        }
    }
    out
}

/// Ground-truth mean photon number per output mode (after loss).
pub fn output_intensities(config: &ExperimentConfig) -> Vec<f64> {
    let t = transfer_matrix(config);
    let nbar = input_mean_photon_numbers(config);
    (0..config.num_modes)
        .map(|i| (0..config.num_modes).map(|k| t[(i, k)].norm_sqr() * nbar[k]).sum())
        .collect()
}

/// IPS-like sampler: independent pairs placed with `|B_ij|^2`, singles (pairs
/// that lost one photon) placed with the ground-truth output intensities.
pub fn ips_sampler(config: &ExperimentConfig, n_samples: usize, seed: u64) -> Result<SampleSet> {
    config.validate()?;
    let m = config.num_modes;
    let fanout = config.fanout;
    let placement = pair_placement_distribution(config);
    let pair_cdf = cumulative(placement.iter().map(|(_, w)| *w));
    let single_cdf = cumulative(output_intensities(config));
    let q: Vec<f64> = (0..config.sources.len())
        .map(|k| config.effective_squeezing(k).tanh().powi(2))
        .collect();
    let stream = derive_seed(seed, SamplerKind::Ips.id());
    let samples = draw_parallel(n_samples, stream, |rng| {
        let mut bins = vec![false; m * fanout];
        for &qk in &q {
            for _ in 0..draw_pairs(rng, qk) {
                let (i, j) = placement[categorical(rng, &pair_cdf)].0;
                let keep_i = rng.random::<f64>() < config.efficiency[i];
                let keep_j = rng.random::<f64>() < config.efficiency[j];
                match (keep_i, keep_j) {
                    (true, true) => {
                        place_photon(rng, &mut bins, i, fanout);
                        place_photon(rng, &mut bins, j, fanout);
                    }
                    (true, false) | (false, true) => {
                        let s = categorical(rng, &single_cdf);
                        place_photon(rng, &mut bins, s, fanout);
                    }
                    (false, false) => {}
                }
            }
        }
        Ok(collapse(&bins, fanout))
    })?;
    SampleSet::new(config.fingerprint(), SamplerKind::Ips.id(), seed, m, fanout, samples)
}

/// First- and second-order click moments over bins.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTargets {
    pub num_modes: usize,
    pub fanout: usize,
    /// `E[X_i]`
    pub mean: Vec<f64>,
    /// `E[X_i X_j]` (diagonal equals `mean`)
    pub second: DMatrix<f64>,
    pub fingerprint: String,
}

impl MomentTargets {
    pub fn from_components(set: &GaussianComponentSet) -> Result<Self> {
        let engine = ProbabilityEngine::new(set);
        let nb = engine.num_bins();
        let mean: Vec<f64> = (0..nb).map(|i| engine.click_moment(&[i])).collect::<Result<_>>()?;
        let mut second = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(mean.clone()));
        for i in 0..nb {
            for j in (i + 1)..nb {
                let v = engine.click_moment(&[i, j])?;
                second[(i, j)] = v;
                second[(j, i)] = v;
            }
        }
        Ok(Self {
            num_modes: set.num_modes(),
            fanout: set.fanout(),
            mean,
            second,
            fingerprint: set.fingerprint().unwrap_or_default().to_string(),
        })
    }

    /// Targets for independent bins with the given click probabilities.
    pub fn independent(mean: Vec<f64>, fanout: usize) -> Self {
        let nb = mean.len();
        let second = DMatrix::from_fn(nb, nb, |i, j| if i == j { mean[i] } else { mean[i] * mean[j] });
        Self {
            num_modes: nb / fanout,
            fanout,
            mean,
            second,
            fingerprint: String::new(),
        }
    }

    pub fn covariance(&self) -> DMatrix<f64> {
        let nb = self.mean.len();
        DMatrix::from_fn(nb, nb, |i, j| self.second[(i, j)] - self.mean[i] * self.mean[j])
    }
}

/// Greedy order-2 sampler: bin `k` clicks with the linear (Gaussian-form)
/// conditional mean given earlier bins, `mu_k + beta_k . (x_<k - mu_<k)`,
/// with `beta_k = C_<k,<k^+ C_<k,k`, clipped to `[0, 1]`.
pub fn greedy_sampler(targets: &MomentTargets, n_samples: usize, seed: u64) -> Result<SampleSet> {
    let nb = targets.mean.len();
    if nb != targets.num_modes * targets.fanout {
        return Err(Error::DimensionMismatch {
            expected: targets.num_modes * targets.fanout,
            actual: nb,
        });
    }
    let cov = targets.covariance();
    let coefficients: Vec<Vec<f64>> = (0..nb)
        .map(|k| {
            if k == 0 {
                return Vec::new();
            }
            let sub = cov.view((0, 0), (k, k)).into_owned();
            let rhs = cov.view((0, k), (k, 1)).into_owned();
            let pinv = sub.pseudo_inverse(1e-12).unwrap_or_else(|_| DMatrix::zeros(k, k));
            (pinv * rhs).iter().copied().collect()
        })
        .collect();
    let mean = &targets.mean;
    let stream = derive_seed(seed, SamplerKind::Greedy.id());
    let samples = draw_parallel(n_samples, stream, |rng| {
        let mut x = vec![false; nb];
        for k in 0..nb {
            let shift: f64 = coefficients[k]
                .iter()
                .enumerate()
                .map(|(j, b)| b * (x[j] as u8 as f64 - mean[j]))
                .sum();
            let p = (mean[k] + shift).clamp(0.0, 1.0);
            x[k] = rng.random::<f64>() < p;
        }
        Ok(collapse(&x, targets.fanout))
    })?;
    SampleSet::new(
        targets.fingerprint.clone(),
        SamplerKind::Greedy.id(),
        seed,
        targets.num_modes,
        targets.fanout,
        samples,
    )
}

/// Dispatches on the sampler kind for a configuration.
pub fn sample(config: &ExperimentConfig, kind: SamplerKind, n_samples: usize, seed: u64) -> Result<SampleSet> {
    match kind {
        SamplerKind::Exact => {
            let set = build_components(config, Hypothesis::GroundTruth)?;
            exact_sampler(&set, n_samples, seed)
        }
        SamplerKind::Thermal => mockup_sampler(config, Hypothesis::Thermal, n_samples, seed),
        SamplerKind::Squashed => mockup_sampler(config, Hypothesis::Squashed, n_samples, seed),
        SamplerKind::Coherent => mockup_sampler(config, Hypothesis::Coherent, n_samples, seed),
        SamplerKind::Distinguishable => distinguishable_sampler(config, n_samples, seed),
        SamplerKind::Ips => ips_sampler(config, n_samples, seed),
        SamplerKind::Greedy => {
            let set = build_components(config, Hypothesis::GroundTruth)?;
            greedy_sampler(&MomentTargets::from_components(&set)?, n_samples, seed)
        }
    }
}
