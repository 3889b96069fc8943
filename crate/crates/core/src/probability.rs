//! Exact click probabilities for threshold and pseudo-photon-number-resolving
//! detection.
//!
//! Everything reduces to vacuum probabilities of subsets of bins. For a
//! component with Husimi matrix `Q = (sigma + I)/2` in the complex
//! `(a_1..a_N, a_1^†..a_N^†)` ordering and complex mean `beta`,
//!
//! ```text
//! P(no photon on W) = exp(-beta_W^† Q_W^{-1} beta_W / 2) / sqrt(det Q_W)
//! ```
//!
//! and independent components multiply. Click probabilities follow by
//! inclusion-exclusion over the clicked bins (the Torontonian).

use dashmap::DashMap;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::components::GaussianComponentSet;
use crate::error::{Error, Result};
use crate::pattern::{BinPattern, ClickPattern};
use crate::state::GaussianState;

/// Default cap on the number of clicked bins in one inclusion-exclusion sum.
pub const DEFAULT_SUBSET_CAP: usize = 24;

/// Largest bin count accepted by exact click-number enumeration.
pub const EXACT_DISTRIBUTION_CAP: usize = 24;

/// Subsets per deterministic reduction chunk (as a power of two).
const CHUNK_BITS: usize = 10;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `(sigma + I)/2` for a state in the complex a/a^† ordering.
pub fn husimi_q(state: &GaussianState) -> DMatrix<Complex64> {
    let n = state.num_modes();
    let w = quadrature_to_complex(n);
    let cov = state.cov().map(|v| Complex64::new(v, 0.0));
    let sigma = &w * cov * w.adjoint();
    (sigma + DMatrix::identity(2 * n, 2 * n)) * Complex64::new(0.5, 0.0)
}

/// Unitary `W` with `W (x, p) = sqrt(2) (a, a^†)`.
fn quadrature_to_complex(n: usize) -> DMatrix<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut w = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        w[(i, i)] = Complex64::new(h, 0.0);
        w[(i, n + i)] = Complex64::new(0.0, h);
        w[(n + i, i)] = Complex64::new(h, 0.0);
        w[(n + i, n + i)] = Complex64::new(0.0, -h);
    }
    w
}

#[derive(Debug, Clone)]
struct PreparedComponent {
    dim: usize,
    q: Vec<Complex64>,
    beta: Option<Vec<Complex64>>,
}

impl PreparedComponent {
    fn new(state: &GaussianState) -> Self {
        let n = state.num_modes();
        let q = husimi_q(state);
        let dim = 2 * n;
        let beta = (!state.is_zero_mean()).then(|| {
            let mean = state.mean().map(|v| Complex64::new(v, 0.0));
            let b: DVector<Complex64> = quadrature_to_complex(n) * mean;
            b.iter().map(|z| z * std::f64::consts::FRAC_1_SQRT_2).collect()
        });
        Self {
            dim,
            q: (0..dim * dim).map(|k| q[(k / dim, k % dim)]).collect(),
            beta,
        }
    }

    /// Log vacuum probability on `bins`.
    fn log_vacuum(&self, bins: &[usize], scratch: &mut Vec<Complex64>) -> Result<f64> {
        let k = bins.len();
        if k == 0 {
            return Ok(0.0);
        }
        let n = self.dim / 2;
        let size = 2 * k;
        let index = |a: usize| if a < k { bins[a] } else { n + bins[a - k] };
        scratch.clear();
        scratch.resize(size * size, Complex64::new(0.0, 0.0));
        let l = scratch.as_mut_slice();
        // Hermitian Cholesky, lower triangle in place.
        let mut log_det = 0.0;
        for j in 0..size {
            let gj = index(j);
            let mut d = self.q[gj * self.dim + gj].re;
            for p in 0..j {
                d -= l[j * size + p].norm_sqr();
            }
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite);
            }
            let djj = d.sqrt();
            l[j * size + j] = Complex64::new(djj, 0.0);
            log_det += 2.0 * djj.ln();
            for i in (j + 1)..size {
                let mut v = self.q[index(i) * self.dim + gj];
                for p in 0..j {
                    v -= l[i * size + p] * l[j * size + p].conj();
                }
                l[i * size + j] = v / djj;
            }
        }
        let mut log_p = -0.5 * log_det;
        if let Some(beta) = &self.beta {
            // |L^{-1} beta|^2 = beta^† Q^{-1} beta
            let mut y = Vec::with_capacity(size);
            let mut quad = 0.0;
            for i in 0..size {
                let mut v = beta[index(i)];
                for p in 0..i {
                    v -= l[i * size + p] * y[p];
                }
                let yi = v / l[i * size + i].re;
                quad += yi.norm_sqr();
                y.push(yi);
            }
            log_p -= 0.5 * quad;
        }
        Ok(log_p)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Exact probabilities for one component set.
///
/// Holds the Husimi matrices of all components and memoises pattern
/// probabilities, which are pure functions of the pattern.
#[derive(Debug)]
pub struct ProbabilityEngine {
    num_modes: usize,
    fanout: usize,
    comps: Vec<PreparedComponent>,
    cap: usize,
    cache: DashMap<ClickPattern, f64>,
}

impl Clone for ProbabilityEngine {
    fn clone(&self) -> Self {
        Self {
            num_modes: self.num_modes,
            fanout: self.fanout,
            comps: self.comps.clone(),
            cap: self.cap,
            cache: DashMap::new(),
        }
    }
}

impl ProbabilityEngine {
    pub fn new(set: &GaussianComponentSet) -> Self {
        Self {
            num_modes: set.num_modes(),
            fanout: set.fanout(),
            comps: set.components().iter().map(PreparedComponent::new).collect(),
            cap: DEFAULT_SUBSET_CAP,
            cache: DashMap::new(),
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn fanout(&self) -> usize {
        self.fanout
    }

    pub fn num_bins(&self) -> usize {
        self.num_modes * self.fanout
    }

    fn check_bins(&self, bins: &[usize]) -> Result<()> {
        let nb = self.num_bins();
        if let Some(&bad) = bins.iter().find(|&&b| b >= nb) {
            return Err(Error::InvalidParameter(format!("bin {bad} out of range for {nb} bins")));
        }
        Ok(())
    }

    /// Log probability that every bin in `bins` is dark.
    pub fn log_vacuum_probability(&self, bins: &[usize]) -> Result<f64> {
        let mut scratch = Vec::new();
        self.log_vacuum_with(bins, &mut scratch)
    }

    fn log_vacuum_with(&self, bins: &[usize], scratch: &mut Vec<Complex64>) -> Result<f64> {
        let mut total = 0.0;
        for c in &self.comps {
            total += c.log_vacuum(bins, scratch)?;
        }
        Ok(total)
    }

    pub fn vacuum_probability(&self, bins: &[usize]) -> Result<f64> {
        self.check_bins(bins)?;
        Ok(self.log_vacuum_probability(bins)?.exp())
    }

    /// Probability that every bin in `clicked` clicks and every bin in `dark`
    /// stays dark, other bins unconstrained:
    /// `sum over Z of (-1)^|Z| P(vac on Z u dark)`, subsets visited in Gray-code order.
    pub fn marginal_probability(&self, clicked: &[usize], dark: &[usize]) -> Result<f64> {
        self.check_bins(clicked)?;
        self.check_bins(dark)?;
        let s = clicked.len();
        if s > self.cap {
            return Err(Error::SubsetCapExceeded { size: s, cap: self.cap });
        }
        let low_bits = s.min(CHUNK_BITS);
        let chunks = 1usize << (s - low_bits);
        let chunk_sum = |high: usize| -> Result<CompensatedSum> {
            let mut acc = CompensatedSum::default();
            let mut scratch = Vec::new();
            let mut bins = Vec::with_capacity(dark.len() + s);
            for t in 0..(1usize << low_bits) {
                let gray = t ^ (t >> 1);
                let subset = (high << low_bits) | gray;
                bins.clear();
                bins.extend_from_slice(dark);
                bins.extend((0..s).filter(|&b| subset >> b & 1 == 1).map(|b| clicked[b]));
                let term = self.log_vacuum_with(&bins, &mut scratch)?.exp();
                if subset.count_ones().is_multiple_of(2) {
                    acc.add(term);
                } else {
                    acc.add(-term);
                }
            }
            Ok(acc)
        };
        let partials: Vec<CompensatedSum> = if chunks > 1 {
            (0..chunks).into_par_iter().map(chunk_sum).collect::<Result<_>>()?
        } else {
            vec![chunk_sum(0)?]
        };
        let mut total = CompensatedSum::default();
        for p in partials {
            total.merge(p);
        }
        Ok(total.value())
    }

    pub fn threshold_pattern_probability(&self, pattern: &BinPattern) -> Result<f64> {
        if pattern.len() != self.num_bins() {
            return Err(Error::DimensionMismatch {
                expected: self.num_bins(),
                actual: pattern.len(),
            });
        }
        self.marginal_probability(&pattern.clicked(), &pattern.dark())
    }

    /// PPNRD probability: binomial multiplicity times the threshold
    /// probability of the canonical bin assignment. Memoised.
    pub fn ppnrd_pattern_probability(&self, pattern: &ClickPattern) -> Result<f64> {
        if pattern.num_modes() != self.num_modes {
            return Err(Error::DimensionMismatch {
                expected: self.num_modes,
                actual: pattern.num_modes(),
            });
        }
        pattern.check_bounds(self.fanout)?;
        if let Some(p) = self.cache.get(pattern) {
            return Ok(*p);
        }
        let multiplicity: f64 = pattern
            .counts()
            .iter()
            .map(|&c| binomial(self.fanout, c as usize))
            .product();
        let p = multiplicity * self.threshold_pattern_probability(&pattern.canonical_bins(self.fanout))?;
        self.cache.insert(pattern.clone(), p);
        Ok(p)
    }

    /// `E[prod X_i]` over distinct bins: the probability that all of them click.
    pub fn click_moment(&self, bins: &[usize]) -> Result<f64> {
        let mut sorted = bins.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!(
                "repeated bins in moment tuple {bins:?}"
            )));
        }
        self.marginal_probability(bins, &[])
    }

    /// Exact distribution of the total number of clicked bins.
    ///
    /// Bins of a mode are exchangeable, so the vacuum probability of a bin set
    /// depends only on how many bins of each mode it contains; the sum runs
    /// over those `(F+1)^M` count vectors:
    /// `P(n) = sum_W (-1)^(|W|-B+n) C(|W|, B-n) P(vac on W)`.
    pub fn exact_click_number_distribution(&self) -> Result<Vec<f64>> {
        let nb = self.num_bins();
        if nb > EXACT_DISTRIBUTION_CAP {
            return Err(Error::SubsetCapExceeded {
                size: nb,
                cap: EXACT_DISTRIBUTION_CAP,
            });
        }
        let (m, f) = (self.num_modes, self.fanout);
        let total = (f + 1).pow(m as u32);
        let decode = |mut idx: usize| -> Vec<usize> {
            (0..m)
                .map(|_| {
                    let c = idx % (f + 1);
                    idx /= f + 1;
                    c
                })
                .collect()
        };
        let terms: Vec<(usize, f64)> = (0..total)
            .into_par_iter()
            .map_init(Vec::new, |scratch, idx| {
                let counts = decode(idx);
                let bins: Vec<usize> = counts
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &c)| (i * f)..(i * f + c))
                    .collect();
                let weight: f64 = counts.iter().map(|&c| binomial(f, c)).product();
                let vac = self.log_vacuum_with(&bins, scratch)?.exp();
                Ok((bins.len(), weight * vac))
            })
            .collect::<Result<_>>()?;
        let mut sums = vec![CompensatedSum::default(); nb + 1];
        for (w, term) in terms {
            for n in (nb - w)..=nb {
                let sign = if (w + n - nb).is_multiple_of(2) { 1.0 } else { -1.0 };
                sums[n].add(sign * binomial(w, nb - n) * term);
            }
        }
        Ok(sums.iter().map(|s| s.value()).collect())
    }

    /// `P(total clicks = n)` as a sum of (non-negative) PPNRD pattern
    /// probabilities over all count vectors with total `n`.
    pub fn click_number_probability(&self, n: usize) -> Result<f64> {
        let patterns = compositions(n, self.num_modes, self.fanout);
        let probs: Vec<f64> = patterns
            .par_iter()
            .map(|p| self.ppnrd_pattern_probability(p))
            .collect::<Result<_>>()?;
        let mut acc = CompensatedSum::default();
        for p in probs {
            acc.add(p);
        }
        Ok(acc.value())
    }
}

/// All count vectors of length `modes` with entries in `0..=max` summing to `n`.
pub fn compositions(n: usize, modes: usize, max: usize) -> Vec<ClickPattern> {
    fn rec(n: usize, left: usize, max: usize, cur: &mut Vec<u8>, out: &mut Vec<ClickPattern>) {
        if left == 0 {
            if n == 0 {
                out.push(ClickPattern(cur.clone()));
            }
            return;
        }
        if n > left * max {
            return;
        }
        for c in 0..=n.min(max) {
            cur.push(c as u8);
            rec(n - c, left - 1, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, modes, max, &mut Vec::with_capacity(modes), &mut out);
    out
}

/// All `(F+1)^M` click patterns, in lexicographic order.
pub fn all_click_patterns(modes: usize, fanout: usize) -> Vec<ClickPattern> {
    (0..=modes * fanout)
        .flat_map(|n| compositions(n, modes, fanout))
        .collect()
}

pub fn vacuum_probability(set: &GaussianComponentSet, bins: &[usize]) -> Result<f64> {
    ProbabilityEngine::new(set).vacuum_probability(bins)
}

pub fn threshold_pattern_probability(set: &GaussianComponentSet, pattern: &BinPattern) -> Result<f64> {
    ProbabilityEngine::new(set).threshold_pattern_probability(pattern)
}

pub fn ppnrd_pattern_probability(set: &GaussianComponentSet, pattern: &ClickPattern) -> Result<f64> {
    ProbabilityEngine::new(set).ppnrd_pattern_probability(pattern)
}

pub fn click_moment(set: &GaussianComponentSet, bins: &[usize]) -> Result<f64> {
    ProbabilityEngine::new(set).click_moment(bins)
}

/// How to obtain the click-number distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClickNumberMethod {
    Exact,
    MonteCarlo { draws: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClickNumberDistribution {
    pub probabilities: Vec<f64>,
    /// Per-entry standard errors; `None` for exact distributions.
    pub std_errors: Option<Vec<f64>>,
}

pub fn click_number_distribution(
    set: &GaussianComponentSet,
    method: ClickNumberMethod,
) -> Result<ClickNumberDistribution> {
    match method {
        ClickNumberMethod::Exact => Ok(ClickNumberDistribution {
            probabilities: ProbabilityEngine::new(set).exact_click_number_distribution()?,
            std_errors: None,
        }),
        ClickNumberMethod::MonteCarlo { draws, seed } => {
            if draws == 0 {
                return Err(Error::Empty("Monte-Carlo draws"));
            }
            let samples = crate::samplers::exact_sampler(set, draws, seed)?;
            let mut counts = vec![0usize; set.num_bins() + 1];
            for s in samples.samples() {
                counts[s.total_clicks()] += 1;
            }
            let n = draws as f64;
            let probabilities: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
            let std_errors = probabilities.iter().map(|&p| (p * (1.0 - p) / n).sqrt()).collect();
            Ok(ClickNumberDistribution {
                probabilities,
                std_errors: Some(std_errors),
            })
        }
    }
}
