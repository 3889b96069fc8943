//! Classical simulation-time model `T = c M N^3 G^(N/2) / 2` and its
//! per-sample aggregation.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pattern::ClickPattern;
use crate::samplers::SampleSet;

pub const DEFAULT_C_MACHINE: f64 = 1.0;
pub const DEFAULT_G_BIN_WIDTH: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    /// Seconds per elementary unit of work.
    pub c_machine: f64,
    pub m: usize,
}

impl CostModel {
    pub fn new(c_machine: f64, m: usize) -> Result<Self> {
        if !(c_machine > 0.0 && c_machine.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "c_machine must be positive, got {c_machine}"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("mode count must be at least 1".into()));
        }
        Ok(Self { c_machine, m })
    }

    /// `ln(c M / 2)`.
    fn log_prefactor(&self) -> f64 {
        (0.5 * self.c_machine * self.m as f64).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GFactor {
    pub g: f64,
    pub ln_g: f64,
    /// Number of modes with at least one click.
    pub n: usize,
}

/// `G = (prod_i (n_i + 1))^(1/N)` with `N` the number of clicked modes.
pub fn g_factor(pattern: &ClickPattern) -> Result<GFactor> {
    let clicked: Vec<u8> = pattern.counts().iter().copied().filter(|&c| c > 0).collect();
    if clicked.is_empty() {
        return Err(Error::InvalidParameter("G is undefined for an all-zero pattern".into()));
    }
    let n = clicked.len();
    let ln_g = clicked.iter().map(|&c| (c as f64 + 1.0).ln()).sum::<f64>() / n as f64;
    // The product is exact in f64 up to 2^53, so take the root directly there;
    // binary patterns then give G = 2 with no rounding.
    let product = clicked.iter().try_fold(1u64, |acc, &c| acc.checked_mul(c as u64 + 1));
    let g = match product {
        Some(p) if p <= 1 << 53 => {
            if clicked.iter().all(|&c| c == 1) {
                2.0
            } else {
                (p as f64).powf(1.0 / n as f64)
            }
        }
        _ => ln_g.exp(),
    };
    Ok(GFactor { g, ln_g, n })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationTime {
    pub ln_seconds: f64,
    /// `+inf` when `overflow` is set.
    pub seconds: f64,
    pub overflow: bool,
}

impl SimulationTime {
    pub fn log10_seconds(&self) -> f64 {
        self.ln_seconds / std::f64::consts::LN_10
    }
}

pub fn simulation_time(pattern: &ClickPattern, model: &CostModel) -> Result<SimulationTime> {
    let gf = g_factor(pattern)?;
    let n = gf.n as f64;
    let ln_seconds = model.log_prefactor() + 3.0 * n.ln() + 0.5 * n * gf.ln_g;
    // Direct product where it fits, so small worked cases are exact.
    let direct = 0.5 * model.c_machine * model.m as f64 * n.powi(3) * gf.g.powf(0.5 * n);
    let overflow = !direct.is_finite();
    Ok(SimulationTime {
        ln_seconds,
        seconds: if overflow { f64::INFINITY } else { direct },
        overflow,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapCell {
    pub g_bin_low: f64,
    pub n: usize,
    pub count: usize,
}

/// A point on an equal-time line: the `G` reaching `10^log10_t` seconds at `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourPoint {
    pub log10_t: f64,
    pub n: usize,
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostHeatmap {
    pub model: CostModel,
    pub g_bin_width: f64,
    pub cells: Vec<HeatmapCell>,
    pub contours: Vec<ContourPoint>,
    pub hardest_index: usize,
    pub hardest: SimulationTime,
    pub hardest_g: GFactor,
    pub mean_seconds: f64,
    pub mean_log10_seconds: f64,
    /// Samples without clicks, excluded from every statistic.
    pub skipped_empty: usize,
}

/// Histogram of samples in `(G, N)` with equal-time lines at every decade
/// between the fastest and slowest sample.
pub fn cost_heatmap(samples: &SampleSet, model: &CostModel, g_bin_width: f64) -> Result<CostHeatmap> {
    if !(g_bin_width > 0.0) {
        return Err(Error::InvalidParameter("G bin width must be positive".into()));
    }
    if samples.is_empty() {
        return Err(Error::Empty("cost heat map needs samples"));
    }
    let mut cells: BTreeMap<(i64, usize), usize> = BTreeMap::new();
    let mut skipped_empty = 0;
    let mut hardest: Option<(usize, SimulationTime, GFactor)> = None;
    let (mut sum_s, mut sum_log, mut used) = (0.0, 0.0, 0usize);
    for (i, s) in samples.samples().iter().enumerate() {
        if s.total_clicks() == 0 {
            skipped_empty += 1;
            continue;
        }
        let gf = g_factor(s)?;
        let t = simulation_time(s, model)?;
        // G >= 2 always; bins are anchored there so G = 2 is a bin edge.
        let bin = ((gf.g - 2.0) / g_bin_width + 1e-12).floor() as i64;
        *cells.entry((bin, gf.n)).or_insert(0) += 1;
        if hardest.as_ref().is_none_or(|(_, h, _)| t.ln_seconds > h.ln_seconds) {
            hardest = Some((i, t, gf));
        }
        sum_s += t.seconds;
        sum_log += t.log10_seconds();
        used += 1;
    }
    let Some((hardest_index, hardest, hardest_g)) = hardest else {
        return Err(Error::Empty("cost heat map needs at least one sample with clicks"));
    };
    let min_log10 = samples
        .samples()
        .iter()
        .filter(|s| s.total_clicks() > 0)
        .map(|s| simulation_time(s, model).map(|t| t.log10_seconds()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let max_n = cells.keys().map(|&(_, n)| n).max().unwrap_or(1);
    let mut contours = Vec::new();
    let (lo, hi) = (min_log10.floor() as i64, hardest.log10_seconds().ceil() as i64);
    for level in lo..=hi {
        let ln_t = level as f64 * std::f64::consts::LN_10;
        for n in 1..=max_n {
            let nf = n as f64;
            let ln_g = 2.0 * (ln_t - model.log_prefactor() - 3.0 * nf.ln()) / nf;
            let g = ln_g.exp();
            if g >= 2.0 && g.is_finite() {
                contours.push(ContourPoint {
                    log10_t: level as f64,
                    n,
                    g,
                });
            }
        }
    }
    Ok(CostHeatmap {
        model: *model,
        g_bin_width,
        cells: cells
            .into_iter()
            .map(|((bin, n), count)| HeatmapCell {
                g_bin_low: 2.0 + bin as f64 * g_bin_width,
                n,
                count,
            })
            .collect(),
        contours,
        hardest_index,
        hardest,
        hardest_g,
        mean_seconds: sum_s / used as f64,
        mean_log10_seconds: sum_log / used as f64,
        skipped_empty,
    })
}
