//! Click cumulants via the set-partition recursion
//! `kappa(S) = E(S) - sum over non-trivial partitions p of S of prod_b kappa(b)`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::components::GaussianComponentSet;
use crate::error::{Error, Result};
use crate::pattern::ClickPattern;
use crate::probability::ProbabilityEngine;
use crate::samplers::SampleSet;

/// Highest supported cumulant order.
pub const MAX_ORDER: usize = 4;

/// Default number of jackknife blocks.
pub const JACKKNIFE_BLOCKS: usize = 20;

/// Which click variable a cumulant table is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClickVariable {
    /// Threshold indicator of one fan-out bin; tuple entries are bin indices.
    /// From per-mode counts this is estimated through exchangeability: a
    /// mode with `n` clicks has any fixed `c` of its bins all clicked with
    /// probability `(n)_c / (F)_c`.
    Bin,
    /// `1[n_i >= 1]` per spatial mode.
    ModeClick,
    /// Coarse-grained count `n_i` per spatial mode.
    Count,
}

impl ClickVariable {
    pub fn name(self) -> &'static str {
        match self {
            ClickVariable::Bin => "bin",
            ClickVariable::ModeClick => "mode-click",
            ClickVariable::Count => "count",
        }
    }

    pub fn num_variables(self, num_modes: usize, fanout: usize) -> usize {
        match self {
            ClickVariable::Bin => num_modes * fanout,
            _ => num_modes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CumulantEntry {
    pub value: f64,
    pub std_error: f64,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CumulantTable {
    pub order: usize,
    pub variable: ClickVariable,
    pub entries: BTreeMap<Vec<usize>, CumulantEntry>,
}

impl CumulantTable {
    pub fn values(&self) -> Vec<f64> {
        self.entries.values().map(|e| e.value).collect()
    }
}

/// All set partitions of the elements of `mask` (as lists of block masks).
pub fn set_partitions(mask: u32) -> Vec<Vec<u32>> {
    if mask == 0 {
        return vec![Vec::new()];
    }
    let lowest = mask & mask.wrapping_neg();
    let rest = mask ^ lowest;
    let mut out = Vec::new();
    // Every block containing the lowest element: lowest | (subset of rest).
    let mut sub = rest;
    loop {
        let block = lowest | sub;
        for mut tail in set_partitions(rest & !sub) {
            tail.insert(0, block);
            out.push(tail);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

/// Cumulants of every sub-tuple from the moments of every sub-tuple, both
/// indexed by bitmask over `k` positions.
pub fn cumulants_from_moments(moments: &[f64], k: usize) -> Vec<f64> {
    let full = 1usize << k;
    assert_eq!(moments.len(), full);
    let mut kappa = vec![0.0; full];
    let mut masks: Vec<usize> = (1..full).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let mut value = moments[mask];
        for p in set_partitions(mask as u32) {
            if p.len() == 1 {
                continue;
            }
            value -= p.iter().map(|&b| kappa[b as usize]).product::<f64>();
        }
        kappa[mask] = value;
    }
    kappa
}

/// Inverse map: `E(S) = sum over all partitions of S of prod_b kappa(b)`.
pub fn moments_from_cumulants(cumulants: &[f64], k: usize) -> Vec<f64> {
    let full = 1usize << k;
    let mut moments = vec![1.0; full];
    for mask in 1..full {
        moments[mask] = set_partitions(mask as u32)
            .iter()
            .map(|p| p.iter().map(|&b| cumulants[b as usize]).product::<f64>())
            .sum();
    }
    moments
}

/// All strictly increasing `k`-tuples over `0..n`.
pub fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn check_tuples(order: usize, tuples: &[Vec<usize>], n_vars: usize) -> Result<Vec<Vec<usize>>> {
    if order == 0 {
        return Err(Error::InvalidParameter("cumulant order must be positive".into()));
    }
    if order > MAX_ORDER {
        return Err(Error::OrderTooHigh { order, max: MAX_ORDER });
    }
    tuples
        .iter()
        .map(|t| {
            if t.len() != order {
                return Err(Error::InvalidParameter(format!(
                    "tuple {t:?} does not have order {order}"
                )));
            }
            let mut s = t.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!("tuple {t:?} repeats a variable")));
            }
            if let Some(&bad) = s.last().filter(|&&v| v >= n_vars) {
                return Err(Error::InvalidParameter(format!(
                    "variable {bad} out of range for {n_vars} variables"
                )));
            }
            Ok(s)
        })
        .collect()
}

fn falling(n: u8, c: usize) -> f64 {
    (0..c).map(|j| n as f64 - j as f64).product()
}

/// Estimator of `E[prod over the tuple subset]` for one sample.
fn sample_product(pattern: &ClickPattern, variable: ClickVariable, fanout: usize, tuple: &[usize], mask: usize) -> f64 {
    let counts = pattern.counts();
    match variable {
        ClickVariable::Count => (0..tuple.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| counts[tuple[b]] as f64)
            .product(),
        ClickVariable::ModeClick => (0..tuple.len())
            .filter(|b| mask >> b & 1 == 1)
            .all(|b| counts[tuple[b]] > 0) as u8 as f64,
        ClickVariable::Bin => {
            // Tuple is sorted, so bins of the same mode are adjacent.
            let mut value = 1.0;
            let mut b = 0;
            while b < tuple.len() {
                let mode = tuple[b] / fanout;
                let mut c = 0;
                while b < tuple.len() && tuple[b] / fanout == mode {
                    c += mask >> b & 1;
                    b += 1;
                }
                if c > 0 {
                    value *= falling(counts[mode], c) / falling(fanout as u8, c);
                }
            }
            value
        }
    }
}

/// Empirical cumulants with delete-one-block jackknife standard errors.
pub fn cumulants_empirical(
    samples: &SampleSet,
    variable: ClickVariable,
    order: usize,
    tuples: &[Vec<usize>],
) -> Result<CumulantTable> {
    cumulants_empirical_blocks(samples, variable, order, tuples, JACKKNIFE_BLOCKS)
}

pub fn cumulants_empirical_blocks(
    samples: &SampleSet,
    variable: ClickVariable,
    order: usize,
    tuples: &[Vec<usize>],
    blocks: usize,
) -> Result<CumulantTable> {
    let fanout = samples.fanout;
    let tuples = check_tuples(order, tuples, variable.num_variables(samples.num_modes, fanout))?;
    let n = samples.len();
    if n < 2 {
        return Err(Error::Empty("cumulant estimation needs at least two samples"));
    }
    let blocks = blocks.clamp(2, n);
    // Per block: distinct patterns with multiplicities.
    let mut grouped: Vec<Vec<(ClickPattern, f64)>> = Vec::with_capacity(blocks);
    let mut block_sizes = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let (lo, hi) = (b * n / blocks, (b + 1) * n / blocks);
        let mut counts: HashMap<&ClickPattern, usize> = HashMap::new();
        for s in &samples.samples()[lo..hi] {
            *counts.entry(s).or_insert(0) += 1;
        }
        let mut list: Vec<(ClickPattern, f64)> = counts.into_iter().map(|(p, c)| (p.clone(), c as f64)).collect();
        list.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        grouped.push(list);
        block_sizes.push((hi - lo) as f64);
    }
    let full = 1usize << order;
    let entries: Vec<(Vec<usize>, CumulantEntry)> = tuples
        .into_par_iter()
        .map(|tuple| {
            let block_sums: Vec<Vec<f64>> = grouped
                .iter()
                .map(|list| {
                    let mut sums = vec![0.0; full];
                    for (pattern, weight) in list {
                        for (mask, s) in sums.iter_mut().enumerate().skip(1) {
                            *s += weight * sample_product(pattern, variable, fanout, &tuple, mask);
                        }
                    }
                    sums
                })
                .collect();
            let total: Vec<f64> = (0..full).map(|m| block_sums.iter().map(|s| s[m]).sum()).collect();
            let moments_of = |sums: &[f64], count: f64| -> Vec<f64> {
                (0..full).map(|m| if m == 0 { 1.0 } else { sums[m] / count }).collect()
            };
            let value = cumulants_from_moments(&moments_of(&total, n as f64), order)[full - 1];
            let loo: Vec<f64> = block_sums
                .iter()
                .zip(&block_sizes)
                .map(|(s, &size)| {
                    let rest: Vec<f64> = (0..full).map(|m| total[m] - s[m]).collect();
                    cumulants_from_moments(&moments_of(&rest, n as f64 - size), order)[full - 1]
                })
                .collect();
            let b = loo.len() as f64;
            let mean = loo.iter().sum::<f64>() / b;
            let var = (b - 1.0) / b * loo.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
            (
                tuple,
                CumulantEntry {
                    value,
                    std_error: var.sqrt(),
                    exact: false,
                },
            )
        })
        .collect();
    Ok(CumulantTable {
        order,
        variable,
        entries: entries.into_iter().collect(),
    })
}

/// Exact cumulants from click moments of the component set.
pub fn cumulants_exact(
    set: &GaussianComponentSet,
    variable: ClickVariable,
    order: usize,
    tuples: &[Vec<usize>],
) -> Result<CumulantTable> {
    let engine = ProbabilityEngine::new(set);
    cumulants_exact_with_engine(&engine, variable, order, tuples)
}

pub fn cumulants_exact_with_engine(
    engine: &ProbabilityEngine,
    variable: ClickVariable,
    order: usize,
    tuples: &[Vec<usize>],
) -> Result<CumulantTable> {
    let fanout = engine.fanout();
    let tuples = check_tuples(order, tuples, variable.num_variables(engine.num_modes(), fanout))?;
    let full = 1usize << order;
    let entries: Vec<(Vec<usize>, CumulantEntry)> = tuples
        .into_par_iter()
        .map(|tuple| {
            let mut moments = vec![1.0; full];
            for (mask, slot) in moments.iter_mut().enumerate().skip(1) {
                let picked: Vec<usize> = (0..order).filter(|b| mask >> b & 1 == 1).map(|b| tuple[b]).collect();
                *slot = exact_moment(engine, variable, &picked)?;
            }
            let value = cumulants_from_moments(&moments, order)[full - 1];
            Ok((
                tuple,
                CumulantEntry {
                    value,
                    std_error: 0.0,
                    exact: true,
                },
            ))
        })
        .collect::<Result<_>>()?;
    Ok(CumulantTable {
        order,
        variable,
        entries: entries.into_iter().collect(),
    })
}

fn exact_moment(engine: &ProbabilityEngine, variable: ClickVariable, vars: &[usize]) -> Result<f64> {
    let f = engine.fanout();
    match variable {
        ClickVariable::Bin => engine.click_moment(vars),
        // Bins of distinct modes: E[prod n_i] = F^k E[prod of one bin per mode].
        ClickVariable::Count => {
            let bins: Vec<usize> = vars.iter().map(|&m| m * f).collect();
            Ok((f as f64).powi(vars.len() as i32) * engine.click_moment(&bins)?)
        }
        // E[prod 1(n_i >= 1)] = sum over W of (-1)^|W| P(all bins of W dark).
        ClickVariable::ModeClick => {
            let k = vars.len();
            let mut acc = 0.0;
            for mask in 0usize..(1 << k) {
                let bins: Vec<usize> = (0..k)
                    .filter(|b| mask >> b & 1 == 1)
                    .flat_map(|b| (vars[b] * f)..((vars[b] + 1) * f))
                    .collect();
                let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * engine.log_vacuum_probability(&bins)?.exp();
            }
            Ok(acc)
        }
    }
}
