//! Brute-force Fock-space reference for ground-truth click probabilities.
//!
//! Each mutually coherent component is a product of two-mode squeezers,
//! `prod_k sum_n (tanh^n r_k / cosh r_k) (A_k B_k)^n / n! |0>`, where `A_k`
//! and `B_k` are the images of the source's input creation operators under
//! the interferometer. The output photon-number distribution is expanded as
//! a polynomial in output creation operators, truncated by total degree.
//! Per-mode binomial loss and uniform multinomial routing over the `F` bins
//! then give a distribution over occupied bin sets; distinguishable
//! components combine by union of their occupied sets.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use ppnrd_gbs::config::ExperimentConfig;
use ppnrd_gbs::pattern::{BinPattern, ClickPattern};

/// Required truncated norm of every component.
pub const NORM_FLOOR: f64 = 1.0 - 1e-9;

const BITS: u32 = 7;

fn exponent(key: u64, mode: usize) -> u64 {
    (key >> (BITS as usize * mode)) & ((1 << BITS) - 1)
}

type Poly = HashMap<u64, Complex64>;

/// Multiplies by the linear form `sum_i w_i a_i^dagger`, dropping degree > cap.
fn times_linear(p: &Poly, w: &[Complex64], cap: usize) -> Poly {
    let mut out = Poly::with_capacity(p.len() * 2);
    for (&key, &c) in p {
        let degree: u64 = (0..w.len()).map(|i| exponent(key, i)).sum();
        if degree as usize >= cap {
            continue;
        }
        for (i, &wi) in w.iter().enumerate() {
            if wi.norm_sqr() == 0.0 {
                continue;
            }
            *out.entry(key + (1 << (BITS as usize * i))).or_default() += c * wi;
        }
    }
    out
}

/// Smallest even degree whose pair-number tail is below `1e-12`.
fn degree_cap(rs: &[f64]) -> usize {
    const KMAX: usize = 60;
    let mut dist = vec![0.0; KMAX + 1];
    dist[0] = 1.0;
    for &r in rs {
        let q = r.tanh().powi(2);
        let geo: Vec<f64> = (0..=KMAX).map(|n| (1.0 - q) * q.powi(n as i32)).collect();
        let mut next = vec![0.0; KMAX + 1];
        for (a, &pa) in dist.iter().enumerate() {
            for (b, &pb) in geo.iter().enumerate().take(KMAX + 1 - a) {
                next[a + b] += pa * pb;
            }
        }
        dist = next;
    }
    let mut acc = 0.0;
    for (k, p) in dist.iter().enumerate() {
        acc += p;
        if 1.0 - acc < 1e-12 {
            return 2 * k;
        }
    }
    panic!("squeezing too strong for the Fock reference");
}

/// Output photon-number probabilities of one pure component.
fn component_distribution(u: &DMatrix<Complex64>, sources: &[(usize, usize, f64)]) -> (Vec<(Vec<usize>, f64)>, f64) {
    let m = u.nrows();
    assert!(m * BITS as usize <= 64);
    let cap = degree_cap(&sources.iter().map(|s| s.2).collect::<Vec<_>>());
    assert!(cap < (1 << BITS));
    let mut poly = Poly::new();
    poly.insert(0, Complex64::new(1.0, 0.0));
    for &(a, b, r) in sources {
        let col = |j: usize| -> Vec<Complex64> { (0..m).map(|i| u[(i, j)]).collect() };
        let (wa, wb) = (col(a), col(b));
        let t = r.tanh();
        let mut term = poly.clone();
        let mut acc: Poly = poly.iter().map(|(&k, &c)| (k, c / r.cosh())).collect();
        let mut coef = 1.0 / r.cosh();
        for n in 1..=cap / 2 {
            term = times_linear(&times_linear(&term, &wa, cap), &wb, cap);
            term.values_mut().for_each(|c| *c /= n as f64);
            coef *= t;
            if term.is_empty() {
                break;
            }
            for (&k, &c) in &term {
                *acc.entry(k).or_default() += c * coef;
            }
        }
        poly = acc;
    }
    let mut norm = 0.0;
    let dist = poly
        .into_iter()
        .map(|(key, c)| {
            let n: Vec<usize> = (0..m).map(|i| exponent(key, i) as usize).collect();
            let fact: f64 = n.iter().map(|&k| (1..=k).map(|v| v as f64).product::<f64>()).product();
            let p = c.norm_sqr() * fact;
            norm += p;
            (n, p)
        })
        .collect();
    (dist, norm)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).map(|j| (n - j) as f64 / (j + 1) as f64).product()
}

/// Probability that exactly a specific set of `c` of the `F` bins is lit,
/// given `n` photons before a loss of efficiency `eta`.
fn occupancy_table(eta: f64, fanout: usize, nmax: usize) -> Vec<Vec<f64>> {
    let f = fanout as f64;
    let surj = |m: usize, c: usize| -> f64 {
        (0..=c)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * binomial(c, j) * ((c - j) as f64).powi(m as i32)
            })
            .sum::<f64>()
    };
    (0..=nmax)
        .map(|n| {
            (0..=fanout)
                .map(|c| {
                    (0..=n)
                        .map(|m| {
                            let keep = binomial(n, m) * eta.powi(m as i32) * (1.0 - eta).powi((n - m) as i32);
                            let lit = if m == 0 {
                                (c == 0) as u8 as f64
                            } else {
                                surj(m, c) / f.powi(m as i32)
                            };
                            keep * lit
                        })
                        .sum()
                })
                .collect()
        })
        .collect()
}

pub struct FockReference {
    pub num_modes: usize,
    pub fanout: usize,
    /// Probability of each occupied-bin set, indexed by bitmask.
    pub bin_sets: Vec<f64>,
    pub min_norm: f64,
}

impl FockReference {
    pub fn ground_truth(config: &ExperimentConfig) -> Self {
        let m = config.num_modes;
        let f = config.fanout;
        let bins = m * f;
        assert!(bins <= 16);
        let u = config.unitary_matrix();
        let mut shared = Vec::new();
        let mut privates = Vec::new();
        for (k, s) in config.sources.iter().enumerate() {
            let n = config.effective_squeezing(k).sinh().powi(2);
            let x = s.indistinguishability;
            shared.push((s.modes.0, s.modes.1, (x * n).sqrt().asinh()));
            privates.push(vec![(s.modes.0, s.modes.1, ((1.0 - x) * n).sqrt().asinh())]);
        }
        let mut comps = vec![shared];
        comps.extend(privates);

        let mut total = vec![0.0; 1 << bins];
        total[0] = 1.0;
        let mut min_norm: f64 = 1.0;
        for sources in comps {
            let sources: Vec<_> = sources.into_iter().filter(|s| s.2 > 0.0).collect();
            if sources.is_empty() {
                continue;
            }
            let (dist, norm) = component_distribution(&u, &sources);
            min_norm = min_norm.min(norm);
            let nmax = dist.iter().flat_map(|(n, _)| n.iter().copied()).max().unwrap_or(0);
            let tables: Vec<Vec<Vec<f64>>> = (0..m).map(|i| occupancy_table(config.efficiency[i], f, nmax)).collect();
            let mut sets = vec![0.0; 1 << bins];
            for (n, p) in &dist {
                for (mask, slot) in sets.iter_mut().enumerate() {
                    let mut v = *p;
                    for i in 0..m {
                        let c = ((mask >> (i * f)) & ((1 << f) - 1)).count_ones() as usize;
                        v *= tables[i][n[i]][c];
                        if v == 0.0 {
                            break;
                        }
                    }
                    *slot += v;
                }
            }
            let mut merged = vec![0.0; 1 << bins];
            for (a, &pa) in total.iter().enumerate() {
                if pa == 0.0 {
                    continue;
                }
                for (b, &pb) in sets.iter().enumerate() {
                    merged[a | b] += pa * pb;
                }
            }
            total = merged;
        }
        Self {
            num_modes: m,
            fanout: f,
            bin_sets: total,
            min_norm,
        }
    }

    pub fn threshold_probability(&self, pattern: &BinPattern) -> f64 {
        let mask = pattern
            .0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| 1usize << i)
            .sum::<usize>();
        self.bin_sets[mask]
    }

    pub fn ppnrd_probability(&self, pattern: &ClickPattern) -> f64 {
        let f = self.fanout;
        self.bin_sets
            .iter()
            .enumerate()
            .filter(|(mask, _)| {
                (0..self.num_modes).all(|i| ((mask >> (i * f)) & ((1 << f) - 1)).count_ones() as u8 == pattern.0[i])
            })
            .map(|(_, p)| p)
            .sum()
    }
}
