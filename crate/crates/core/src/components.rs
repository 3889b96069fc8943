//! Sets of independent Gaussian components sharing the same spatial modes.
//!
//! Components live in mutually orthogonal internal (temporal/spectral) modes,
//! so they never interfere; a threshold detector stays dark only if every
//! component is in vacuum on its bin. Partial distinguishability of a source is
//! represented by splitting its photon flux between a component shared by all
//! sources and a private component.

use std::fmt;
use std::str::FromStr;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::state::{CoherentMockup, GaussianState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    GroundTruth,
    Thermal,
    Squashed,
    Coherent,
}

impl Hypothesis {
    pub fn name(self) -> &'static str {
        match self {
            Hypothesis::GroundTruth => "ground-truth",
            Hypothesis::Thermal => "thermal",
            Hypothesis::Squashed => "squashed",
            Hypothesis::Coherent => "coherent",
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Hypothesis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ground-truth" | "gt" => Ok(Hypothesis::GroundTruth),
            "thermal" => Ok(Hypothesis::Thermal),
            "squashed" => Ok(Hypothesis::Squashed),
            "coherent" => Ok(Hypothesis::Coherent),
            other => Err(Error::InvalidParameter(format!(
                "unknown hypothesis {other:?} (expected ground-truth, thermal, squashed or coherent)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentLabel {
    /// Indistinguishable part of every source.
    Shared,
    /// Distinguishable remainder of source `k`.
    Source(usize),
    Mockup(Hypothesis),
}

/// Independent Gaussian components over `num_modes * fanout` detector bins.
/// Bin `j` of spatial mode `i` has index `i * fanout + j`.
#[derive(Debug, Clone)]
pub struct GaussianComponentSet {
    num_modes: usize,
    fanout: usize,
    components: Vec<GaussianState>,
    labels: Vec<ComponentLabel>,
    fingerprint: Option<String>,
}

impl GaussianComponentSet {
    /// Fans out each spatial-mode state by `fanout` and collects the result.
    pub fn new(parts: Vec<(ComponentLabel, GaussianState)>, fanout: usize) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::Empty("component list"));
        };
        let num_modes = first.1.num_modes();
        let mut components = Vec::with_capacity(parts.len());
        let mut labels = Vec::with_capacity(parts.len());
        for (label, state) in parts {
            if state.num_modes() != num_modes {
                return Err(Error::DimensionMismatch {
                    expected: num_modes,
                    actual: state.num_modes(),
                });
            }
            components.push(state.fan_out(fanout)?);
            labels.push(label);
        }
        Ok(Self {
            num_modes,
            fanout,
            components,
            labels,
            fingerprint: None,
        })
    }

    pub fn single(state: GaussianState, fanout: usize) -> Result<Self> {
        Self::new(vec![(ComponentLabel::Shared, state)], fanout)
    }

    pub fn with_fingerprint(mut self, fingerprint: impl Into<String>) -> Self {
        self.fingerprint = Some(fingerprint.into());
        self
    }

    pub fn fingerprint(&self) -> Option<&str> {
        self.fingerprint.as_deref()
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

    pub fn components(&self) -> &[GaussianState] {
        &self.components
    }

    pub fn labels(&self) -> &[ComponentLabel] {
        &self.labels
    }

    /// Mean photon number of spatial mode `i`, summed over bins and components.
    pub fn mode_mean_photon_number(&self, i: usize) -> f64 {
        let bins = i * self.fanout..(i + 1) * self.fanout;
        self.components
            .iter()
            .map(|c| bins.clone().map(|b| c.mode_mean_photon_number(b)).sum::<f64>())
            .sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.components.iter().map(|c| c.mean_photon_number()).sum()
    }

    /// Marginal on a subset of spatial modes (detection is modewise, so this
    /// is exactly the subsystem seen by ignoring the other detectors).
    pub fn restrict_modes(&self, modes: &[usize]) -> Result<Self> {
        if let Some(&bad) = modes.iter().find(|&&m| m >= self.num_modes) {
            return Err(Error::InvalidParameter(format!(
                "mode {bad} out of range for {} modes",
                self.num_modes
            )));
        }
        let bins: Vec<usize> = modes
            .iter()
            .flat_map(|&m| (m * self.fanout)..((m + 1) * self.fanout))
            .collect();
        Ok(Self {
            num_modes: modes.len(),
            fanout: self.fanout,
            components: self.components.iter().map(|c| c.reduced(&bins)).collect(),
            labels: self.labels.clone(),
            fingerprint: self.fingerprint.clone(),
        })
    }
}

fn product_input(
    num_modes: usize,
    parts: impl IntoIterator<Item = (Vec<usize>, GaussianState)>,
) -> Result<GaussianState> {
    let mut used = Vec::new();
    let mut acc: Option<GaussianState> = None;
    for (modes, state) in parts {
        used.extend(modes.iter().copied());
        acc = Some(match acc {
            None => state,
            Some(prev) => prev.tensor(&state),
        });
    }
    match acc {
        None => Ok(GaussianState::vacuum(num_modes)),
        Some(state) => state.embed(num_modes, &used),
    }
}

/// Per-input-mode mean photon number of the (pre-loss) source marginals.
pub fn input_mean_photon_numbers(config: &ExperimentConfig) -> Vec<f64> {
    let mut nbar = vec![0.0; config.num_modes];
    for k in 0..config.sources.len() {
        let n = config.effective_squeezing(k).sinh().powi(2);
        let (a, b) = config.sources[k].modes;
        nbar[a] = n;
        nbar[b] = n;
    }
    nbar
}

/// Builds the component set for `hypothesis`.
///
/// Ground truth: source `k` with squeezing `r` and indistinguishability `x`
/// contributes a TMSS with `sinh^2 r_c = x sinh^2 r` to the shared component
/// and its own component holding `sinh^2 r_d = (1 - x) sinh^2 r`.
///
/// Thermal and (zero phase) coherent mockups replace every source arm by a
/// state of the same mean photon number. The squashed mockup replaces each
/// source by [`GaussianState::squashed_pair`], which keeps the arms' thermal
/// marginals and adds classical pair correlations. All three families are
/// closed under pure loss, so applying the common loss channel afterwards
/// matches each mockup input to the lossy squeezed source.
pub fn build_components(config: &ExperimentConfig, hypothesis: Hypothesis) -> Result<GaussianComponentSet> {
    config.validate()?;
    let m = config.num_modes;
    let u = config.unitary_matrix();
    let propagate =
        |state: GaussianState| -> Result<GaussianState> { state.apply_unitary(&u)?.apply_loss(&config.efficiency) };

    let mut parts = Vec::new();
    match hypothesis {
        Hypothesis::GroundTruth => {
            let mut shared = Vec::new();
            let mut shared_active = false;
            let mut private = Vec::new();
            for (k, source) in config.sources.iter().enumerate() {
                let n = config.effective_squeezing(k).sinh().powi(2);
                let x = source.indistinguishability;
                let r_shared = (x * n).sqrt().asinh();
                let r_private = ((1.0 - x) * n).sqrt().asinh();
                let modes = vec![source.modes.0, source.modes.1];
                shared_active |= r_shared > 0.0;
                shared.push((modes.clone(), GaussianState::tmss(r_shared)?));
                if r_private > 0.0 {
                    let state = GaussianState::tmss(r_private)?.embed(m, &modes)?;
                    private.push((ComponentLabel::Source(k), propagate(state)?));
                }
            }
            if shared_active || private.is_empty() {
                parts.push((ComponentLabel::Shared, propagate(product_input(m, shared)?)?));
            }
            parts.extend(private);
        }
        Hypothesis::Squashed => {
            let pairs = config
                .sources
                .iter()
                .enumerate()
                .map(|(k, source)| {
                    let n = config.effective_squeezing(k).sinh().powi(2);
                    Ok((vec![source.modes.0, source.modes.1], GaussianState::squashed_pair(n)?))
                })
                .collect::<Result<Vec<_>>>()?;
            parts.push((ComponentLabel::Mockup(hypothesis), propagate(product_input(m, pairs)?)?));
        }
        Hypothesis::Thermal | Hypothesis::Coherent => {
            let nbar = input_mean_photon_numbers(config);
            let singles = nbar
                .iter()
                .enumerate()
                .map(|(i, &n)| {
                    let state = match hypothesis {
                        Hypothesis::Thermal => GaussianState::thermal(n)?,
                        _ => CoherentMockup::new(n)?.with_phase(0.0),
                    };
                    Ok((vec![i], state))
                })
                .collect::<Result<Vec<_>>>()?;
            let input = product_input(m, singles)?;
            parts.push((ComponentLabel::Mockup(hypothesis), propagate(input)?));
        }
    }
    Ok(GaussianComponentSet::new(parts, config.fanout)?.with_fingerprint(config.fingerprint()))
}
