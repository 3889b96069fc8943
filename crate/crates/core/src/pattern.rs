//! Detection outcomes: per-bin threshold patterns and per-mode click counts.

use std::fmt;

use crate::error::{Error, Result};

/// Threshold outcome on every fan-out bin (`true` = click).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinPattern(pub Vec<bool>);

impl BinPattern {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn clicked(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i]).collect()
    }

    pub fn dark(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| !self.0[i]).collect()
    }

    /// Collapses bins into per-mode click counts.
    pub fn to_click_pattern(&self, fanout: usize) -> ClickPattern {
        ClickPattern(
            self.0
                .chunks(fanout)
                .map(|c| c.iter().filter(|&&b| b).count() as u8)
                .collect(),
        )
    }
}

/// Pseudo-photon-number-resolved sample: clicks per spatial mode, each in
/// `0..=F`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClickPattern(pub Vec<u8>);

impl ClickPattern {
    pub fn zeros(num_modes: usize) -> Self {
        Self(vec![0; num_modes])
    }

    pub fn counts(&self) -> &[u8] {
        &self.0
    }

    pub fn num_modes(&self) -> usize {
        self.0.len()
    }

    pub fn total_clicks(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    pub fn check_bounds(&self, fanout: usize) -> Result<()> {
        if let Some(&bad) = self.0.iter().find(|&&c| c as usize > fanout) {
            return Err(Error::InvalidParameter(format!(
                "click count {bad} exceeds fan-out {fanout}"
            )));
        }
        Ok(())
    }

    pub fn restrict(&self, modes: &[usize]) -> ClickPattern {
        ClickPattern(modes.iter().map(|&m| self.0[m]).collect())
    }

    /// Canonical bin assignment: the first `n_i` bins of mode `i` clicked.
    pub fn canonical_bins(&self, fanout: usize) -> BinPattern {
        BinPattern(
            self.0
                .iter()
                .flat_map(|&c| (0..fanout).map(move |j| j < c as usize))
                .collect(),
        )
    }
}

impl fmt::Display for ClickPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_bins_round_trip() {
        let p = ClickPattern(vec![2, 0, 1]);
        let bins = p.canonical_bins(3);
        assert_eq!(bins.0, vec![true, true, false, false, false, false, true, false, false]);
        assert_eq!(bins.to_click_pattern(3), p);
        assert_eq!(p.total_clicks(), 3);
        assert_eq!(p.restrict(&[2, 0]), ClickPattern(vec![1, 2]));
        assert!(p.check_bounds(1).is_err());
        assert_eq!(p.to_string(), "2 0 1");
    }
}
