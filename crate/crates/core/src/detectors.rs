//! Conditional-detection tables for the three heralding detector families.
//!
//! A detector is summarized by the diagonal of its POVM elements: the matrix
//! `p(outcome | N photons arrived)`. Three families are modeled, each with a
//! single lumped efficiency absorbing every loss in the heralding arm:
//!
//! * binary bucket detectors, which report only click / no-click;
//! * ideal photon-number resolving detectors, which count every survivor;
//! * pseudo-number-resolving detectors, which split the input over `M`
//!   equally weighted bins, each watched by a binary detector, and report
//!   how many bins clicked.

use crate::binom::binomial;
use crate::{Error, Result};

/// A heralding detector: measurement family plus lumped efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectorModel {
    /// Click / no-click bucket detector.
    Binary { efficiency: f64 },
    /// Ideal photon-number resolving detector.
    Pnr { efficiency: f64 },
    /// `modes` equally weighted bins, each watched by a binary detector.
    PseudoPnr { modes: usize, efficiency: f64 },
}

impl DetectorModel {
    /// Lumped efficiency of the heralding arm.
    pub fn efficiency(&self) -> f64 {
        match *self {
            DetectorModel::Binary { efficiency }
            | DetectorModel::Pnr { efficiency }
            | DetectorModel::PseudoPnr { efficiency, .. } => efficiency,
        }
    }

    /// Conditional-detection table for photon numbers up to `n_max`.
    pub fn povm(&self, n_max: usize) -> Result<PovmTable> {
        match *self {
            DetectorModel::Binary { efficiency } => binary_povm(efficiency, n_max),
            DetectorModel::Pnr { efficiency } => pnr_povm(efficiency, n_max),
            DetectorModel::PseudoPnr { modes, efficiency } => {
                pseudo_pnr_povm(efficiency, modes, n_max)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OutcomeKind {
    Click,
    Photons,
    Bins,
}

/// Matrix of conditional outcome probabilities.
///
/// `entries[m][n]` is the probability of outcome `m` given `n` photons at
/// the detector. Columns run over `n = 0..=n_max`; every column sums to one
/// (the POVM elements resolve the identity).
#[derive(Debug, Clone, PartialEq)]
pub struct PovmTable {
    pub entries: Vec<Vec<f64>>,
    kind: OutcomeKind,
}

impl PovmTable {
    /// Number of distinct outcomes (rows).
    pub fn n_outcomes(&self) -> usize {
        self.entries.len()
    }

    /// Largest photon number covered (columns are `0..=n_max`).
    pub fn n_max(&self) -> usize {
        self.entries[0].len() - 1
    }

    /// `p(outcome m | n photons)`; zero for out-of-range indices.
    pub fn p(&self, m: usize, n: usize) -> f64 {
        self.entries
            .get(m)
            .and_then(|row| row.get(n))
            .copied()
            .unwrap_or(0.0)
    }

    /// Human-readable meaning of outcome index `m`.
    pub fn outcome_label(&self, m: usize) -> String {
        match self.kind {
            OutcomeKind::Click => {
                if m == 0 {
                    "no-click".to_string()
                } else {
                    "click".to_string()
                }
            }
            OutcomeKind::Photons => format!("{m} photons detected"),
            OutcomeKind::Bins => format!("{m} bins clicked"),
        }
    }
}

fn check_efficiency(eta_d: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta_d) || !eta_d.is_finite() {
        return Err(Error::Domain {
            name: "eta_d",
            value: eta_d,
            expected: "in [0, 1]",
        });
    }
    Ok(())
}

/// Click / no-click table: a click happens unless every photon is lost.
///
/// `p(click | N) = 1 - (1 - eta_d)^N`, outcome 0 = no-click, 1 = click.
pub fn binary_povm(eta_d: f64, n_max: usize) -> Result<PovmTable> {
    check_efficiency(eta_d)?;
    let mut no_click = vec![0.0; n_max + 1];
    let mut click = vec![0.0; n_max + 1];
    for n in 0..=n_max {
        let miss = (1.0 - eta_d).powi(n as i32);
        no_click[n] = miss;
        click[n] = 1.0 - miss;
    }
    Ok(PovmTable {
        entries: vec![no_click, click],
        kind: OutcomeKind::Click,
    })
}

/// Ideal counting table: each photon survives independently with
/// probability `eta_d`, and every survivor is resolved.
///
/// `p(n | N) = C(N, n) eta_d^n (1 - eta_d)^(N - n)`.
#[allow(clippy::needless_range_loop)] // indices are the photon counts of the formula
pub fn pnr_povm(eta_d: f64, n_max: usize) -> Result<PovmTable> {
    check_efficiency(eta_d)?;
    let mut entries = vec![vec![0.0; n_max + 1]; n_max + 1];
    for n_in in 0..=n_max {
        for n_seen in 0..=n_in {
            entries[n_seen][n_in] = binomial(n_in, n_seen)
                * eta_d.powi(n_seen as i32)
                * (1.0 - eta_d).powi((n_in - n_seen) as i32);
        }
    }
    Ok(PovmTable {
        entries,
        kind: OutcomeKind::Photons,
    })
}

/// Bin-counting table for a detector split over `modes` equal bins.
///
/// Evaluated by an exact occupancy recursion: photons are processed one at a
/// time, and each survivor either lands in one of the `k` already-occupied
/// bins or opens a new one. The closed-form alternating sum for this table
/// cancels catastrophically in double precision once `modes` is large, while
/// the recursion only ever adds non-negative terms, so each column stays a
/// probability distribution to machine precision.
pub fn pseudo_pnr_povm(eta_d: f64, modes: usize, n_max: usize) -> Result<PovmTable> {
    check_efficiency(eta_d)?;
    if modes < 1 {
        return Err(Error::Domain {
            name: "modes",
            value: modes as f64,
            expected: "at least 1",
        });
    }
    let m = modes as f64;
    let n_outcomes = modes.min(n_max) + 1;
    let mut entries = vec![vec![0.0; n_max + 1]; n_outcomes];

    // state[k] = probability that exactly k bins are occupied so far
    let mut state = vec![0.0; n_outcomes];
    state[0] = 1.0;
    entries[0][0] = 1.0;
    for n in 1..=n_max {
        let mut next = vec![0.0; n_outcomes];
        for k in 0..n_outcomes {
            let p = state[k];
            if p == 0.0 {
                continue;
            }
            // photon lost, or detected into a bin that already fired
            next[k] += p * ((1.0 - eta_d) + eta_d * k as f64 / m);
            // photon detected into a fresh bin
            if k + 1 < n_outcomes {
                next[k + 1] += p * eta_d * (m - k as f64) / m;
            }
        }
        state = next;
        for (k, row) in entries.iter_mut().enumerate() {
            row[n] = state[k];
        }
    }
    Ok(PovmTable {
        entries,
        kind: OutcomeKind::Bins,
    })
}
