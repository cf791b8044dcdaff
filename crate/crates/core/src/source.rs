//! A single heralded source: pair statistics conditioned on a detector
//! outcome, and the figures of merit of the state it announces.
//!
//! The source emits signal/idler pairs with perfectly correlated photon
//! number. Measuring the signal arm with a lossy detector turns the pair
//! distribution into an ensemble of conditional idler states, one per
//! detector outcome; heralding keeps the outcome that announces a single
//! photon.

use crate::detectors::{DetectorModel, PovmTable};
use crate::fock::{choose_cutoff, thermal_distribution, PhotonNumberDistribution};
use crate::{Error, Result};

/// Threshold below which an outcome probability is treated as zero and its
/// conditional state as undefined.
const P_NEGLIGIBLE: f64 = 1e-300;

/// Per-outcome heralding statistics of one source-detector pair.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldedEnsemble {
    /// `outcome_probs[m]`: probability that the detector reports outcome `m`.
    pub outcome_probs: Vec<f64>,
    /// Idler distribution conditioned on each outcome; `None` when the
    /// outcome has numerically zero probability (no state to condition on).
    pub conditionals: Vec<Option<PhotonNumberDistribution>>,
}

impl HeraldedEnsemble {
    /// Probability of outcome `m`; zero when out of range.
    pub fn outcome_prob(&self, m: usize) -> f64 {
        self.outcome_probs.get(m).copied().unwrap_or(0.0)
    }

    /// Conditional idler state for outcome `m`, if defined.
    pub fn conditional(&self, m: usize) -> Option<&PhotonNumberDistribution> {
        self.conditionals.get(m).and_then(|c| c.as_ref())
    }
}

/// Figures of merit of a configured source or switched network, all per
/// pump pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemMetrics {
    /// Probability that at least one source announces a single photon.
    pub p_heralding: f64,
    /// Single-photon weight of the delivered state (routing loss included).
    pub fidelity: f64,
    /// Single- to multi-photon ratio of the heralded state, taken before
    /// routing loss. Thinning suppresses multi-photon terms faster than the
    /// single-photon term, so the delivered ratio is never below this one;
    /// calibrating here keeps one operating point valid at any tree depth.
    pub snr: f64,
    /// Probability of heralding and delivering exactly one photon:
    /// `p_heralding * fidelity`.
    pub p_success: f64,
    /// Mean pair number the source was pumped to.
    pub nbar: f64,
}

/// Condition pair statistics on each outcome of a heralding detector.
///
/// `outcome_probs[m] = sum_N p(m | N) pair[N]`, and the conditional idler
/// distribution is `p(m | N) pair[N] / outcome_probs[m]` — the detected arm
/// carries the same photon number as the delivered arm.
pub fn herald_ensemble(
    pair_dist: &PhotonNumberDistribution,
    povm: &PovmTable,
) -> Result<HeraldedEnsemble> {
    let n_max = pair_dist.n_max();
    if povm.n_max() < n_max {
        return Err(Error::Dimension {
            needed: n_max + 1,
            have: povm.n_max() + 1,
        });
    }
    let mut outcome_probs = Vec::with_capacity(povm.n_outcomes());
    let mut conditionals = Vec::with_capacity(povm.n_outcomes());
    for m in 0..povm.n_outcomes() {
        let p_m: f64 = (0..=n_max).map(|n| povm.p(m, n) * pair_dist.probs[n]).sum();
        outcome_probs.push(p_m);
        if p_m > P_NEGLIGIBLE {
            let probs = (0..=n_max)
                .map(|n| povm.p(m, n) * pair_dist.probs[n] / p_m)
                .collect();
            conditionals.push(Some(PhotonNumberDistribution { probs }));
        } else {
            conditionals.push(None);
        }
    }
    Ok(HeraldedEnsemble {
        outcome_probs,
        conditionals,
    })
}

/// Outcome index that announces a usable single photon.
///
/// Index 1 for every family: "click" for a binary detector, "exactly one
/// photon" for a counting detector, "exactly one bin" for a binned one.
pub fn success_outcome(_detector: &DetectorModel) -> usize {
    1
}

/// Single- to multi-photon ratio of a normalized distribution.
///
/// Returns `+inf` when the multi-photon weight vanishes (a pure heralded
/// single photon, or a vacuum-only distribution — the latter has zero
/// single-photon weight too and is degenerate rather than good).
pub fn snr_of(delivered: &PhotonNumberDistribution) -> f64 {
    let multi: f64 = delivered.probs.iter().skip(2).sum();
    if multi < P_NEGLIGIBLE {
        f64::INFINITY
    } else {
        delivered.prob(1) / multi
    }
}

/// Overlap of a normalized delivered state with the one-photon state: its
/// weight at n = 1.
pub fn fidelity_of(delivered: &PhotonNumberDistribution) -> f64 {
    delivered.prob(1)
}

/// Metrics of one source heralded by `detector`, with nothing between the
/// source and the delivery port.
///
/// ```
/// use photon_mux::{single_source_metrics, DetectorModel};
/// let det = DetectorModel::Pnr { efficiency: 1.0 };
/// let m = single_source_metrics(1.0, det).unwrap();
/// assert_eq!(m.p_heralding, 0.25);
/// assert_eq!(m.fidelity, 1.0);
/// ```
pub fn single_source_metrics(nbar: f64, detector: DetectorModel) -> Result<SystemMetrics> {
    let cut = choose_cutoff(nbar, 1e-12);
    let pair = thermal_distribution(nbar, cut.n_max)?;
    let povm = detector.povm(cut.n_max)?;
    let ens = herald_ensemble(&pair, &povm)?;
    let m = success_outcome(&detector);
    let p_heralding = ens.outcome_prob(m);
    let (fidelity, snr) = match ens.conditional(m) {
        Some(cond) => (fidelity_of(cond), snr_of(cond)),
        None => (0.0, f64::INFINITY),
    };
    Ok(SystemMetrics {
        p_heralding,
        fidelity,
        snr,
        p_success: p_heralding * fidelity,
        nbar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::apply_loss;
    use crate::detectors::{binary_povm, pnr_povm};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn perfect_counting_heralds_exact_fock_states() {
        let pair = thermal_distribution(1.0, 20).unwrap();
        let ens = herald_ensemble(&pair, &pnr_povm(1.0, 20).unwrap()).unwrap();
        assert_eq!(ens.outcome_prob(1), 0.25);
        for m in 0..=20 {
            if let Some(cond) = ens.conditional(m) {
                for (n, &p) in cond.probs.iter().enumerate() {
                    assert_eq!(p, if n == m { 1.0 } else { 0.0 });
                }
            }
        }
    }

    #[test]
    fn binary_click_on_an_even_mixture() {
        let pair = PhotonNumberDistribution {
            probs: vec![0.5, 0.5],
        };
        let ens = herald_ensemble(&pair, &binary_povm(0.7, 1).unwrap()).unwrap();
        assert_close(ens.outcome_prob(1), 0.35, 1e-15);
        let cond = ens.conditional(1).unwrap();
        assert_eq!(cond.probs, vec![0.0, 1.0]);
    }

    #[test]
    fn vacuum_only_heralds_outcome_zero() {
        let pair = PhotonNumberDistribution {
            probs: vec![1.0, 0.0, 0.0],
        };
        let ens = herald_ensemble(&pair, &pnr_povm(0.7, 2).unwrap()).unwrap();
        assert_eq!(ens.outcome_prob(0), 1.0);
        assert_eq!(ens.outcome_prob(1), 0.0);
        assert!(ens.conditional(1).is_none());
    }

    #[test]
    fn outcome_probabilities_resolve_unity() {
        for nbar in [0.01, 0.1, 1.0] {
            let cut = choose_cutoff(nbar, 1e-12);
            let pair = thermal_distribution(nbar, cut.n_max).unwrap();
            for det in [
                DetectorModel::Binary { efficiency: 0.7 },
                DetectorModel::Pnr { efficiency: 0.7 },
                DetectorModel::PseudoPnr {
                    modes: 8,
                    efficiency: 0.7,
                },
            ] {
                let ens = herald_ensemble(&pair, &det.povm(cut.n_max).unwrap()).unwrap();
                let total: f64 = ens.outcome_probs.iter().sum();
                assert_close(total, 1.0, 1e-10);
            }
        }
    }

    #[test]
    fn conditionals_recompose_the_pair_distribution() {
        let nbar = 0.5;
        let cut = choose_cutoff(nbar, 1e-12);
        let pair = thermal_distribution(nbar, cut.n_max).unwrap();
        let povm = pnr_povm(0.7, cut.n_max).unwrap();
        let ens = herald_ensemble(&pair, &povm).unwrap();
        for n in 0..=cut.n_max {
            let recomposed: f64 = (0..ens.outcome_probs.len())
                .map(|m| {
                    ens.conditional(m)
                        .map_or(0.0, |c| ens.outcome_probs[m] * c.probs[n])
                })
                .sum();
            assert_close(recomposed, pair.probs[n], 1e-10);
        }
    }

    #[test]
    fn povm_must_cover_the_pair_cutoff() {
        let pair = thermal_distribution(1.0, 10).unwrap();
        let povm = binary_povm(0.7, 5).unwrap();
        assert!(matches!(
            herald_ensemble(&pair, &povm),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn success_outcome_is_index_one_for_every_family() {
        assert_eq!(
            success_outcome(&DetectorModel::Binary { efficiency: 0.7 }),
            1
        );
        assert_eq!(success_outcome(&DetectorModel::Pnr { efficiency: 0.7 }), 1);
        assert_eq!(
            success_outcome(&DetectorModel::PseudoPnr {
                modes: 8,
                efficiency: 0.7
            }),
            1
        );
    }

    #[test]
    fn snr_examples() {
        let pure = PhotonNumberDistribution {
            probs: vec![0.0, 1.0, 0.0, 0.0],
        };
        assert_eq!(snr_of(&pure), f64::INFINITY);
        let mixed = PhotonNumberDistribution {
            probs: vec![0.1, 0.6, 0.2, 0.1],
        };
        assert_close(snr_of(&mixed), 2.0, 1e-12);
        let vacuum = PhotonNumberDistribution {
            probs: vec![1.0, 0.0, 0.0],
        };
        assert_eq!(snr_of(&vacuum), f64::INFINITY);
        assert_eq!(fidelity_of(&vacuum), 0.0);
    }

    #[test]
    fn fidelity_examples() {
        let one = PhotonNumberDistribution {
            probs: vec![0.0, 1.0, 0.0],
        };
        assert_eq!(fidelity_of(&one), 1.0);
        let thinned = apply_loss(&one, 0.405504).unwrap();
        assert_close(fidelity_of(&thinned), 0.405504, 1e-15);
        let vacuum = PhotonNumberDistribution {
            probs: vec![1.0, 0.0, 0.0],
        };
        assert_eq!(fidelity_of(&vacuum), 0.0);
    }

    #[test]
    fn ideal_counting_at_unit_mean_hits_the_quarter_ceiling() {
        let m = single_source_metrics(1.0, DetectorModel::Pnr { efficiency: 1.0 }).unwrap();
        assert_eq!(m.p_heralding, 0.25);
        assert_eq!(m.fidelity, 1.0);
        assert_eq!(m.p_success, 0.25);
        assert_eq!(m.snr, f64::INFINITY);
    }

    #[test]
    fn perfect_counting_has_infinite_snr_at_any_pump() {
        for nbar in [0.01, 0.3, 1.5] {
            let m = single_source_metrics(nbar, DetectorModel::Pnr { efficiency: 1.0 }).unwrap();
            assert_eq!(m.snr, f64::INFINITY);
        }
    }

    #[test]
    fn success_probability_factorizes() {
        for det in [
            DetectorModel::Binary { efficiency: 0.7 },
            DetectorModel::Pnr { efficiency: 0.3 },
            DetectorModel::PseudoPnr {
                modes: 8,
                efficiency: 0.7,
            },
        ] {
            let m = single_source_metrics(0.2, det).unwrap();
            assert_close(m.p_success, m.p_heralding * m.fidelity, 1e-12);
        }
    }

    #[test]
    fn a_click_rules_out_vacuum() {
        let m_click = {
            let cut = choose_cutoff(0.4, 1e-12);
            let pair = thermal_distribution(0.4, cut.n_max).unwrap();
            let ens = herald_ensemble(&pair, &binary_povm(0.7, cut.n_max).unwrap()).unwrap();
            ens.conditional(1).unwrap().probs[0]
        };
        assert!(m_click.abs() <= 1e-12);
    }

    #[test]
    fn degenerate_detector_yields_zero_success() {
        let m = single_source_metrics(0.5, DetectorModel::Binary { efficiency: 0.0 }).unwrap();
        assert_eq!(m.p_heralding, 0.0);
        assert_eq!(m.fidelity, 0.0);
        assert_eq!(m.p_success, 0.0);
        assert!(m.snr.is_infinite());
    }
}
