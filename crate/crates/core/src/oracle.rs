//! Seeded Monte-Carlo simulation of the full physical pipeline.
//!
//! Instead of reusing the analytic tables, every pulse is acted out photon
//! by photon: pair numbers are drawn from the geometric law, each signal
//! photon survives its detector by a Bernoulli trial, pseudo-number
//! detectors scatter survivors into bins, and the routed idler is thinned by
//! the network transmission. Agreement with the closed-form metrics is then
//! a statement about the model, not about shared code paths.
//!
//! Each trial runs on its own counter-indexed RNG stream derived from one
//! root seed, so results are bit-reproducible and independent of how trials
//! are sharded across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::network_efficiency;
use crate::detectors::DetectorModel;
use crate::fock::PHOTON_CAP;
use crate::multiplex::MultiplexConfig;
use crate::source::success_outcome;
use crate::{Error, Result};

/// One simulated pump pulse across all sources.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    /// Did any source announce a single photon?
    pub heralded: bool,
    /// Lowest-index source that announced one, if any.
    pub selected_source: Option<usize>,
    /// Photons surviving the network from the selected source; zero when
    /// nothing was heralded.
    pub delivered_photons: u32,
    /// Raw detector outcome of every source (clicks, photons, or bins).
    pub detector_outcomes: Vec<u32>,
}

/// Empirical metrics with binomial standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalMetrics {
    pub trials: u64,
    pub heralded_trials: u64,
    pub p_heralding: f64,
    pub p_heralding_se: f64,
    /// Fraction of heralded pulses that delivered exactly one photon.
    pub fidelity: f64,
    pub fidelity_se: f64,
    /// Delivered single- to multi-photon count ratio.
    pub snr: f64,
    pub snr_se: f64,
    pub p_success: f64,
    pub p_success_se: f64,
    /// Pair-number draws clamped at the photon cap. Must stay zero in any
    /// run used as evidence; a nonzero count means the tail mattered.
    pub cap_clamps: u64,
}

/// Draw a pair number from the geometric law with mean `nbar` by inverting
/// the CDF, clamping at the photon cap.
fn sample_pairs(nbar: f64, ln_q: f64, rng: &mut impl Rng, clamps: &mut u64) -> u32 {
    if nbar <= 0.0 {
        return 0;
    }
    let u: f64 = rng.gen();
    let n = ((1.0 - u).ln() / ln_q).floor();
    if n > PHOTON_CAP as f64 {
        *clamps += 1;
        PHOTON_CAP as u32
    } else {
        n as u32
    }
}

/// Act out the detector on `n_pairs` signal photons.
fn sample_outcome(detector: &DetectorModel, n_pairs: u32, rng: &mut impl Rng) -> u32 {
    let eta_d = detector.efficiency();
    match *detector {
        DetectorModel::Binary { .. } => {
            let mut survivors = 0u32;
            for _ in 0..n_pairs {
                if rng.gen::<f64>() < eta_d {
                    survivors += 1;
                }
            }
            u32::from(survivors > 0)
        }
        DetectorModel::Pnr { .. } => {
            let mut survivors = 0u32;
            for _ in 0..n_pairs {
                if rng.gen::<f64>() < eta_d {
                    survivors += 1;
                }
            }
            survivors
        }
        DetectorModel::PseudoPnr { modes, .. } => {
            let mut hit = vec![false; modes];
            for _ in 0..n_pairs {
                if rng.gen::<f64>() < eta_d {
                    hit[rng.gen_range(0..modes)] = true;
                }
            }
            hit.iter().filter(|&&h| h).count() as u32
        }
    }
}

/// Simulate one pump pulse of the whole network.
///
/// `network_transmission` is the end-to-end transmission the routed idler
/// must survive; draw order is fixed (sources in index order, then the
/// thinning of the selected idler), so a given RNG state maps to exactly one
/// outcome.
pub fn simulate_trial(
    config: &MultiplexConfig,
    network_transmission: f64,
    rng: &mut impl Rng,
    cap_clamps: &mut u64,
) -> TrialOutcome {
    let ln_q = (config.nbar / (config.nbar + 1.0)).ln();
    let success = success_outcome(&config.detector) as u32;
    let mut detector_outcomes = Vec::with_capacity(config.n_sources);
    let mut pair_counts = Vec::with_capacity(config.n_sources);
    let mut selected_source = None;
    for src in 0..config.n_sources {
        let n_pairs = sample_pairs(config.nbar, ln_q, rng, cap_clamps);
        let outcome = sample_outcome(&config.detector, n_pairs, rng);
        if outcome == success && selected_source.is_none() {
            selected_source = Some(src);
        }
        pair_counts.push(n_pairs);
        detector_outcomes.push(outcome);
    }
    let delivered_photons = match selected_source {
        Some(src) => {
            let mut survived = 0u32;
            for _ in 0..pair_counts[src] {
                if rng.gen::<f64>() < network_transmission {
                    survived += 1;
                }
            }
            survived
        }
        None => 0,
    };
    TrialOutcome {
        heralded: selected_source.is_some(),
        selected_source,
        delivered_photons,
        detector_outcomes,
    }
}

fn binomial_se(p_hat: f64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        (p_hat * (1.0 - p_hat) / n as f64).sqrt()
    }
}

/// Run `trials` independent pulses from one root seed and aggregate the
/// empirical metrics.
///
/// Trial `t` runs on RNG stream `t` of a ChaCha cipher seeded with `seed`,
/// so any sharding of the trial range reproduces the sequential run bit for
/// bit.
///
/// ```
/// use photon_mux::{simulate_system, DetectorModel, MultiplexConfig};
/// let config = MultiplexConfig {
///     n_sources: 1,
///     eta_s: 1.0,
///     eta_tau: 1.0,
///     rep_rate: 8e7,
///     detector: DetectorModel::Pnr { efficiency: 1.0 },
///     nbar: 1.0,
/// };
/// let e = simulate_system(&config, 10_000, 42).unwrap();
/// assert!((e.p_heralding - 0.25).abs() < 3.0 * e.p_heralding_se);
/// assert_eq!(e.fidelity, 1.0); // lossless network delivers every herald intact
/// ```
pub fn simulate_system(config: &MultiplexConfig, trials: u64, seed: u64) -> Result<EmpiricalMetrics> {
    if trials < 1 {
        return Err(Error::Domain {
            name: "trials",
            value: trials as f64,
            expected: "at least 1",
        });
    }
    if !config.nbar.is_finite() || config.nbar < 0.0 {
        return Err(Error::Domain {
            name: "nbar",
            value: config.nbar,
            expected: "finite and non-negative",
        });
    }
    let eta_d = config.detector.efficiency();
    if !(0.0..=1.0).contains(&eta_d) || !eta_d.is_finite() {
        return Err(Error::Domain {
            name: "eta_d",
            value: eta_d,
            expected: "in [0, 1]",
        });
    }
    if let DetectorModel::PseudoPnr { modes, .. } = config.detector {
        if modes < 1 {
            return Err(Error::Domain {
                name: "modes",
                value: modes as f64,
                expected: "at least 1",
            });
        }
    }
    let transmission = network_efficiency(config.n_sources, config.eta_s, config.eta_tau)?.total;

    let master = ChaCha8Rng::seed_from_u64(seed);
    let mut cap_clamps = 0u64;
    let mut heralded_trials = 0u64;
    let mut delivered_one = 0u64;
    let mut delivered_multi = 0u64;
    for t in 0..trials {
        let mut rng = master.clone();
        rng.set_stream(t);
        let out = simulate_trial(config, transmission, &mut rng, &mut cap_clamps);
        if out.heralded {
            heralded_trials += 1;
            match out.delivered_photons {
                1 => delivered_one += 1,
                n if n >= 2 => delivered_multi += 1,
                _ => {}
            }
        }
    }

    let p_heralding = heralded_trials as f64 / trials as f64;
    let fidelity = if heralded_trials == 0 {
        0.0
    } else {
        delivered_one as f64 / heralded_trials as f64
    };
    let p_success = delivered_one as f64 / trials as f64;
    let (snr, snr_se) = if delivered_multi == 0 {
        (f64::INFINITY, f64::INFINITY)
    } else {
        let snr = delivered_one as f64 / delivered_multi as f64;
        let rel = (1.0 / delivered_one.max(1) as f64 + 1.0 / delivered_multi as f64).sqrt();
        (snr, snr * rel)
    };
    Ok(EmpiricalMetrics {
        trials,
        heralded_trials,
        p_heralding,
        p_heralding_se: binomial_se(p_heralding, trials),
        fidelity,
        fidelity_se: binomial_se(fidelity, heralded_trials),
        snr,
        snr_se,
        p_success,
        p_success_se: binomial_se(p_success, trials),
        cap_clamps,
    })
}
