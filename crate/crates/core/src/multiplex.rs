//! N identical heralded sources behind a binary switch tree.
//!
//! Every pulse, all sources pump in parallel; whichever one heralds a single
//! photon is routed to the common output through `ceil(log2 N)` switches and
//! a delay line. Heralding odds improve geometrically with N while the
//! routed photon pays the network's transmission once.

use crate::channel::{apply_loss, network_efficiency};
use crate::detectors::DetectorModel;
use crate::fock::{choose_cutoff, thermal_distribution};
use crate::source::{
    fidelity_of, herald_ensemble, single_source_metrics, snr_of, success_outcome, SystemMetrics,
};
use crate::{Error, Result};

/// Full description of an N-source switched network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplexConfig {
    pub n_sources: usize,
    /// Transmission of one switch stage.
    pub eta_s: f64,
    /// Transmission of the delay line.
    pub eta_tau: f64,
    /// Pump repetition rate in Hz.
    pub rep_rate: f64,
    pub detector: DetectorModel,
    /// Mean pair number each source is pumped to.
    pub nbar: f64,
}

/// Joint heralding statistics of two sources feeding one 2-to-1 switch.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedHeralding {
    /// Probability that at least one of the two heralds successfully.
    pub p_success_any: f64,
    /// Probability that neither does.
    pub p_none: f64,
    /// `joint[i][j]`: probability of outcome `i` on the first source and
    /// `j` on the second.
    pub joint: Vec<Vec<f64>>,
}

fn check_normalized(name: &'static str, v: &[f64]) -> Result<()> {
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        let _ = name;
        return Err(Error::NotNormalized { sum, tol: 1e-10 });
    }
    Ok(())
}

/// Combine the outcome vectors of two independent sources.
///
/// The joint distribution is the outer product; the probability that the
/// pair delivers is read off by summing the success row and success column
/// (counting their crossing once), which equals
/// `1 - (1 - p_a)(1 - p_b)` for success probabilities `p_a`, `p_b`.
pub fn combine_two(
    p_h_a: &[f64],
    p_h_b: &[f64],
    success_index: usize,
) -> Result<CombinedHeralding> {
    check_normalized("p_h_a", p_h_a)?;
    check_normalized("p_h_b", p_h_b)?;
    if success_index >= p_h_a.len() || success_index >= p_h_b.len() {
        return Err(Error::Dimension {
            needed: success_index + 1,
            have: p_h_a.len().min(p_h_b.len()),
        });
    }
    let joint: Vec<Vec<f64>> = p_h_a
        .iter()
        .map(|&a| p_h_b.iter().map(|&b| a * b).collect())
        .collect();
    let row: f64 = joint[success_index].iter().sum();
    let col: f64 = joint.iter().map(|r| r[success_index]).sum();
    let p_success_any = row + col - joint[success_index][success_index];
    Ok(CombinedHeralding {
        p_success_any,
        p_none: 1.0 - p_success_any,
        joint,
    })
}

/// Metrics of the full N-source network at one operating point.
///
/// At least one of N independent sources heralds with probability
/// `1 - (1 - p1)^N`; the selected conditional state is thinned by the
/// network transmission before delivery. With `n_sources = 1` this reduces
/// exactly to [`single_source_metrics`].
///
/// ```
/// use photon_mux::{multiplexed_metrics, DetectorModel, MultiplexConfig};
/// let config = MultiplexConfig {
///     n_sources: 17,
///     eta_s: 1.0,
///     eta_tau: 1.0,
///     rep_rate: 1e6,
///     detector: DetectorModel::Pnr { efficiency: 1.0 },
///     nbar: 1.0,
/// };
/// let m = multiplexed_metrics(&config).unwrap();
/// assert!(m.p_success > 0.99);
/// ```
pub fn multiplexed_metrics(config: &MultiplexConfig) -> Result<SystemMetrics> {
    if config.n_sources == 1 {
        return single_source_metrics(config.nbar, config.detector);
    }
    let budget = network_efficiency(config.n_sources, config.eta_s, config.eta_tau)?;
    let cut = choose_cutoff(config.nbar, 1e-12);
    let pair = thermal_distribution(config.nbar, cut.n_max)?;
    let povm = config.detector.povm(cut.n_max)?;
    let ens = herald_ensemble(&pair, &povm)?;
    let m = success_outcome(&config.detector);
    let p1 = ens.outcome_prob(m);
    let p_heralding = 1.0 - (1.0 - p1).powi(config.n_sources as i32);
    let (fidelity, snr) = match ens.conditional(m) {
        Some(cond) => {
            let delivered = apply_loss(cond, budget.total)?;
            (fidelity_of(&delivered), snr_of(cond))
        }
        None => (0.0, f64::INFINITY),
    };
    Ok(SystemMetrics {
        p_heralding,
        fidelity,
        snr,
        p_success: p_heralding * fidelity,
        nbar: config.nbar,
    })
}

/// Mean time until `n_photons` independent copies of the system all succeed
/// on the same pulse slot: `1 / (rep_rate * p_success^n_photons)` seconds.
///
/// A system that never succeeds waits forever; that is reported as `+inf`
/// rather than an error.
pub fn waiting_time(p_success: f64, rep_rate: f64, n_photons: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_success) || !p_success.is_finite() {
        return Err(Error::Domain {
            name: "p_success",
            value: p_success,
            expected: "in [0, 1]",
        });
    }
    if !rep_rate.is_finite() || rep_rate <= 0.0 {
        return Err(Error::Domain {
            name: "rep_rate",
            value: rep_rate,
            expected: "positive and finite",
        });
    }
    if n_photons < 1 {
        return Err(Error::Domain {
            name: "n_photons",
            value: n_photons as f64,
            expected: "at least 1",
        });
    }
    if p_success == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (rep_rate * p_success.powi(n_photons as i32)))
}
