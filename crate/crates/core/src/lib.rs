//! Analytic and Monte-Carlo models of spatially multiplexed heralded
//! single-photon sources.
//!
//! A heralded source pumps a nonlinear crystal, splits each photon pair, and
//! announces a usable signal photon whenever its idler detector fires the
//! right way. One source fires rarely; an array of them behind a switched
//! routing network fires almost every pulse, at the price of switch and
//! delay losses on the routed photon. This crate computes the exact
//! figure-of-merit chain for such an array — heralding probability,
//! delivered single-photon fidelity, single- to multi-photon ratio, and
//! success probability — and cross-checks it with a seeded photon-by-photon
//! simulation.
//!
//! The pipeline composes from small pieces:
//!
//! * [`thermal_distribution`] / [`choose_cutoff`] — truncated pair-number
//!   statistics of the pump.
//! * [`binary_povm`], [`pnr_povm`], [`pseudo_pnr_povm`] — detector response
//!   tables for click, counting, and multiplexed-click detectors.
//! * [`herald_ensemble`] / [`single_source_metrics`] — conditional photon
//!   statistics after a herald.
//! * [`network_efficiency`] / [`apply_loss`] — binomial thinning through the
//!   routing tree.
//! * [`multiplexed_metrics`] / [`waiting_time`] — full-array figures and
//!   n-photon coincidence times.
//! * [`calibrate_nbar`] — pump strength that hits a target single- to
//!   multi-photon ratio.
//! * [`simulate_system`] — the Monte-Carlo cross-check.
//!
//! ```
//! use photon_mux::{multiplexed_metrics, DetectorModel, MultiplexConfig};
//!
//! let config = MultiplexConfig {
//!     n_sources: 16,
//!     eta_s: 0.8,
//!     eta_tau: 0.99,
//!     rep_rate: 1e6,
//!     detector: DetectorModel::Pnr { efficiency: 0.7 },
//!     nbar: 0.1,
//! };
//! let m = multiplexed_metrics(&config).unwrap();
//! assert!(m.p_heralding > 0.5); // sixteen tries beat one
//! assert!(m.fidelity < 1.0); // the routing tree still eats photons
//! ```

mod binom;
mod error;

pub mod channel;
pub mod detectors;
pub mod fock;
pub mod multiplex;
pub mod oracle;
pub mod solver;
pub mod source;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub use channel::{apply_loss, network_efficiency, LossBudget};
pub use detectors::{binary_povm, pnr_povm, pseudo_pnr_povm, DetectorModel, PovmTable};
pub use fock::{
    choose_cutoff, mean_photon_number, thermal_distribution, Cutoff, PhotonNumberDistribution,
    PHOTON_CAP,
};
pub use multiplex::{
    combine_two, multiplexed_metrics, waiting_time, CombinedHeralding, MultiplexConfig,
};
pub use oracle::{simulate_system, simulate_trial, EmpiricalMetrics, TrialOutcome};
pub use solver::{calibrate_nbar, CalibrationResult};
pub use source::{
    fidelity_of, herald_ensemble, single_source_metrics, snr_of, success_outcome,
    HeraldedEnsemble, SystemMetrics,
};
