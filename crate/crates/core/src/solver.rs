//! Calibration of the pump strength to a target SNR.
//!
//! Comparing detector families is only fair at equal heralded-state quality,
//! so the operating point of each system is the mean pair number at which
//! its SNR hits a common target. The SNR falls monotonically with pump
//! strength (more pump, more multi-pair noise), which makes bisection on a
//! fixed bracket both sufficient and robust.

use crate::multiplex::{multiplexed_metrics, MultiplexConfig};
use crate::{Error, Result};

/// Search bracket for the mean pair number.
const BRACKET: (f64, f64) = (1e-6, 2.0);
/// Accept once the achieved SNR is this close to the target.
const SNR_TOL: f64 = 0.1;
/// Give up on a bracket this narrow (the SNR tolerance normally fires far
/// earlier).
const WIDTH_TOL: f64 = 1e-12;
const MAX_ITERS: u32 = 200;

/// Outcome of a successful calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationResult {
    /// Operating mean pair number.
    pub nbar_star: f64,
    /// SNR at the operating point, within 0.1 of the target.
    pub achieved_snr: f64,
    /// Bisection steps taken.
    pub iterations: u32,
    /// Initial search bracket; `nbar_star` lies strictly inside it.
    pub bracket: (f64, f64),
}

/// Find the mean pair number at which the system's SNR equals `target_snr`.
///
/// The `config`'s own `nbar` field is ignored; every evaluation replaces it.
/// Bisection runs on the fixed bracket and stops at the first midpoint whose
/// SNR is within 0.1 of the target, so identical inputs give bit-identical
/// results.
///
/// Fails with [`Error::NotBracketed`] when the target is not crossed on the
/// bracket — a perfect counting detector, for instance, heralds a pure
/// single photon at any pump strength, so its SNR is infinite everywhere —
/// and with [`Error::NonMonotone`] if a midpoint SNR escapes the interval
/// spanned by the bracket ends.
///
/// ```
/// use photon_mux::{calibrate_nbar, DetectorModel, MultiplexConfig};
/// let config = MultiplexConfig {
///     n_sources: 1,
///     eta_s: 0.8,
///     eta_tau: 0.99,
///     rep_rate: 8e7,
///     detector: DetectorModel::Binary { efficiency: 0.7 },
///     nbar: f64::NAN, // ignored
/// };
/// let cal = calibrate_nbar(100.0, &config).unwrap();
/// assert!((cal.achieved_snr - 100.0).abs() <= 0.1);
/// ```
pub fn calibrate_nbar(target_snr: f64, config: &MultiplexConfig) -> Result<CalibrationResult> {
    if !target_snr.is_finite() || target_snr <= 0.0 {
        return Err(Error::Domain {
            name: "target_snr",
            value: target_snr,
            expected: "positive and finite",
        });
    }
    let snr_at = |nbar: f64| -> Result<f64> {
        let c = MultiplexConfig { nbar, ..*config };
        Ok(multiplexed_metrics(&c)?.snr)
    };
    let (mut lo, mut hi) = BRACKET;
    let mut snr_lo = snr_at(lo)?;
    let mut snr_hi = snr_at(hi)?;
    if snr_hi > target_snr || snr_lo < target_snr {
        return Err(Error::NotBracketed {
            target: target_snr,
            lo,
            hi,
            snr_lo,
            snr_hi,
        });
    }
    for iterations in 1..=MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        let snr = snr_at(mid)?;
        let slack = 1e-6 * (1.0 + snr.abs());
        if snr > snr_lo + slack || snr < snr_hi - slack {
            return Err(Error::NonMonotone {
                nbar: mid,
                snr,
                snr_lo,
                snr_hi,
            });
        }
        if (snr - target_snr).abs() <= SNR_TOL {
            return Ok(CalibrationResult {
                nbar_star: mid,
                achieved_snr: snr,
                iterations,
                bracket: BRACKET,
            });
        }
        if snr > target_snr {
            lo = mid;
            snr_lo = snr;
        } else {
            hi = mid;
            snr_hi = snr;
        }
        if hi - lo <= WIDTH_TOL {
            return Err(Error::Inconsistent(format!(
                "bracket collapsed to width {} at nbar = {mid} without reaching the SNR \
                 tolerance (snr = {snr}, target = {target_snr})",
                hi - lo
            )));
        }
    }
    Err(Error::Inconsistent(format!(
        "no convergence after {MAX_ITERS} bisection steps toward SNR {target_snr}"
    )))
}
