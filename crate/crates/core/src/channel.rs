//! Photon loss as a binomial channel, plus the concatenated transmission of
//! the routing network.
//!
//! Loss of transmission `eta` acts on a photon-number distribution as
//! independent thinning: each photon survives with probability `eta`. This
//! is the beam-splitter picture with the reflected mode traced out, and it
//! composes multiplicatively.

use crate::binom::binomial;
use crate::fock::PhotonNumberDistribution;
use crate::{Error, Result};

/// Concatenated transmission between a heralded source and the delivery
/// port: one delay line plus one 2-to-1 switch per tree stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBudget {
    /// Transmission of the delay line that parks the idler while the
    /// switches settle.
    pub delay_efficiency: f64,
    /// Transmission of one switch stage.
    pub switch_efficiency: f64,
    /// Depth of the binary switch tree.
    pub switch_stages: u32,
    /// End-to-end transmission: `delay_efficiency * switch_efficiency^switch_stages`.
    pub total: f64,
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || !value.is_finite() {
        return Err(Error::Domain {
            name,
            value,
            expected: "in [0, 1]",
        });
    }
    Ok(())
}

/// Binomial thinning of a photon-number distribution at transmission `eta`.
///
/// `out[k] = sum_{n >= k} C(n, k) eta^k (1 - eta)^(n-k) dist[n]`; the total
/// probability is preserved.
pub fn apply_loss(dist: &PhotonNumberDistribution, eta: f64) -> Result<PhotonNumberDistribution> {
    check_unit_interval("eta", eta)?;
    let n_max = dist.n_max();
    let mut keep_pow = vec![0.0; n_max + 1];
    let mut lose_pow = vec![0.0; n_max + 1];
    keep_pow[0] = 1.0;
    lose_pow[0] = 1.0;
    for i in 1..=n_max {
        keep_pow[i] = keep_pow[i - 1] * eta;
        lose_pow[i] = lose_pow[i - 1] * (1.0 - eta);
    }
    let mut probs = vec![0.0; n_max + 1];
    for (k, out) in probs.iter_mut().enumerate() {
        let mut acc = 0.0;
        for n in k..=n_max {
            acc += binomial(n, k) * keep_pow[k] * lose_pow[n - k] * dist.probs[n];
        }
        *out = acc;
    }
    Ok(PhotonNumberDistribution { probs })
}

/// Loss budget of an `n_sources`-way switched network.
///
/// The tree needs `ceil(log2(n_sources))` switch stages, each of
/// transmission `eta_s`, plus one delay line of transmission `eta_tau`. A
/// single source needs neither: it is delivered directly, with unit
/// transmission.
pub fn network_efficiency(n_sources: usize, eta_s: f64, eta_tau: f64) -> Result<LossBudget> {
    if n_sources < 1 {
        return Err(Error::Domain {
            name: "n_sources",
            value: n_sources as f64,
            expected: "at least 1",
        });
    }
    check_unit_interval("eta_s", eta_s)?;
    check_unit_interval("eta_tau", eta_tau)?;
    if n_sources == 1 {
        return Ok(LossBudget {
            delay_efficiency: 1.0,
            switch_efficiency: eta_s,
            switch_stages: 0,
            total: 1.0,
        });
    }
    let switch_stages = (n_sources - 1).ilog2() + 1;
    Ok(LossBudget {
        delay_efficiency: eta_tau,
        switch_efficiency: eta_s,
        switch_stages,
        total: eta_tau * eta_s.powi(switch_stages as i32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{mean_photon_number, thermal_distribution};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn lossless_channel_is_the_identity() {
        let d = thermal_distribution(0.8, 25).unwrap();
        let out = apply_loss(&d, 1.0).unwrap();
        assert_eq!(out, d);
    }

    #[test]
    fn two_photons_thinned_at_half() {
        let d = PhotonNumberDistribution {
            probs: vec![0.0, 0.0, 1.0],
        };
        let out = apply_loss(&d, 0.5).unwrap();
        assert_close(out.probs[0], 0.25, 1e-15);
        assert_close(out.probs[1], 0.5, 1e-15);
        assert_close(out.probs[2], 0.25, 1e-15);
    }

    #[test]
    fn full_loss_sends_everything_to_vacuum() {
        let d = thermal_distribution(1.3, 30).unwrap();
        let out = apply_loss(&d, 0.0).unwrap();
        assert_close(out.probs[0], d.total(), 1e-12);
        assert!(out.probs[1..].iter().all(|&p| p == 0.0));
    }

    #[test]
    fn losses_compose_multiplicatively() {
        let d = thermal_distribution(0.6, 40).unwrap();
        let twice = apply_loss(&apply_loss(&d, 0.9).unwrap(), 0.5).unwrap();
        let once = apply_loss(&d, 0.45).unwrap();
        for (a, b) in twice.probs.iter().zip(&once.probs) {
            assert_close(*a, *b, 1e-12);
        }
    }

    #[test]
    fn mean_scales_with_transmission() {
        let d = thermal_distribution(1.1, 50).unwrap();
        let out = apply_loss(&d, 0.37).unwrap();
        assert_close(
            mean_photon_number(&out),
            0.37 * mean_photon_number(&d),
            1e-12,
        );
    }

    #[test]
    fn thermal_states_stay_thermal_under_loss() {
        let d = thermal_distribution(1.0, 60).unwrap();
        let thinned = apply_loss(&d, 0.4).unwrap();
        let direct = thermal_distribution(0.4, 60).unwrap();
        for (a, b) in thinned.probs.iter().zip(&direct.probs) {
            assert_close(*a, *b, 1e-10);
        }
    }

    #[test]
    fn single_source_has_no_network() {
        let b = network_efficiency(1, 0.8, 0.99).unwrap();
        assert_eq!(b.switch_stages, 0);
        assert_eq!(b.total, 1.0);
        assert_eq!(b.delay_efficiency, 1.0);
    }

    #[test]
    fn sixteen_sources_use_four_stages() {
        let b = network_efficiency(16, 0.8, 0.99).unwrap();
        assert_eq!(b.switch_stages, 4);
        assert_close(b.total, 0.405504, 1e-12);
        assert_close(
            b.total,
            b.delay_efficiency * b.switch_efficiency.powi(4),
            0.0,
        );
    }

    #[test]
    fn stage_count_rounds_up_for_odd_source_counts() {
        assert_eq!(network_efficiency(2, 1.0, 1.0).unwrap().switch_stages, 1);
        assert_eq!(network_efficiency(2, 1.0, 1.0).unwrap().total, 1.0);
        assert_eq!(network_efficiency(3, 0.9, 0.9).unwrap().switch_stages, 2);
        assert_eq!(network_efficiency(17, 0.9, 0.9).unwrap().switch_stages, 5);
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        let d = thermal_distribution(0.5, 5).unwrap();
        assert!(apply_loss(&d, 1.2).is_err());
        assert!(apply_loss(&d, -0.1).is_err());
        assert!(network_efficiency(0, 0.8, 0.99).is_err());
        assert!(network_efficiency(4, 1.4, 0.99).is_err());
        assert!(network_efficiency(4, 0.8, f64::NAN).is_err());
    }
}
