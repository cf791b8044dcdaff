//! Truncated photon-number distributions and the thermal statistics of a
//! spontaneous photon-pair source.
//!
//! Every state in this crate is diagonal in the Fock basis, so a state is
//! just a probability vector over photon number. A source pumped below
//! saturation emits pairs with a geometric (thermal) law, which caps the
//! single-pair probability at 1/4 no matter how hard it is pumped.

use crate::{Error, Result};

/// Hard upper limit on any photon-number cutoff.
///
/// Keeps the binomial kernels inside the exactly-computable range of double
/// precision; requests for larger cutoffs saturate (see [`choose_cutoff`]).
pub const PHOTON_CAP: usize = 200;

/// A probability distribution over photon number `0..=n_max`.
///
/// `probs[n]` is the probability of exactly `n` photons. The vector may sum
/// to slightly less than one when it truncates an infinite tail; conditioned
/// distributions are normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonNumberDistribution {
    pub probs: Vec<f64>,
}

impl PhotonNumberDistribution {
    /// Largest photon number the distribution resolves.
    pub fn n_max(&self) -> usize {
        self.probs.len().saturating_sub(1)
    }

    /// Probability of exactly `n` photons; zero beyond the cutoff.
    pub fn prob(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    /// Total probability carried by the vector.
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// A truncation choice together with its saturation flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cutoff {
    /// Smallest cutoff whose truncated tail is at or below the tolerance.
    pub n_max: usize,
    /// True when the hard cap trimmed the request before the tail target
    /// was reached.
    pub saturated: bool,
}

/// Thermal (geometric) pair-number distribution with mean `nbar`, truncated
/// at `n_max`.
///
/// `probs[n] = (nbar/(nbar+1))^n / (nbar+1)`. Entries are built by the exact
/// geometric recurrence, so adjacent entries keep the ratio
/// `nbar/(nbar+1)` to machine precision.
///
/// ```
/// use photon_mux::thermal_distribution;
/// let d = thermal_distribution(1.0, 3).unwrap();
/// assert_eq!(d.probs, vec![0.5, 0.25, 0.125, 0.0625]);
/// ```
pub fn thermal_distribution(nbar: f64, n_max: usize) -> Result<PhotonNumberDistribution> {
    if !nbar.is_finite() || nbar < 0.0 {
        return Err(Error::Domain {
            name: "nbar",
            value: nbar,
            expected: "finite and non-negative",
        });
    }
    let q = nbar / (nbar + 1.0);
    let mut probs = Vec::with_capacity(n_max + 1);
    let mut p = 1.0 / (nbar + 1.0);
    for _ in 0..=n_max {
        probs.push(p);
        p *= q;
    }
    Ok(PhotonNumberDistribution { probs })
}

/// Smallest cutoff that leaves a thermal tail at or below `tail_tol`,
/// saturating at [`PHOTON_CAP`].
///
/// The tail kept beyond `n_max` is `(nbar/(nbar+1))^(n_max+1)`; the returned
/// flag records whether the cap was hit before the tolerance was met.
pub fn choose_cutoff(nbar: f64, tail_tol: f64) -> Cutoff {
    if nbar.is_nan() || nbar <= 0.0 {
        return Cutoff {
            n_max: 0,
            saturated: false,
        };
    }
    let q = nbar / (nbar + 1.0);
    let mut n_max = 0;
    let mut tail = q;
    while tail > tail_tol && n_max < PHOTON_CAP {
        n_max += 1;
        tail *= q;
    }
    Cutoff {
        n_max,
        saturated: tail > tail_tol,
    }
}

/// Mean of a photon-number distribution.
pub fn mean_photon_number(dist: &PhotonNumberDistribution) -> f64 {
    dist.probs
        .iter()
        .enumerate()
        .map(|(n, p)| n as f64 * p)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_limit_is_a_point_mass() {
        let d = thermal_distribution(0.0, 5).unwrap();
        assert_eq!(d.probs, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn unit_mean_gives_quarter_single_pair_probability() {
        let d = thermal_distribution(1.0, 3).unwrap();
        assert_eq!(d.probs[1], 0.25);
        assert_eq!(d.probs, vec![0.5, 0.25, 0.125, 0.0625]);
    }

    #[test]
    fn entries_strictly_decrease_for_positive_mean() {
        let d = thermal_distribution(0.37, 30).unwrap();
        for w in d.probs.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn rejects_negative_and_non_finite_means() {
        assert!(thermal_distribution(-0.1, 3).is_err());
        assert!(thermal_distribution(f64::NAN, 3).is_err());
        assert!(thermal_distribution(f64::INFINITY, 3).is_err());
    }

    #[test]
    fn cutoff_examples() {
        assert_eq!(choose_cutoff(0.0, 1e-6).n_max, 0);
        assert_eq!(choose_cutoff(1.0, 1e-12).n_max, 39);
        assert_eq!(choose_cutoff(2.0, 1e-12).n_max, 68);
    }

    #[test]
    fn cutoff_saturates_at_the_cap() {
        let c = choose_cutoff(50.0, 1e-12);
        assert_eq!(c.n_max, PHOTON_CAP);
        assert!(c.saturated);
        assert!(!choose_cutoff(1.0, 1e-12).saturated);
    }

    #[test]
    fn cutoff_tail_is_tight() {
        for nbar in [0.05, 0.3, 1.0, 2.0] {
            let c = choose_cutoff(nbar, 1e-12);
            let q = nbar / (nbar + 1.0);
            assert!(q.powi(c.n_max as i32 + 1) <= 1e-12);
            assert!(q.powi(c.n_max as i32) > 1e-12);
        }
    }

    #[test]
    fn mean_of_point_masses() {
        let vac = PhotonNumberDistribution {
            probs: vec![1.0, 0.0, 0.0],
        };
        let one = PhotonNumberDistribution {
            probs: vec![0.0, 1.0, 0.0],
        };
        assert_eq!(mean_photon_number(&vac), 0.0);
        assert_eq!(mean_photon_number(&one), 1.0);
    }

    #[test]
    fn truncated_thermal_mean_matches_nbar() {
        let c = choose_cutoff(1.0, 1e-12);
        let d = thermal_distribution(1.0, c.n_max).unwrap();
        assert!((mean_photon_number(&d) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn normalization_deficit_equals_the_tail() {
        for nbar in [0.01, 0.1, 0.5, 1.0, 2.0] {
            for tol in [1e-6, 1e-12] {
                let c = choose_cutoff(nbar, tol);
                let d = thermal_distribution(nbar, c.n_max).unwrap();
                assert!((d.total() - 1.0).abs() <= tol + 1e-14);
            }
        }
    }
}
