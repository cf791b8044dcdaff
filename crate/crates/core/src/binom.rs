//! Binomial coefficients from a precomputed Pascal triangle.
//!
//! The table covers every n up to the photon-number cap, so the detection
//! and loss kernels never touch a factorial (and never overflow). Entries
//! are exact while they fit the 53-bit mantissa and correctly rounded to a
//! few ulp beyond it, which is far inside every tolerance used here.

use std::sync::OnceLock;

use crate::fock::PHOTON_CAP;

static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();

fn table() -> &'static [Vec<f64>] {
    TABLE.get_or_init(|| {
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(PHOTON_CAP + 1);
        rows.push(vec![1.0]);
        for n in 1..=PHOTON_CAP {
            let prev = &rows[n - 1];
            let mut row = vec![1.0; n + 1];
            for k in 1..n {
                row[k] = prev[k - 1] + prev[k];
            }
            rows.push(row);
        }
        rows
    })
}

/// C(n, k) as a float; zero outside the triangle.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n || n > PHOTON_CAP {
        return 0.0;
    }
    table()[n][k]
}
