//! Least-squares cost and trajectory performance indexes.
//!
//! Both indexes work on gauge-aligned states (first component subtracted),
//! so a constant offset along the Laplacian kernel never counts as error.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimator::{Gauge, Trajectory};
use crate::graph::Graph;
use crate::measurement::MeasurementSet;

pub const DEFAULT_K_NEG: usize = 2;
/// Smallest error norm accepted as a ratio denominator.
pub const MIN_DENOMINATOR: f64 = 1e-14;

/// `h(x) = ½ Σ_i Σ_{j∈N_i} (x_i − x_j + x̃_ij)²` over ordered pairs.
pub fn cost(g: &Graph, meas: &MeasurementSet, x: &[f64]) -> Result<f64> {
    if x.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: x.len(),
        });
    }
    let mut total = 0.0;
    for i in 0..g.n() {
        for &j in g.neighbors(i) {
            let m = meas
                .pairwise
                .get(&(i, j))
                .ok_or(Error::MissingMeasurement(i, j))?;
            let r = x[i] - x[j] + m;
            total += r * r;
        }
    }
    Ok(0.5 * total)
}

/// Mean of `‖e(k+1)‖ / ‖e(k)‖` for `k = k_neg ..= k̄ − k_neg − 1`.
pub fn effective_rate(traj: &Trajectory, k_neg: usize) -> Result<f64> {
    let k_bar = traj.rounds();
    if k_bar <= 2 * k_neg {
        return Err(Error::RateUndefined(format!(
            "needs more than 2·k_neg = {} rounds, trajectory has {k_bar}",
            2 * k_neg
        )));
    }
    let norms = traj.error_norms();
    let mut sum = 0.0;
    for k in k_neg..(k_bar - k_neg) {
        if norms[k] <= MIN_DENOMINATOR {
            return Err(Error::RateUndefined(format!(
                "error norm {:e} at round {k} is below {MIN_DENOMINATOR:e} (converged)",
                norms[k]
            )));
        }
        sum += norms[k + 1] / norms[k];
    }
    Ok(sum / (k_bar - 2 * k_neg) as f64)
}

/// `(1/n) Σ_i (x_i(k̄) − x⋆_i)²` after alignment.
pub fn mse(traj: &Trajectory) -> f64 {
    let e = traj.aligned_error(traj.rounds());
    e.iter().map(|v| v * v).sum::<f64>() / e.len() as f64
}

/// Performance summary of one trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerfReport {
    pub r_e: Option<f64>,
    /// Why `r_e` is undefined, when it is.
    pub r_e_note: Option<String>,
    pub mse: f64,
    pub cost_series: Vec<f64>,
    pub cost_optimum: f64,
    pub k_neg: usize,
    pub k_bar: usize,
    pub gauge: Gauge,
}

pub fn perf_report(
    g: &Graph,
    meas: &MeasurementSet,
    traj: &Trajectory,
    k_neg: usize,
) -> Result<PerfReport> {
    let (r_e, r_e_note) = match effective_rate(traj, k_neg) {
        Ok(r) => (Some(r), None),
        Err(Error::RateUndefined(why)) => (None, Some(why)),
        Err(e) => return Err(e),
    };
    let cost_series = traj
        .states
        .iter()
        .map(|x| cost(g, meas, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(PerfReport {
        r_e,
        r_e_note,
        mse: mse(traj),
        cost_series,
        cost_optimum: cost(g, meas, &traj.centralized_ref)?,
        k_neg,
        k_bar: traj.rounds(),
        gauge: traj.gauge,
    })
}
