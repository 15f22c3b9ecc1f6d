//! Characteristic times of the correlation dynamics: closed-form sudden
//! transition times for both partitions, the metastable decoherence-free
//! subspace (DFS) window, and their curve-detected counterparts.

use serde::{Deserialize, Serialize};

use crate::error::{CavresError, Result};
use crate::quantinfo::{classical_correlation_at, MeasurementDirection};
use crate::statedyn::{cavity_state, reservoir_state, SystemParams, TwoQubitXState};

/// Default max-norm tolerance for DFS window detection.
pub const DFS_EPS: f64 = 1e-2;
/// Bisection stops when the bracket is narrower than this (in units of 1/gamma).
pub const CROSSING_TOL_GAMMA: f64 = 1e-9;

/// Closed-form and curve-detected characteristic times for one parameter set.
/// Absent fields are physical regimes without the corresponding feature, not
/// errors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransitionReport {
    pub t_c_analytic: Option<f64>,
    pub t_r_analytic: Option<f64>,
    pub dfs_duration_analytic: Option<f64>,
    pub t_c_detected: Option<f64>,
    pub t_r_detected: Option<f64>,
    pub dfs_window_detected: Option<(f64, f64)>,
    pub complementarity_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn coherence_magnitude(params: &SystemParams) -> Result<f64> {
    let k = params.coherence_weight().abs();
    if k == 0.0 {
        return Err(CavresError::Domain(
            "p = 1/2: coherences vanish and the transition time is undefined".into(),
        ));
    }
    Ok(k)
}

/// Sudden transition time in the cavity partition:
/// t_c = -(1/gamma) ln[1 + ln|2p - 1| / (4 nbar)].
/// Absent when the bracket is non-positive (no transition for weak fields).
pub fn sudden_transition_time_cavities(params: &SystemParams) -> Result<Option<f64>> {
    let k = coherence_magnitude(params)?;
    let bracket = 1.0 + k.ln() / (4.0 * params.nbar);
    if bracket <= 0.0 {
        return Ok(None);
    }
    Ok(Some(-bracket.ln() / params.gamma))
}

/// Sudden transition time in the reservoir partition:
/// t_r = -(1/gamma) ln[ln(1/|2p - 1|) / (4 nbar)].
/// Absent under exactly the same parameter condition as t_c; tends to
/// infinity as p -> 1.
pub fn sudden_transition_time_reservoirs(params: &SystemParams) -> Result<Option<f64>> {
    let k = coherence_magnitude(params)?;
    let arg = -k.ln() / (4.0 * params.nbar);
    if arg > 1.0 {
        return Ok(None);
    }
    if arg == 0.0 {
        // p = 1 limit: the transition never happens
        return Ok(Some(f64::INFINITY));
    }
    Ok(Some(-arg.ln() / params.gamma))
}

/// Estimated DFS lifetime (1/gamma) ln(nbar - 1); absent for nbar <= 2 where
/// no window is resolvable.
pub fn dfs_duration(params: &SystemParams) -> Option<f64> {
    if params.nbar > 2.0 {
        Some((params.nbar - 1.0).ln() / params.gamma)
    } else {
        None
    }
}

/// Maximal contiguous interval of the trajectory whose max-norm distance to
/// the DFS fixed point stays below `eps`.
pub fn detect_dfs_window(
    trajectory: &[(f64, TwoQubitXState)],
    params: &SystemParams,
    eps: f64,
) -> Result<Option<(f64, f64)>> {
    if trajectory.is_empty() {
        return Err(CavresError::Domain("empty trajectory".into()));
    }
    if !(eps > 0.0) {
        return Err(CavresError::Domain(format!("eps must be > 0, got {eps}")));
    }
    let fixed = TwoQubitXState::dfs_fixed_point(params);
    let mut best: Option<(f64, f64)> = None;
    let mut current: Option<(f64, f64)> = None;
    for &(t, ref state) in trajectory {
        if state.max_norm_distance(&fixed) < eps {
            current = match current {
                Some((start, _)) => Some((start, t)),
                None => Some((t, t)),
            };
        } else {
            if let Some(window) = current.take() {
                if best.is_none_or(|(a, b)| window.1 - window.0 > b - a) {
                    best = Some(window);
                }
            }
        }
    }
    if let Some(window) = current {
        if best.is_none_or(|(a, b)| window.1 - window.0 > b - a) {
            best = Some(window);
        }
    }
    Ok(best)
}

/// Locate the root of C^X(t) - C^Z(t) by grid sign change plus bisection on
/// the continuous-time evaluator `branch_gap` (which must return
/// C^X(t) - C^Z(t)). Absent if the curve never changes sign.
pub fn detect_branch_crossing<F>(
    curve: &[(f64, f64, f64)],
    branch_gap: F,
    tol: f64,
) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    if curve.len() < 2 {
        return None;
    }
    let sign = |c_z: f64, c_x: f64| (c_x - c_z).signum();
    let mut bracket = None;
    for pair in curve.windows(2) {
        let (t0, z0, x0) = pair[0];
        let (t1, z1, x1) = pair[1];
        let s0 = sign(z0, x0);
        let s1 = sign(z1, x1);
        if s0 != 0.0 && s1 != 0.0 && s0 != s1 {
            bracket = Some((t0, t1));
            break;
        }
    }
    let (mut lo, mut hi) = bracket?;
    let f_lo = branch_gap(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = branch_gap(mid);
        if f_lo * f_mid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Which reduced state a trajectory or curve refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Cavities,
    Reservoirs,
}

impl Partition {
    pub fn state(&self, params: &SystemParams, t: f64) -> Result<TwoQubitXState> {
        match self {
            Partition::Cavities => cavity_state(params, t),
            Partition::Reservoirs => reservoir_state(params, t),
        }
    }
}

/// C^X(t) - C^Z(t) for one partition, for crossing refinement.
pub fn branch_gap(params: &SystemParams, partition: Partition, t: f64) -> Result<f64> {
    let rho = partition.state(params, t)?;
    let c_z = classical_correlation_at(&rho, &MeasurementDirection::SIGMA_Z)?;
    let c_x = classical_correlation_at(&rho, &MeasurementDirection::SIGMA_X)?;
    Ok(c_x - c_z)
}

/// Branch curve (t, C^Z, C^X) on a time grid.
pub fn branch_curve(
    params: &SystemParams,
    partition: Partition,
    grid: &[f64],
) -> Result<Vec<(f64, f64, f64)>> {
    grid.iter()
        .map(|&t| {
            let rho = partition.state(params, t)?;
            let c_z = classical_correlation_at(&rho, &MeasurementDirection::SIGMA_Z)?;
            let c_x = classical_correlation_at(&rho, &MeasurementDirection::SIGMA_X)?;
            Ok((t, c_z, c_x))
        })
        .collect()
}

/// Detect the branch crossing for one partition on the given grid, refined by
/// bisection on the analytic evaluator.
pub fn detect_crossing_for(
    params: &SystemParams,
    partition: Partition,
    grid: &[f64],
) -> Result<Option<f64>> {
    let curve = branch_curve(params, partition, grid)?;
    let gap = |t: f64| branch_gap(params, partition, t).unwrap_or(f64::NAN);
    Ok(detect_branch_crossing(
        &curve,
        gap,
        CROSSING_TOL_GAMMA / params.gamma,
    ))
}

/// Log-dense time grid from 1e-6/gamma to `t_max`, with t = 0 prepended.
/// t_c scales like 1/(4 nbar gamma), so a linear grid misses it for large
/// fields.
pub fn log_dense_grid(gamma: f64, t_max: f64, n_points: usize) -> Vec<f64> {
    let mut grid = Vec::with_capacity(n_points);
    grid.push(0.0);
    let t_min = 1e-6 / gamma;
    let n = n_points.saturating_sub(1).max(2);
    let ratio = (t_max / t_min).ln();
    for i in 0..n {
        grid.push(t_min * (ratio * i as f64 / (n - 1) as f64).exp());
    }
    grid
}

/// Compute the full report: closed forms, curve-detected crossings for both
/// partitions, the detected cavity DFS window, and the complementarity
/// residual |e^(-gamma t_c) + e^(-gamma t_r) - 1|.
pub fn transition_report(params: &SystemParams, grid_points: usize) -> Result<TransitionReport> {
    let degenerate = params.coherence_weight() == 0.0;
    let (t_c_analytic, t_r_analytic, note) = if degenerate {
        (
            None,
            None,
            Some("p = 1/2: coherences vanish for all t, so no sudden transition exists".into()),
        )
    } else {
        (
            sudden_transition_time_cavities(params)?,
            sudden_transition_time_reservoirs(params)?,
            None,
        )
    };

    let t_max = 15.0 / params.gamma;
    let grid = log_dense_grid(params.gamma, t_max, grid_points);

    let (t_c_detected, t_r_detected) = if degenerate {
        (None, None)
    } else {
        (
            detect_crossing_for(params, Partition::Cavities, &grid)?,
            detect_crossing_for(params, Partition::Reservoirs, &grid)?,
        )
    };

    let trajectory: Vec<(f64, TwoQubitXState)> = grid
        .iter()
        .map(|&t| Ok((t, cavity_state(params, t)?)))
        .collect::<Result<_>>()?;
    let dfs_window_detected = detect_dfs_window(&trajectory, params, DFS_EPS)?;

    let complementarity_residual = match (t_c_analytic, t_r_analytic) {
        (Some(tc), Some(tr)) => {
            Some(((-params.gamma * tc).exp() + (-params.gamma * tr).exp() - 1.0).abs())
        }
        _ => None,
    };

    Ok(TransitionReport {
        t_c_analytic,
        t_r_analytic,
        dfs_duration_analytic: dfs_duration(params),
        t_c_detected,
        t_r_detected,
        dfs_window_detected,
        complementarity_residual,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(nbar: f64, p: f64, gamma: f64) -> SystemParams {
        SystemParams::new(nbar, p, gamma).unwrap()
    }

    #[test]
    fn cavity_transition_time_formula() {
        let pr = params(100.0, 0.2, 1.0);
        let tc = sudden_transition_time_cavities(&pr).unwrap().unwrap();
        assert!((tc - 0.0012778802).abs() < 1e-9, "tc = {tc}");
    }

    #[test]
    fn cavity_transition_vanishes_as_p_to_one() {
        let pr = params(10.0, 1.0 - 1e-12, 1.0);
        let tc = sudden_transition_time_cavities(&pr).unwrap().unwrap();
        assert!(tc > 0.0 && tc < 1e-10);
    }

    #[test]
    fn weak_field_has_no_transition() {
        // 4 nbar = 0.4 < -ln 0.6 ~ 0.511
        let pr = params(0.1, 0.2, 1.0);
        assert!(sudden_transition_time_cavities(&pr).unwrap().is_none());
        assert!(sudden_transition_time_reservoirs(&pr).unwrap().is_none());
    }

    #[test]
    fn reservoir_transition_time_formula() {
        let pr = params(100.0, 0.2, 1.0);
        let tr = sudden_transition_time_reservoirs(&pr).unwrap().unwrap();
        assert!((tr - 6.6631915392).abs() < 1e-8, "tr = {tr}");
    }

    #[test]
    fn reservoir_transition_diverges_at_p_one() {
        let pr = params(10.0, 1.0, 1.0);
        assert_eq!(
            sudden_transition_time_reservoirs(&pr).unwrap(),
            Some(f64::INFINITY)
        );
    }

    #[test]
    fn transition_times_reject_balanced_mixture() {
        let pr = params(10.0, 0.5, 1.0);
        assert!(sudden_transition_time_cavities(&pr).is_err());
        assert!(sudden_transition_time_reservoirs(&pr).is_err());
    }

    #[test]
    fn complementarity_identity() {
        for (nbar, p) in [(100.0, 0.2), (5.0, 0.1), (37.0, 0.35), (2.0, 0.4)] {
            let pr = params(nbar, p, 1.3);
            let tc = sudden_transition_time_cavities(&pr).unwrap().unwrap();
            let tr = sudden_transition_time_reservoirs(&pr).unwrap().unwrap();
            let residual = ((-pr.gamma * tc).exp() + (-pr.gamma * tr).exp() - 1.0).abs();
            assert!(residual < 1e-12, "nbar={nbar} p={p}: residual {residual:e}");
        }
    }

    #[test]
    fn dfs_duration_values() {
        assert!((dfs_duration(&params(100.0, 0.2, 1.0)).unwrap() - 99f64.ln()).abs() < 1e-15);
        assert_eq!(dfs_duration(&params(2.0, 0.2, 1.0)), None);
        assert_eq!(dfs_duration(&params(1.0, 0.2, 1.0)), None);
        // gamma scaling
        assert!(
            (dfs_duration(&params(100.0, 0.2, 2.0)).unwrap() - 99f64.ln() / 2.0).abs() < 1e-15
        );
    }

    #[test]
    fn dfs_window_detected_for_large_field() {
        let pr = params(100.0, 0.2, 1.0);
        let grid: Vec<f64> = (0..2000).map(|i| 15.0 * i as f64 / 1999.0).collect();
        let traj: Vec<_> = grid
            .iter()
            .map(|&t| (t, cavity_state(&pr, t).unwrap()))
            .collect();
        let (start, end) = detect_dfs_window(&traj, &pr, DFS_EPS).unwrap().unwrap();
        let duration = end - start;
        let expected = 99f64.ln();
        assert!(
            (duration - expected).abs() < 0.25 * expected,
            "duration {duration} vs {expected}"
        );
    }

    #[test]
    fn no_dfs_window_for_single_photon() {
        let pr = params(1.0, 0.2, 1.0);
        let traj: Vec<_> = (0..2000)
            .map(|i| {
                let t = 15.0 * i as f64 / 1999.0;
                (t, cavity_state(&pr, t).unwrap())
            })
            .collect();
        assert!(detect_dfs_window(&traj, &pr, DFS_EPS).unwrap().is_none());
    }

    #[test]
    fn dfs_detection_rejects_empty_trajectory() {
        let pr = params(100.0, 0.2, 1.0);
        assert!(detect_dfs_window(&[], &pr, DFS_EPS).is_err());
    }

    #[test]
    fn detected_crossings_match_closed_forms() {
        let pr = params(100.0, 0.2, 1.0);
        let grid = log_dense_grid(pr.gamma, 15.0, 1000);
        let tc = detect_crossing_for(&pr, Partition::Cavities, &grid)
            .unwrap()
            .unwrap();
        let tr = detect_crossing_for(&pr, Partition::Reservoirs, &grid)
            .unwrap()
            .unwrap();
        let tc_formula = sudden_transition_time_cavities(&pr).unwrap().unwrap();
        let tr_formula = sudden_transition_time_reservoirs(&pr).unwrap().unwrap();
        assert!((tc - tc_formula).abs() < 1e-6, "tc {tc} vs {tc_formula}");
        assert!((tr - tr_formula).abs() < 1e-6, "tr {tr} vs {tr_formula}");
    }

    #[test]
    fn constant_branch_curve_has_no_crossing() {
        let curve = vec![(0.0, 0.5, 0.2), (1.0, 0.4, 0.1), (2.0, 0.3, 0.05)];
        assert_eq!(detect_branch_crossing(&curve, |_| -1.0, 1e-9), None);
    }

    #[test]
    fn monotonicity_in_nbar() {
        let mut prev_tc = f64::INFINITY;
        let mut prev_tr = 0.0;
        for nbar in [2.0, 5.0, 10.0, 50.0, 100.0, 200.0] {
            let pr = params(nbar, 0.2, 1.0);
            let tc = sudden_transition_time_cavities(&pr).unwrap().unwrap();
            let tr = sudden_transition_time_reservoirs(&pr).unwrap().unwrap();
            assert!(tc < prev_tc, "t_c not decreasing at nbar={nbar}");
            assert!(tr > prev_tr, "t_r not increasing at nbar={nbar}");
            prev_tc = tc;
            prev_tr = tr;
        }
    }

    #[test]
    fn full_report_for_paper_parameters() {
        let pr = params(100.0, 0.2, 1.0);
        let report = transition_report(&pr, 1000).unwrap();
        assert!((report.t_c_analytic.unwrap() - 0.0012778802).abs() < 1e-9);
        assert!((report.t_r_analytic.unwrap() - 6.6631915392).abs() < 1e-8);
        assert!(report.complementarity_residual.unwrap() < 1e-12);
        assert!(report.dfs_window_detected.is_some());
        assert!(report.note.is_none());
    }

    #[test]
    fn balanced_mixture_report_has_note() {
        let pr = params(100.0, 0.5, 1.0);
        let report = transition_report(&pr, 500).unwrap();
        assert!(report.t_c_analytic.is_none());
        assert!(report.t_c_detected.is_none());
        assert!(report.note.is_some());
    }
}
