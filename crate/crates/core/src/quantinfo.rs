//! Entropic correlation measures for two-qubit X states: von Neumann entropy,
//! quantum mutual information, classical correlations (analytic two-branch
//! form and a brute-force projective-measurement sweep), and quantum discord.
//!
//! All logarithms are base 2; every quantity is in bits.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CavresError, Result};
use crate::statedyn::TwoQubitXState;

/// Eigenvalues in [-EIG_CLAMP, 0] are treated as exact zeros; anything more
/// negative is a hard error rather than roundoff.
pub const EIG_CLAMP: f64 = 1e-12;
/// Zero floor applied to mutual information and discord.
pub const ZERO_FLOOR: f64 = 1e-10;
/// Measurement outcomes below this probability carry no conditional state.
pub const PROB_FLOOR: f64 = 1e-14;
/// Two branch values closer than this are reported as a tie.
pub const BRANCH_TIE_EPS: f64 = 1e-12;

/// Bloch-sphere direction defining the projector pair (I +/- n.sigma)/2.
/// theta = 0 is the sigma_z measurement; theta = pi/2, phi = 0 is sigma_x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementDirection {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementDirection {
    pub const SIGMA_Z: Self = Self { theta: 0.0, phi: 0.0 };
    pub const SIGMA_X: Self = Self { theta: FRAC_PI_2, phi: 0.0 };
}

/// Which projective branch attains the classical-correlation maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Z,
    X,
    Ambiguous,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Z => write!(f, "Z"),
            Branch::X => write!(f, "X"),
            Branch::Ambiguous => write!(f, "ambiguous"),
        }
    }
}

/// Correlations of one partition at one time: I = C + D by construction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CorrelationRecord {
    pub t: f64,
    pub mutual_info: f64,
    pub classical: f64,
    pub discord: f64,
    pub branch: Branch,
}

/// Single-qubit density matrix with real diagonal and complex off-diagonal.
#[derive(Debug, Clone, Copy)]
pub struct QubitState {
    pub m00: f64,
    pub m11: f64,
    pub off_re: f64,
    pub off_im: f64,
}

impl QubitState {
    pub fn diagonal(m00: f64, m11: f64) -> Self {
        Self { m00, m11, off_re: 0.0, off_im: 0.0 }
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let mean = 0.5 * (self.m00 + self.m11);
        let half_gap = 0.5 * (self.m00 - self.m11);
        let r = (half_gap * half_gap + self.off_re * self.off_re + self.off_im * self.off_im)
            .sqrt();
        [mean + r, mean - r]
    }

    pub fn entropy(&self) -> Result<f64> {
        entropy(&self.eigenvalues())
    }
}

/// Shannon entropy of a spectrum, -sum lambda log2 lambda, with 0 log 0 = 0.
pub fn entropy(eigenvalues: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    let mut h = 0.0;
    for &lam in eigenvalues {
        if lam < -EIG_CLAMP {
            return Err(CavresError::Domain(format!(
                "eigenvalue {lam:e} below the -{EIG_CLAMP:e} clamp"
            )));
        }
        let lam = lam.max(0.0);
        sum += lam;
        if lam > 0.0 {
            h -= lam * lam.log2();
        }
    }
    if (sum - 1.0).abs() > 1e-10 {
        return Err(CavresError::Domain(format!(
            "eigenvalues sum to {sum}, not 1"
        )));
    }
    Ok(h)
}

/// Closed-form spectrum of an X matrix: each 2x2 block diagonalized directly.
/// Outer block (d11, d44, o14) first, then inner (d22, d33, o23).
pub fn xstate_eigenvalues(rho: &TwoQubitXState) -> [f64; 4] {
    let block = |a: f64, b: f64, o: f64| {
        let mean = 0.5 * (a + b);
        let r = (0.25 * (a - b) * (a - b) + o * o).sqrt();
        (mean + r, mean - r)
    };
    let (l1, l2) = block(rho.d11, rho.d44, rho.o14);
    let (l3, l4) = block(rho.d22, rho.d33, rho.o23);
    [l1, l2, l3, l4]
}

/// Partial traces. For an X state both marginals are diagonal:
/// rho_a = diag(d11 + d22, d33 + d44), rho_b = diag(d11 + d33, d22 + d44).
pub fn marginals(rho: &TwoQubitXState) -> (QubitState, QubitState) {
    (
        QubitState::diagonal(rho.d11 + rho.d22, rho.d33 + rho.d44),
        QubitState::diagonal(rho.d11 + rho.d33, rho.d22 + rho.d44),
    )
}

/// I = S(rho_a) + S(rho_b) - S(rho_ab), tiny negatives clamped to zero.
pub fn mutual_information(rho: &TwoQubitXState) -> Result<f64> {
    let (a, b) = marginals(rho);
    let joint = entropy(&xstate_eigenvalues(rho))?;
    let i = a.entropy()? + b.entropy()? - joint;
    if i < -ZERO_FLOOR {
        return Err(CavresError::Validation(format!(
            "mutual information {i:e} below the zero floor"
        )));
    }
    Ok(i.max(0.0))
}

/// Result of projecting subsystem b onto one eigenstate of n.sigma.
/// `conditional` is None when the outcome probability is below
/// [`PROB_FLOOR`]; consumers must skip such branches.
#[derive(Debug, Clone, Copy)]
pub struct MeasurementOutcome {
    pub probability: f64,
    pub conditional: Option<QubitState>,
}

/// Apply the projector pair (I +/- n.sigma)/2 on subsystem b and return the
/// outcome probabilities with the conditional states of subsystem a.
pub fn measure_and_condition(
    rho: &TwoQubitXState,
    dir: &MeasurementDirection,
) -> [MeasurementOutcome; 2] {
    // Eigenvectors of n.sigma: (c, e^{i phi} s) and (s, -e^{i phi} c).
    let (s, c) = (0.5 * dir.theta).sin_cos();
    let (sin_phi, cos_phi) = dir.phi.sin_cos();

    let outcome = |w0_sq: f64, w1_sq: f64, cross: f64| {
        // cross = Re/Im weight of conj(v0) v1; off-diagonal of the unnormalized
        // conditional is cross * (e^{i phi} o14 + e^{-i phi} o23).
        let m00 = w0_sq * rho.d11 + w1_sq * rho.d22;
        let m11 = w0_sq * rho.d33 + w1_sq * rho.d44;
        let off_re = cross * cos_phi * (rho.o14 + rho.o23);
        let off_im = cross * sin_phi * (rho.o14 - rho.o23);
        let p = m00 + m11;
        if p < PROB_FLOOR {
            MeasurementOutcome { probability: 0.0, conditional: None }
        } else {
            MeasurementOutcome {
                probability: p,
                conditional: Some(QubitState {
                    m00: m00 / p,
                    m11: m11 / p,
                    off_re: off_re / p,
                    off_im: off_im / p,
                }),
            }
        }
    };

    [
        outcome(c * c, s * s, s * c),
        outcome(s * s, c * c, -s * c),
    ]
}

/// Average post-measurement entropy sum_k p_k S(rho_{a|k}).
pub fn conditional_entropy(rho: &TwoQubitXState, dir: &MeasurementDirection) -> Result<f64> {
    let mut s = 0.0;
    for outcome in measure_and_condition(rho, dir) {
        if let Some(cond) = outcome.conditional {
            s += outcome.probability * cond.entropy()?;
        }
    }
    Ok(s)
}

/// Information gained about subsystem a by measuring b along `dir`.
pub fn classical_correlation_at(rho: &TwoQubitXState, dir: &MeasurementDirection) -> Result<f64> {
    let (a, _) = marginals(rho);
    Ok(a.entropy()? - conditional_entropy(rho, dir)?)
}

/// Classical correlations as the larger of the sigma_z and sigma_x branches.
/// Both branches are evaluated outright; the printed optimality inequalities
/// serve as cross-checks only, since both can hold near a transition.
pub fn classical_correlation_analytic(rho: &TwoQubitXState) -> Result<(f64, Branch)> {
    let c_z = classical_correlation_at(rho, &MeasurementDirection::SIGMA_Z)?;
    let c_x = classical_correlation_at(rho, &MeasurementDirection::SIGMA_X)?;
    if (c_z - c_x).abs() <= BRANCH_TIE_EPS {
        Ok((c_z.max(c_x), Branch::Ambiguous))
    } else if c_z > c_x {
        Ok((c_z, Branch::Z))
    } else {
        Ok((c_x, Branch::X))
    }
}

/// Maximize S(rho_a) - sum_k p_k S(rho_{a|k}) over all projective
/// measurement directions by coarse grid scan plus neighborhood-shrinking
/// refinement. Deterministic; searches the half sphere theta in [0, pi/2],
/// phi in [0, pi) since antipodal directions give the same projector pair.
pub fn classical_correlation_bruteforce(
    rho: &TwoQubitXState,
    coarse_grid: usize,
    refinement_iters: usize,
) -> Result<(f64, MeasurementDirection)> {
    if coarse_grid < 32 {
        return Err(CavresError::Domain(format!(
            "coarse_grid must be >= 32, got {coarse_grid}"
        )));
    }
    let (a, _) = marginals(rho);
    let s_a = a.entropy()?;
    let objective = |theta: f64, phi: f64| -> Result<f64> {
        Ok(s_a - conditional_entropy(rho, &MeasurementDirection { theta, phi })?)
    };

    let mut best = f64::NEG_INFINITY;
    let mut best_dir = MeasurementDirection::SIGMA_Z;
    for i in 0..coarse_grid {
        let theta = FRAC_PI_2 * i as f64 / (coarse_grid - 1) as f64;
        for j in 0..coarse_grid {
            let phi = PI * j as f64 / coarse_grid as f64;
            let v = objective(theta, phi)?;
            if v > best {
                best = v;
                best_dir = MeasurementDirection { theta, phi };
            }
        }
    }

    // Shrink a 5x5 neighborhood around the running optimum. Twenty halvings
    // of the coarse spacing end below 1e-7 rad.
    let iters = refinement_iters.max(20);
    let mut half_width = FRAC_PI_2 / (coarse_grid - 1) as f64;
    for _ in 0..iters {
        let center = best_dir;
        for di in -2i32..=2 {
            for dj in -2i32..=2 {
                let theta =
                    (center.theta + di as f64 * half_width / 2.0).clamp(0.0, FRAC_PI_2);
                let phi = (center.phi + dj as f64 * half_width / 2.0).rem_euclid(PI);
                let v = objective(theta, phi)?;
                if v > best {
                    best = v;
                    best_dir = MeasurementDirection { theta, phi };
                }
            }
        }
        half_width *= 0.5;
    }
    Ok((best, best_dir))
}

/// D = I - C, clamped at zero from below.
pub fn discord(rho: &TwoQubitXState) -> Result<f64> {
    let i = mutual_information(rho)?;
    let (c, _) = classical_correlation_analytic(rho)?;
    Ok((i - c).max(0.0))
}

/// Assemble the full correlation record for one state at time `t`.
pub fn correlation_record(t: f64, rho: &TwoQubitXState) -> Result<CorrelationRecord> {
    let mutual_info = mutual_information(rho)?;
    let (classical, branch) = classical_correlation_analytic(rho)?;
    let discord = (mutual_info - classical).max(0.0);
    Ok(CorrelationRecord { t, mutual_info, classical, discord, branch })
}

/// Binary entropy H2(p) in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy(&[p, 1.0 - p]).expect("p must be a probability")
}
