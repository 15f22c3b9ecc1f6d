//! Closed-form reduced density matrices for the dissipative dynamics of two
//! entangled-coherent-state cavity modes coupled to independent vacuum
//! reservoirs.
//!
//! In the time-dependent cat basis every party is an effective qubit, and both
//! two-qubit reduced states (cavities and reservoirs) are X-structured with
//! real coherences. The reservoir state is the cavity state with the two
//! amplitudes swapped.

use serde::{Deserialize, Serialize};

use crate::error::{CavresError, Result};

/// Tolerance for trace and block-positivity checks. The matrix elements are
/// closed-form, so violations beyond this are implementation bugs.
pub const STRUCTURAL_EPS: f64 = 1e-12;

/// Cancellation-safe 1 - e^(-x) for x >= 0.
#[inline]
pub fn one_minus_exp(x: f64) -> f64 {
    -f64::exp_m1(-x)
}

/// Physical scenario: mean photon number, mixing probability, decay rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Mean photon number n = |alpha|^2 per mode, > 0.
    pub nbar: f64,
    /// Mixing probability of the even-parity entangled component, in [0, 1].
    pub p: f64,
    /// Decay rate, > 0 (inverse time).
    pub gamma: f64,
}

impl SystemParams {
    pub fn new(nbar: f64, p: f64, gamma: f64) -> Result<Self> {
        if !(nbar > 0.0) || !nbar.is_finite() {
            return Err(CavresError::Domain(format!("nbar must be > 0, got {nbar}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(CavresError::Domain(format!("p must be in [0, 1], got {p}")));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(CavresError::Domain(format!("gamma must be > 0, got {gamma}")));
        }
        Ok(Self { nbar, p, gamma })
    }

    /// Coherence weight 2p - 1 entering the anti-diagonal elements.
    #[inline]
    pub fn coherence_weight(&self) -> f64 {
        2.0 * self.p - 1.0
    }
}

/// Squared cavity and collective-reservoir amplitudes at one instant.
/// Their sum is always nbar: photons lost by the cavity live in the reservoir.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudePair {
    pub alpha_t_sq: f64,
    pub abar_t_sq: f64,
}

/// Overlap factors of the cat-basis construction, all evaluated from the
/// squared amplitude directly:
/// g_pm^2(x) = 2(1 +/- e^(-2 x^2)), f_pm^2(x) = 2(1 +/- e^(-4 x^2)).
#[derive(Debug, Clone, Copy)]
pub struct OverlapFactors {
    pub g_plus_sq: f64,
    pub g_minus_sq: f64,
    pub f_plus_sq: f64,
    pub f_minus_sq: f64,
}

/// Evaluate the cat-state overlap factors at squared amplitude `x_sq`.
///
/// The "1 - exp" branches go through [`one_minus_exp`] so that small
/// amplitudes (early-time reservoirs) keep full relative accuracy.
pub fn overlap_factors(x_sq: f64) -> Result<OverlapFactors> {
    if !(x_sq >= 0.0) {
        return Err(CavresError::Domain(format!(
            "squared amplitude must be >= 0, got {x_sq}"
        )));
    }
    Ok(OverlapFactors {
        g_plus_sq: 2.0 * (1.0 + (-2.0 * x_sq).exp()),
        g_minus_sq: 2.0 * one_minus_exp(2.0 * x_sq),
        f_plus_sq: 2.0 * (1.0 + (-4.0 * x_sq).exp()),
        f_minus_sq: 2.0 * one_minus_exp(4.0 * x_sq),
    })
}

/// Amplitude decay law: alpha_t^2 = nbar e^(-gamma t),
/// abar_t^2 = nbar (1 - e^(-gamma t)).
pub fn amplitudes_at(params: &SystemParams, t: f64) -> Result<AmplitudePair> {
    if !(t >= 0.0) {
        return Err(CavresError::Domain(format!("time must be >= 0, got {t}")));
    }
    let decay = (-params.gamma * t).exp();
    Ok(AmplitudePair {
        alpha_t_sq: params.nbar * decay,
        abar_t_sq: params.nbar * one_minus_exp(params.gamma * t),
    })
}

/// Two-qubit X-state density matrix in the ordered cat basis
/// {|++>, |+->, |-+>, |-->}, with real symmetric storage.
///
/// Only the diagonal and the two anti-diagonal coherences (1,4) and (2,3)
/// are nonzero; Hermiticity is structural.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitXState {
    pub d11: f64,
    pub d22: f64,
    pub d33: f64,
    pub d44: f64,
    pub o14: f64,
    pub o23: f64,
}

impl TwoQubitXState {
    /// Construct with structural validation: unit trace and positivity of
    /// both 2x2 blocks within [`STRUCTURAL_EPS`].
    pub fn new(d11: f64, d22: f64, d33: f64, d44: f64, o14: f64, o23: f64) -> Result<Self> {
        let state = Self { d11, d22, d33, d44, o14, o23 };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        let trace = self.d11 + self.d22 + self.d33 + self.d44;
        if (trace - 1.0).abs() > STRUCTURAL_EPS {
            return Err(CavresError::Validation(format!(
                "trace = {trace}, deviates from 1 by {:e}",
                (trace - 1.0).abs()
            )));
        }
        for d in [self.d11, self.d22, self.d33, self.d44] {
            if d < -STRUCTURAL_EPS {
                return Err(CavresError::Validation(format!("negative population {d}")));
            }
        }
        if self.d11 * self.d44 < self.o14 * self.o14 - STRUCTURAL_EPS {
            return Err(CavresError::Validation(format!(
                "outer block not positive: d11*d44 = {:e} < o14^2 = {:e}",
                self.d11 * self.d44,
                self.o14 * self.o14
            )));
        }
        if self.d22 * self.d33 < self.o23 * self.o23 - STRUCTURAL_EPS {
            return Err(CavresError::Validation(format!(
                "inner block not positive: d22*d33 = {:e} < o23^2 = {:e}",
                self.d22 * self.d33,
                self.o23 * self.o23
            )));
        }
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        self.d11 + self.d22 + self.d33 + self.d44
    }

    /// Elementwise max-norm distance over the six stored elements.
    pub fn max_norm_distance(&self, other: &Self) -> f64 {
        [
            self.d11 - other.d11,
            self.d22 - other.d22,
            self.d33 - other.d33,
            self.d44 - other.d44,
            self.o14 - other.o14,
            self.o23 - other.o23,
        ]
        .iter()
        .fold(0.0, |m, x| m.max(x.abs()))
    }

    /// The metastable fixed point: all populations 1/4, both coherences
    /// (2p - 1)/4.
    pub fn dfs_fixed_point(params: &SystemParams) -> Self {
        let o = params.coherence_weight() / 4.0;
        Self { d11: 0.25, d22: 0.25, d33: 0.25, d44: 0.25, o14: o, o23: o }
    }

    /// Dense 4x4 representation, for comparisons against generic solvers.
    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        m[0][0] = self.d11;
        m[1][1] = self.d22;
        m[2][2] = self.d33;
        m[3][3] = self.d44;
        m[0][3] = self.o14;
        m[3][0] = self.o14;
        m[1][2] = self.o23;
        m[2][1] = self.o23;
        m
    }
}

/// Shared element construction for both partitions. `first_sq` plays the
/// cavity amplitude's role and `second_sq` the reservoir's; the reservoir
/// state is obtained by swapping them. The prefactor 1/(16 f_+^2) is always
/// evaluated at nbar, which keeps the trace at exactly one.
fn x_state_from_amplitudes(
    params: &SystemParams,
    first_sq: f64,
    second_sq: f64,
) -> Result<TwoQubitXState> {
    let k = params.coherence_weight();
    let g = overlap_factors(first_sq)?;
    let f = overlap_factors(second_sq)?;
    let norm = overlap_factors(params.nbar)?;
    let pref = 1.0 / (16.0 * norm.f_plus_sq);

    let cross = g.g_plus_sq * g.g_minus_sq;
    TwoQubitXState::new(
        pref * g.g_plus_sq * g.g_plus_sq * f.f_plus_sq,
        pref * cross * f.f_minus_sq,
        pref * cross * f.f_minus_sq,
        pref * g.g_minus_sq * g.g_minus_sq * f.f_plus_sq,
        pref * k * cross * f.f_plus_sq,
        pref * k * cross * f.f_minus_sq,
    )
}

/// Reduced density matrix of the cavity pair at time `t`.
pub fn cavity_state(params: &SystemParams, t: f64) -> Result<TwoQubitXState> {
    let amps = amplitudes_at(params, t)?;
    x_state_from_amplitudes(params, amps.alpha_t_sq, amps.abar_t_sq)
}

/// Reduced density matrix of the reservoir pair at time `t`: identical
/// construction with the two squared amplitudes exchanged.
pub fn reservoir_state(params: &SystemParams, t: f64) -> Result<TwoQubitXState> {
    let amps = amplitudes_at(params, t)?;
    x_state_from_amplitudes(params, amps.abar_t_sq, amps.alpha_t_sq)
}
