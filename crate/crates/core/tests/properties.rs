//! Property tests over randomized parameters and times.

use proptest::prelude::*;

use cavres::quantinfo::{
    classical_correlation_analytic, classical_correlation_bruteforce, correlation_record,
    entropy, xstate_eigenvalues,
};
use cavres::statedyn::{
    amplitudes_at, cavity_state, one_minus_exp, reservoir_state, SystemParams, TwoQubitXState,
};
use cavres::transitions::{
    sudden_transition_time_cavities, sudden_transition_time_reservoirs,
};

fn params_strategy() -> impl Strategy<Value = SystemParams> {
    (0.1f64..200.0, 0.0f64..=1.0, 0.1f64..10.0)
        .prop_map(|(nbar, p, gamma)| SystemParams::new(nbar, p, gamma).unwrap())
}

fn generic_eigenvalues(rho: &TwoQubitXState) -> [f64; 4] {
    let m = rho.to_matrix();
    let mat = nalgebra::Matrix4::from_fn(|i, j| m[i][j]);
    let eigs = mat.symmetric_eigenvalues();
    let mut out = [eigs[0], eigs[1], eigs[2], eigs[3]];
    out.sort_by(f64::total_cmp);
    out
}

/// Random normalized X states, not necessarily from the model.
fn xstate_strategy() -> impl Strategy<Value = TwoQubitXState> {
    (
        0.01f64..1.0,
        0.01f64..1.0,
        0.01f64..1.0,
        0.01f64..1.0,
        -1.0f64..1.0,
        -1.0f64..1.0,
    )
        .prop_map(|(a, b, c, d, u, v)| {
            let norm = a + b + c + d;
            let (d11, d22, d33, d44) = (a / norm, b / norm, c / norm, d / norm);
            // scale coherences inside the positivity disks
            let o14 = u * (d11 * d44).sqrt() * 0.999;
            let o23 = v * (d22 * d33).sqrt() * 0.999;
            TwoQubitXState::new(d11, d22, d33, d44, o14, o23).unwrap()
        })
}

proptest! {
    #[test]
    fn photon_number_is_conserved(params in params_strategy(), gt in 0.0f64..20.0) {
        let t = gt / params.gamma;
        let amps = amplitudes_at(&params, t).unwrap();
        prop_assert!((amps.alpha_t_sq + amps.abar_t_sq - params.nbar).abs()
            <= 4.0 * f64::EPSILON * params.nbar);
    }

    #[test]
    fn states_are_structurally_valid(params in params_strategy(), gt in 0.0f64..20.0) {
        let t = gt / params.gamma;
        for rho in [cavity_state(&params, t).unwrap(), reservoir_state(&params, t).unwrap()] {
            prop_assert!(rho.validate().is_ok());
            prop_assert_eq!(rho.d22, rho.d33);
            let k = params.coherence_weight();
            prop_assert!(rho.o14 * k >= 0.0);
            prop_assert!(rho.o23 * k >= 0.0);
        }
    }

    #[test]
    fn mirror_time_identity(params in params_strategy(), gt in 1e-6f64..20.0) {
        let t = gt / params.gamma;
        let t_mirror = -one_minus_exp(params.gamma * t).ln() / params.gamma;
        let res = reservoir_state(&params, t).unwrap();
        let cav = cavity_state(&params, t_mirror).unwrap();
        prop_assert!(res.max_norm_distance(&cav) < 1e-12);
    }

    #[test]
    fn closed_form_spectrum_matches_generic(rho in xstate_strategy()) {
        let mut closed = xstate_eigenvalues(&rho);
        closed.sort_by(f64::total_cmp);
        let generic = generic_eigenvalues(&rho);
        for (a, b) in closed.iter().zip(generic.iter()) {
            prop_assert!((a - b).abs() < 1e-12, "closed {} vs generic {}", a, b);
        }
        // the spectrum is a probability distribution
        prop_assert!(entropy(&closed.map(|x| x.max(0.0))).is_ok());
    }

    #[test]
    fn correlations_assemble_and_stay_bounded(params in params_strategy(), gt in 0.0f64..20.0) {
        let t = gt / params.gamma;
        for rho in [cavity_state(&params, t).unwrap(), reservoir_state(&params, t).unwrap()] {
            let r = correlation_record(t, &rho).unwrap();
            prop_assert!((r.mutual_info - r.classical - r.discord).abs() < 1e-12);
            prop_assert!(r.mutual_info >= 0.0);
            prop_assert!(r.classical >= -1e-10 && r.classical <= r.mutual_info + 1e-10);
            prop_assert!(r.discord >= 0.0 && r.discord <= r.mutual_info + 1e-10);
        }
    }

    #[test]
    fn oracle_never_loses_to_analytic(rho in xstate_strategy()) {
        // the brute force maximizes over a superset of {sigma_x, sigma_z}
        let (analytic, _) = classical_correlation_analytic(&rho).unwrap();
        let (oracle, _) = classical_correlation_bruteforce(&rho, 32, 20).unwrap();
        prop_assert!(oracle >= analytic - 1e-8, "oracle {} < analytic {}", oracle, analytic);
    }

    #[test]
    fn complementarity_holds_when_times_exist(params in params_strategy()) {
        prop_assume!((params.p - 0.5).abs() > 1e-6);
        let tc = sudden_transition_time_cavities(&params).unwrap();
        let tr = sudden_transition_time_reservoirs(&params).unwrap();
        match (tc, tr) {
            (Some(tc), Some(tr)) => {
                let residual =
                    ((-params.gamma * tc).exp() + (-params.gamma * tr).exp() - 1.0).abs();
                prop_assert!(residual < 1e-12, "residual {:e}", residual);
            }
            (None, None) => {}
            other => prop_assert!(false, "inconsistent absence: {:?}", other),
        }
    }
}
