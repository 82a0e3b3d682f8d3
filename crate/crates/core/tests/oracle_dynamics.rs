//! Dynamics-level oracles: the integrator's convergence order measured by
//! Richardson extrapolation, and the exact correspondence between a
//! ball-truncated evolution and its dyadically rescaled copy computed on a
//! twice-finer grid.

use hmhd_core::diag::DiagnosticsConfig;
use hmhd_core::init;
use hmhd_core::mhd::{rescale_extended, ExtendedState, PhysParams};
use hmhd_core::solver::{run_etd2, run_etd2_truncated};
use hmhd_core::Grid;

/// Zero-pad a state onto a finer grid, slot by slot.
fn embed(state: &ExtendedState, target: Grid) -> ExtendedState {
    ExtendedState {
        u: state.u.prolong(target).expect("target is finer"),
        b: state.b.prolong(target).expect("target is finer"),
        j: state.j.prolong(target).expect("target is finer"),
    }
}

/// Successive final-state differences under time-step halving decay by a
/// factor four for a second-order scheme: the measured order
/// `log2(d(dt) / d(dt/2))` must sit near two. The amplitude is chosen
/// large enough that the nonlinear time error dominates rounding by ten
/// orders of magnitude.
#[test]
fn integrator_is_second_order_in_time() {
    let grid = Grid::new(16).unwrap();
    let params = PhysParams::uniform();
    let diag = DiagnosticsConfig::default();
    let state = init::single_mode(grid, 5e-2).unwrap();
    let mut finals = Vec::new();
    for dt in [1e-2, 5e-3, 2.5e-3] {
        let traj = run_etd2(&state, 0.1, dt, &params, 1000, &diag).unwrap();
        assert!(traj.blow_up.is_none(), "smooth small run must not stop early");
        finals.push(traj.final_state().clone());
    }
    let d1 = (&finals[0] - &finals[1]).l2_norm();
    let d2 = (&finals[1] - &finals[2]).l2_norm();
    assert!(
        d2 > 1e-12,
        "refinement differences must dominate rounding for the order fit, got {d2}"
    );
    let order = (d1 / d2).log2();
    assert!(
        (1.8..=2.2).contains(&order),
        "measured convergence order {order:.4} outside [1.8, 2.2] (d1 {d1:.3e}, d2 {d2:.3e})"
    );
}

/// A ball-truncated run and its rescaled copy on the doubled lattice follow
/// the same discrete flow: with Hall coefficient `2^m` the rescaling maps
/// every ingredient of the two-stage step (heat factors, dealiased
/// products, annulus projection) exactly, so the trajectories correspond to
/// rounding accuracy, far inside the scheme's own time error.
#[test]
fn rescaled_truncated_trajectories_correspond() {
    let coarse = Grid::new(16).unwrap();
    let fine = Grid::new(32).unwrap();
    let params = PhysParams::new(1.0, 1.0, 2.0).unwrap();
    let diag = DiagnosticsConfig::default();
    let a0 = init::single_mode(coarse, 1e-3).unwrap();

    let steps = 10;
    let dt = 2e-3;
    let t_final = dt * steps as f64;
    let ta = run_etd2_truncated(&a0, 3, t_final, dt, &params, steps, &diag).unwrap();

    let (b0, scaled_params, dilation) = rescale_extended(&embed(&a0, fine), &params).unwrap();
    let tb = run_etd2_truncated(
        &b0,
        6,
        t_final / dilation,
        dt / dilation,
        &scaled_params,
        steps,
        &diag,
    )
    .unwrap();

    let (a_mapped, check_params, _) =
        rescale_extended(&embed(ta.final_state(), fine), &params).unwrap();
    assert_eq!(check_params, scaled_params, "both runs must map to the same normalized setup");
    let defect = (&a_mapped - tb.final_state()).max_coeff_norm();
    let scale = tb.final_state().max_coeff_norm();
    assert!(scale > 0.0, "the rescaled run must carry nonzero content");
    assert!(
        defect <= 1e-12 * scale,
        "trajectory correspondence defect {defect:.3e} exceeds rounding budget ({:.3e} relative)",
        defect / scale
    );
}
