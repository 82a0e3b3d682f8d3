//! Conservation, smallness, consistency, and blow-up monitors evaluated
//! along trajectories.
//!
//! Per-step records carry the cheap spectral quantities (energy,
//! dissipation, consistency, divergence defects) densely; collocation
//! sup-norms and the Besov table are heavier (they need inverse transforms
//! per dyadic block) and are sampled on a configurable stride. All time
//! integrals use the composite trapezoid rule on the available sample
//! nodes.
//!
//! Norm conventions for field triples `(u, B, grad B)`: Besov norms of a
//! triple are the sum of the slot norms (each slot's components taken
//! jointly), sup norms are the max over slots. Collocation maxima are a
//! lower bound for the true sup norm and are documented as such wherever
//! they appear.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::lp::{besov_norm, lebesgue_norm, sobolev_norm, BesovSpec};
use crate::mhd::{ExtendedState, PhysParams};
use crate::solver::Trajectory;

/// Which norms to tabulate and how often the heavy (transform-requiring)
/// quantities are sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsConfig {
    /// `(s, p, r)` triples for the Besov table; `p` and `r` may be
    /// `f64::INFINITY`.
    pub besov_list: Vec<(f64, f64, f64)>,
    /// Sup norms and the Besov table are evaluated every this many steps
    /// (the first and last step always included).
    pub heavy_every: usize,
}

impl Default for DiagnosticsConfig {
    /// Tabulates the norms the blow-up monitors need at `rho = 4`:
    /// regularity scale `5/2` in `L^2`, and the scaling-critical
    /// `2/rho - 1 = -1/2` sup-norm scale.
    fn default() -> Self {
        DiagnosticsConfig {
            besov_list: vec![
                (0.5, 2.0, 1.0),
                (2.5, 2.0, 1.0),
                (-0.5, f64::INFINITY, f64::INFINITY),
            ],
            heavy_every: 10,
        }
    }
}

impl DiagnosticsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.heavy_every == 0 {
            return Err(Error::param("heavy_every must be at least 1"));
        }
        for &(s, p, r) in &self.besov_list {
            BesovSpec::sharp(s, p, r)?;
        }
        Ok(())
    }
}

/// One row of the Besov table: the norm of each slot of `(u, B, grad B)`
/// and their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct BesovEntry {
    pub s: f64,
    pub p: f64,
    pub r: f64,
    pub u: f64,
    pub b: f64,
    pub grad_b: f64,
}

impl BesovEntry {
    /// Triple norm `|u| + |B| + |grad B|`.
    pub fn total(&self) -> f64 {
        self.u + self.b + self.grad_b
    }
}

/// Transform-heavy quantities sampled on the configured stride.
#[derive(Debug, Clone, PartialEq)]
pub struct HeavyDiagnostics {
    /// Collocation maxima of `|u|`, `|B|`, `|grad B|` (Euclidean over
    /// components; lower bounds for the sup norms).
    pub linf_u: f64,
    pub linf_b: f64,
    pub linf_grad_b: f64,
    pub besov_table: Vec<BesovEntry>,
}

/// Diagnostics for one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// `|u|_{L^2}^2 + |B|_{L^2}^2`.
    pub energy: f64,
    /// `mu |grad u|_{L^2}^2 + nu |grad B|_{L^2}^2`.
    pub dissipation: f64,
    /// `|curl B - J|_{L^2}` (unnormalized).
    pub consistency: f64,
    /// Normalized divergence defects of `u`, `B`, `J`.
    pub div_defects: [f64; 3],
    pub heavy: Option<HeavyDiagnostics>,
}

impl DiagnosticsRecord {
    /// Evaluate the record at one state; `with_heavy` controls whether the
    /// sup norms and the Besov table are included.
    pub fn compute(
        t: f64,
        state: &ExtendedState,
        params: &PhysParams,
        config: &DiagnosticsConfig,
        with_heavy: bool,
    ) -> Result<Self> {
        let u_comps: Vec<&SpectralField> = state.u.comps().iter().collect();
        let b_comps: Vec<&SpectralField> = state.b.comps().iter().collect();
        let energy = state.u.l2_norm().powi(2) + state.b.l2_norm().powi(2);
        let dissipation = params.mu * sobolev_norm(&u_comps, 1.0, true)?.powi(2)
            + params.nu * sobolev_norm(&b_comps, 1.0, true)?.powi(2);
        let consistency = (&state.b.curl() - &state.j).l2_norm();
        let div_defects = [
            state.u.div_defect_ratio(),
            state.b.div_defect_ratio(),
            state.j.div_defect_ratio(),
        ];
        let heavy = if with_heavy {
            let grads = state.b.gradient_components();
            let grad_refs: Vec<&SpectralField> = grads.iter().collect();
            let mut table = Vec::with_capacity(config.besov_list.len());
            for &(s, p, r) in &config.besov_list {
                let spec = BesovSpec::sharp(s, p, r)?;
                table.push(BesovEntry {
                    s,
                    p,
                    r,
                    u: besov_norm(&u_comps, &spec)?,
                    b: besov_norm(&b_comps, &spec)?,
                    grad_b: besov_norm(&grad_refs, &spec)?,
                });
            }
            Some(HeavyDiagnostics {
                linf_u: state.u.linf_norm(),
                linf_b: state.b.linf_norm(),
                linf_grad_b: lebesgue_norm(&grad_refs, f64::INFINITY)?,
                besov_table: table,
            })
        } else {
            None
        };
        Ok(DiagnosticsRecord { t, energy, dissipation, consistency, div_defects, heavy })
    }

    /// True when every stored entry is finite.
    pub fn is_finite(&self) -> bool {
        let mut ok = self.t.is_finite()
            && self.energy.is_finite()
            && self.dissipation.is_finite()
            && self.consistency.is_finite()
            && self.div_defects.iter().all(|d| d.is_finite());
        if let Some(h) = &self.heavy {
            ok = ok
                && h.linf_u.is_finite()
                && h.linf_b.is_finite()
                && h.linf_grad_b.is_finite()
                && h.besov_table.iter().all(|e| e.total().is_finite());
        }
        ok
    }
}

/// Composite trapezoid of samples `(times[i], values[i])`.
fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

/// Energy balance along a trajectory.
#[derive(Debug, Clone)]
pub struct EnergyReport {
    pub initial_energy: f64,
    /// Per record: `|E(t) + 2 int_0^t D dtau - E(0)|`.
    pub defects: Vec<f64>,
    pub max_defect: f64,
    /// `max_defect / E(0)` (zero for zero data).
    pub max_relative_defect: f64,
}

/// Checks the energy balance
/// `E(t) + 2 int_0^t (mu |grad u|^2 + nu |grad B|^2) dtau = E(0)`
/// along a uniformly sampled trajectory, with trapezoid quadrature in
/// time. The defect measures both the scheme's time error and any drift.
pub fn energy_report(traj: &Trajectory) -> Result<EnergyReport> {
    let recs = &traj.diagnostics;
    if recs.is_empty() {
        return Err(Error::InvalidData("energy report needs at least one record".into()));
    }
    let times: Vec<f64> = recs.iter().map(|r| r.t).collect();
    if times.len() > 1 {
        let dt0 = times[1] - times[0];
        for w in times.windows(2) {
            if ((w[1] - w[0]) - dt0).abs() > 1e-9 * dt0.abs().max(1.0) {
                return Err(Error::InvalidData(
                    "energy report needs uniformly sampled records".into(),
                ));
            }
        }
    }
    let initial = recs[0].energy;
    let mut cumulative = 0.0;
    let mut defects = Vec::with_capacity(recs.len());
    defects.push((recs[0].energy - initial).abs());
    for i in 1..recs.len() {
        cumulative += 0.5
            * (times[i] - times[i - 1])
            * (recs[i - 1].dissipation + recs[i].dissipation);
        defects.push((recs[i].energy + 2.0 * cumulative - initial).abs());
    }
    let max_defect = defects.iter().cloned().fold(0.0, f64::max);
    let max_relative_defect = if initial > 0.0 { max_defect / initial } else { max_defect };
    Ok(EnergyReport { initial_energy: initial, defects, max_defect, max_relative_defect })
}

/// The two scale-invariant data sizes governing the fixed-point
/// construction; no pass/fail threshold is attached (the sharp constant is
/// not known), callers compare runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallnessReport {
    /// `(|u0| + |B0| + hall |J0|)_{B^{3/p-1}_{p,1}} / mu` — the extended
    /// system's global-existence quantity.
    pub extended_smallness: f64,
    /// `(|u0| + |B0| + |u0 - hall J0|)_{B^{1/2}_{2,r}} / mu` — the
    /// electron-velocity quantity behind local existence for large data.
    pub electron_smallness: f64,
}

/// Evaluates both smallness quantities at the initial state with sharp
/// dyadic blocks (so the dyadic-rescaling covariance is exact).
pub fn smallness_report(
    state: &ExtendedState,
    params: &PhysParams,
    p: f64,
    r: f64,
) -> Result<SmallnessReport> {
    let spec_p = BesovSpec::sharp(3.0 / p - 1.0, p, 1.0)?;
    let spec_r = BesovSpec::sharp(0.5, 2.0, r)?;
    let norm = |f: &crate::field::SpectralVectorField, spec: &BesovSpec| -> Result<f64> {
        let comps: Vec<&SpectralField> = f.comps().iter().collect();
        besov_norm(&comps, spec)
    };
    let extended = (norm(&state.u, &spec_p)?
        + norm(&state.b, &spec_p)?
        + params.hall * norm(&state.j, &spec_p)?)
        / params.mu;
    let v = &state.u - &(&state.j * params.hall);
    let electron =
        (norm(&state.u, &spec_r)? + norm(&state.b, &spec_r)? + norm(&v, &spec_r)?) / params.mu;
    Ok(SmallnessReport { extended_smallness: extended, electron_smallness: electron })
}

/// One heavy sample feeding the blow-up integrals.
#[derive(Debug, Clone, Copy)]
pub struct BlowupSample {
    pub t: f64,
    /// `max(|u|_inf, |B|_inf, |grad B|_inf)^2`.
    pub sup_sq: f64,
    /// Triple norm in `B^{5/2}_{2,1}`.
    pub besov: f64,
    /// Triple norm in `B^{2/rho-1}_{inf,inf}` raised to `rho`.
    pub shell_pow: f64,
}

/// Trapezoid values of the three continuation integrals up to the last
/// valid sample.
#[derive(Debug, Clone)]
pub struct BlowupReport {
    pub rho: f64,
    pub samples: Vec<BlowupSample>,
    /// `int |(u,B,grad B)|_inf^2 dt`.
    pub sup_integral: f64,
    /// `int |(u,B,grad B)|_{B^{5/2}_{2,1}} dt`.
    pub besov_integral: f64,
    /// `int |(u,B,grad B)|_{B^{2/rho-1}_{inf,inf}}^rho dt`.
    pub shell_integral: f64,
}

impl BlowupReport {
    /// Fraction of each integral accumulated on `[from_t, end]`; `from_t`
    /// should coincide with a sample node.
    pub fn tail_fraction(&self, from_t: f64) -> [f64; 3] {
        let times: Vec<f64> = self.samples.iter().map(|s| s.t).collect();
        let start = times.iter().position(|&t| t >= from_t - 1e-12).unwrap_or(times.len());
        let tail = |values: &[f64], total: f64| -> f64 {
            if start + 1 >= times.len() || total <= 0.0 {
                0.0
            } else {
                trapezoid(&times[start..], &values[start..]) / total
            }
        };
        let sup: Vec<f64> = self.samples.iter().map(|s| s.sup_sq).collect();
        let bes: Vec<f64> = self.samples.iter().map(|s| s.besov).collect();
        let shl: Vec<f64> = self.samples.iter().map(|s| s.shell_pow).collect();
        [
            tail(&sup, self.sup_integral),
            tail(&bes, self.besov_integral),
            tail(&shl, self.shell_integral),
        ]
    }
}

/// Evaluates the three continuation integrals for the triple
/// `(u, B, grad B)` from the trajectory's heavy samples. A solution can
/// only stop existing in finite time if all three diverge, so bounded
/// values with decaying tails indicate continuation.
pub fn blowup_monitors(traj: &Trajectory, rho: f64) -> Result<BlowupReport> {
    if !(rho > 2.0 && rho.is_finite()) {
        return Err(Error::ExponentOutOfRange(format!(
            "blow-up exponent rho must lie in (2, inf), got {rho}"
        )));
    }
    let s_shell = 2.0 / rho - 1.0;
    let mut samples = Vec::new();
    for rec in &traj.diagnostics {
        let Some(heavy) = &rec.heavy else { continue };
        let besov = heavy
            .besov_table
            .iter()
            .find(|e| (e.s - 2.5).abs() < 1e-12 && e.p == 2.0 && e.r == 1.0)
            .ok_or_else(|| {
                Error::InvalidData(
                    "blow-up monitors need the (5/2, 2, 1) Besov table entry".into(),
                )
            })?
            .total();
        let shell = heavy
            .besov_table
            .iter()
            .find(|e| (e.s - s_shell).abs() < 1e-12 && e.p.is_infinite() && e.r.is_infinite())
            .ok_or_else(|| {
                Error::InvalidData(format!(
                    "blow-up monitors need the ({s_shell}, inf, inf) Besov table entry"
                ))
            })?
            .total();
        let sup = heavy.linf_u.max(heavy.linf_b).max(heavy.linf_grad_b);
        samples.push(BlowupSample {
            t: rec.t,
            sup_sq: sup * sup,
            besov,
            shell_pow: shell.powf(rho),
        });
    }
    if samples.len() < 2 {
        return Err(Error::InvalidData(
            "blow-up monitors need at least two heavy samples".into(),
        ));
    }
    let times: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let sup: Vec<f64> = samples.iter().map(|s| s.sup_sq).collect();
    let bes: Vec<f64> = samples.iter().map(|s| s.besov).collect();
    let shl: Vec<f64> = samples.iter().map(|s| s.shell_pow).collect();
    Ok(BlowupReport {
        rho,
        sup_integral: trapezoid(&times, &sup),
        besov_integral: trapezoid(&times, &bes),
        shell_integral: trapezoid(&times, &shl),
        samples,
    })
}

/// Normalized structural defects of one state.
#[derive(Debug, Clone, Copy)]
pub struct ConsistencyReport {
    pub div_u: f64,
    pub div_b: f64,
    pub div_j: f64,
    /// `|curl B - J|_{L^2}` normalized by `max(|curl B|, |J|)_{L^2}`.
    pub curl_b_minus_j: f64,
}

/// The four normalized defects measuring how far a state sits from the
/// divergence-free, current-consistent manifold.
pub fn consistency_check(state: &ExtendedState) -> ConsistencyReport {
    let curl_b = state.b.curl();
    let scale = curl_b.l2_norm().max(state.j.l2_norm());
    let curl_defect = (&curl_b - &state.j).l2_norm();
    ConsistencyReport {
        div_u: state.u.div_defect_ratio(),
        div_b: state.b.div_defect_ratio(),
        div_j: state.j.div_defect_ratio(),
        curl_b_minus_j: if scale == 0.0 { 0.0 } else { curl_defect / scale },
    }
}

/// Sobolev-regularity propagation along a trajectory, together with the
/// Gronwall bound obtained from the trajectory's own lower-order integrand
/// `S(t) = |grad u|_inf + |grad B|_inf + |u|_inf^2 + |B|_inf^2 + |J|_inf^2`.
#[derive(Debug, Clone)]
pub struct SobolevReport {
    pub s: f64,
    pub r: f64,
    /// Whether `(s, r)` lies in the range `1/2 < s <= r`, `3/2 < r <= 1 + s`
    /// in which Sobolev propagation is established (at integrability 2).
    pub valid_range: bool,
    pub times: Vec<f64>,
    /// `|u(t)|_{H^s}^2 + |B(t)|_{H^r}^2`.
    pub norms_sq: Vec<f64>,
    /// Cumulative `int_0^t (|grad u|_{H^s}^2 + |grad B|_{H^r}^2) dtau`.
    pub dissipation_int: Vec<f64>,
    /// Cumulative `int_0^t S(tau) dtau`.
    pub s_integral: Vec<f64>,
    /// `norms_sq + dissipation_int` per time.
    pub gronwall_lhs: Vec<f64>,
    /// `norms_sq(0) * exp(s_integral)` per time (constant 1 in the
    /// exponent; the true constant is not tracked, so a failure of
    /// `lhs <= rhs` flags growth faster than the recorded integrand
    /// explains rather than a contradiction).
    pub gronwall_rhs: Vec<f64>,
    pub gronwall_satisfied: bool,
}

/// Evaluates `|u|_{H^s}`, `|B|_{H^r}` (inhomogeneous) on the saved states
/// and both sides of the Gronwall-type bound
/// `|u(t)|_{H^s}^2 + |B(t)|_{H^r}^2 + int_0^t (|grad u|_{H^s}^2 +
/// |grad B|_{H^r}^2) <= (initial) exp(int_0^t S)`.
pub fn sobolev_monitor(traj: &Trajectory, s: f64, r: f64) -> Result<SobolevReport> {
    if !(s.is_finite() && r.is_finite()) {
        return Err(Error::ExponentOutOfRange(format!(
            "Sobolev exponents must be finite, got ({s}, {r})"
        )));
    }
    if traj.states.is_empty() {
        return Err(Error::InvalidData("Sobolev monitor needs at least one saved state".into()));
    }
    let valid_range = 0.5 < s && s <= r && 1.5 < r && r <= 1.0 + s;
    let mut norms_sq = Vec::with_capacity(traj.states.len());
    let mut grad_sq = Vec::with_capacity(traj.states.len());
    let mut s_integrand = Vec::with_capacity(traj.states.len());
    for state in &traj.states {
        let u_comps: Vec<&SpectralField> = state.u.comps().iter().collect();
        let b_comps: Vec<&SpectralField> = state.b.comps().iter().collect();
        norms_sq.push(
            sobolev_norm(&u_comps, s, false)?.powi(2) + sobolev_norm(&b_comps, r, false)?.powi(2),
        );
        let gu = state.u.gradient_components();
        let gb = state.b.gradient_components();
        let gu_refs: Vec<&SpectralField> = gu.iter().collect();
        let gb_refs: Vec<&SpectralField> = gb.iter().collect();
        grad_sq.push(
            sobolev_norm(&gu_refs, s, false)?.powi(2) + sobolev_norm(&gb_refs, r, false)?.powi(2),
        );
        let grad_u_inf = lebesgue_norm(&gu_refs, f64::INFINITY)?;
        let grad_b_inf = lebesgue_norm(&gb_refs, f64::INFINITY)?;
        s_integrand.push(
            grad_u_inf
                + grad_b_inf
                + state.u.linf_norm().powi(2)
                + state.b.linf_norm().powi(2)
                + state.j.linf_norm().powi(2),
        );
    }
    let times = traj.times.clone();
    let mut dissipation_int = vec![0.0];
    let mut s_integral = vec![0.0];
    for i in 1..times.len() {
        let dt = times[i] - times[i - 1];
        dissipation_int
            .push(dissipation_int[i - 1] + 0.5 * dt * (grad_sq[i - 1] + grad_sq[i]));
        s_integral.push(s_integral[i - 1] + 0.5 * dt * (s_integrand[i - 1] + s_integrand[i]));
    }
    let gronwall_lhs: Vec<f64> =
        norms_sq.iter().zip(&dissipation_int).map(|(n, d)| n + d).collect();
    let gronwall_rhs: Vec<f64> = s_integral.iter().map(|si| norms_sq[0] * si.exp()).collect();
    let gronwall_satisfied = gronwall_lhs
        .iter()
        .zip(&gronwall_rhs)
        .all(|(l, r)| *l <= *r * (1.0 + 1e-12) + 1e-300);
    Ok(SobolevReport {
        s,
        r,
        valid_range,
        times,
        norms_sq,
        dissipation_int,
        s_integral,
        gronwall_lhs,
        gronwall_rhs,
        gronwall_satisfied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{SpectralField, SpectralVectorField};
    use crate::grid::Grid;
    use crate::mhd::rescale_extended;
    use crate::solver::Trajectory;
    use crate::Complex;

    fn grid() -> Grid {
        Grid::new(16).unwrap()
    }

    fn single_mode_state(g: Grid, amp: f64) -> ExtendedState {
        let u = SpectralVectorField::new([
            SpectralField::zeros(g),
            SpectralField::from_modes(g, &[([1, 0, 0], Complex::new(0.5 * amp, 0.0))]).unwrap(),
            SpectralField::from_modes(g, &[([1, 0, 0], Complex::new(0.0, -0.5 * amp))]).unwrap(),
        ])
        .unwrap();
        let b = SpectralVectorField::new([
            SpectralField::from_modes(g, &[([0, 1, 0], Complex::new(0.0, -0.5 * amp))]).unwrap(),
            SpectralField::zeros(g),
            SpectralField::from_modes(g, &[([0, 1, 0], Complex::new(0.5 * amp, 0.0))]).unwrap(),
        ])
        .unwrap();
        ExtendedState::from_velocity_magnetic(u, b).unwrap()
    }

    /// Heat-decay trajectory of a consistent single-mode state with dense
    /// records (heavy on every node).
    fn heat_trajectory(g: Grid, params: &PhysParams, t_final: f64, steps: usize) -> Trajectory {
        let state0 = single_mode_state(g, 1.0);
        let config = DiagnosticsConfig { heavy_every: 1, ..DiagnosticsConfig::default() };
        let mut times = Vec::new();
        let mut states = Vec::new();
        let mut diagnostics = Vec::new();
        for i in 0..=steps {
            let t = t_final * i as f64 / steps as f64;
            let state = state0.heat(params, t);
            diagnostics
                .push(DiagnosticsRecord::compute(t, &state, params, &config, true).unwrap());
            times.push(t);
            states.push(state);
        }
        Trajectory { times, states, diagnostics, blow_up: None }
    }

    #[test]
    fn record_carries_finite_entries_and_consistency() {
        let g = grid();
        let params = PhysParams::uniform();
        let state = single_mode_state(g, 1.0);
        let rec = DiagnosticsRecord::compute(
            0.0,
            &state,
            &params,
            &DiagnosticsConfig::default(),
            true,
        )
        .unwrap();
        assert!(rec.is_finite(), "record entries should be finite");
        assert!(rec.consistency < 1e-13, "consistent state, got {}", rec.consistency);
        assert!(rec.energy > 0.0);
        let heavy = rec.heavy.as_ref().unwrap();
        assert_eq!(heavy.besov_table.len(), 3);
        assert!(heavy.linf_u > 0.0 && heavy.linf_b > 0.0);
    }

    #[test]
    fn energy_report_matches_heat_decay_quadrature() {
        // For u(t) = e^{-t} u0 on |k| = 1 with mu = 1, the balance defect is
        // exactly the trapezoid error of int 2 e^{-2 tau} dtau, which is
        // O(dt^2) and quadruples when dt doubles.
        let g = grid();
        let params = PhysParams::uniform();
        let coarse = heat_trajectory(g, &params, 0.5, 25);
        let fine = heat_trajectory(g, &params, 0.5, 50);
        let rc = energy_report(&coarse).unwrap();
        let rf = energy_report(&fine).unwrap();
        assert!(rc.max_relative_defect < 1e-3, "coarse defect {}", rc.max_relative_defect);
        let ratio = rc.max_defect / rf.max_defect;
        assert!(
            (ratio - 4.0).abs() < 0.4,
            "defect should shrink at second order, refinement ratio {ratio}"
        );
        // Closed form: defect(T) = 2 int_0^T e^{-2 tau} dtau (trapezoid) -
        // (1 - e^{-2T}), scaled by the initial energy.
        let steps = 25;
        let dt = 0.5 / steps as f64;
        let quad: f64 = (0..steps)
            .map(|i| {
                let t0 = dt * i as f64;
                let t1 = dt * (i + 1) as f64;
                0.5 * dt * (2.0 * (-2.0 * t0).exp() + 2.0 * (-2.0 * t1).exp())
            })
            .sum();
        let expected = rc.initial_energy * (quad - (1.0 - (-1.0_f64).exp()));
        assert!(
            (rc.defects.last().unwrap() - expected.abs()).abs() <= 1e-10 * rc.initial_energy,
            "final defect {} vs closed form {}",
            rc.defects.last().unwrap(),
            expected.abs()
        );
    }

    #[test]
    fn energy_report_rejects_nonuniform_sampling() {
        let g = grid();
        let params = PhysParams::uniform();
        let mut traj = heat_trajectory(g, &params, 0.5, 10);
        traj.diagnostics[5].t += 1e-3;
        assert!(energy_report(&traj).is_err());
    }

    #[test]
    fn smallness_report_scales_inversely_with_viscosity() {
        let g = grid();
        let state = single_mode_state(g, 1.0);
        let p1 = PhysParams::new(1.0, 1.0, 1.0).unwrap();
        let p2 = PhysParams::new(2.0, 2.0, 1.0).unwrap();
        let r1 = smallness_report(&state, &p1, 2.0, 1.0).unwrap();
        let r2 = smallness_report(&state, &p2, 2.0, 1.0).unwrap();
        assert!((r2.extended_smallness - 0.5 * r1.extended_smallness).abs() < 1e-14);
        assert!((r2.electron_smallness - 0.5 * r1.electron_smallness).abs() < 1e-14);
        let zero = ExtendedState::zeros(g);
        let rz = smallness_report(&zero, &p1, 2.0, 1.0).unwrap();
        assert_eq!(rz.extended_smallness, 0.0);
        assert_eq!(rz.electron_smallness, 0.0);
    }

    #[test]
    fn smallness_single_mode_shell_value() {
        // u0 alone on shell j = 0: the p = 2 report reduces to
        // 2^{j/2} |u0|_{L^2} / mu with j = 0.
        let g = grid();
        let u = SpectralVectorField::new([
            SpectralField::zeros(g),
            SpectralField::from_modes(g, &[([1, 0, 0], Complex::new(0.3, 0.0))]).unwrap(),
            SpectralField::zeros(g),
        ])
        .unwrap();
        let state = ExtendedState::new(
            u.clone(),
            SpectralVectorField::zeros(g),
            SpectralVectorField::zeros(g),
        )
        .unwrap();
        let params = PhysParams::new(2.0, 1.0, 1.0).unwrap();
        let report = smallness_report(&state, &params, 2.0, 1.0).unwrap();
        let expected = u.l2_norm() / 2.0;
        assert!(
            (report.extended_smallness - expected).abs() < 1e-14,
            "one-shell smallness {} vs {}",
            report.extended_smallness,
            expected
        );
    }

    #[test]
    fn smallness_covariant_under_dyadic_rescaling() {
        // On a fixed torus the dyadic rescaling with hall = 2^m multiplies
        // the extended smallness quantity by hall^{3/2} exactly (sharp
        // blocks): the shell shift contributes 2^{m s} per unknown and the
        // amplitude factors supply the rest; the continuum change of
        // variables would cancel this through the lost volume factor
        // lambda^{-3/2}, which a fixed torus does not provide.
        let g = Grid::new(32).unwrap();
        let state = single_mode_state(g, 0.7);
        let params = PhysParams::new(0.5, 0.25, 2.0).unwrap();
        let (scaled, new_params, _) = rescale_extended(&state, &params).unwrap();
        let orig = smallness_report(&state, &params, 2.0, 1.0).unwrap();
        let resc = smallness_report(&scaled, &new_params, 2.0, 1.0).unwrap();
        let factor = params.hall.powf(1.5);
        assert!(
            (resc.extended_smallness - factor * orig.extended_smallness).abs()
                <= 1e-12 * resc.extended_smallness,
            "rescaled smallness {} vs {} x {}",
            resc.extended_smallness,
            factor,
            orig.extended_smallness
        );
    }

    #[test]
    fn blowup_monitors_match_heat_closed_form() {
        // Single mode |k| = 1, amplitude pattern of single_mode_state: all
        // three integrands decay like powers of e^{-t}; compare the sup
        // integral against its closed form.
        let g = grid();
        let params = PhysParams::uniform();
        let t_final = 1.0;
        let steps = 1000;
        let traj = heat_trajectory(g, &params, t_final, steps);
        let report = blowup_monitors(&traj, 4.0).unwrap();
        // |u(t)|_inf = |u(0)|_inf e^{-t} and likewise for B, grad B; with
        // amplitude 1 the velocity and magnetic sups are equal and grad B
        // carries factor |k| = 1, so sup equals linf_u(0) e^{-t} and
        // int_0^T sup^2 = linf^2 (1 - e^{-2T}) / 2.
        let first = traj.diagnostics[0].heavy.as_ref().unwrap();
        let sup0 = first.linf_u.max(first.linf_b).max(first.linf_grad_b);
        let closed = sup0 * sup0 * (1.0 - (-2.0 * t_final).exp()) / 2.0;
        assert!(
            (report.sup_integral - closed).abs() < 1e-5 * closed,
            "sup integral {} vs closed form {closed}",
            report.sup_integral
        );
        assert!(report.besov_integral.is_finite() && report.besov_integral > 0.0);
        assert!(report.shell_integral.is_finite() && report.shell_integral > 0.0);
        // The integrands decay like e^{-2t}, e^{-t}, e^{-4t} on this |k| = 1
        // heat flow, so the [T/2, T] tail fractions have the closed forms
        // (e^{-l T/2} - e^{-l T}) / (1 - e^{-l T}) for l = 2, 1, 4.
        let tails = report.tail_fraction(t_final / 2.0);
        let analytic = |l: f64| {
            ((-l * t_final / 2.0).exp() - (-l * t_final).exp()) / (1.0 - (-l * t_final).exp())
        };
        for (got, expect) in tails.iter().zip([analytic(2.0), analytic(1.0), analytic(4.0)]) {
            assert!(
                (got - expect).abs() < 1e-3,
                "tail fraction {got} vs closed form {expect}"
            );
        }
    }

    #[test]
    fn blowup_monitors_are_monotone_in_horizon() {
        let g = grid();
        let params = PhysParams::uniform();
        let traj = heat_trajectory(g, &params, 1.0, 100);
        let full = blowup_monitors(&traj, 4.0).unwrap();
        let mut clipped = traj.clone();
        clipped.diagnostics.truncate(51);
        clipped.times.truncate(51);
        clipped.states.truncate(51);
        let half = blowup_monitors(&clipped, 4.0).unwrap();
        assert!(half.sup_integral <= full.sup_integral);
        assert!(half.besov_integral <= full.besov_integral);
        assert!(half.shell_integral <= full.shell_integral);
        assert!(blowup_monitors(&traj, 2.0).is_err(), "rho = 2 is outside the range");
        assert!(blowup_monitors(&traj, f64::INFINITY).is_err());
        assert!(
            blowup_monitors(&traj, 3.0).is_err(),
            "the default table has no entry for the rho = 3 shell exponent"
        );
    }

    #[test]
    fn consistency_check_reports_normalized_defects() {
        let g = grid();
        let state = single_mode_state(g, 1.0);
        let rep = consistency_check(&state);
        assert!(rep.div_u < 1e-13 && rep.div_b < 1e-13 && rep.div_j < 1e-13);
        assert!(rep.curl_b_minus_j < 1e-13);
        // Perturb the current by a divergence-free field of relative size
        // epsilon: the curl defect moves by about epsilon.
        let eps = 1e-3;
        let w = SpectralVectorField::new([
            SpectralField::zeros(g),
            SpectralField::from_modes(
                g,
                &[([2, 0, 0], Complex::new(0.0, eps * state.j.l2_norm()))],
            )
            .unwrap(),
            SpectralField::zeros(g),
        ])
        .unwrap();
        let perturbed =
            ExtendedState::new(state.u.clone(), state.b.clone(), &state.j + &w).unwrap();
        let rep2 = consistency_check(&perturbed);
        // curl B - (J + w) = -w exactly, so the normalized defect is
        // |w| / max(|curl B|, |J + w|).
        let expected =
            w.l2_norm() / state.b.curl().l2_norm().max((&state.j + &w).l2_norm());
        assert!(
            (rep2.curl_b_minus_j - expected).abs() < 1e-12,
            "curl defect {} vs {}",
            rep2.curl_b_minus_j,
            expected
        );
    }

    #[test]
    fn sobolev_monitor_heat_run_is_nonincreasing_and_bounded() {
        let g = grid();
        let params = PhysParams::uniform();
        let traj = heat_trajectory(g, &params, 0.5, 50);
        let report = sobolev_monitor(&traj, 1.0, 2.0).unwrap();
        assert!(report.valid_range, "(1, 2) satisfies the propagation range");
        for w in report.norms_sq.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12), "heat flow must not grow norms");
        }
        assert!(report.gronwall_satisfied, "dissipative run violates the Gronwall bound");
        let bad = sobolev_monitor(&traj, 0.2, 0.3).unwrap();
        assert!(!bad.valid_range, "(0.2, 0.3) lies outside the propagation range");
    }
}
