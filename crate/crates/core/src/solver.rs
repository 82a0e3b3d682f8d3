//! Time evolution: an exponential two-stage integrator, the Duhamel
//! fixed-point iteration that mirrors the mild-solution construction, and
//! the spectrally truncated (annulus-projected) scheme.
//!
//! All schemes share the exact heat kernel for the linear part, evaluated
//! mode by mode, so the pure heat equation is integrated without time
//! error and stiffness never restricts the step. The fixed-point iteration
//! discretizes the Duhamel integral by the composite trapezoid rule with
//! the exact kernel at the nodes, turning each sweep into a single `O(M)`
//! recursion over the time grid.

use crate::diag::{DiagnosticsConfig, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::field::{SpectralField, SpectralVectorField};
use crate::grid::Grid;
use crate::lp::{besov_norm, BesovSpec};
use crate::mhd::{
    nonlinear_electron, nonlinear_q, q_a, q_b, ElectronState, ExtendedState, PhysParams,
};
use crate::Complex;

/// Time integration scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Exponential two-stage integrator.
    Etd2,
    /// Duhamel fixed-point iteration.
    Picard,
    /// Fixed-point iteration on the correction around the free evolution.
    PicardSplit,
    /// Spectrally truncated `(u, B)` scheme.
    Galerkin,
}

/// Full description of one run.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Grid resolution per axis.
    pub n: usize,
    /// Time step.
    pub dt: f64,
    /// Final time; must be an integer number of steps.
    pub t_final: f64,
    pub scheme: Scheme,
    pub params: PhysParams,
    /// Fixed-point stopping tolerance (iteration distance in both the
    /// `L^2` and low Besov sup-in-time norms).
    pub tol: f64,
    /// Fixed-point iteration cap.
    pub max_iter: usize,
    /// Annulus cutoff for the truncated scheme.
    pub friedrichs_n: Option<u32>,
    /// State snapshot stride in steps.
    pub save_every: usize,
    pub diagnostics: DiagnosticsConfig,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        Grid::new(self.n)?;
        validate_time_grid(self.t_final, self.dt)?;
        PhysParams::new(self.params.mu, self.params.nu, self.params.hall)?;
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::param(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::param("iteration cap must be at least 1"));
        }
        if self.save_every == 0 {
            return Err(Error::param("snapshot stride must be at least 1"));
        }
        if self.scheme == Scheme::Galerkin && self.friedrichs_n.is_none() {
            return Err(Error::param("the truncated scheme needs a cutoff index"));
        }
        self.diagnostics.validate()
    }

    /// Run the configured scheme from the given initial state.
    pub fn run(&self, u0: &ExtendedState) -> Result<RunOutput> {
        self.validate()?;
        if u0.grid().n() != self.n {
            return Err(Error::GridMismatch(format!(
                "initial state lives on n = {}, config says n = {}",
                u0.grid().n(),
                self.n
            )));
        }
        match self.scheme {
            Scheme::Etd2 => {
                let traj = run_etd2(
                    u0,
                    self.t_final,
                    self.dt,
                    &self.params,
                    self.save_every,
                    &self.diagnostics,
                )?;
                Ok(RunOutput { trajectory: traj, fixed_point: None, linear_norms: None })
            }
            Scheme::Picard => {
                let (traj, report) = picard_iterate(
                    u0,
                    self.t_final,
                    self.dt,
                    &self.params,
                    self.tol,
                    self.max_iter,
                    &self.diagnostics,
                )?;
                Ok(RunOutput { trajectory: traj, fixed_point: Some(report), linear_norms: None })
            }
            Scheme::PicardSplit => {
                let (traj, split) = picard_iterate_split(
                    u0,
                    self.t_final,
                    self.dt,
                    &self.params,
                    self.tol,
                    self.max_iter,
                    &self.diagnostics,
                )?;
                Ok(RunOutput {
                    trajectory: traj,
                    fixed_point: Some(split.report),
                    linear_norms: Some(split.linear_norm_estimates),
                })
            }
            Scheme::Galerkin => {
                let traj = galerkin_run(
                    u0,
                    self.friedrichs_n.expect("validated above"),
                    self.t_final,
                    self.dt,
                    &self.params,
                    self.save_every,
                    &self.diagnostics,
                )?;
                Ok(RunOutput { trajectory: traj, fixed_point: None, linear_norms: None })
            }
        }
    }
}

/// Result of [`SolverConfig::run`].
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub trajectory: Trajectory,
    /// Present for the fixed-point schemes.
    pub fixed_point: Option<FixedPointReport>,
    /// Present for the split scheme: per-iteration empirical norms of the
    /// linearized Duhamel operator.
    pub linear_norms: Option<Vec<f64>>,
}

/// Marker describing where a run stopped early.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowUp {
    /// First step whose state contained a non-finite value.
    pub step: usize,
    pub time: f64,
}

/// A computed evolution: saved states on a stride, diagnostics for every
/// step, and an optional early-stop marker (in which case everything up to
/// the marker is kept).
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Times of the saved states, strictly increasing, starting at 0.
    pub times: Vec<f64>,
    pub states: Vec<ExtendedState>,
    pub diagnostics: Vec<DiagnosticsRecord>,
    pub blow_up: Option<BlowUp>,
}

impl Trajectory {
    pub fn final_state(&self) -> &ExtendedState {
        self.states.last().expect("a trajectory holds at least the initial state")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("a trajectory holds at least the initial time")
    }
}

fn validate_time_grid(t_final: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param(format!("time step must be positive and finite, got {dt}")));
    }
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::param(format!("final time must be positive and finite, got {t_final}")));
    }
    let steps = (t_final / dt).round();
    if steps < 1.0 {
        return Err(Error::param(format!("final time {t_final} is shorter than one step {dt}")));
    }
    if (steps * dt - t_final).abs() > 1e-9 * t_final {
        return Err(Error::param(format!(
            "final time {t_final} must be an integer number of steps of {dt}"
        )));
    }
    Ok(steps as usize)
}

fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

/// Exact heat flow of a scalar field: multiplies each coefficient by
/// `e^{-kappa_diff |k|^2 t}`. Rejects negative durations.
pub fn heat_propagate(f: &SpectralField, diffusivity: f64, t: f64) -> Result<SpectralField> {
    if !(t >= 0.0) {
        return Err(Error::param(format!("heat propagation needs t >= 0, got {t}")));
    }
    Ok(f.diffuse(diffusivity, t))
}

/// Exact heat flow of a vector field; rejects negative durations.
pub fn heat_propagate_vector(
    f: &SpectralVectorField,
    diffusivity: f64,
    t: f64,
) -> Result<SpectralVectorField> {
    if !(t >= 0.0) {
        return Err(Error::param(format!("heat propagation needs t >= 0, got {t}")));
    }
    Ok(f.diffuse(diffusivity, t))
}

/// Heat flow of a full state with the slot diffusivities; rejects negative
/// durations.
pub fn heat_propagate_state(
    state: &ExtendedState,
    params: &PhysParams,
    t: f64,
) -> Result<ExtendedState> {
    if !(t >= 0.0) {
        return Err(Error::param(format!("heat propagation needs t >= 0, got {t}")));
    }
    Ok(state.heat(params, t))
}

/// One step of the exponential two-stage scheme: an exactly propagated
/// Euler predictor followed by a trapezoidal corrector,
/// `U+ = E U + dt/2 (E Q(U) + Q(E(U + dt Q(U))))` with `E` the heat
/// propagator over `dt`. Exact when the quadratic terms vanish; second
/// order otherwise.
pub fn step_etd2(state: &ExtendedState, dt: f64, params: &PhysParams) -> Result<ExtendedState> {
    let q0 = nonlinear_q(state, state, params)?;
    let pred = (&(state + &(&q0 * dt))).heat(params, dt);
    let q1 = nonlinear_q(&pred, &pred, params)?;
    Ok(&state.heat(params, dt) + &(&(&q0.heat(params, dt) + &q1) * (0.5 * dt)))
}

/// The same two-stage step for the electron-velocity formulation
/// (matched diffusivities required).
pub fn step_etd2_electron(
    state: &ElectronState,
    dt: f64,
    params: &PhysParams,
) -> Result<ElectronState> {
    let q0 = nonlinear_electron(state, params)?;
    let pred = (&(state + &(&q0 * dt))).heat(params, dt);
    let q1 = nonlinear_electron(&pred, params)?;
    Ok(&state.heat(params, dt) + &(&(&q0.heat(params, dt) + &q1) * (0.5 * dt)))
}

/// Shared stepping loop: dense diagnostics, strided snapshots, non-finite
/// states flagged and the prefix returned.
fn run_loop<F>(
    u0: &ExtendedState,
    t_final: f64,
    dt: f64,
    params: &PhysParams,
    save_every: usize,
    diag: &DiagnosticsConfig,
    mut step: F,
) -> Result<Trajectory>
where
    F: FnMut(&ExtendedState) -> Result<ExtendedState>,
{
    let steps = validate_time_grid(t_final, dt)?;
    if save_every == 0 {
        return Err(Error::param("snapshot stride must be at least 1"));
    }
    diag.validate()?;
    if !u0.is_finite() {
        return Err(Error::InvalidData("initial state contains non-finite values".into()));
    }
    let mut times = vec![0.0];
    let mut states = vec![u0.clone()];
    let mut diagnostics = vec![DiagnosticsRecord::compute(0.0, u0, params, diag, true)?];
    let mut blow_up = None;
    let mut state = u0.clone();
    for i in 1..=steps {
        state = step(&state)?;
        let t = dt * i as f64;
        if !state.is_finite() {
            blow_up = Some(BlowUp { step: i, time: t });
            break;
        }
        let heavy = i % diag.heavy_every == 0 || i == steps;
        diagnostics.push(DiagnosticsRecord::compute(t, &state, params, diag, heavy)?);
        if i % save_every == 0 || i == steps {
            times.push(t);
            states.push(state.clone());
        }
    }
    Ok(Trajectory { times, states, diagnostics, blow_up })
}

/// Evolve the extended system with the exponential two-stage scheme.
pub fn run_etd2(
    u0: &ExtendedState,
    t_final: f64,
    dt: f64,
    params: &PhysParams,
    save_every: usize,
    diag: &DiagnosticsConfig,
) -> Result<Trajectory> {
    run_loop(u0, t_final, dt, params, save_every, diag, |s| step_etd2(s, dt, params))
}

/// Evolve the extended system with the annulus projector wrapped around
/// the quadratic terms and the data; the projected band is exactly
/// invariant.
pub fn run_etd2_truncated(
    u0: &ExtendedState,
    radius: u32,
    t_final: f64,
    dt: f64,
    params: &PhysParams,
    save_every: usize,
    diag: &DiagnosticsConfig,
) -> Result<Trajectory> {
    let data = friedrichs_project_state(u0, radius);
    run_loop(&data, t_final, dt, params, save_every, diag, |s| {
        let q0 = friedrichs_project_state(&nonlinear_q(s, s, params)?, radius);
        let pred = (&(s + &(&q0 * dt))).heat(params, dt);
        let q1 = friedrichs_project_state(&nonlinear_q(&pred, &pred, params)?, radius);
        Ok(&s.heat(params, dt) + &(&(&q0.heat(params, dt) + &q1) * (0.5 * dt)))
    })
}

/// Evolve the electron-velocity formulation; returns sampled times and
/// states. Comparison helper; diagnostics records are tied to the extended
/// representation.
pub fn run_etd2_electron(
    s0: &ElectronState,
    t_final: f64,
    dt: f64,
    params: &PhysParams,
    save_every: usize,
) -> Result<(Vec<f64>, Vec<ElectronState>)> {
    let steps = validate_time_grid(t_final, dt)?;
    if save_every == 0 {
        return Err(Error::param("snapshot stride must be at least 1"));
    }
    let mut times = vec![0.0];
    let mut states = vec![s0.clone()];
    let mut state = s0.clone();
    for i in 1..=steps {
        state = step_etd2_electron(&state, dt, params)?;
        if !state.is_finite() {
            return Err(Error::InvalidData(format!(
                "electron-form run hit a non-finite state at step {i}"
            )));
        }
        if i % save_every == 0 || i == steps {
            times.push(dt * i as f64);
            states.push(state.clone());
        }
    }
    Ok((times, states))
}

/// Evolve the truncated `(u, B)` system: the annulus projector is wrapped
/// around every quadratic term and around the data, and the current is the
/// curl of the magnetic field throughout.
pub fn galerkin_run(
    u0: &ExtendedState,
    n_cut: u32,
    t_final: f64,
    dt: f64,
    params: &PhysParams,
    save_every: usize,
    diag: &DiagnosticsConfig,
) -> Result<Trajectory> {
    let data = ExtendedState::from_velocity_magnetic(
        friedrichs_project_vector(&u0.u, n_cut),
        friedrichs_project_vector(&u0.b, n_cut),
    )?;
    let h = params.hall;
    let pair_q = |u: &SpectralVectorField,
                  b: &SpectralVectorField|
     -> Result<(SpectralVectorField, SpectralVectorField)> {
        let qu = friedrichs_project_vector(&(&q_a(b, b, true)? - &q_a(u, u, true)?), n_cut);
        let drift = &(&b.curl() * h) - u;
        let qb = friedrichs_project_vector(&q_b(b, &drift, true)?, n_cut);
        Ok((qu, qb))
    };
    run_loop(&data, t_final, dt, params, save_every, diag, |s| {
        let (qu0, qb0) = pair_q(&s.u, &s.b)?;
        let pu = (&(&s.u + &(&qu0 * dt))).diffuse(params.mu, dt);
        let pb = (&(&s.b + &(&qb0 * dt))).diffuse(params.nu, dt);
        let (qu1, qb1) = pair_q(&pu, &pb)?;
        let u_next =
            &s.u.diffuse(params.mu, dt) + &(&(&qu0.diffuse(params.mu, dt) + &qu1) * (0.5 * dt));
        let b_next =
            &s.b.diffuse(params.nu, dt) + &(&(&qb0.diffuse(params.nu, dt) + &qb1) * (0.5 * dt));
        ExtendedState::from_velocity_magnetic(u_next, b_next)
    })
}

/// Annulus projector: zeroes every mode with `|kappa| < 1/n_cut` or
/// `|kappa| > n_cut` (on the integer lattice the lower cutoff only
/// concerns the already absent mean). Idempotent by construction.
pub fn friedrichs_project(f: &SpectralField, n_cut: u32) -> SpectralField {
    let hi2 = (n_cut as f64) * (n_cut as f64);
    let lo2 = if n_cut == 0 { f64::INFINITY } else { 1.0 / hi2 };
    f.map_modes(|kappa, c| {
        let r2 = kappa[0] * kappa[0] + kappa[1] * kappa[1] + kappa[2] * kappa[2];
        if r2 < lo2 || r2 > hi2 {
            Complex::default()
        } else {
            c
        }
    })
}

/// Component-wise annulus projection of a vector field.
pub fn friedrichs_project_vector(f: &SpectralVectorField, n_cut: u32) -> SpectralVectorField {
    SpectralVectorField::new([
        friedrichs_project(f.comp(0), n_cut),
        friedrichs_project(f.comp(1), n_cut),
        friedrichs_project(f.comp(2), n_cut),
    ])
    .expect("projection preserves the grid")
}

/// Slot-wise annulus projection of a state.
pub fn friedrichs_project_state(state: &ExtendedState, n_cut: u32) -> ExtendedState {
    ExtendedState {
        u: friedrichs_project_vector(&state.u, n_cut),
        b: friedrichs_project_vector(&state.b, n_cut),
        j: friedrichs_project_vector(&state.j, n_cut),
    }
}

/// Data mollification by sharp dyadic truncation: keeps the shells
/// `-n <= j < n`, i.e. modes with `2^{-n} <= |kappa| < 2^n`. Per-shell
/// norms never increase.
pub fn mollify_data(f: &SpectralField, n: u32) -> SpectralField {
    let lo2 = 4.0_f64.powi(-(n as i32));
    let hi2 = 4.0_f64.powi(n as i32);
    f.map_modes(|kappa, c| {
        let r2 = kappa[0] * kappa[0] + kappa[1] * kappa[1] + kappa[2] * kappa[2];
        if r2 >= lo2 && r2 < hi2 {
            c
        } else {
            Complex::default()
        }
    })
}

/// Component-wise mollification of a vector field.
pub fn mollify_vector(f: &SpectralVectorField, n: u32) -> SpectralVectorField {
    SpectralVectorField::new([
        mollify_data(f.comp(0), n),
        mollify_data(f.comp(1), n),
        mollify_data(f.comp(2), n),
    ])
    .expect("mollification preserves the grid")
}

/// Convergence report of the Duhamel fixed-point iteration. Residuals are
/// distances between successive iterates; the working norm is the
/// sup-in-time low Besov norm plus the time-integrated high Besov norm
/// (exponents 1/2 and 5/2 over `L^2` blocks) over all nine state
/// components jointly.
#[derive(Debug, Clone)]
pub struct FixedPointReport {
    pub iterations: usize,
    pub converged: bool,
    /// Sup-in-time `L^2` distance per iteration.
    pub residuals_l2: Vec<f64>,
    /// Sup-in-time low Besov distance per iteration.
    pub residuals_besov: Vec<f64>,
    /// Working-norm distance per iteration.
    pub residuals_e: Vec<f64>,
    /// Ratios of successive working-norm residuals.
    pub contraction_ratios: Vec<f64>,
    /// Working norm of the final iterate.
    pub fixed_point_norm: f64,
    /// Working norm of the free evolution.
    pub free_evolution_norm: f64,
    /// Whether the final iterate obeys the contraction-regime bound
    /// `|x| <= 2 |y|` in the working norm.
    pub bound_satisfied: bool,
}

impl FixedPointReport {
    /// Largest observed contraction ratio, if any iteration pair exists.
    pub fn max_ratio(&self) -> Option<f64> {
        self.contraction_ratios.iter().cloned().reduce(f64::max)
    }

    /// True when the iteration stopped by exhausting its budget (or
    /// hitting non-finite values) rather than by contracting below the
    /// tolerance.
    pub fn non_contracting(&self) -> bool {
        !self.converged
    }
}

/// Extra bookkeeping for the split iteration.
#[derive(Debug, Clone)]
pub struct SplitFixedPointReport {
    pub report: FixedPointReport,
    /// Per-iteration empirical norm of the linearized Duhamel operator
    /// evaluated on the current correction iterate (skipping zero
    /// iterates).
    pub linear_norm_estimates: Vec<f64>,
    /// The contraction hypothesis needs this norm below one.
    pub linear_norm_exceeds_one: bool,
}

fn state_refs(state: &ExtendedState) -> Vec<&SpectralField> {
    state
        .u
        .comps()
        .iter()
        .chain(state.b.comps().iter())
        .chain(state.j.comps().iter())
        .collect()
}

/// Working norm of a node-sampled trajectory: sup of the low Besov norm
/// plus trapezoid integral of the high one.
fn e_norm(
    times: &[f64],
    states: &[ExtendedState],
    low: &BesovSpec,
    high: &BesovSpec,
) -> Result<f64> {
    let mut sup = 0.0_f64;
    let mut series = Vec::with_capacity(states.len());
    for s in states {
        let refs = state_refs(s);
        sup = sup.max(besov_norm(&refs, low)?);
        series.push(besov_norm(&refs, high)?);
    }
    Ok(sup + trapezoid(times, &series))
}

/// Sup-L2, sup-low-Besov and working-norm distances between two
/// node-sampled trajectories.
fn difference_norms(
    times: &[f64],
    a: &[ExtendedState],
    b: &[ExtendedState],
    low: &BesovSpec,
    high: &BesovSpec,
) -> Result<(f64, f64, f64)> {
    let mut sup_l2 = 0.0_f64;
    let mut sup_low = 0.0_f64;
    let mut series = Vec::with_capacity(a.len());
    for (sa, sb) in a.iter().zip(b) {
        let d = sa - sb;
        sup_l2 = sup_l2.max(d.l2_norm());
        let refs = state_refs(&d);
        sup_low = sup_low.max(besov_norm(&refs, low)?);
        series.push(besov_norm(&refs, high)?);
    }
    Ok((sup_l2, sup_low, sup_low + trapezoid(times, &series)))
}

fn assemble_trajectory(
    times: Vec<f64>,
    states: Vec<ExtendedState>,
    params: &PhysParams,
    diag: &DiagnosticsConfig,
) -> Result<Trajectory> {
    let last = times.len() - 1;
    let mut diagnostics = Vec::with_capacity(times.len());
    for (i, (t, s)) in times.iter().zip(&states).enumerate() {
        let heavy = i % diag.heavy_every == 0 || i == last;
        diagnostics.push(DiagnosticsRecord::compute(*t, s, params, diag, heavy)?);
    }
    Ok(Trajectory { times, states, diagnostics, blow_up: None })
}

fn validate_fixed_point_args(tol: f64, max_iter: usize) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::param(format!("tolerance must be positive, got {tol}")));
    }
    if max_iter == 0 {
        return Err(Error::param("iteration cap must be at least 1"));
    }
    Ok(())
}

/// Duhamel fixed-point iteration on a fixed time grid: starting from the
/// free evolution `y(t) = e^{t L} U0`, each sweep evaluates
/// `x'(t) = y(t) + int_0^t e^{(t-s) L} Q(x(s), x(s)) ds` with trapezoid
/// quadrature and the exact kernel, via one forward recursion per sweep.
/// Stops when successive iterates are closer than `tol` in both
/// sup-in-time norms; reaching `max_iter` without that yields a
/// non-converged report (the expected outcome when the data violate the
/// smallness regime).
pub fn picard_iterate(
    u0: &ExtendedState,
    t_final: f64,
    dt: f64,
    params: &PhysParams,
    tol: f64,
    max_iter: usize,
    diag: &DiagnosticsConfig,
) -> Result<(Trajectory, FixedPointReport)> {
    let steps = validate_time_grid(t_final, dt)?;
    validate_fixed_point_args(tol, max_iter)?;
    diag.validate()?;
    let grid = *u0.grid();
    let low = BesovSpec::sharp(0.5, 2.0, 1.0)?;
    let high = BesovSpec::sharp(2.5, 2.0, 1.0)?;
    let times: Vec<f64> = (0..=steps).map(|i| dt * i as f64).collect();
    let mut x: Vec<ExtendedState> = times.iter().map(|&t| u0.heat(params, t)).collect();
    let free_norm = e_norm(&times, &x, &low, &high)?;
    let mut report = FixedPointReport {
        iterations: 0,
        converged: false,
        residuals_l2: Vec::new(),
        residuals_besov: Vec::new(),
        residuals_e: Vec::new(),
        contraction_ratios: Vec::new(),
        fixed_point_norm: 0.0,
        free_evolution_norm: free_norm,
        bound_satisfied: false,
    };
    for _ in 1..=max_iter {
        let mut x_new: Vec<ExtendedState> = Vec::with_capacity(times.len());
        x_new.push(u0.clone());
        let mut duh = ExtendedState::zeros(grid);
        let mut q_prev = nonlinear_q(&x[0], &x[0], params)?;
        for i in 1..times.len() {
            let q_i = nonlinear_q(&x[i], &x[i], params)?;
            duh = &duh.heat(params, dt) + &(&(&q_prev.heat(params, dt) + &q_i) * (0.5 * dt));
            x_new.push(&u0.heat(params, times[i]) + &duh);
            q_prev = q_i;
        }
        let (res_l2, res_low, res_e) = difference_norms(&times, &x_new, &x, &low, &high)?;
        if let Some(&prev) = report.residuals_e.last() {
            report.contraction_ratios.push(if prev > 0.0 { res_e / prev } else { 0.0 });
        }
        report.residuals_l2.push(res_l2);
        report.residuals_besov.push(res_low);
        report.residuals_e.push(res_e);
        report.iterations += 1;
        x = x_new;
        if !res_e.is_finite() {
            break;
        }
        if res_l2 < tol && res_low < tol {
            report.converged = true;
            break;
        }
    }
    report.fixed_point_norm = e_norm(&times, &x, &low, &high)?;
    report.bound_satisfied =
        report.fixed_point_norm <= 2.0 * free_norm * (1.0 + 1e-12) + f64::MIN_POSITIVE;
    let traj = assemble_trajectory(times, x, params, diag)?;
    Ok((traj, report))
}

/// Fixed-point iteration on the correction `V = U - y` around the free
/// evolution `y`: each sweep evaluates the affine-quadratic map
/// `V' = B(y, y) + L(V) + B(V, V)` with `L(V) = B(V, y) + B(y, V)` and
/// `B` the Duhamel integral of the quadratic form. Also estimates the
/// operator norm of `L` empirically on the iterates; a value at or above
/// one voids the contraction hypothesis and is flagged.
pub fn picard_iterate_split(
    u0: &ExtendedState,
    t_final: f64,
    dt: f64,
    params: &PhysParams,
    tol: f64,
    max_iter: usize,
    diag: &DiagnosticsConfig,
) -> Result<(Trajectory, SplitFixedPointReport)> {
    let steps = validate_time_grid(t_final, dt)?;
    validate_fixed_point_args(tol, max_iter)?;
    diag.validate()?;
    let grid = *u0.grid();
    let low = BesovSpec::sharp(0.5, 2.0, 1.0)?;
    let high = BesovSpec::sharp(2.5, 2.0, 1.0)?;
    let times: Vec<f64> = (0..=steps).map(|i| dt * i as f64).collect();
    // The quadratic image of the free evolution is reused every sweep.
    let qyy: Vec<ExtendedState> = times
        .iter()
        .map(|&t| {
            let y = u0.heat(params, t);
            nonlinear_q(&y, &y, params)
        })
        .collect::<Result<_>>()?;
    let free: Vec<ExtendedState> = times.iter().map(|&t| u0.heat(params, t)).collect();
    let free_norm = e_norm(&times, &free, &low, &high)?;
    drop(free);
    let mut tilde: Vec<ExtendedState> = times.iter().map(|_| ExtendedState::zeros(grid)).collect();
    let mut report = FixedPointReport {
        iterations: 0,
        converged: false,
        residuals_l2: Vec::new(),
        residuals_besov: Vec::new(),
        residuals_e: Vec::new(),
        contraction_ratios: Vec::new(),
        fixed_point_norm: 0.0,
        free_evolution_norm: free_norm,
        bound_satisfied: false,
    };
    let mut linear_norm_estimates = Vec::new();
    for _ in 1..=max_iter {
        let zero_iterate = tilde.iter().all(|s| s.is_zero());
        let mut tilde_new: Vec<ExtendedState> = Vec::with_capacity(times.len());
        tilde_new.push(ExtendedState::zeros(grid));
        let mut duh_full = ExtendedState::zeros(grid);
        let mut duh_lin = ExtendedState::zeros(grid);
        let mut lin_sup = 0.0_f64;
        let mut lin_series = vec![0.0_f64];
        let integrands = |i: usize| -> Result<(ExtendedState, ExtendedState)> {
            if zero_iterate {
                return Ok((qyy[i].clone(), ExtendedState::zeros(grid)));
            }
            let y = u0.heat(params, times[i]);
            let lin = &nonlinear_q(&tilde[i], &y, params)? + &nonlinear_q(&y, &tilde[i], params)?;
            let full = &(&qyy[i] + &lin) + &nonlinear_q(&tilde[i], &tilde[i], params)?;
            Ok((full, lin))
        };
        let (mut full_prev, mut lin_prev) = integrands(0)?;
        for i in 1..times.len() {
            let (full_i, lin_i) = integrands(i)?;
            duh_full =
                &duh_full.heat(params, dt) + &(&(&full_prev.heat(params, dt) + &full_i) * (0.5 * dt));
            duh_lin =
                &duh_lin.heat(params, dt) + &(&(&lin_prev.heat(params, dt) + &lin_i) * (0.5 * dt));
            tilde_new.push(duh_full.clone());
            let refs = state_refs(&duh_lin);
            lin_sup = lin_sup.max(besov_norm(&refs, &low)?);
            lin_series.push(besov_norm(&refs, &high)?);
            full_prev = full_i;
            lin_prev = lin_i;
        }
        if !zero_iterate {
            let tilde_e = e_norm(&times, &tilde, &low, &high)?;
            if tilde_e > 0.0 {
                linear_norm_estimates.push((lin_sup + trapezoid(&times, &lin_series)) / tilde_e);
            }
        }
        let (res_l2, res_low, res_e) = difference_norms(&times, &tilde_new, &tilde, &low, &high)?;
        if let Some(&prev) = report.residuals_e.last() {
            report.contraction_ratios.push(if prev > 0.0 { res_e / prev } else { 0.0 });
        }
        report.residuals_l2.push(res_l2);
        report.residuals_besov.push(res_low);
        report.residuals_e.push(res_e);
        report.iterations += 1;
        tilde = tilde_new;
        if !res_e.is_finite() {
            break;
        }
        if res_l2 < tol && res_low < tol {
            report.converged = true;
            break;
        }
    }
    // Reassemble U = y + V.
    let states: Vec<ExtendedState> = times
        .iter()
        .zip(&tilde)
        .map(|(&t, v)| &u0.heat(params, t) + v)
        .collect();
    report.fixed_point_norm = e_norm(&times, &states, &low, &high)?;
    report.bound_satisfied =
        report.fixed_point_norm <= 2.0 * free_norm * (1.0 + 1e-12) + f64::MIN_POSITIVE;
    let linear_norm_exceeds_one = linear_norm_estimates.iter().any(|m| *m >= 1.0);
    let traj = assemble_trajectory(times, states, params, diag)?;
    Ok((traj, SplitFixedPointReport { report, linear_norm_estimates, linear_norm_exceeds_one }))
}
