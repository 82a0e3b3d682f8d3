//! The four workflows behind the subcommands. Each returns the process
//! exit code: 0 success, 2 a check or construction failed, 3 the run
//! stopped on non-finite values; usage-class problems surface as errors
//! and exit 1 from `main`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};

use hmhd_core::diag::{
    blowup_monitors, consistency_check, energy_report, smallness_report, sobolev_monitor,
    DiagnosticsConfig, DiagnosticsRecord, EnergyReport,
};
use hmhd_core::mhd::{rescale_extended, ExtendedState};
use hmhd_core::solver::Trajectory;
use hmhd_core::verify::{self, SUITE_NAMES};
use hmhd_core::Grid;

use crate::artifacts::{self, BlowUpMeta, FixedPointMeta, Manifest, ManifestMeta};
use crate::config::{Family, RunConfig};

/// Run one configured simulation and write its artifact directory.
pub fn simulate(
    config_path: &Path,
    out: Option<PathBuf>,
    seed: Option<u64>,
    strict: bool,
) -> anyhow::Result<i32> {
    let started = Instant::now();
    let config = RunConfig::load(config_path)?.resolve(config_path, out, seed)?;
    let solver_config = config.solver_config()?;
    let state0 = config.initial_state()?;
    let run_dir = config.output_dir()?.to_path_buf();
    std::fs::create_dir_all(&run_dir)
        .with_context(|| format!("cannot create output directory {}", run_dir.display()))?;

    let output = solver_config.run(&state0)?;
    let traj = &output.trajectory;
    let energy = energy_report(traj)?;

    let mut outputs = Vec::new();
    artifacts::write_diagnostics_csv(&run_dir.join(artifacts::DIAGNOSTICS_FILE), traj, &energy)?;
    outputs.push(PathBuf::from(artifacts::DIAGNOSTICS_FILE));
    artifacts::write_norms_csv(&run_dir.join(artifacts::NORMS_FILE), traj)?;
    outputs.push(PathBuf::from(artifacts::NORMS_FILE));
    if let Some(report) = &output.fixed_point {
        artifacts::write_fixed_point_csv(
            &run_dir.join(artifacts::FIXED_POINT_FILE),
            report,
            output.linear_norms.as_deref(),
        )?;
        outputs.push(PathBuf::from(artifacts::FIXED_POINT_FILE));
    }
    outputs.extend(artifacts::write_snapshots(&run_dir, traj)?);
    std::fs::write(run_dir.join(artifacts::CONFIG_ECHO_FILE), config.to_toml()?)?;
    outputs.push(PathBuf::from(artifacts::CONFIG_ECHO_FILE));

    let non_contracting = output.fixed_point.as_ref().map_or(false, |r| r.non_contracting());
    let (status, code) = if traj.blow_up.is_some() {
        ("blow_up", 3)
    } else if non_contracting {
        ("fixed_point_non_contracting", 2)
    } else {
        ("completed", 0)
    };

    let manifest = Manifest {
        meta: ManifestMeta {
            tool: "hmhd".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: "simulate".into(),
            config_echo: artifacts::CONFIG_ECHO_FILE.into(),
            wall_seconds: started.elapsed().as_secs_f64(),
            strict_deterministic: strict,
            status: status.into(),
            seed: if config.initial.family == Family::RandomBandlimited {
                config.initial.seed
            } else {
                None
            },
        },
        blow_up: traj.blow_up.map(|b| BlowUpMeta { step: b.step, time: b.time }),
        fixed_point: output.fixed_point.as_ref().map(|r| FixedPointMeta {
            converged: r.converged,
            iterations: r.iterations,
            max_contraction_ratio: r.max_ratio(),
            fixed_point_norm: r.fixed_point_norm,
            free_evolution_norm: r.free_evolution_norm,
        }),
        outputs: BTreeMap::new(),
    };
    artifacts::write_manifest(&run_dir, manifest, &outputs)?;

    println!(
        "status: {status} ({} recorded steps, {} saved states, final t = {})",
        traj.diagnostics.len(),
        traj.states.len(),
        traj.final_time()
    );
    if let Some(b) = traj.blow_up {
        println!("stopped early: non-finite state at step {} (t = {})", b.step, b.time);
    }
    if let Some(r) = &output.fixed_point {
        println!(
            "fixed point: converged = {}, iterations = {}, max contraction ratio = {}",
            r.converged,
            r.iterations,
            r.max_ratio().map_or_else(|| "n/a".into(), |v| v.to_string())
        );
    }
    println!("artifacts: {}", run_dir.display());
    Ok(code)
}

/// Run one named invariant suite, or all of them.
pub fn verify(suite: &str, _strict: bool) -> anyhow::Result<i32> {
    let names: Vec<&str> =
        if suite == "all" { SUITE_NAMES.to_vec() } else { vec![suite] };
    let mut any_failed = false;
    for name in names {
        println!("suite {name}");
        let results = verify::run_suite(name)?;
        for check in &results {
            println!("  {check}");
        }
        any_failed |= results.iter().any(|c| !c.passed);
    }
    Ok(if any_failed { 2 } else { 0 })
}

/// Recompute reports from a finished run's snapshots: energy balance on
/// the saved stride, current consistency, initial-data smallness,
/// continuation integrals (shell exponent 4) with mid-horizon tail
/// fractions, and the Sobolev/Gronwall monitor at `(s, r) = (1, 2)`.
pub fn analyze(run_dir: &Path, out: Option<PathBuf>) -> anyhow::Result<i32> {
    let config = RunConfig::load(&run_dir.join(artifacts::CONFIG_ECHO_FILE))?;
    let params = config.phys_params()?;
    let grid = Grid::new(config.grid.n)?;
    let (times, states) = artifacts::load_states(run_dir, grid)?;
    let diag_config = DiagnosticsConfig { heavy_every: 1, ..DiagnosticsConfig::default() };
    let mut diagnostics = Vec::with_capacity(times.len());
    for (t, state) in times.iter().zip(&states) {
        diagnostics.push(DiagnosticsRecord::compute(*t, state, &params, &diag_config, true)?);
    }
    let traj = Trajectory { times, states, diagnostics, blow_up: None };

    let energy = saved_stride_energy(&traj);
    let consistency =
        traj.states.iter().map(|s| consistency_check(s).curl_b_minus_j).fold(0.0_f64, f64::max);
    let smallness = smallness_report(&traj.states[0], &params, 2.0, 1.0)?;
    let monitors = blowup_monitors(&traj, 4.0)?;
    let mid = traj.final_time() / 2.0;
    let tails = monitors.tail_fraction(mid);
    let sobolev = sobolev_monitor(&traj, 1.0, 2.0)?;

    let out_dir = out.unwrap_or_else(|| run_dir.join("analysis"));
    std::fs::create_dir_all(&out_dir)?;

    let mut w = BufWriter::new(File::create(out_dir.join("analysis.csv"))?);
    writeln!(w, "metric,value")?;
    for (metric, value) in [
        ("energy_max_relative_defect", energy.max_relative_defect),
        ("consistency_max", consistency),
        ("smallness_extended", smallness.extended_smallness),
        ("smallness_electron", smallness.electron_smallness),
        ("sup_integral", monitors.sup_integral),
        ("besov_integral", monitors.besov_integral),
        ("shell_integral", monitors.shell_integral),
        ("tail_sup", tails[0]),
        ("tail_besov", tails[1]),
        ("tail_shell", tails[2]),
        ("sobolev_valid_range", f64::from(u8::from(sobolev.valid_range))),
        ("gronwall_satisfied", f64::from(u8::from(sobolev.gronwall_satisfied))),
    ] {
        writeln!(w, "{metric},{value}")?;
    }
    drop(w);

    let mut w = BufWriter::new(File::create(out_dir.join("monitors.csv"))?);
    writeln!(
        w,
        "t,sup_sq,besov_triple,shell_pow,sobolev_sq,dissipation_integral,s_integral,gronwall_lhs,gronwall_rhs"
    )?;
    for (i, sample) in monitors.samples.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            sample.t,
            sample.sup_sq,
            sample.besov,
            sample.shell_pow,
            sobolev.norms_sq[i],
            sobolev.dissipation_int[i],
            sobolev.s_integral[i],
            sobolev.gronwall_lhs[i],
            sobolev.gronwall_rhs[i]
        )?;
    }
    drop(w);

    println!(
        "analysis of {} saved states: energy defect {:.3e}, consistency {:.3e}, \
         continuation integrals {:.3e} / {:.3e} / {:.3e}",
        traj.states.len(),
        energy.max_relative_defect,
        consistency,
        monitors.sup_integral,
        monitors.besov_integral,
        monitors.shell_integral
    );
    println!("reports: {}", out_dir.display());
    Ok(0)
}

/// Energy-balance defects on the (possibly non-uniform) saved stride,
/// trapezoid in time; the library's per-step report demands uniform
/// sampling, which a final partial stride would violate.
fn saved_stride_energy(traj: &Trajectory) -> EnergyReport {
    let recs = &traj.diagnostics;
    let initial = recs[0].energy;
    let mut cumulative = 0.0;
    let mut defects = vec![0.0];
    for pair in recs.windows(2) {
        cumulative += 0.5 * (pair[1].t - pair[0].t) * (pair[0].dissipation + pair[1].dissipation);
        defects.push((pair[1].energy + 2.0 * cumulative - initial).abs());
    }
    let max_defect = defects.iter().cloned().fold(0.0, f64::max);
    let max_relative_defect = if initial > 0.0 { max_defect / initial } else { max_defect };
    EnergyReport { initial_energy: initial, defects, max_defect, max_relative_defect }
}

/// How two trajectories are mapped onto each other before differencing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareMode {
    /// Identity map: same grid, same times, any scheme pair.
    Schemes,
    /// Identity map across annulus cutoffs (truncated vs full or truncated
    /// vs truncated).
    Galerkin,
    /// Dyadic rescaling of run A (with its own physics triple) onto run
    /// B's grid, with the matching time dilation.
    Rescaling,
}

/// Emit `compare.csv` (`t_a,t_b,l2_distance,relative_distance`) between
/// two finished runs under the declared map.
pub fn compare(
    run_a: &Path,
    run_b: &Path,
    mode: CompareMode,
    out: Option<PathBuf>,
) -> anyhow::Result<i32> {
    let config_a = RunConfig::load(&run_a.join(artifacts::CONFIG_ECHO_FILE))?;
    let config_b = RunConfig::load(&run_b.join(artifacts::CONFIG_ECHO_FILE))?;
    let grid_a = Grid::new(config_a.grid.n)?;
    let grid_b = Grid::new(config_b.grid.n)?;
    let (times_a, states_a) = artifacts::load_states(run_a, grid_a)?;
    let (times_b, states_b) = artifacts::load_states(run_b, grid_b)?;
    if times_a.len() != times_b.len() {
        bail!(
            "incompatible runs: {} vs {} saved states",
            times_a.len(),
            times_b.len()
        );
    }

    let params_a = config_a.phys_params()?;
    let mut rows = Vec::with_capacity(times_a.len());
    match mode {
        CompareMode::Schemes | CompareMode::Galerkin => {
            if grid_a.n() != grid_b.n() {
                bail!(
                    "incompatible runs: identity comparison needs equal grids, got {} vs {}",
                    grid_a.n(),
                    grid_b.n()
                );
            }
            for i in 0..times_a.len() {
                check_times(times_a[i], times_b[i], i)?;
                let distance = (&states_a[i] - &states_b[i]).l2_norm();
                rows.push((times_a[i], times_b[i], distance, relative(distance, &states_b[i])));
            }
        }
        CompareMode::Rescaling => {
            if grid_b.n() < grid_a.n() {
                bail!(
                    "incompatible runs: the rescaled run must live on the finer grid ({} < {})",
                    grid_b.n(),
                    grid_a.n()
                );
            }
            let (_, scaled_params, dilation) =
                rescale_extended(&embed(&states_a[0], grid_b)?, &params_a)?;
            let params_b = config_b.phys_params()?;
            for (name, got, want) in [
                ("mu", params_b.mu, scaled_params.mu),
                ("nu", params_b.nu, scaled_params.nu),
                ("hall", params_b.hall, scaled_params.hall),
            ] {
                if (got - want).abs() > 1e-12 * want.abs().max(1.0) {
                    bail!(
                        "incompatible runs: run B's {name} = {got} does not match the rescaled \
                         triple of run A (expected {want})"
                    );
                }
            }
            for i in 0..times_a.len() {
                check_times(times_a[i] / dilation, times_b[i], i)?;
                let (mapped, _, _) = rescale_extended(&embed(&states_a[i], grid_b)?, &params_a)?;
                let distance = (&mapped - &states_b[i]).l2_norm();
                rows.push((times_a[i], times_b[i], distance, relative(distance, &states_b[i])));
            }
        }
    }

    let out_dir = out.unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)?;
    let csv_path = out_dir.join("compare.csv");
    let mut w = BufWriter::new(File::create(&csv_path)?);
    writeln!(w, "t_a,t_b,l2_distance,relative_distance")?;
    for (ta, tb, d, rel) in &rows {
        writeln!(w, "{ta},{tb},{d},{rel}")?;
    }
    drop(w);

    let max = rows.iter().map(|r| r.2).fold(0.0_f64, f64::max);
    println!(
        "compared {} state pairs: max L2 distance {max:.6e}",
        rows.len()
    );
    println!("written: {}", csv_path.display());
    Ok(0)
}

fn check_times(ta: f64, tb: f64, i: usize) -> anyhow::Result<()> {
    if (ta - tb).abs() > 1e-9 * ta.abs().max(1.0) {
        bail!("incompatible runs: saved times diverge at index {i} ({ta} vs {tb})");
    }
    Ok(())
}

fn relative(distance: f64, reference: &ExtendedState) -> f64 {
    distance / reference.l2_norm().max(f64::MIN_POSITIVE)
}

/// Zero-padding embedding of a state onto a finer grid, slot by slot.
fn embed(state: &ExtendedState, target: Grid) -> hmhd_core::Result<ExtendedState> {
    Ok(ExtendedState {
        u: state.u.prolong(target)?,
        b: state.b.prolong(target)?,
        j: state.j.prolong(target)?,
    })
}
