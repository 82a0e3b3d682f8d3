//! Run-directory artifacts: CSV time series with fixed column orders,
//! nine-component state snapshots, the snapshot index, and the run
//! manifest. All numeric cells use the shortest round-trip decimal form,
//! so identical runs produce byte-identical files.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

use hmhd_core::diag::EnergyReport;
use hmhd_core::mhd::ExtendedState;
use hmhd_core::snapshot::RawSnapshot;
use hmhd_core::solver::{FixedPointReport, Trajectory};
use hmhd_core::{Error, Grid};

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const NORMS_FILE: &str = "norms.csv";
pub const FIXED_POINT_FILE: &str = "fixed_point.csv";
pub const CONFIG_ECHO_FILE: &str = "config_echo.toml";
pub const MANIFEST_FILE: &str = "manifest.toml";
pub const SNAPSHOT_DIR: &str = "snapshots";
pub const SNAPSHOT_INDEX: &str = "index.csv";

/// Write one state as a nine-component snapshot (u, B, J component cubes).
pub fn write_state(path: &Path, state: &ExtendedState) -> hmhd_core::Result<()> {
    let mut components = Vec::with_capacity(9);
    for field in [&state.u, &state.b, &state.j] {
        let [x, y, z] = field.to_physical();
        components.extend([x, y, z]);
    }
    let snap = RawSnapshot { n: state.grid().n(), components };
    snap.write_to(BufWriter::new(File::create(path)?))
}

/// Load a nine-component snapshot back into a state on `grid`.
pub fn read_state(path: &Path, grid: Grid) -> hmhd_core::Result<ExtendedState> {
    let snap = RawSnapshot::read_from(File::open(path)?)?;
    if snap.n != grid.n() {
        return Err(Error::GridMismatch(format!(
            "snapshot resolution {} vs configured grid {}",
            snap.n,
            grid.n()
        )));
    }
    if snap.components.len() != 9 {
        return Err(Error::SnapshotFormat(format!(
            "a state snapshot has 9 components, found {}",
            snap.components.len()
        )));
    }
    let vector = |base: usize| {
        hmhd_core::SpectralVectorField::from_physical(
            grid,
            [
                snap.components[base].as_slice(),
                snap.components[base + 1].as_slice(),
                snap.components[base + 2].as_slice(),
            ],
        )
    };
    Ok(ExtendedState { u: vector(0)?, b: vector(3)?, j: vector(6)? })
}

/// `t,energy,dissipation,energy_defect,consistency,div_u,div_b,div_j` —
/// one row per recorded step; the defect column is the cumulative
/// energy-balance residual.
pub fn write_diagnostics_csv(
    path: &Path,
    traj: &Trajectory,
    energy: &EnergyReport,
) -> anyhow::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "t,energy,dissipation,energy_defect,consistency,div_u,div_b,div_j")?;
    for (rec, defect) in traj.diagnostics.iter().zip(&energy.defects) {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            rec.t,
            rec.energy,
            rec.dissipation,
            defect,
            rec.consistency,
            rec.div_defects[0],
            rec.div_defects[1],
            rec.div_defects[2]
        )?;
    }
    Ok(())
}

/// `t,quantity,s,p,r,profile,value` — long-form norm table, one block per
/// transform-heavy sample: for every configured `(s, p, r)` row the three
/// slots and their sum with profile `sharp`, then the collocation maxima
/// with profile `collocation` (a lower bound for the sup norm).
pub fn write_norms_csv(path: &Path, traj: &Trajectory) -> anyhow::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "t,quantity,s,p,r,profile,value")?;
    for rec in &traj.diagnostics {
        let Some(heavy) = &rec.heavy else { continue };
        for entry in &heavy.besov_table {
            for (quantity, value) in [
                ("u", entry.u),
                ("b", entry.b),
                ("grad_b", entry.grad_b),
                ("triple", entry.total()),
            ] {
                writeln!(
                    w,
                    "{},{quantity},{},{},{},sharp,{value}",
                    rec.t, entry.s, entry.p, entry.r
                )?;
            }
        }
        for (quantity, value) in [
            ("linf_u", heavy.linf_u),
            ("linf_b", heavy.linf_b),
            ("linf_grad_b", heavy.linf_grad_b),
        ] {
            writeln!(w, "{},{quantity},0,inf,inf,collocation,{value}", rec.t)?;
        }
    }
    Ok(())
}

/// `iteration,residual_l2,residual_besov,residual_working,contraction_ratio,linear_norm`
/// — the contraction ratio is empty on the first sweep (no predecessor)
/// and the linear-norm column is empty for the plain iteration.
pub fn write_fixed_point_csv(
    path: &Path,
    report: &FixedPointReport,
    linear_norms: Option<&[f64]>,
) -> anyhow::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "iteration,residual_l2,residual_besov,residual_working,contraction_ratio,linear_norm")?;
    for i in 0..report.residuals_l2.len() {
        let ratio = if i == 0 {
            String::new()
        } else {
            report.contraction_ratios[i - 1].to_string()
        };
        let linear = linear_norms
            .and_then(|l| l.get(i))
            .map(|v| v.to_string())
            .unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{ratio},{linear}",
            i + 1,
            report.residuals_l2[i],
            report.residuals_besov[i],
            report.residuals_e[i]
        )?;
    }
    Ok(())
}

/// Write every saved state under `snapshots/` plus an `index.csv` of
/// `idx,t,file`; returns the relative paths written.
pub fn write_snapshots(run_dir: &Path, traj: &Trajectory) -> anyhow::Result<Vec<PathBuf>> {
    let dir = run_dir.join(SNAPSHOT_DIR);
    std::fs::create_dir_all(&dir)?;
    let mut written = Vec::new();
    let index_rel = PathBuf::from(SNAPSHOT_DIR).join(SNAPSHOT_INDEX);
    let mut index = BufWriter::new(File::create(run_dir.join(&index_rel))?);
    writeln!(index, "idx,t,file")?;
    for (i, (t, state)) in traj.times.iter().zip(&traj.states).enumerate() {
        let name = format!("state_{i:06}.snap");
        write_state(&dir.join(&name), state)?;
        writeln!(index, "{i},{t},{name}")?;
        written.push(PathBuf::from(SNAPSHOT_DIR).join(name));
    }
    drop(index);
    written.push(index_rel);
    Ok(written)
}

/// Read the snapshot index and all states of a finished run.
pub fn load_states(run_dir: &Path, grid: Grid) -> anyhow::Result<(Vec<f64>, Vec<ExtendedState>)> {
    let dir = run_dir.join(SNAPSHOT_DIR);
    let index_path = dir.join(SNAPSHOT_INDEX);
    let text = std::fs::read_to_string(&index_path)
        .with_context(|| format!("cannot read snapshot index {}", index_path.display()))?;
    let mut times = Vec::new();
    let mut states = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            anyhow::bail!("snapshot index line {} is malformed: {line:?}", lineno + 1);
        }
        let t: f64 = fields[1]
            .parse()
            .with_context(|| format!("snapshot index line {}: bad time", lineno + 1))?;
        let state = read_state(&dir.join(fields[2]), grid)
            .with_context(|| format!("cannot load snapshot {}", fields[2]))?;
        times.push(t);
        states.push(state);
    }
    if states.is_empty() {
        anyhow::bail!("run {} holds no snapshots", run_dir.display());
    }
    Ok((times, states))
}

/// Everything the manifest records about a finished run.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub meta: ManifestMeta,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blow_up: Option<BlowUpMeta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_point: Option<FixedPointMeta>,
    /// Relative path -> SHA-256 of every artifact, in sorted order.
    pub outputs: BTreeMap<String, String>,
}

#[derive(Debug, Serialize)]
pub struct ManifestMeta {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// The effective configuration, re-runnable as `--config`.
    pub config_echo: String,
    pub wall_seconds: f64,
    pub strict_deterministic: bool,
    /// `completed`, `blow_up`, or `fixed_point_non_contracting`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct BlowUpMeta {
    pub step: usize,
    pub time: f64,
}

#[derive(Debug, Serialize)]
pub struct FixedPointMeta {
    pub converged: bool,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_contraction_ratio: Option<f64>,
    pub fixed_point_norm: f64,
    pub free_evolution_norm: f64,
}

/// Hash every listed artifact and write `manifest.toml`.
pub fn write_manifest(
    run_dir: &Path,
    mut manifest: Manifest,
    outputs: &[PathBuf],
) -> anyhow::Result<()> {
    for rel in outputs {
        let digest = sha256_hex(&run_dir.join(rel))
            .with_context(|| format!("cannot hash {}", rel.display()))?;
        manifest.outputs.insert(rel.to_string_lossy().into_owned(), digest);
    }
    let text = toml::to_string_pretty(&manifest)?;
    std::fs::write(run_dir.join(MANIFEST_FILE), text)?;
    Ok(())
}

pub fn sha256_hex(path: &Path) -> anyhow::Result<String> {
    let mut file = File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hasher.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use hmhd_core::init;

    #[test]
    fn state_snapshots_round_trip() {
        let grid = Grid::new(8).unwrap();
        let state = init::taylor_green_like(grid, 0.3).unwrap();
        let dir = std::env::temp_dir().join(format!("hmhd-snap-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("state.snap");
        write_state(&path, &state).unwrap();
        let back = read_state(&path, grid).unwrap();
        let defect = (&back - &state).max_coeff_norm();
        let scale = state.max_coeff_norm();
        assert!(
            defect <= 1e-13 * scale,
            "physical-sample round trip should reproduce the state: defect {defect:.3e}"
        );
        let wrong = Grid::new(16).unwrap();
        assert!(read_state(&path, wrong).is_err(), "grid mismatch must be rejected");
        std::fs::remove_dir_all(&dir).ok();
    }
}
