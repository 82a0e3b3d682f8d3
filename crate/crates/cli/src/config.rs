//! Strict TOML run configuration: one file fully describes one experiment
//! (grid, time grid, physics, scheme, initial data, diagnostics, output
//! location). Unknown keys are rejected at every nesting level so that a
//! config echo always reproduces exactly the run that wrote it.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use hmhd_core::diag::DiagnosticsConfig;
use hmhd_core::init;
use hmhd_core::mhd::{ExtendedState, PhysParams};
use hmhd_core::solver::{Scheme, SolverConfig};
use hmhd_core::{Complex, Grid};

use crate::artifacts;

/// Complete description of one run, mirrored one-to-one into TOML.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSection,
    pub time: TimeSection,
    pub physics: PhysicsSection,
    pub scheme: SchemeSection,
    pub initial: InitialSection,
    #[serde(default)]
    pub diagnostics: DiagnosticsSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    /// Points per axis (even, at least 4).
    pub n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub dt: f64,
    /// Final time; must be an integer number of steps.
    pub t_final: f64,
    /// State snapshot stride in steps.
    #[serde(default = "default_save_every")]
    pub save_every: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsSection {
    pub mu: f64,
    pub nu: f64,
    pub hall: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSection {
    pub kind: SchemeKind,
    /// Fixed-point stopping tolerance (fixed-point schemes only).
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Fixed-point iteration cap (fixed-point schemes only).
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    /// Annulus cutoff; required for the truncated scheme.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub friedrichs_n: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Etd2,
    Picard,
    PicardSplit,
    Galerkin,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub family: Family,
    /// Required by every named family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    /// Random family only; `--seed` overrides.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Random family only: coefficients drawn on `0 < max_i |k_i| <= band`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<u32>,
    /// Snapshot family only; relative paths resolve against the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// Mode-list family only: explicit velocity coefficients.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub u_modes: Vec<ModeEntry>,
    /// Mode-list family only: explicit magnetic coefficients.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub b_modes: Vec<ModeEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    SingleMode,
    TwoModeInteraction,
    TaylorGreenLike,
    RandomBandlimited,
    ModeList,
    Snapshot,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::SingleMode => "single_mode",
            Family::TwoModeInteraction => "two_mode_interaction",
            Family::TaylorGreenLike => "taylor_green_like",
            Family::RandomBandlimited => "random_bandlimited",
            Family::ModeList => "mode_list",
            Family::Snapshot => "snapshot",
        }
    }
}

/// One explicit mode: integer wavenumber and a complex vector coefficient
/// (component-wise real and imaginary parts). The conjugate mode is implied.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeEntry {
    pub k: [i64; 3],
    pub re: [f64; 3],
    pub im: [f64; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsSection {
    /// Transform-heavy norms are sampled every this many steps.
    #[serde(default = "default_heavy_every")]
    pub heavy_every: usize,
    /// `[s, p, r]` rows of the norm table; `p` and `r` may be `inf`.
    #[serde(default = "default_besov")]
    pub besov: Vec<[f64; 3]>,
}

impl Default for DiagnosticsSection {
    fn default() -> Self {
        DiagnosticsSection { heavy_every: default_heavy_every(), besov: default_besov() }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Artifact directory; `--out` overrides.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

fn default_save_every() -> usize {
    1
}

fn default_tol() -> f64 {
    1e-10
}

fn default_max_iter() -> usize {
    20
}

fn default_heavy_every() -> usize {
    10
}

fn default_besov() -> Vec<[f64; 3]> {
    DiagnosticsConfig::default().besov_list.iter().map(|&(s, p, r)| [s, p, r]).collect()
}

impl RunConfig {
    /// Parse a config file; syntax and schema errors carry the file name
    /// and the offending position.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let config: RunConfig = toml::from_str(&text)
            .with_context(|| format!("invalid config {}", path.display()))?;
        Ok(config)
    }

    /// Apply command-line overrides and resolve all paths so the echoed
    /// config is self-contained: the snapshot path becomes absolute and the
    /// output directory is replaced by the effective one.
    pub fn resolve(
        mut self,
        config_path: &Path,
        out: Option<PathBuf>,
        seed: Option<u64>,
    ) -> anyhow::Result<Self> {
        if let Some(seed) = seed {
            if self.initial.family != Family::RandomBandlimited {
                bail!(
                    "--seed only applies to the random_bandlimited family, not {}",
                    self.initial.family.name()
                );
            }
            self.initial.seed = Some(seed);
        }
        if let Some(out) = out {
            self.output.dir = Some(out);
        }
        let base = config_path.parent().unwrap_or_else(|| Path::new("."));
        if let Some(p) = &self.initial.path {
            if p.is_relative() {
                self.initial.path = Some(std::path::absolute(base.join(p))?);
            }
        }
        if let Some(d) = &self.output.dir {
            self.output.dir = Some(std::path::absolute(d)?);
        }
        Ok(self)
    }

    pub fn output_dir(&self) -> anyhow::Result<&Path> {
        self.output
            .dir
            .as_deref()
            .ok_or_else(|| anyhow::anyhow!("no output directory: set [output] dir or pass --out"))
    }

    pub fn phys_params(&self) -> hmhd_core::Result<PhysParams> {
        PhysParams::new(self.physics.mu, self.physics.nu, self.physics.hall)
    }

    pub fn diagnostics_config(&self) -> DiagnosticsConfig {
        DiagnosticsConfig {
            besov_list: self.diagnostics.besov.iter().map(|&[s, p, r]| (s, p, r)).collect(),
            heavy_every: self.diagnostics.heavy_every,
        }
    }

    /// Assemble the solver description; every numeric constraint is
    /// re-validated by the solver itself.
    pub fn solver_config(&self) -> anyhow::Result<SolverConfig> {
        let scheme = match self.scheme.kind {
            SchemeKind::Etd2 => Scheme::Etd2,
            SchemeKind::Picard => Scheme::Picard,
            SchemeKind::PicardSplit => Scheme::PicardSplit,
            SchemeKind::Galerkin => Scheme::Galerkin,
        };
        let config = SolverConfig {
            n: self.grid.n,
            dt: self.time.dt,
            t_final: self.time.t_final,
            scheme,
            params: self.phys_params()?,
            tol: self.scheme.tol,
            max_iter: self.scheme.max_iter,
            friedrichs_n: self.scheme.friedrichs_n,
            save_every: self.time.save_every,
            diagnostics: self.diagnostics_config(),
        };
        config.validate()?;
        Ok(config)
    }

    /// Construct the initial state described by `[initial]`.
    pub fn initial_state(&self) -> anyhow::Result<ExtendedState> {
        let grid = Grid::new(self.grid.n)?;
        let init = &self.initial;
        let amplitude = || {
            init.amplitude.ok_or_else(|| {
                anyhow::anyhow!("family {} needs an amplitude", init.family.name())
            })
        };
        let forbid = |cond: bool, what: &str| {
            if cond {
                bail!("family {} does not take {what}", init.family.name());
            }
            Ok(())
        };
        forbid(
            init.family != Family::RandomBandlimited && (init.seed.is_some() || init.band.is_some()),
            "seed or band",
        )?;
        forbid(init.family != Family::Snapshot && init.path.is_some(), "a snapshot path")?;
        forbid(
            init.family != Family::ModeList
                && (!init.u_modes.is_empty() || !init.b_modes.is_empty()),
            "mode lists",
        )?;
        let state = match init.family {
            Family::SingleMode => init::single_mode(grid, amplitude()?)?,
            Family::TwoModeInteraction => init::two_mode_interaction(grid, amplitude()?)?,
            Family::TaylorGreenLike => init::taylor_green_like(grid, amplitude()?)?,
            Family::RandomBandlimited => {
                let seed = init
                    .seed
                    .ok_or_else(|| anyhow::anyhow!("random_bandlimited needs a seed"))?;
                let band = init
                    .band
                    .ok_or_else(|| anyhow::anyhow!("random_bandlimited needs a band"))?;
                init::random_bandlimited(grid, amplitude()?, seed, band)?
            }
            Family::ModeList => {
                forbid(init.amplitude.is_some(), "an amplitude (coefficients are explicit)")?;
                let convert = |entries: &[ModeEntry]| -> Vec<([i64; 3], [Complex; 3])> {
                    entries
                        .iter()
                        .map(|m| {
                            (
                                m.k,
                                [
                                    Complex::new(m.re[0], m.im[0]),
                                    Complex::new(m.re[1], m.im[1]),
                                    Complex::new(m.re[2], m.im[2]),
                                ],
                            )
                        })
                        .collect()
                };
                init::from_mode_lists(grid, &convert(&init.u_modes), &convert(&init.b_modes))?
            }
            Family::Snapshot => {
                forbid(init.amplitude.is_some(), "an amplitude (the snapshot is literal)")?;
                let path = init
                    .path
                    .as_ref()
                    .ok_or_else(|| anyhow::anyhow!("snapshot family needs a path"))?;
                artifacts::read_state(path, grid)
                    .with_context(|| format!("cannot load initial state {}", path.display()))?
            }
        };
        Ok(state)
    }

    pub fn to_toml(&self) -> anyhow::Result<String> {
        Ok(toml::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal(extra: &str) -> String {
        format!(
            "[grid]\nn = 8\n[time]\ndt = 0.01\nt_final = 0.05\n\
             [physics]\nmu = 1.0\nnu = 1.0\nhall = 1.0\n\
             [scheme]\nkind = \"etd2\"\n\
             [initial]\nfamily = \"single_mode\"\namplitude = 0.001\n{extra}"
        )
    }

    #[test]
    fn minimal_config_parses_and_validates() {
        let config: RunConfig = toml::from_str(&minimal("")).expect("minimal config must parse");
        assert_eq!(config.time.save_every, 1, "save stride should default to every step");
        assert_eq!(config.scheme.max_iter, 20, "iteration cap should have a default");
        config.solver_config().expect("defaults must validate");
        config.initial_state().expect("the named family must construct");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = toml::from_str::<RunConfig>(&minimal("typo_key = 1\n"))
            .expect_err("an unknown key must be an error");
        assert!(
            err.to_string().contains("typo_key"),
            "the message should name the offending key: {err}"
        );
    }

    #[test]
    fn family_parameter_mismatches_are_rejected() {
        let mut config: RunConfig = toml::from_str(&minimal("")).unwrap();
        config.initial.seed = Some(3);
        let err = config.initial_state().expect_err("seed on a deterministic family");
        assert!(err.to_string().contains("seed"), "message should say what is wrong: {err}");
    }

    #[test]
    fn infinite_norm_exponents_round_trip_through_toml() {
        let text = minimal("[diagnostics]\nbesov = [[0.5, 2.0, 1.0], [-0.5, inf, inf]]\n");
        let config: RunConfig = toml::from_str(&text).expect("inf must parse");
        let diag = config.diagnostics_config();
        assert!(diag.besov_list[1].1.is_infinite(), "p = inf should survive");
        let echoed = config.to_toml().unwrap();
        let back: RunConfig = toml::from_str(&echoed).expect("echo must re-parse");
        assert!(back.diagnostics_config().besov_list[1].2.is_infinite());
    }
}
