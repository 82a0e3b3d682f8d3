//! End-to-end tests of the `hmhd` binary: exit-code contract, strict
//! determinism of the CSV artifacts, manifest hashing, config echo
//! re-runnability, and the three comparison maps.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

use hmhd_core::init;
use hmhd_core::mhd::{rescale_extended, ExtendedState, PhysParams};
use hmhd_core::Grid;

static DIR_COUNTER: AtomicUsize = AtomicUsize::new(0);

/// Fresh scratch directory per call; unique across parallel tests.
fn scratch(tag: &str) -> PathBuf {
    let id = DIR_COUNTER.fetch_add(1, Ordering::SeqCst);
    let dir = std::env::temp_dir().join(format!("hmhd-cli-{}-{tag}-{id}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch directory");
    dir
}

fn hmhd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmhd"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process should exit normally")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).expect("config should write");
    path
}

/// A fast, well-resolved base configuration. The amplitude uses `{:?}` so
/// whole numbers stay TOML floats.
fn base_config(out_dir: &Path, amplitude: f64) -> String {
    format!(
        "[grid]\nn = 8\n\n[time]\ndt = 0.01\nt_final = 0.05\nsave_every = 1\n\n\
         [physics]\nmu = 1.0\nnu = 1.0\nhall = 1.0\n\n\
         [scheme]\nkind = \"etd2\"\n\n\
         [initial]\nfamily = \"single_mode\"\namplitude = {amplitude:?}\n\n\
         [diagnostics]\nheavy_every = 1\n\n\
         [output]\ndir = \"{}\"\n",
        out_dir.display()
    )
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()))
}

#[test]
fn simulate_writes_reproducible_artifacts_and_a_complete_manifest() {
    let dir = scratch("repro");
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    let config = write_config(&dir, "run.toml", &base_config(&out_a, 1e-3));

    let run_a = hmhd(&["simulate", "--config", config.to_str().unwrap(), "--strict-deterministic"]);
    assert_eq!(exit_code(&run_a), 0, "run A should succeed: {}", stderr(&run_a));
    let run_b = hmhd(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_b.to_str().unwrap(),
        "--strict-deterministic",
    ]);
    assert_eq!(exit_code(&run_b), 0, "run B should succeed: {}", stderr(&run_b));

    // Identical config => byte-identical CSVs and snapshots.
    for rel in ["diagnostics.csv", "norms.csv", "snapshots/index.csv", "snapshots/state_000000.snap"]
    {
        let a = std::fs::read(out_a.join(rel)).expect(rel);
        let b = std::fs::read(out_b.join(rel)).expect(rel);
        assert_eq!(a, b, "{rel} should be byte-identical across runs");
    }

    // The energy-defect column of a completed small-data run stays small.
    let diagnostics = read(&out_a.join("diagnostics.csv"));
    let mut rows = 0;
    for line in diagnostics.lines().skip(1) {
        let defect: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(defect.abs() <= 1e-4, "energy defect column exceeded 1e-4: {line}");
        rows += 1;
    }
    assert_eq!(rows, 6, "five steps plus the initial record");

    // Manifest hashes every artifact correctly and the echo re-runs.
    let manifest = read(&out_a.join("manifest.toml"));
    assert!(manifest.contains("status = \"completed\""), "manifest should record success");
    let hash_line = manifest
        .lines()
        .find(|l| l.starts_with("\"diagnostics.csv\""))
        .expect("manifest lists diagnostics.csv");
    let mut hasher = <sha2::Sha256 as sha2::Digest>::new();
    sha2::Digest::update(&mut hasher, std::fs::read(out_a.join("diagnostics.csv")).unwrap());
    let digest: String =
        sha2::Digest::finalize(hasher).iter().map(|b| format!("{b:02x}")).collect();
    assert!(hash_line.contains(&digest), "manifest hash should match the file contents");

    let out_c = dir.join("c");
    let echo = out_a.join("config_echo.toml");
    let rerun = hmhd(&[
        "simulate",
        "--config",
        echo.to_str().unwrap(),
        "--out",
        out_c.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&rerun), 0, "the config echo must be re-runnable: {}", stderr(&rerun));
    assert_eq!(
        std::fs::read(out_a.join("diagnostics.csv")).unwrap(),
        std::fs::read(out_c.join("diagnostics.csv")).unwrap(),
        "a run reproduced from its echo should match byte for byte"
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn zero_initial_data_produces_all_zero_diagnostics() {
    let dir = scratch("zero");
    let out = dir.join("out");
    let config = write_config(&dir, "zero.toml", &base_config(&out, 0.0));
    let run = hmhd(&["simulate", "--config", config.to_str().unwrap()]);
    assert_eq!(exit_code(&run), 0, "zero data should evolve cleanly: {}", stderr(&run));
    for line in read(&out.join("diagnostics.csv")).lines().skip(1) {
        for cell in line.split(',').skip(1) {
            let value: f64 = cell.parse().expect("numeric cell");
            assert_eq!(value, 0.0, "zero data must give an all-zero row: {line}");
        }
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_one() {
    let missing = hmhd(&["simulate", "--config", "/nonexistent/run.toml"]);
    assert_eq!(exit_code(&missing), 1, "missing config is a usage error");
    assert!(
        stderr(&missing).contains("cannot read config"),
        "the message should name the problem: {}",
        stderr(&missing)
    );

    let dir = scratch("usage");
    let bad = write_config(
        &dir,
        "bad.toml",
        &format!("{}mystery_knob = 3\n", base_config(&dir.join("o"), 1e-3)),
    );
    let rejected = hmhd(&["simulate", "--config", bad.to_str().unwrap()]);
    assert_eq!(exit_code(&rejected), 1, "unknown keys are usage errors");
    let message = stderr(&rejected);
    assert!(
        message.contains("mystery_knob") && message.contains("line"),
        "the parse error should carry the key and its position: {message}"
    );

    let unknown_suite = hmhd(&["verify", "--suite", "nonsense"]);
    assert_eq!(exit_code(&unknown_suite), 1, "unknown suite is a usage error");
    assert!(
        stderr(&unknown_suite).contains("unknown suite"),
        "the message should list the options: {}",
        stderr(&unknown_suite)
    );

    let no_subcommand = hmhd(&[]);
    assert_eq!(exit_code(&no_subcommand), 1, "a bare invocation is a usage error");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_identities_passes_and_prints_per_check_lines() {
    let run = hmhd(&["verify", "--suite", "identities"]);
    assert_eq!(exit_code(&run), 0, "the identity suite should pass: {}", stdout(&run));
    let text = stdout(&run);
    assert!(text.contains("suite identities"), "suite header expected: {text}");
    let pass_lines = text.lines().filter(|l| l.contains("[pass]")).count();
    assert!(pass_lines >= 5, "expected at least five pass lines, got {pass_lines}: {text}");
    assert!(!text.contains("[FAIL]"), "no check should fail: {text}");
}

#[test]
fn blow_up_exits_three_and_keeps_partial_artifacts() {
    let dir = scratch("blowup");
    let out = dir.join("out");
    let body = format!(
        "[grid]\nn = 8\n\n[time]\ndt = 0.1\nt_final = 1.0\nsave_every = 1\n\n\
         [physics]\nmu = 0.001\nnu = 0.001\nhall = 1.0\n\n\
         [scheme]\nkind = \"etd2\"\n\n\
         [initial]\nfamily = \"single_mode\"\namplitude = 1e8\n\n\
         [output]\ndir = \"{}\"\n",
        out.display()
    );
    let config = write_config(&dir, "blowup.toml", &body);
    let run = hmhd(&["simulate", "--config", config.to_str().unwrap()]);
    assert_eq!(exit_code(&run), 3, "a non-finite state must exit 3: {}", stderr(&run));
    assert!(stdout(&run).contains("stopped early"), "the stop should be announced");
    let manifest = read(&out.join("manifest.toml"));
    assert!(manifest.contains("status = \"blow_up\""), "manifest should flag the stop");
    assert!(manifest.contains("[blow_up]"), "manifest should carry the stop position");
    assert!(
        out.join("diagnostics.csv").exists() && out.join("snapshots/index.csv").exists(),
        "partial artifacts must be kept"
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn non_contracting_fixed_point_exits_two() {
    let dir = scratch("picard");
    let out = dir.join("out");
    let body = format!(
        "[grid]\nn = 8\n\n[time]\ndt = 0.05\nt_final = 0.2\nsave_every = 1\n\n\
         [physics]\nmu = 1.0\nnu = 1.0\nhall = 1.0\n\n\
         [scheme]\nkind = \"picard\"\ntol = 1e-10\nmax_iter = 4\n\n\
         [initial]\nfamily = \"single_mode\"\namplitude = 50.0\n\n\
         [output]\ndir = \"{}\"\n",
        out.display()
    );
    let config = write_config(&dir, "large.toml", &body);
    let run = hmhd(&["simulate", "--config", config.to_str().unwrap()]);
    assert_eq!(exit_code(&run), 2, "non-contraction must exit 2: {}", stderr(&run));
    assert!(
        stdout(&run).contains("converged = false"),
        "the report should be printed: {}",
        stdout(&run)
    );
    let manifest = read(&out.join("manifest.toml"));
    assert!(
        manifest.contains("status = \"fixed_point_non_contracting\""),
        "manifest should record the non-contraction"
    );
    assert!(out.join("fixed_point.csv").exists(), "the residual table must be kept");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn compare_identical_runs_gives_exactly_zero_distance() {
    let dir = scratch("cmpzero");
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    let config = write_config(&dir, "run.toml", &base_config(&out_a, 1e-3));
    assert_eq!(exit_code(&hmhd(&["simulate", "--config", config.to_str().unwrap()])), 0);
    let again = hmhd(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_b.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&again), 0);
    let cmp_out = dir.join("cmp");
    let cmp = hmhd(&[
        "compare",
        out_a.to_str().unwrap(),
        out_b.to_str().unwrap(),
        "schemes",
        "--out",
        cmp_out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&cmp), 0, "comparison should succeed: {}", stderr(&cmp));
    for line in read(&cmp_out.join("compare.csv")).lines().skip(1) {
        let distance: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(distance, 0.0, "identical runs must be at distance exactly zero: {line}");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn compare_rejects_incompatible_runs_with_a_reason() {
    let dir = scratch("cmpbad");
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    let config_a = write_config(&dir, "a.toml", &base_config(&out_a, 1e-3));
    let body_b = base_config(&out_b, 1e-3).replace("n = 8", "n = 16");
    let config_b = write_config(&dir, "b.toml", &body_b);
    assert_eq!(exit_code(&hmhd(&["simulate", "--config", config_a.to_str().unwrap()])), 0);
    assert_eq!(exit_code(&hmhd(&["simulate", "--config", config_b.to_str().unwrap()])), 0);
    let cmp = hmhd(&["compare", out_a.to_str().unwrap(), out_b.to_str().unwrap(), "schemes"]);
    assert_eq!(exit_code(&cmp), 1, "grid mismatch is a rejection");
    assert!(
        stderr(&cmp).contains("equal grids"),
        "the reason should be stated: {}",
        stderr(&cmp)
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn rescaling_compare_matches_the_dyadic_map() {
    let dir = scratch("cmprescale");
    let out_a = dir.join("a");
    let out_b = dir.join("b");

    // Run A: hall = 2 on the coarse grid.
    let body_a = format!(
        "[grid]\nn = 8\n\n[time]\ndt = 0.01\nt_final = 0.05\nsave_every = 1\n\n\
         [physics]\nmu = 1.0\nnu = 1.0\nhall = 2.0\n\n\
         [scheme]\nkind = \"etd2\"\n\n\
         [initial]\nfamily = \"single_mode\"\namplitude = 1e-3\n\n\
         [output]\ndir = \"{}\"\n",
        out_a.display()
    );
    let config_a = write_config(&dir, "a.toml", &body_a);
    let run_a = hmhd(&["simulate", "--config", config_a.to_str().unwrap()]);
    assert_eq!(exit_code(&run_a), 0, "{}", stderr(&run_a));

    // Run B evolves the rescaled data on the doubled grid with the dilated
    // time grid; its initial snapshot is built with the library map.
    let coarse = Grid::new(8).unwrap();
    let fine = Grid::new(16).unwrap();
    let params = PhysParams::new(1.0, 1.0, 2.0).unwrap();
    let a0 = init::single_mode(coarse, 1e-3).unwrap();
    let embedded = ExtendedState {
        u: a0.u.prolong(fine).unwrap(),
        b: a0.b.prolong(fine).unwrap(),
        j: a0.j.prolong(fine).unwrap(),
    };
    let (b0, scaled, dilation) = rescale_extended(&embedded, &params).unwrap();
    assert_eq!(dilation, 4.0, "hall 2 with unit viscosity dilates time by 4");
    let snap_path = dir.join("b0.snap");
    {
        use hmhd_core::snapshot::RawSnapshot;
        let mut components = Vec::new();
        for field in [&b0.u, &b0.b, &b0.j] {
            let [x, y, z] = field.to_physical();
            components.extend([x, y, z]);
        }
        RawSnapshot { n: fine.n(), components }
            .write_to(std::fs::File::create(&snap_path).unwrap())
            .unwrap();
    }
    let body_b = format!(
        "[grid]\nn = 16\n\n[time]\ndt = 0.0025\nt_final = 0.0125\nsave_every = 1\n\n\
         [physics]\nmu = {:?}\nnu = {:?}\nhall = {:?}\n\n\
         [scheme]\nkind = \"etd2\"\n\n\
         [initial]\nfamily = \"snapshot\"\npath = \"{}\"\n\n\
         [output]\ndir = \"{}\"\n",
        scaled.mu,
        scaled.nu,
        scaled.hall,
        snap_path.display(),
        out_b.display()
    );
    let config_b = write_config(&dir, "b.toml", &body_b);
    let run_b = hmhd(&["simulate", "--config", config_b.to_str().unwrap()]);
    assert_eq!(exit_code(&run_b), 0, "{}", stderr(&run_b));

    let cmp_out = dir.join("cmp");
    let cmp = hmhd(&[
        "compare",
        out_a.to_str().unwrap(),
        out_b.to_str().unwrap(),
        "rescaling",
        "--out",
        cmp_out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&cmp), 0, "rescaling comparison should run: {}", stderr(&cmp));
    for line in read(&cmp_out.join("compare.csv")).lines().skip(1) {
        let rel: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(
            rel <= 1e-10,
            "the two trajectories should correspond under the dyadic map: {line}"
        );
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn analyze_recomputes_reports_from_snapshots() {
    let dir = scratch("analyze");
    let out = dir.join("out");
    let config = write_config(&dir, "run.toml", &base_config(&out, 1e-2));
    assert_eq!(exit_code(&hmhd(&["simulate", "--config", config.to_str().unwrap()])), 0);
    let run = hmhd(&["analyze", out.to_str().unwrap()]);
    assert_eq!(exit_code(&run), 0, "analysis should succeed: {}", stderr(&run));
    let analysis = read(&out.join("analysis/analysis.csv"));
    for metric in [
        "energy_max_relative_defect",
        "consistency_max",
        "smallness_extended",
        "sup_integral",
        "gronwall_satisfied",
    ] {
        let line = analysis
            .lines()
            .find(|l| l.starts_with(metric))
            .unwrap_or_else(|| panic!("analysis.csv should carry {metric}"));
        let value: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(value.is_finite(), "{metric} should be finite: {line}");
    }
    let monitors = read(&out.join("analysis/monitors.csv"));
    assert_eq!(
        monitors.lines().count(),
        1 + 6,
        "one monitor row per saved state plus the header"
    );
    std::fs::remove_dir_all(&dir).ok();
}
