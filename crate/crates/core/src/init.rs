//! Reproducible initial-condition families.
//!
//! Every family returns the extended state `(u, B, J)` with both fields
//! exactly divergence-free (by construction or by Leray projection) and
//! the current equal to the curl of the magnetic field. The circularly
//! polarized single-mode fields sit on the `|k|^2 = 5` shell, so their
//! free decay rate `e^{-5 nu t}` is fast enough for the late-time tail of
//! every blow-up integral to be a small fraction of the total over a unit
//! horizon.

use crate::error::{Error, Result};
use crate::field::{SpectralField, SpectralVectorField};
use crate::grid::Grid;
use crate::mhd::ExtendedState;
use crate::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn validate_amplitude(amplitude: f64) -> Result<()> {
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::param(format!(
            "amplitude must be finite and non-negative, got {amplitude}"
        )));
    }
    Ok(())
}

/// A circularly polarized single-mode field `A Re[(e1 + i e2) e^{i k x}]`
/// for an orthonormal right-handed triple `(e1, e2, k/|k|)`: an eigenmode
/// of the curl with eigenvalue `|k|`, with constant pointwise magnitude,
/// so its self-advection is a perfect gradient.
fn circular_mode(
    grid: Grid,
    k: [i64; 3],
    e1: [f64; 3],
    e2: [f64; 3],
    amplitude: f64,
) -> Result<SpectralVectorField> {
    let comp = |i: usize| -> Result<SpectralField> {
        let c = Complex::new(0.5 * amplitude * e1[i], 0.5 * amplitude * e2[i]);
        SpectralField::from_modes(grid, &[(k, c)])
    };
    SpectralVectorField::new([comp(0)?, comp(1)?, comp(2)?])
}

/// Correctly rounded `sqrt(5)`, the curl eigenvalue on the chosen shell.
fn sqrt5() -> f64 {
    5.0_f64.sqrt()
}

/// One circularly polarized mode per field, both on the `|k|^2 = 5` shell:
/// velocity at `k = (2, 1, 0)`, magnetic field at `k = (0, 2, 1)`. Each
/// field alone is curl-eigen (so its quadratic self-term vanishes); the
/// dynamics are driven by the velocity/magnetic cross terms.
pub fn single_mode(grid: Grid, amplitude: f64) -> Result<ExtendedState> {
    validate_amplitude(amplitude)?;
    let u = circular_mode(
        grid,
        [2, 1, 0],
        [1.0 / sqrt5(), -2.0 / sqrt5(), 0.0],
        [0.0, 0.0, -1.0],
        amplitude,
    )?;
    let b = circular_mode(
        grid,
        [0, 2, 1],
        [0.0, 1.0 / sqrt5(), -2.0 / sqrt5()],
        [-1.0, 0.0, 0.0],
        amplitude,
    )?;
    ExtendedState::from_velocity_magnetic(u, b)
}

/// Two circularly polarized modes of opposite helicity per field, all on
/// the `|k|^2 = 5` shell. Mixing helicities makes even the velocity
/// self-term nonzero, so every quadratic slot of the equations is
/// exercised from the first step.
pub fn two_mode_interaction(grid: Grid, amplitude: f64) -> Result<ExtendedState> {
    validate_amplitude(amplitude)?;
    let u1 = circular_mode(
        grid,
        [2, 1, 0],
        [1.0 / sqrt5(), -2.0 / sqrt5(), 0.0],
        [0.0, 0.0, -1.0],
        amplitude,
    )?;
    // (e1, e2, k/|k|) left-handed here: curl eigenvalue -|k|.
    let u2 = circular_mode(
        grid,
        [0, 1, 2],
        [0.0, 2.0 / sqrt5(), -1.0 / sqrt5()],
        [1.0, 0.0, 0.0],
        amplitude,
    )?;
    let b1 = circular_mode(
        grid,
        [0, 2, 1],
        [0.0, 1.0 / sqrt5(), -2.0 / sqrt5()],
        [-1.0, 0.0, 0.0],
        amplitude,
    )?;
    let b2 = circular_mode(
        grid,
        [1, 2, 0],
        [2.0 / sqrt5(), -1.0 / sqrt5(), 0.0],
        [0.0, 0.0, 1.0],
        amplitude,
    )?;
    ExtendedState::from_velocity_magnetic(&u1 + &u2, &b1 + &b2)
}

/// Divergence-free trigonometric product fields: the classic cellular
/// velocity `A (sin x1 cos x2 cos x3, -cos x1 sin x2 cos x3, 0)` paired
/// with the three-component magnetic pattern
/// `A (cos x1 sin x2 sin x3, sin x1 cos x2 sin x3, -2 sin x1 sin x2 cos x3)`.
pub fn taylor_green_like(grid: Grid, amplitude: f64) -> Result<ExtendedState> {
    validate_amplitude(amplitude)?;
    let a = amplitude;
    // Coefficients of the eight-mode trigonometric products, listed on the
    // k1 = +1 half-space representatives (s2, s3 = signs of k2, k3); the
    // conjugate modes are filled in automatically.
    let signs = [(1_i64, 1_i64), (1, -1), (-1, 1), (-1, -1)];
    let build = |f: &dyn Fn(f64, f64) -> Complex| -> Result<SpectralField> {
        let modes: Vec<([i64; 3], Complex)> =
            signs.iter().map(|&(s2, s3)| ([1, s2, s3], f(s2 as f64, s3 as f64))).collect();
        SpectralField::from_modes(grid, &modes)
    };
    // sin x1 cos x2 cos x3 -> -i/8 on every representative.
    let u1 = build(&|_, _| Complex::new(0.0, -a / 8.0))?;
    // -cos x1 sin x2 cos x3 -> i s2 / 8.
    let u2 = build(&|s2, _| Complex::new(0.0, a * s2 / 8.0))?;
    let u3 = SpectralField::zeros(grid);
    // cos x1 sin x2 sin x3 -> -s2 s3 / 8.
    let b1 = build(&|s2, s3| Complex::new(-a * s2 * s3 / 8.0, 0.0))?;
    // sin x1 cos x2 sin x3 -> -s3 / 8 (s1 = +1 on representatives).
    let b2 = build(&|_, s3| Complex::new(-a * s3 / 8.0, 0.0))?;
    // -2 sin x1 sin x2 cos x3 -> s2 / 4.
    let b3 = build(&|s2, _| Complex::new(a * s2 / 4.0, 0.0))?;
    ExtendedState::from_velocity_magnetic(
        SpectralVectorField::new([u1, u2, u3])?,
        SpectralVectorField::new([b1, b2, b3])?,
    )
}

/// Seeded random band-limited data: independent uniform complex draws on
/// every mode with `0 < max_i |k_i| <= band`, Leray-projected, then scaled
/// so each of `u` and `B` has `L^2` norm exactly `amplitude`.
///
/// Draw order is fixed (component-major, then lexicographic over the
/// conjugate half-space), so a seed fully determines the state.
pub fn random_bandlimited(
    grid: Grid,
    amplitude: f64,
    seed: u64,
    band: u32,
) -> Result<ExtendedState> {
    validate_amplitude(amplitude)?;
    if band == 0 {
        return Err(Error::param("band must be at least 1"));
    }
    if band as i64 > grid.k_max() {
        return Err(Error::param(format!(
            "band {} exceeds the usable range |k_i| <= {}",
            band,
            grid.k_max()
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let draw_vector = |rng: &mut ChaCha20Rng| -> Result<SpectralVectorField> {
        let mut comps = Vec::with_capacity(3);
        for _ in 0..3 {
            let mut modes = Vec::new();
            let r = band as i64;
            for kz in -r..=r {
                for ky in -r..=r {
                    for kx in -r..=r {
                        // One representative per conjugate pair.
                        let lead = kz > 0
                            || (kz == 0 && ky > 0)
                            || (kz == 0 && ky == 0 && kx > 0);
                        if !lead {
                            continue;
                        }
                        let re: f64 = rng.gen_range(-1.0..1.0);
                        let im: f64 = rng.gen_range(-1.0..1.0);
                        modes.push(([kx, ky, kz], Complex::new(re, im)));
                    }
                }
            }
            comps.push(SpectralField::from_modes(grid, &modes)?);
        }
        Ok(SpectralVectorField::new([
            comps.remove(0),
            comps.remove(0),
            comps.remove(0),
        ])?
        .leray_project())
    };
    let normalize = |f: SpectralVectorField| -> Result<SpectralVectorField> {
        if amplitude == 0.0 {
            return Ok(&f * 0.0);
        }
        let norm = f.l2_norm();
        if !(norm > 0.0) {
            return Err(Error::InvalidData("degenerate random draw (zero field)".into()));
        }
        Ok(&f * (amplitude / norm))
    };
    let u = normalize(draw_vector(&mut rng)?)?;
    let b = normalize(draw_vector(&mut rng)?)?;
    ExtendedState::from_velocity_magnetic(u, b)
}

/// Build a state from explicit coefficient lists: each entry places a
/// complex 3-vector amplitude at a wavevector (conjugate modes are added
/// automatically). Both fields are Leray-projected; the current is the
/// curl of the magnetic field.
pub fn from_mode_lists(
    grid: Grid,
    u_modes: &[([i64; 3], [Complex; 3])],
    b_modes: &[([i64; 3], [Complex; 3])],
) -> Result<ExtendedState> {
    let assemble = |entries: &[([i64; 3], [Complex; 3])]| -> Result<SpectralVectorField> {
        let comp = |i: usize| -> Result<SpectralField> {
            let modes: Vec<([i64; 3], Complex)> =
                entries.iter().map(|&(k, v)| (k, v[i])).collect();
            SpectralField::from_modes(grid, &modes)
        };
        Ok(SpectralVectorField::new([comp(0)?, comp(1)?, comp(2)?])?.leray_project())
    };
    ExtendedState::from_velocity_magnetic(assemble(u_modes)?, assemble(b_modes)?)
}
