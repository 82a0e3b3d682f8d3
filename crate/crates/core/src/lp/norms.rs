//! Lebesgue, Besov, Sobolev and time-integrated (Chemin-Lerner) norms.
//!
//! All norm functions take a slice of scalar components and treat it as one
//! vector-valued field: Lebesgue norms act on the pointwise Euclidean
//! magnitude, spectral norms sum `|c_k|^2` over the components. Passing a
//! single component recovers the scalar norms.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::lp::blocks::{apply_radial, radius_array};
use crate::lp::BesovSpec;

fn common_grid<'a>(comps: &[&'a SpectralField]) -> Result<&'a Grid> {
    let first = comps
        .first()
        .ok_or_else(|| Error::InvalidData("norm of an empty component list".into()))?;
    for c in &comps[1..] {
        first.grid().ensure_same(c.grid(), "norm components")?;
    }
    Ok(first.grid())
}

fn check_lebesgue_exponent(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(Error::ExponentOutOfRange(format!(
            "Lebesgue exponent must lie in [1, inf], got {p}"
        )));
    }
    Ok(())
}

/// `ell^r` accumulation of non-negative per-scale terms.
fn ell_r(terms: &[f64], r: f64) -> f64 {
    if r.is_infinite() {
        terms.iter().copied().fold(0.0, f64::max)
    } else if r == 1.0 {
        terms.iter().sum()
    } else {
        terms.iter().map(|t| t.powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

/// `L^p` norm of the Euclidean magnitude of a multi-component field.
///
/// `p = 2` is evaluated spectrally (Parseval, exact for represented fields),
/// `p = inf` as the collocation maximum of the magnitude (a lower bound for
/// the true sup norm), and other exponents by collocation quadrature, which
/// is exact whenever `|f|^p` is itself resolved on the grid.
pub fn lebesgue_norm(comps: &[&SpectralField], p: f64) -> Result<f64> {
    let grid = *common_grid(comps)?;
    check_lebesgue_exponent(p)?;
    if p == 2.0 {
        let sum: f64 = comps
            .iter()
            .map(|c| c.coeffs().iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sum();
        return Ok((grid.volume() * sum).sqrt());
    }
    let phys: Vec<Vec<f64>> = comps.iter().map(|c| c.to_physical()).collect();
    let magnitude_sq = |i: usize| -> f64 { phys.iter().map(|c| c[i] * c[i]).sum() };
    if p.is_infinite() {
        let mut worst = 0.0_f64;
        for i in 0..grid.size() {
            worst = worst.max(magnitude_sq(i));
        }
        Ok(worst.sqrt())
    } else {
        let mut total = 0.0_f64;
        for i in 0..grid.size() {
            total += magnitude_sq(i).powf(0.5 * p);
        }
        Ok((grid.cell_volume() * total).powf(1.0 / p))
    }
}

/// Homogeneous Besov norm `|| 2^(js) ||Delta_j f||_{L^p} ||_{ell^r}` over
/// the scales where blocks of grid fields can be nonzero.
pub fn besov_norm(comps: &[&SpectralField], spec: &BesovSpec) -> Result<f64> {
    let grid = *common_grid(comps)?;
    let radii = radius_array(&grid);
    let (lo, hi) = spec.profile.j_range(&grid);
    let mut terms = Vec::with_capacity((hi - lo + 1) as usize);
    for j in lo..=hi {
        let scale = 2.0_f64.powi(-j);
        let blocks: Vec<SpectralField> = comps
            .iter()
            .map(|c| apply_radial(c, &radii, |rho| spec.profile.phi(scale * rho)))
            .collect();
        if blocks.iter().all(|b| b.is_zero()) {
            continue;
        }
        let refs: Vec<&SpectralField> = blocks.iter().collect();
        terms.push(2.0_f64.powi(j).powf(spec.s) * lebesgue_norm(&refs, spec.p)?);
    }
    Ok(ell_r(&terms, spec.r))
}

/// Sobolev norm from the spectral sum `vol * sum_k w(kappa) |c_k|^2`, with
/// weight `|kappa|^(2s)` (homogeneous) or `(1 + |kappa|^2)^s`.
pub fn sobolev_norm(comps: &[&SpectralField], s: f64, homogeneous: bool) -> Result<f64> {
    let grid = *common_grid(comps)?;
    if !s.is_finite() {
        return Err(Error::ExponentOutOfRange(format!(
            "Sobolev smoothness must be finite, got {s}"
        )));
    }
    let radii = radius_array(&grid);
    let mut sum = 0.0_f64;
    for c in comps {
        for (v, &rho) in c.coeffs().iter().zip(&radii) {
            // The mean mode is always empty; skipping it keeps negative
            // smoothness from producing inf * 0.
            if rho == 0.0 {
                continue;
            }
            let weight = if homogeneous { rho.powf(2.0 * s) } else { (1.0 + rho * rho).powf(s) };
            sum += weight * v.norm_sqr();
        }
    }
    Ok((grid.volume() * sum).sqrt())
}

/// Time-integrated Besov norm: the per-scale block norms are raised to the
/// power `rho` and integrated in time (trapezoid rule) *before* the `ell^r`
/// sum over scales, following the Chemin-Lerner ordering. `rho = inf` takes
/// the supremum over the samples.
///
/// `times` must be strictly increasing with at least two entries; `frames`
/// holds the components of the field at each sample time.
pub fn chemin_lerner_norm(
    times: &[f64],
    frames: &[Vec<&SpectralField>],
    rho: f64,
    spec: &BesovSpec,
) -> Result<f64> {
    if !(rho >= 1.0) {
        return Err(Error::ExponentOutOfRange(format!(
            "time exponent must lie in [1, inf], got {rho}"
        )));
    }
    if times.len() != frames.len() {
        return Err(Error::InvalidData(format!(
            "{} sample times for {} frames",
            times.len(),
            frames.len()
        )));
    }
    if times.len() < 2 {
        return Err(Error::InvalidData(
            "time integration needs at least two samples".into(),
        ));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidData("sample times must be strictly increasing".into()));
    }
    let ncomp = frames[0].len();
    if ncomp == 0 || frames.iter().any(|f| f.len() != ncomp) {
        return Err(Error::InvalidData(
            "every frame must carry the same nonzero number of components".into(),
        ));
    }
    let grid = *common_grid(&frames[0])?;
    for frame in frames {
        common_grid(frame)?.ensure_same(&grid, "time frames")?;
    }

    let radii = radius_array(&grid);
    let (lo, hi) = spec.profile.j_range(&grid);
    let mut terms = Vec::with_capacity((hi - lo + 1) as usize);
    for j in lo..=hi {
        let scale = 2.0_f64.powi(-j);
        let weight = 2.0_f64.powi(j).powf(spec.s);
        let mut series = Vec::with_capacity(frames.len());
        for frame in frames {
            let blocks: Vec<SpectralField> = frame
                .iter()
                .map(|c| apply_radial(c, &radii, |radius| spec.profile.phi(scale * radius)))
                .collect();
            let refs: Vec<&SpectralField> = blocks.iter().collect();
            series.push(weight * lebesgue_norm(&refs, spec.p)?);
        }
        if series.iter().all(|&v| v == 0.0) {
            continue;
        }
        let value = if rho.is_infinite() {
            series.iter().copied().fold(0.0, f64::max)
        } else {
            let mut integral = 0.0;
            for i in 0..series.len() - 1 {
                integral += 0.5
                    * (times[i + 1] - times[i])
                    * (series[i].powf(rho) + series[i + 1].powf(rho));
            }
            integral.powf(1.0 / rho)
        };
        terms.push(value);
    }
    Ok(ell_r(&terms, spec.r))
}
