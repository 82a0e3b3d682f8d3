//! Dyadic block and low-frequency cut-off operators.

use crate::field::SpectralField;
use crate::grid::Grid;
use crate::lp::BlockProfile;

/// `|kappa|` for every stored mode, in grid layout.
pub(crate) fn radius_array(grid: &Grid) -> Vec<f64> {
    let n = grid.n();
    let ks = grid.k_axis();
    let mut out = vec![0.0; grid.size()];
    for iz in 0..n {
        for iy in 0..n {
            for ix in 0..n {
                let (kx, ky, kz) = (ks[ix], ks[iy], ks[iz]);
                out[grid.idx(ix, iy, iz)] = (kx * kx + ky * ky + kz * kz).sqrt();
            }
        }
    }
    out
}

/// Apply a radial symbol to a field given the precomputed radius array.
pub(crate) fn apply_radial(f: &SpectralField, radii: &[f64], symbol: impl Fn(f64) -> f64) -> SpectralField {
    let mut out = f.clone();
    for (c, &rho) in out.coeffs_mut().iter_mut().zip(radii) {
        *c *= symbol(rho);
    }
    out
}

/// Dyadic block `Delta_j f`: multiplier `phi(2^-j |kappa|)`.
pub fn dyadic_block(f: &SpectralField, j: i32, profile: &BlockProfile) -> SpectralField {
    let radii = radius_array(f.grid());
    let scale = 2.0_f64.powi(-j);
    apply_radial(f, &radii, |rho| profile.phi(scale * rho))
}

/// Low-frequency cut-off `S_j f`: multiplier `chi(2^-j |kappa|)`. Equals the
/// sum of all blocks strictly below `j` on grid fields.
pub fn low_cutoff(f: &SpectralField, j: i32, profile: &BlockProfile) -> SpectralField {
    let radii = radius_array(f.grid());
    let scale = 2.0_f64.powi(-j);
    apply_radial(f, &radii, |rho| profile.chi(scale * rho))
}
