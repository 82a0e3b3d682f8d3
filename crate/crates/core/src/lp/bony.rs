//! Paraproduct splitting of a pointwise product and block commutators.
//!
//! The product of two fields splits into two paraproducts (low frequencies
//! of one factor against blocks of the other) and a remainder collecting
//! the block pairs at comparable scales. The pieces are accumulated in
//! physical space from the same per-scale blocks, so every scale pair
//! `(j', j)` lands in exactly one piece and the three parts sum to the
//! plain collocation product up to rounding, for either block profile.
//! Products are taken without dealiasing: the decomposition is an identity
//! for the sampled product, whatever the bandwidth of the factors.

use crate::error::Result;
use crate::field::SpectralField;
use crate::lp::blocks::dyadic_block;
use crate::lp::BlockProfile;
use crate::ops::pointwise_product;

/// The three pieces of the product splitting `uv = T_uv + T_vu + R`.
#[derive(Debug, Clone)]
pub struct BonyDecomposition {
    /// Paraproduct with `u` carrying the low frequencies: `sum_j S_(j-1)u * Delta_j v`.
    pub t_uv: SpectralField,
    /// Paraproduct with `v` carrying the low frequencies: `sum_j S_(j-1)v * Delta_j u`.
    pub t_vu: SpectralField,
    /// Remainder `sum_(|j-j'| <= 1) Delta_j u * Delta_j' v`.
    pub remainder: SpectralField,
}

/// Split the product `uv` into paraproducts and remainder.
///
/// The low-pass factors `S_(j-1)` are formed as running sums of the blocks
/// rather than through the cut-off multiplier directly; the two agree up to
/// rounding, and the running sum guarantees the exact pairwise bookkeeping
/// described in the module docs.
pub fn bony_decomposition(
    u: &SpectralField,
    v: &SpectralField,
    profile: &BlockProfile,
) -> Result<BonyDecomposition> {
    u.grid().ensure_same(v.grid(), "paraproduct factors")?;
    let grid = *u.grid();
    let size = grid.size();
    let (lo, hi) = profile.j_range(&grid);
    let nshells = (hi - lo + 1) as usize;

    let ublocks: Vec<Vec<f64>> =
        (lo..=hi).map(|j| dyadic_block(u, j, profile).to_physical()).collect();
    let vblocks: Vec<Vec<f64>> =
        (lo..=hi).map(|j| dyadic_block(v, j, profile).to_physical()).collect();

    let mut t_uv = vec![0.0_f64; size];
    let mut t_vu = vec![0.0_f64; size];
    let mut remainder = vec![0.0_f64; size];
    // Running sums su = sum_(j' <= j-2) of the u blocks (likewise sv), kept
    // in step with the shell loop below.
    let mut su = vec![0.0_f64; size];
    let mut sv = vec![0.0_f64; size];

    for jj in 0..nshells {
        for i in 0..size {
            t_uv[i] += su[i] * vblocks[jj][i];
            t_vu[i] += sv[i] * ublocks[jj][i];
        }
        for d in -1_i64..=1 {
            let other = jj as i64 + d;
            if other < 0 || other >= nshells as i64 {
                continue;
            }
            let vb = &vblocks[other as usize];
            for i in 0..size {
                remainder[i] += ublocks[jj][i] * vb[i];
            }
        }
        if jj >= 1 {
            for i in 0..size {
                su[i] += ublocks[jj - 1][i];
                sv[i] += vblocks[jj - 1][i];
            }
        }
    }

    Ok(BonyDecomposition {
        t_uv: SpectralField::from_physical(grid, &t_uv)?,
        t_vu: SpectralField::from_physical(grid, &t_vu)?,
        remainder: SpectralField::from_physical(grid, &remainder)?,
    })
}

/// Block commutator `[Delta_j, b] a = Delta_j(b a) - b Delta_j a`, with
/// plain (un-dealiased) collocation products.
pub fn block_commutator(
    j: i32,
    b: &SpectralField,
    a: &SpectralField,
    profile: &BlockProfile,
) -> Result<SpectralField> {
    b.grid().ensure_same(a.grid(), "commutator factors")?;
    let whole = dyadic_block(&pointwise_product(b, a, false)?, j, profile);
    let moved = pointwise_product(b, &dyadic_block(a, j, profile), false)?;
    Ok(&whole - &moved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Complex, Grid};

    fn sample_pair(g: Grid) -> (SpectralField, SpectralField) {
        let u = SpectralField::from_modes(
            g,
            &[
                ([1, 0, 0], Complex::new(0.7, 0.0)),
                ([2, 1, 0], Complex::new(0.3, -0.2)),
                ([0, 4, 3], Complex::new(-0.1, 0.4)),
            ],
        )
        .unwrap();
        let v = SpectralField::from_modes(
            g,
            &[
                ([0, 1, 0], Complex::new(0.5, 0.1)),
                ([3, 0, 2], Complex::new(0.2, 0.2)),
                ([5, 1, 1], Complex::new(0.15, -0.05)),
            ],
        )
        .unwrap();
        (u, v)
    }

    #[test]
    fn pieces_sum_to_the_product_for_both_profiles() {
        let g = Grid::new(16).unwrap();
        let (u, v) = sample_pair(g);
        let product = pointwise_product(&u, &v, false).unwrap();
        for profile in [BlockProfile::Sharp, BlockProfile::smooth()] {
            let parts = bony_decomposition(&u, &v, &profile).unwrap();
            let total = &(&parts.t_uv + &parts.t_vu) + &parts.remainder;
            let defect = (&total - &product).max_coeff_norm();
            let scale = product.max_coeff_norm();
            assert!(
                defect <= 1e-12 * scale.max(1.0),
                "splitting defect {defect} for {profile:?}"
            );
        }
    }

    #[test]
    fn splitting_is_symmetric_under_swapping_the_factors() {
        let g = Grid::new(16).unwrap();
        let (u, v) = sample_pair(g);
        let profile = BlockProfile::Sharp;
        let ab = bony_decomposition(&u, &v, &profile).unwrap();
        let ba = bony_decomposition(&v, &u, &profile).unwrap();
        assert!((&ab.t_uv - &ba.t_vu).max_coeff_norm() < 1e-13);
        assert!((&ab.t_vu - &ba.t_uv).max_coeff_norm() < 1e-13);
        assert!((&ab.remainder - &ba.remainder).max_coeff_norm() < 1e-13);
    }

    #[test]
    fn paraproduct_of_separated_scales_is_the_whole_product() {
        let g = Grid::new(32).unwrap();
        // u in shell 0, v in shell 3: the remainder pairs (|j - j'| <= 1)
        // and the opposite paraproduct never meet any content.
        let u = SpectralField::from_modes(g, &[([1, 0, 0], Complex::new(0.8, 0.0))]).unwrap();
        let v = SpectralField::from_modes(g, &[([0, 9, 0], Complex::new(0.4, 0.2))]).unwrap();
        let parts = bony_decomposition(&u, &v, &BlockProfile::Sharp).unwrap();
        assert!(parts.t_vu.is_zero(), "high-against-low paraproduct must vanish");
        assert!(parts.remainder.is_zero(), "diagonal remainder must vanish");
        let product = pointwise_product(&u, &v, false).unwrap();
        assert!((&parts.t_uv - &product).max_coeff_norm() < 1e-13);
    }

    #[test]
    fn commutator_coefficients_follow_the_block_weight_differences() {
        let g = Grid::new(32).unwrap();
        // b = cos(x2), a = cos(7 x2): the product has modes at |kappa| = 6
        // (shell 2) and |kappa| = 8 (shell 3), while a itself sits in shell 2.
        let b = SpectralField::from_modes(g, &[([0, 1, 0], Complex::new(0.5, 0.0))]).unwrap();
        let a = SpectralField::from_modes(g, &[([0, 7, 0], Complex::new(0.5, 0.0))]).unwrap();
        let sharp = BlockProfile::Sharp;

        // j = 2 keeps the 6-mode but subtracts the whole product: what is
        // left is minus the 8-mode part.
        let c2 = block_commutator(2, &b, &a, &sharp).unwrap();
        assert!((c2.coeff([0, 8, 0]) - Complex::new(-0.25, 0.0)).norm() < 1e-13);
        assert!(c2.coeff([0, 6, 0]).norm() < 1e-13);

        // j = 3 keeps only the 8-mode and subtracts nothing.
        let c3 = block_commutator(3, &b, &a, &sharp).unwrap();
        assert!((c3.coeff([0, 8, 0]) - Complex::new(0.25, 0.0)).norm() < 1e-13);
        assert!(c3.coeff([0, 6, 0]).norm() < 1e-13);

        // Shells that see neither the product nor a: transform noise only.
        let c0 = block_commutator(0, &b, &a, &sharp).unwrap();
        assert!(c0.max_coeff_norm() < 1e-14, "empty shell left {}", c0.max_coeff_norm());

        // Summed over all scales the commutators telescope to zero.
        let (lo, hi) = sharp.j_range(&g);
        let mut total = SpectralField::zeros(g);
        for j in lo..=hi {
            total = &total + &block_commutator(j, &b, &a, &sharp).unwrap();
        }
        assert!(total.max_coeff_norm() < 1e-13, "sum over scales {}", total.max_coeff_norm());
    }
}
