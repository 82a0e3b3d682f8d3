//! Uniform collocation grid on the periodic box.
//!
//! Everything in the crate lives on `[0, L)^3` sampled at `n` equispaced
//! points per axis, with `n` even. Fourier modes carry integer wavevectors
//! `k` with each component in `[-n/2, n/2)`; the physical frequency of a
//! mode is `kappa = (2*pi/L) * k`, so on the default box `L = 2*pi` the two
//! coincide.

use crate::error::{Error, Result};

/// Resolution and period of the collocation grid.
///
/// Cheap to copy; every field and operator carries one and checks it against
/// its peers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    length: f64,
}

impl Grid {
    /// Grid with `n` points per axis on the default box of period `2*pi`.
    pub fn new(n: usize) -> Result<Self> {
        Self::with_length(n, std::f64::consts::TAU)
    }

    /// Grid with `n` points per axis on a box of period `length`.
    pub fn with_length(n: usize, length: f64) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidGridSize(n));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::param(format!("grid period must be positive, got {length}")));
        }
        Ok(Grid { n, length })
    }

    /// Points per axis.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Period of the box.
    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Total number of collocation points (and of stored modes), `n^3`.
    #[inline]
    pub fn size(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Volume of the box, `L^3`.
    #[inline]
    pub fn volume(&self) -> f64 {
        self.length.powi(3)
    }

    /// Quadrature weight of one collocation point, `(L/n)^3`.
    #[inline]
    pub fn cell_volume(&self) -> f64 {
        (self.length / self.n as f64).powi(3)
    }

    /// Linear index of the sample / mode at `(ix, iy, iz)`; `x` varies fastest.
    #[inline]
    pub fn idx(&self, ix: usize, iy: usize, iz: usize) -> usize {
        ix + self.n * (iy + self.n * iz)
    }

    /// Signed integer wavenumber of axis index `i`, in `[-n/2, n/2)`.
    #[inline]
    pub fn k_int(&self, i: usize) -> i64 {
        debug_assert!(i < self.n);
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Physical frequency of axis index `i`: `(2*pi/L) * k_int(i)`.
    #[inline]
    pub fn kappa(&self, i: usize) -> f64 {
        std::f64::consts::TAU / self.length * self.k_int(i) as f64
    }

    /// Per-axis signed wavenumbers as a vector, for tight multiplier loops.
    pub fn k_axis(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.kappa(i)).collect()
    }

    /// Largest usable integer wavenumber magnitude per axis, `n/2 - 1`.
    ///
    /// The plane `k = -n/2` has no conjugate partner on the grid, so real
    /// fields keep it empty (see [`crate::field::SpectralField`]).
    #[inline]
    pub fn k_max(&self) -> i64 {
        self.n as i64 / 2 - 1
    }

    /// Physical coordinate of sample index `i` along one axis.
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.length * i as f64 / self.n as f64
    }

    /// Check that `other` is the same grid, for binary operations.
    pub fn ensure_same(&self, other: &Grid, what: &str) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!(
                "{what}: {}^3 (L={}) vs {}^3 (L={})",
                self.n, self.length, other.n, other.length
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_tiny_sizes() {
        assert!(Grid::new(3).is_err());
        assert!(Grid::new(2).is_err());
        assert!(Grid::new(7).is_err());
        assert!(Grid::new(0).is_err());
        assert!(Grid::new(4).is_ok());
    }

    #[test]
    fn wavenumbers_cover_half_open_band() {
        let g = Grid::new(8).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.k_int(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert_eq!(g.k_max(), 3);
    }

    #[test]
    fn default_box_has_unit_frequency_spacing() {
        let g = Grid::new(8).unwrap();
        assert!((g.kappa(1) - 1.0).abs() < 1e-15);
        assert!((g.kappa(7) + 1.0).abs() < 1e-15);
        assert!((g.volume() - std::f64::consts::TAU.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn index_is_x_fastest() {
        let g = Grid::new(4).unwrap();
        assert_eq!(g.idx(1, 0, 0), 1);
        assert_eq!(g.idx(0, 1, 0), 4);
        assert_eq!(g.idx(0, 0, 1), 16);
    }
}
