//! Block profiles: the radial cut-off `chi` and annulus function `phi`.

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Inner radius of the smooth cut-off's transition band (chi = 1 below).
const CHI_INNER: f64 = 0.75;
/// Outer radius of the smooth cut-off's transition band (chi = 0 above).
const CHI_OUTER: f64 = 4.0 / 3.0;

/// How dyadic blocks are carved from the spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockProfile {
    /// Exact indicator of the annulus `2^j <= |kappa| < 2^(j+1)`.
    Sharp,
    /// Smooth partition built from a `C^inf` radial cut-off. The `taper`
    /// in `(0, 1]` scales the width of the transition region inside the
    /// band `[3/4, 4/3]`; `1.0` uses the full band.
    Smooth { taper: f64 },
}

impl BlockProfile {
    /// Smooth profile with the standard full-width transition.
    pub fn smooth() -> Self {
        BlockProfile::Smooth { taper: 1.0 }
    }

    /// Smooth profile with a narrowed transition band.
    pub fn smooth_with_taper(taper: f64) -> Result<Self> {
        if !(taper > 0.0 && taper <= 1.0) {
            return Err(Error::param(format!("taper must lie in (0, 1], got {taper}")));
        }
        Ok(BlockProfile::Smooth { taper })
    }

    /// The low-pass symbol `chi(rho)`: radial, non-increasing, equal to 1
    /// for `rho <= 3/4` and 0 for `rho >= 4/3` (sharp: indicator of
    /// `rho < 1`).
    pub fn chi(&self, rho: f64) -> f64 {
        match *self {
            BlockProfile::Sharp => {
                if rho < 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            BlockProfile::Smooth { taper } => {
                let mid = 0.5 * (CHI_INNER + CHI_OUTER);
                let half = 0.5 * taper * (CHI_OUTER - CHI_INNER);
                let (a, b) = (mid - half, mid + half);
                if rho <= a {
                    1.0
                } else if rho >= b {
                    0.0
                } else {
                    smoothstep((b - rho) / (b - a))
                }
            }
        }
    }

    /// The annulus symbol `phi(rho) = chi(rho/2) - chi(rho)`. Computing it
    /// as this exact difference makes telescoped sums of blocks reproduce
    /// the cut-off bit for bit.
    pub fn phi(&self, rho: f64) -> f64 {
        self.chi(0.5 * rho) - self.chi(rho)
    }

    /// Scale range `[j_min, j_max]` outside which every block of a field on
    /// `grid` vanishes identically (nonzero frequencies lie in
    /// `[2 pi / L, sqrt(3) * kappa_max]`).
    pub fn j_range(&self, grid: &Grid) -> (i32, i32) {
        let kappa_min = std::f64::consts::TAU / grid.length();
        let kappa_max = kappa_min * (grid.k_max() as f64) * 3.0_f64.sqrt();
        match self {
            BlockProfile::Sharp => (kappa_min.log2().floor() as i32, kappa_max.log2().floor() as i32),
            BlockProfile::Smooth { .. } => {
                // phi(2^-j kappa) != 0 requires a < 2^-j kappa < 2 b with
                // a >= 3/4 and b <= 4/3; pad by one scale on each side.
                ((kappa_min / (2.0 * CHI_OUTER)).log2().floor() as i32,
                 (kappa_max / CHI_INNER).log2().ceil() as i32)
            }
        }
    }
}

/// `C^inf` monotone step: 0 at `t <= 0`, 1 at `t >= 1`, built from
/// `e(t) = exp(-1/t)` as `e(t) / (e(t) + e(1-t))`.
fn smoothstep(t: f64) -> f64 {
    let e = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    let num = e(t);
    let den = num + e(1.0 - t);
    num / den
}
