//! Dyadic (Littlewood-Paley) frequency analysis.
//!
//! A block profile selects how the frequency annuli are carved out:
//!
//! * **sharp** — block `j` is the exact indicator of `2^j <= |kappa| < 2^(j+1)`,
//!   an orthogonal decomposition with clean scaling identities;
//! * **smooth** — block `j` is `phi(kappa / 2^j)` with `phi(xi) = chi(xi/2) - chi(xi)`,
//!   where `chi` is a radial non-increasing cut-off equal to 1 on the ball of
//!   radius 3/4 and vanishing outside radius 4/3, built from the classical
//!   `exp(-1/x)` bump so all transitions are infinitely smooth.
//!
//! Either way the blocks sum to the identity on mean-zero grid fields, and
//! the low-frequency cut-off `S_j = chi(2^-j D)` equals the telescoped sum
//! of blocks below `j` exactly, which makes the paraproduct splitting an
//! identity in floating point (see [`bony`]).
//!
//! On top of the blocks sit Besov norms (`ell^r` over scales of weighted
//! block Lebesgue norms), Sobolev norms, time-integrated (Chemin-Lerner)
//! norms, block commutators and an empirical ratio harness for the product
//! and commutator inequalities used in the well-posedness analysis.

mod blocks;
mod bony;
mod norms;
mod profile;
mod ratio;

pub use blocks::{dyadic_block, low_cutoff};
pub use bony::{block_commutator, bony_decomposition, BonyDecomposition};
pub use norms::{besov_norm, chemin_lerner_norm, lebesgue_norm, sobolev_norm};
pub use profile::BlockProfile;
pub use ratio::{inequality_ratio, InequalityCase, RatioReport};

use crate::error::{Error, Result};

/// Parameters `(s, p, r)` of a homogeneous Besov norm together with the
/// block profile used to evaluate it. `p` and `r` may be `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq)]
pub struct BesovSpec {
    pub s: f64,
    pub p: f64,
    pub r: f64,
    pub profile: BlockProfile,
}

impl BesovSpec {
    pub fn new(s: f64, p: f64, r: f64, profile: BlockProfile) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::ExponentOutOfRange(format!("Besov smoothness must be finite, got {s}")));
        }
        for (name, value) in [("p", p), ("r", r)] {
            if !(value >= 1.0) {
                return Err(Error::ExponentOutOfRange(format!(
                    "Besov integrability {name} must lie in [1, inf], got {value}"
                )));
            }
        }
        Ok(BesovSpec { s, p, r, profile })
    }

    /// Shorthand for the sharp-profile norm.
    pub fn sharp(s: f64, p: f64, r: f64) -> Result<Self> {
        BesovSpec::new(s, p, r, BlockProfile::Sharp)
    }
}
