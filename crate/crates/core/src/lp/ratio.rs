//! Empirical left/right-hand-side ratios for the product, commutator,
//! Bernstein and interpolation inequalities underpinning the energy
//! estimates.
//!
//! Each case evaluates both sides of one inequality on concrete fields and
//! reports the ratio; nothing is asserted here. Parameter combinations
//! outside the validity range of an inequality are rejected with an error
//! so a sweep cannot silently probe a regime where the estimate fails.
//!
//! Products are formed without dealiasing, so callers probing inequalities
//! quantitatively should keep their inputs band-limited to half the usable
//! band to make the sampled products exact.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::lp::blocks::dyadic_block;
use crate::lp::bony::block_commutator;
use crate::lp::norms::{besov_norm, chemin_lerner_norm, lebesgue_norm, sobolev_norm};
use crate::lp::{BesovSpec, BlockProfile};
use crate::ops::pointwise_product;

/// One inequality instance: the fields it is evaluated on plus its
/// exponents. Dimensions are fixed at `d = 3` throughout.
#[derive(Debug, Clone)]
pub enum InequalityCase<'a> {
    /// Tame Sobolev product estimate, `sigma >= 0`:
    /// `||fg||_(H^sigma) <~ ||f||_inf ||g||_(H^sigma) + ||g||_inf ||f||_(H^sigma)`
    /// (homogeneous norms; the block profile is not used).
    SobolevTame { f: &'a SpectralField, g: &'a SpectralField, sigma: f64 },
    /// Tame Besov product estimate, `s > 0`:
    /// `||uv||_(B^s_(2,1)) <~ ||u||_inf ||v||_(B^s_(2,1)) + ||v||_inf ||u||_(B^s_(2,1))`.
    BesovTame { u: &'a SpectralField, v: &'a SpectralField, s: f64 },
    /// Product estimate in critical regularity, `s1, s2 <= 3/p` and
    /// `s1 + s2 > 3 max(0, 2/p - 1)`:
    /// `||uv||_(B^(s1+s2-3/p)_(p,1)) <~ ||u||_(B^s1_(p,1)) ||v||_(B^s2_(p,1))`.
    Product { u: &'a SpectralField, v: &'a SpectralField, s1: f64, s2: f64, p: f64 },
    /// Low-times-high product estimate, `rho > 2` (`inf` allowed):
    /// `||ab||_(B^(3/2)_(2,1)) <~ ||a||_(B^(2/rho-1)_(inf,inf)) ||b||_(B^(5/2-2/rho)_(2,1)) + (a <-> b)`.
    ProductLowHigh { a: &'a SpectralField, b: &'a SpectralField, rho: f64 },
    /// Commutator estimate, `0 < s <= 3/2`:
    /// `sum_j 2^(js) ||[Delta_j, b] a||_(L^2) <~ ||grad b||_inf ||a||_(B^(s-1)_(2,1)) + ||a||_(B^(-1)_(inf,inf)) ||grad b||_(B^s_(2,1))`.
    Commutator { b: &'a SpectralField, a: &'a SpectralField, s: f64 },
    /// Time-integrated commutator estimate, `r in [1, inf]`, `rho in (2, inf]`,
    /// `1/rho' = 1 - 1/rho`; the left side is the `ell^r` norm over scales of
    /// `2^(js) ||[Delta_j, b] a||` in `L^1` of time against `L^2` of space,
    /// the right side pairs time-integrated Besov norms of `grad b` and `a`
    /// at dual time exponents.
    CommutatorTime {
        times: &'a [f64],
        b_series: &'a [SpectralField],
        a_series: &'a [SpectralField],
        s: f64,
        r: f64,
        rho: f64,
    },
    /// Bernstein derivative bound on one block:
    /// `||grad Delta_j f||_(L^p) <= 2^(j+1) ||Delta_j f||_(L^p)` — an exact
    /// bound for the sharp profile at `p = 2`, empirical otherwise.
    Bernstein { f: &'a SpectralField, j: i32, p: f64 },
    /// Convexity interpolation, `theta in (0, 1)`, `s < s_tilde`:
    /// `||u||_(B^m_(p,1)) <~ ||u||^theta_(B^s_(p,inf)) ||u||^(1-theta)_(B^s~_(p,inf))`
    /// with `m = theta s + (1 - theta) s_tilde`.
    Interpolation { u: &'a SpectralField, s: f64, s_tilde: f64, theta: f64, p: f64 },
}

/// Evaluated sides of one inequality instance.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl std::fmt::Display for RatioReport {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            out,
            "{}: lhs = {:.6e}, rhs = {:.6e}, ratio = {:.6}",
            self.name, self.lhs, self.rhs, self.ratio
        )
    }
}

fn report(name: &'static str, lhs: f64, rhs: f64) -> RatioReport {
    let ratio = if rhs == 0.0 {
        if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        lhs / rhs
    };
    RatioReport { name, lhs, rhs, ratio }
}

fn require(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange(what.into()))
    }
}

fn check_times(times: &[f64], blen: usize, alen: usize) -> Result<()> {
    if times.len() != blen || times.len() != alen {
        return Err(Error::InvalidData(format!(
            "{} sample times for series of lengths {} and {}",
            times.len(),
            blen,
            alen
        )));
    }
    if times.len() < 2 || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidData(
            "need at least two strictly increasing sample times".into(),
        ));
    }
    Ok(())
}

/// Evaluate both sides of the inequality on the given fields, using
/// `profile` for every dyadic block involved.
pub fn inequality_ratio(case: &InequalityCase, profile: &BlockProfile) -> Result<RatioReport> {
    match *case {
        InequalityCase::SobolevTame { f, g, sigma } => {
            require(sigma >= 0.0, "tame Sobolev estimate needs sigma >= 0")?;
            let fg = pointwise_product(f, g, false)?;
            let lhs = sobolev_norm(&[&fg], sigma, true)?;
            let rhs = lebesgue_norm(&[f], f64::INFINITY)? * sobolev_norm(&[g], sigma, true)?
                + lebesgue_norm(&[g], f64::INFINITY)? * sobolev_norm(&[f], sigma, true)?;
            Ok(report("sobolev_tame", lhs, rhs))
        }
        InequalityCase::BesovTame { u, v, s } => {
            require(s > 0.0, "tame Besov estimate needs s > 0")?;
            let spec = BesovSpec::new(s, 2.0, 1.0, *profile)?;
            let uv = pointwise_product(u, v, false)?;
            let lhs = besov_norm(&[&uv], &spec)?;
            let rhs = lebesgue_norm(&[u], f64::INFINITY)? * besov_norm(&[v], &spec)?
                + lebesgue_norm(&[v], f64::INFINITY)? * besov_norm(&[u], &spec)?;
            Ok(report("besov_tame", lhs, rhs))
        }
        InequalityCase::Product { u, v, s1, s2, p } => {
            require(p >= 1.0, "product estimate needs p >= 1")?;
            let dp = 3.0 / p;
            require(s1 <= dp && s2 <= dp, "product estimate needs s1, s2 <= 3/p")?;
            require(
                s1 + s2 > 3.0 * (2.0 / p - 1.0).max(0.0),
                "product estimate needs s1 + s2 > 3 max(0, 2/p - 1)",
            )?;
            let uv = pointwise_product(u, v, false)?;
            let lhs = besov_norm(&[&uv], &BesovSpec::new(s1 + s2 - dp, p, 1.0, *profile)?)?;
            let rhs = besov_norm(&[u], &BesovSpec::new(s1, p, 1.0, *profile)?)?
                * besov_norm(&[v], &BesovSpec::new(s2, p, 1.0, *profile)?)?;
            Ok(report("product", lhs, rhs))
        }
        InequalityCase::ProductLowHigh { a, b, rho } => {
            require(rho > 2.0, "low-high product estimate needs rho > 2")?;
            let e = if rho.is_infinite() { 0.0 } else { 2.0 / rho };
            let low = BesovSpec::new(e - 1.0, f64::INFINITY, f64::INFINITY, *profile)?;
            let high = BesovSpec::new(2.5 - e, 2.0, 1.0, *profile)?;
            let ab = pointwise_product(a, b, false)?;
            let lhs = besov_norm(&[&ab], &BesovSpec::new(1.5, 2.0, 1.0, *profile)?)?;
            let rhs = besov_norm(&[a], &low)? * besov_norm(&[b], &high)?
                + besov_norm(&[b], &low)? * besov_norm(&[a], &high)?;
            Ok(report("product_low_high", lhs, rhs))
        }
        InequalityCase::Commutator { b, a, s } => {
            require(s > 0.0 && s <= 1.5, "commutator estimate needs s in (0, 3/2]")?;
            let (lo, hi) = profile.j_range(a.grid());
            let mut lhs = 0.0;
            for j in lo..=hi {
                let c = block_commutator(j, b, a, profile)?;
                lhs += 2.0_f64.powi(j).powf(s) * c.l2_norm();
            }
            let grad = b.gradient();
            let grefs: Vec<&SpectralField> = grad.comps().iter().collect();
            let rhs = lebesgue_norm(&grefs, f64::INFINITY)?
                * besov_norm(&[a], &BesovSpec::new(s - 1.0, 2.0, 1.0, *profile)?)?
                + besov_norm(&[a], &BesovSpec::new(-1.0, f64::INFINITY, f64::INFINITY, *profile)?)?
                    * besov_norm(&grefs, &BesovSpec::new(s, 2.0, 1.0, *profile)?)?;
            Ok(report("commutator", lhs, rhs))
        }
        InequalityCase::CommutatorTime { times, b_series, a_series, s, r, rho } => {
            require(r >= 1.0, "time commutator estimate needs r in [1, inf]")?;
            require(rho > 2.0, "time commutator estimate needs rho in (2, inf]")?;
            check_times(times, b_series.len(), a_series.len())?;
            let e = if rho.is_infinite() { 0.0 } else { 2.0 / rho };
            let rho_dual = if rho.is_infinite() { 1.0 } else { rho / (rho - 1.0) };

            let grid = a_series[0].grid();
            let (lo, hi) = profile.j_range(grid);
            let mut terms = Vec::new();
            for j in lo..=hi {
                let series: Vec<f64> = b_series
                    .iter()
                    .zip(a_series)
                    .map(|(b, a)| block_commutator(j, b, a, profile).map(|c| c.l2_norm()))
                    .collect::<Result<_>>()?;
                if series.iter().all(|&v| v == 0.0) {
                    continue;
                }
                let mut integral = 0.0;
                for i in 0..series.len() - 1 {
                    integral += 0.5 * (times[i + 1] - times[i]) * (series[i] + series[i + 1]);
                }
                terms.push(2.0_f64.powi(j).powf(s) * integral);
            }
            let lhs = if r.is_infinite() {
                terms.iter().copied().fold(0.0, f64::max)
            } else {
                terms.iter().map(|t| t.powf(r)).sum::<f64>().powf(1.0 / r)
            };

            let grads: Vec<crate::field::SpectralVectorField> =
                b_series.iter().map(|b| b.gradient()).collect();
            let grad_frames: Vec<Vec<&SpectralField>> =
                grads.iter().map(|g| g.comps().iter().collect()).collect();
            let a_frames: Vec<Vec<&SpectralField>> = a_series.iter().map(|a| vec![a]).collect();
            let low_b = BesovSpec::new(e - 1.0, f64::INFINITY, f64::INFINITY, *profile)?;
            let mid_a = BesovSpec::new(s - e, 2.0, r, *profile)?;
            let high_b = BesovSpec::new(s + 1.0 - e, 2.0, r, *profile)?;
            let low_a = BesovSpec::new(e - 2.0, f64::INFINITY, f64::INFINITY, *profile)?;
            let rhs = chemin_lerner_norm(times, &grad_frames, rho, &low_b)?
                * chemin_lerner_norm(times, &a_frames, rho_dual, &mid_a)?
                + chemin_lerner_norm(times, &grad_frames, rho_dual, &high_b)?
                    * chemin_lerner_norm(times, &a_frames, rho, &low_a)?;
            Ok(report("commutator_time", lhs, rhs))
        }
        InequalityCase::Bernstein { f, j, p } => {
            require(p >= 1.0, "Bernstein bound needs p >= 1")?;
            let block = dyadic_block(f, j, profile);
            let grad = block.gradient();
            let grefs: Vec<&SpectralField> = grad.comps().iter().collect();
            let lhs = lebesgue_norm(&grefs, p)?;
            let rhs = 2.0_f64.powi(j + 1) * lebesgue_norm(&[&block], p)?;
            Ok(report("bernstein", lhs, rhs))
        }
        InequalityCase::Interpolation { u, s, s_tilde, theta, p } => {
            require(theta > 0.0 && theta < 1.0, "interpolation needs theta in (0, 1)")?;
            require(s < s_tilde, "interpolation needs s < s_tilde")?;
            require(p >= 1.0, "interpolation needs p >= 1")?;
            let mid = theta * s + (1.0 - theta) * s_tilde;
            let lhs = besov_norm(&[u], &BesovSpec::new(mid, p, 1.0, *profile)?)?;
            let rhs = besov_norm(&[u], &BesovSpec::new(s, p, f64::INFINITY, *profile)?)?
                .powf(theta)
                * besov_norm(&[u], &BesovSpec::new(s_tilde, p, f64::INFINITY, *profile)?)?
                    .powf(1.0 - theta);
            Ok(report("interpolation", lhs, rhs))
        }
    }
}
