//! Incompressible Hall-MHD on the torus: physical parameters, the extended
//! `(u, B, J)` and electron-velocity `(u, B, v)` state representations, the
//! bilinear terms of both systems, and the exact dyadic rescaling that
//! normalizes viscosity and Hall number.
//!
//! The extended system treats the current `J` as an independent unknown,
//! reconstructing the magnetic field inside its own equation through the
//! inverse curl; on the invariant subspace `J = curl B` it reproduces the
//! original dynamics. All quadratic terms are evaluated pseudospectrally
//! with the 2/3-rule mask applied to inputs and outputs, which turns every
//! product into an exact truncated convolution and makes the algebraic
//! identities between the formulations hold to rounding.

use crate::error::{Error, Result};
use crate::field::{SpectralField, SpectralVectorField};
use crate::grid::Grid;
use crate::ops::{cross_product, forward_product, vector_inner_product_spectral};

/// Viscosity `mu`, magnetic diffusivity `nu`, and Hall coefficient `hall`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub mu: f64,
    pub nu: f64,
    pub hall: f64,
}

impl PhysParams {
    pub fn new(mu: f64, nu: f64, hall: f64) -> Result<Self> {
        for (name, value) in [("mu", mu), ("nu", nu)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::param(format!("{name} must be positive and finite, got {value}")));
            }
        }
        if !(hall.is_finite() && hall >= 0.0) {
            return Err(Error::param(format!("hall coefficient must be non-negative, got {hall}")));
        }
        Ok(PhysParams { mu, nu, hall })
    }

    /// All coefficients equal to one.
    pub fn uniform() -> Self {
        PhysParams { mu: 1.0, nu: 1.0, hall: 1.0 }
    }

    /// True when viscosity and magnetic diffusivity coincide, the regime in
    /// which the electron-velocity formulation closes.
    pub fn matched_diffusivities(&self) -> bool {
        self.mu == self.nu
    }
}

/// State of the extended system: velocity, magnetic field, and current as
/// an independent unknown (nominally `j = curl b`).
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedState {
    pub u: SpectralVectorField,
    pub b: SpectralVectorField,
    pub j: SpectralVectorField,
}

impl ExtendedState {
    pub fn new(u: SpectralVectorField, b: SpectralVectorField, j: SpectralVectorField) -> Result<Self> {
        u.grid().ensure_same(b.grid(), "state components")?;
        u.grid().ensure_same(j.grid(), "state components")?;
        Ok(ExtendedState { u, b, j })
    }

    pub fn zeros(grid: Grid) -> Self {
        ExtendedState {
            u: SpectralVectorField::zeros(grid),
            b: SpectralVectorField::zeros(grid),
            j: SpectralVectorField::zeros(grid),
        }
    }

    /// Build a consistent state from velocity and magnetic field, deriving
    /// the current as `j = curl b`.
    pub fn from_velocity_magnetic(u: SpectralVectorField, b: SpectralVectorField) -> Result<Self> {
        u.grid().ensure_same(b.grid(), "state components")?;
        let j = b.curl();
        Ok(ExtendedState { u, b, j })
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    /// Largest coefficient of `curl b - j`, the distance to the invariant
    /// subspace on which the extended system matches the original one.
    pub fn consistency_defect(&self) -> f64 {
        (&self.b.curl() - &self.j).max_coeff_norm()
    }

    /// Consistency defect normalized by the size of the current (0 for an
    /// identically zero current and curl).
    pub fn consistency_defect_ratio(&self) -> f64 {
        let scale = self.b.curl().max_coeff_norm().max(self.j.max_coeff_norm());
        if scale == 0.0 {
            0.0
        } else {
            self.consistency_defect() / scale
        }
    }

    /// Worst divergence defect ratio across the three components.
    pub fn div_defect_ratio(&self) -> f64 {
        self.u
            .div_defect_ratio()
            .max(self.b.div_defect_ratio())
            .max(self.j.div_defect_ratio())
    }

    /// Electron-velocity view of the same state: `v = u - hall * j`.
    pub fn to_electron(&self, params: &PhysParams) -> ElectronState {
        ElectronState {
            u: self.u.clone(),
            b: self.b.clone(),
            v: &self.u - &(&self.j * params.hall),
        }
    }

    /// Heat flow of the linearized system: `u` diffuses with `mu`, `b` and
    /// `j` with `nu`. Negative times amplify instead of damping.
    pub fn heat(&self, params: &PhysParams, t: f64) -> ExtendedState {
        ExtendedState {
            u: self.u.diffuse(params.mu, t),
            b: self.b.diffuse(params.nu, t),
            j: self.j.diffuse(params.nu, t),
        }
    }

    /// Root of the summed squared `L^2` norms of the three components.
    pub fn l2_norm(&self) -> f64 {
        (self.u.l2_norm().powi(2) + self.b.l2_norm().powi(2) + self.j.l2_norm().powi(2)).sqrt()
    }

    /// Largest coefficient magnitude across the three components.
    pub fn max_coeff_norm(&self) -> f64 {
        self.u.max_coeff_norm().max(self.b.max_coeff_norm()).max(self.j.max_coeff_norm())
    }

    /// True if every coefficient of every component is finite.
    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.b.is_finite() && self.j.is_finite()
    }

    /// True if every coefficient is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.b.is_zero() && self.j.is_zero()
    }
}

impl std::ops::Add for &ExtendedState {
    type Output = ExtendedState;
    fn add(self, rhs: Self) -> ExtendedState {
        ExtendedState { u: &self.u + &rhs.u, b: &self.b + &rhs.b, j: &self.j + &rhs.j }
    }
}

impl std::ops::Sub for &ExtendedState {
    type Output = ExtendedState;
    fn sub(self, rhs: Self) -> ExtendedState {
        ExtendedState { u: &self.u - &rhs.u, b: &self.b - &rhs.b, j: &self.j - &rhs.j }
    }
}

impl std::ops::Mul<f64> for &ExtendedState {
    type Output = ExtendedState;
    fn mul(self, s: f64) -> ExtendedState {
        ExtendedState { u: &self.u * s, b: &self.b * s, j: &self.j * s }
    }
}

/// State of the electron-velocity formulation: `v = u - hall * curl b` is
/// carried as its own unknown.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectronState {
    pub u: SpectralVectorField,
    pub b: SpectralVectorField,
    pub v: SpectralVectorField,
}

impl ElectronState {
    pub fn new(u: SpectralVectorField, b: SpectralVectorField, v: SpectralVectorField) -> Result<Self> {
        u.grid().ensure_same(b.grid(), "state components")?;
        u.grid().ensure_same(v.grid(), "state components")?;
        Ok(ElectronState { u, b, v })
    }

    /// Build from velocity and magnetic field with `v = u - hall * curl b`.
    pub fn from_velocity_magnetic(
        u: SpectralVectorField,
        b: SpectralVectorField,
        params: &PhysParams,
    ) -> Result<Self> {
        u.grid().ensure_same(b.grid(), "state components")?;
        let v = &u - &(&b.curl() * params.hall);
        Ok(ElectronState { u, b, v })
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    /// Recover the extended view, `j = (u - v) / hall`. The map is not
    /// invertible without the Hall term.
    pub fn to_extended(&self, params: &PhysParams) -> Result<ExtendedState> {
        if params.hall == 0.0 {
            return Err(Error::param(
                "cannot recover the current from the electron velocity at hall = 0",
            ));
        }
        Ok(ExtendedState {
            u: self.u.clone(),
            b: self.b.clone(),
            j: &(&self.u - &self.v) * (1.0 / params.hall),
        })
    }

    /// Heat flow of the linearized electron system; `u` and `v` diffuse
    /// with `mu`, `b` with `nu`.
    pub fn heat(&self, params: &PhysParams, t: f64) -> ElectronState {
        ElectronState {
            u: self.u.diffuse(params.mu, t),
            b: self.b.diffuse(params.nu, t),
            v: self.v.diffuse(params.mu, t),
        }
    }

    /// Largest coefficient magnitude across the three components.
    pub fn max_coeff_norm(&self) -> f64 {
        self.u.max_coeff_norm().max(self.b.max_coeff_norm()).max(self.v.max_coeff_norm())
    }

    /// True if every coefficient of every component is finite.
    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.b.is_finite() && self.v.is_finite()
    }
}

impl std::ops::Add for &ElectronState {
    type Output = ElectronState;
    fn add(self, rhs: Self) -> ElectronState {
        ElectronState { u: &self.u + &rhs.u, b: &self.b + &rhs.b, v: &self.v + &rhs.v }
    }
}

impl std::ops::Sub for &ElectronState {
    type Output = ElectronState;
    fn sub(self, rhs: Self) -> ElectronState {
        ElectronState { u: &self.u - &rhs.u, b: &self.b - &rhs.b, v: &self.v - &rhs.v }
    }
}

impl std::ops::Mul<f64> for &ElectronState {
    type Output = ElectronState;
    fn mul(self, s: f64) -> ElectronState {
        ElectronState { u: &self.u * s, b: &self.b * s, v: &self.v * s }
    }
}

/// Both tensor divergences `div(v (x) w)` and `div(w (x) v)` from one set
/// of pointwise products, with `(v (x) w)_(i, l) = v_i w_l` and the
/// divergence contracting the second index.
fn tensor_divergences(
    v: &SpectralVectorField,
    w: &SpectralVectorField,
    dealias: bool,
) -> Result<(SpectralVectorField, SpectralVectorField)> {
    v.grid().ensure_same(w.grid(), "tensor product")?;
    let grid = *v.grid();
    let (pv, pw);
    if dealias {
        pv = v.dealiased().to_physical();
        pw = w.dealiased().to_physical();
    } else {
        pv = v.to_physical();
        pw = w.to_physical();
    }
    let products: Vec<SpectralField> = (0..9)
        .map(|m| forward_product(grid, &pv[m / 3], &pw[m % 3], dealias))
        .collect();
    let row = |i: usize| -> SpectralVectorField {
        SpectralVectorField::new([
            products[3 * i].clone(),
            products[3 * i + 1].clone(),
            products[3 * i + 2].clone(),
        ])
        .expect("products share one grid")
    };
    let col = |i: usize| -> SpectralVectorField {
        SpectralVectorField::new([
            products[i].clone(),
            products[3 + i].clone(),
            products[6 + i].clone(),
        ])
        .expect("products share one grid")
    };
    let div_vw = SpectralVectorField::new([
        row(0).divergence(),
        row(1).divergence(),
        row(2).divergence(),
    ])?;
    let div_wv = SpectralVectorField::new([
        col(0).divergence(),
        col(1).divergence(),
        col(2).divergence(),
    ])?;
    Ok((div_vw, div_wv))
}

/// `div(v (x) w)`, the conservative form of `(w . grad) v + v div w`.
pub fn advective_div(
    v: &SpectralVectorField,
    w: &SpectralVectorField,
    dealias: bool,
) -> Result<SpectralVectorField> {
    Ok(tensor_divergences(v, w, dealias)?.0)
}

/// Symmetrized, Leray-projected transport bilinear
/// `P (div(v (x) w) + div(w (x) v)) / 2`; at `v = w` this is the projected
/// momentum flux `P div(v (x) v)`.
pub fn q_a(v: &SpectralVectorField, w: &SpectralVectorField, dealias: bool) -> Result<SpectralVectorField> {
    let (vw, wv) = tensor_divergences(v, w, dealias)?;
    Ok((&(&vw + &wv) * 0.5).leray_project())
}

/// Antisymmetric magnetic bilinear `div(v (x) w) - div(w (x) v)`, equal to
/// `curl (v x w)` as an exact convolution identity. The pairwise
/// antisymmetry of the mixed derivatives makes the result divergence-free
/// without projection.
pub fn q_b(v: &SpectralVectorField, w: &SpectralVectorField, dealias: bool) -> Result<SpectralVectorField> {
    let (vw, wv) = tensor_divergences(v, w, dealias)?;
    Ok(&vw - &wv)
}

/// Independent evaluation of [`q_b`] as `curl (v x w)`; kept as a second
/// code path for cross-validation.
pub fn q_b_curl_form(
    v: &SpectralVectorField,
    w: &SpectralVectorField,
    dealias: bool,
) -> Result<SpectralVectorField> {
    Ok(cross_product(v, w, dealias)?.curl())
}

/// Directional derivative `(v . grad) w` evaluated pseudospectrally.
pub fn directional_derivative(
    v: &SpectralVectorField,
    w: &SpectralVectorField,
    dealias: bool,
) -> Result<SpectralVectorField> {
    v.grid().ensure_same(w.grid(), "directional derivative")?;
    let grid = *v.grid();
    let pv = if dealias { v.dealiased().to_physical() } else { v.to_physical() };
    // gradient_components lists (axis, component) row-major by axis.
    let grads = if dealias { w.dealiased().gradient_components() } else { w.gradient_components() };
    let pg: Vec<Vec<f64>> = grads.iter().map(|g| g.to_physical()).collect();
    let size = grid.size();
    let mut comps: Vec<SpectralField> = Vec::with_capacity(3);
    for i in 0..3 {
        let mut samples = vec![0.0_f64; size];
        for axis in 0..3 {
            let dw = &pg[3 * axis + i];
            let va = &pv[axis];
            for m in 0..size {
                samples[m] += va[m] * dw[m];
            }
        }
        let mut f = SpectralField::from_physical(grid, &samples)?;
        if dealias {
            f = f.dealiased();
        }
        comps.push(f);
    }
    let [cx, cy, cz] = <[SpectralField; 3]>::try_from(comps).expect("three components");
    SpectralVectorField::new([cx, cy, cz])
}

/// The quasilinear Hall term `curl ((curl v) x b)`.
pub fn hall_quasilinear(
    v: &SpectralVectorField,
    b: &SpectralVectorField,
    dealias: bool,
) -> Result<SpectralVectorField> {
    Ok(cross_product(&v.curl(), b, dealias)?.curl())
}

/// The energy pairing `< curl((curl v) x b), v >` that vanishes for the
/// continuous system. Discretely it vanishes to rounding with or without
/// dealiasing: the spectral pairing equals the grid quadrature of the
/// pointwise triple product `((curl v) x b) . curl v`, whose integrand is
/// zero, and the product mask is self-adjoint and idempotent so masking
/// does not disturb the pairing. The raw (unnormalized) value is returned.
pub fn cancellation_residual(
    v: &SpectralVectorField,
    b: &SpectralVectorField,
    dealias: bool,
) -> Result<f64> {
    vector_inner_product_spectral(&hall_quasilinear(v, b, dealias)?, v)
}

/// The bilinear form of the extended system, evaluated at the state pair
/// `(y, w)`: component-wise
///
/// * velocity: `q_a(y.b, w.b) - q_a(y.u, w.u)`,
/// * magnetic field: `q_b(y.b, hall * w.j - w.u)`,
/// * current: `curl q_b(curl^-1 y.j, hall * w.j - w.u)`.
///
/// At `y = w` this is the full quadratic right-hand side minus dissipation.
/// Products are always dealiased here.
pub fn nonlinear_q(y: &ExtendedState, w: &ExtendedState, params: &PhysParams) -> Result<ExtendedState> {
    y.grid().ensure_same(w.grid(), "bilinear form arguments")?;
    let drift = &(&w.j * params.hall) - &w.u;
    let du = &q_a(&y.b, &w.b, true)? - &q_a(&y.u, &w.u, true)?;
    let db = q_b(&y.b, &drift, true)?;
    let dj = q_b(&y.j.curl_inverse(), &drift, true)?.curl();
    Ok(ExtendedState { u: du, b: db, j: dj })
}

/// Full right-hand side of the extended system (dissipation plus quadratic
/// terms) at the given state.
pub fn rhs_extended(state: &ExtendedState, params: &PhysParams) -> Result<ExtendedState> {
    let q = nonlinear_q(state, state, params)?;
    Ok(ExtendedState {
        u: &(&state.u.laplacian() * params.mu) + &q.u,
        b: &(&state.b.laplacian() * params.nu) + &q.b,
        j: &(&state.j.laplacian() * params.nu) + &q.j,
    })
}

/// Quadratic terms of the electron-velocity formulation, which closes only
/// for matched diffusivities `mu = nu`: the shared projected transport
/// feeds both the `u` and `v` slots, the magnetic slot advects `b` by the
/// electron velocity, and the `v` slot carries the quasilinear term, the
/// `curl(v x u)` exchange, and the doubled magnetic stretching.
pub fn nonlinear_electron(state: &ElectronState, params: &PhysParams) -> Result<ElectronState> {
    if !params.matched_diffusivities() {
        return Err(Error::param(format!(
            "electron-velocity form needs mu = nu, got mu = {}, nu = {}",
            params.mu, params.nu
        )));
    }
    let h = params.hall;
    let transport = &q_a(&state.b, &state.b, true)? - &q_a(&state.u, &state.u, true)?;
    let db = cross_product(&state.v, &state.b, true)?.curl();
    let stretch = directional_derivative(&state.v, &state.b, true)?.curl();
    let dv = &(&transport - &(&hall_quasilinear(&state.v, &state.b, true)? * h))
        + &(&cross_product(&state.v, &state.u, true)?.curl() + &(&stretch * (2.0 * h)));
    Ok(ElectronState { u: transport, b: db, v: dv })
}

/// Full right-hand side of the electron-velocity formulation (dissipation
/// plus quadratic terms).
pub fn rhs_electron(state: &ElectronState, params: &PhysParams) -> Result<ElectronState> {
    let q = nonlinear_electron(state, params)?;
    Ok(ElectronState {
        u: &(&state.u.laplacian() * params.mu) + &q.u,
        b: &(&state.b.laplacian() * params.nu) + &q.b,
        v: &(&state.v.laplacian() * params.mu) + &q.v,
    })
}

/// Exact dyadic self-similar rescaling normalizing viscosity and Hall
/// coefficient to one.
///
/// For `hall = 2^m` the map sends `(u, b)` to `(hall/mu) (u, b)(hall x)`
/// and `j` to `(hall^2/mu) j(hall x)`; the new coefficients are
/// `(1, nu/mu, 1)` and trajectories correspond through the returned time
/// dilation `hall^2/mu` (rescaled time runs slower by that factor). On the
/// fixed torus the dilation is exact only when every mode `k` of the state
/// maps to a representable mode `2^m k`, which is checked.
pub fn rescale_extended(
    state: &ExtendedState,
    params: &PhysParams,
) -> Result<(ExtendedState, PhysParams, f64)> {
    let h = params.hall;
    if !(h >= 1.0) || h.log2().fract() != 0.0 {
        return Err(Error::param(format!(
            "exact rescaling needs a dyadic Hall coefficient 2^m with m >= 0, got {h}"
        )));
    }
    let m = h.log2() as u32;
    let amp = h / params.mu;
    let rescaled = ExtendedState {
        u: &state.u.dilate(m)? * amp,
        b: &state.b.dilate(m)? * amp,
        j: &state.j.dilate(m)? * (h * h / params.mu),
    };
    let new_params = PhysParams::new(1.0, params.nu / params.mu, 1.0)?;
    Ok((rescaled, new_params, h * h / params.mu))
}
