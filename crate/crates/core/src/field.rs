//! Spectral representation of real, mean-zero fields on the torus.
//!
//! A [`SpectralField`] stores the full cube of Fourier coefficients `c_k`,
//! one per integer wavevector with components in `[-n/2, n/2)`, of a real
//! scalar field `f(x) = sum_k c_k exp(i kappa . x)`. Construction
//! canonicalizes the data:
//!
//! * the mean mode `c_0` is forced to zero (all fields are mean-free), and
//! * the Nyquist planes (any component equal to `-n/2`) are cleared, since
//!   those modes have no conjugate partner on the grid and would stop real
//!   fields from being closed under differentiation.
//!
//! Conjugate symmetry `c_{-k} = conj(c_k)` is validated in debug builds and
//! preserved by every operation in the crate. Fields are immutable once
//! built; all operations return new fields.

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::Grid;
use crate::Complex;

/// Fourier coefficients of a real mean-zero scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex>,
}

impl SpectralField {
    /// The zero field.
    pub fn zeros(grid: Grid) -> Self {
        SpectralField { grid, coeffs: vec![Complex::default(); grid.size()] }
    }

    /// Build from a full coefficient cube (x-fastest layout).
    ///
    /// The mean mode and the Nyquist planes are cleared; conjugate symmetry
    /// of the remaining data is the caller's responsibility (checked in
    /// debug builds).
    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.len() != grid.size() {
            return Err(Error::InvalidData(format!(
                "coefficient cube has {} entries, grid needs {}",
                coeffs.len(),
                grid.size()
            )));
        }
        let mut field = SpectralField { grid, coeffs };
        field.canonicalize();
        debug_assert!(
            field.conjugate_symmetry_defect() <= 1e-10 * (1.0 + field.max_coeff_norm()),
            "coefficients are not conjugate-symmetric"
        );
        Ok(field)
    }

    /// Build from real samples at the collocation points (x-fastest layout).
    pub fn from_physical(grid: Grid, samples: &[f64]) -> Result<Self> {
        if samples.len() != grid.size() {
            return Err(Error::InvalidData(format!(
                "sample cube has {} entries, grid needs {}",
                samples.len(),
                grid.size()
            )));
        }
        let mut data: Vec<Complex> = samples.iter().map(|&s| Complex::new(s, 0.0)).collect();
        fft::forward3(grid.n(), &mut data);
        let mut field = SpectralField { grid, coeffs: data };
        field.canonicalize();
        Ok(field)
    }

    /// Build by placing coefficients at explicit wavevectors.
    ///
    /// Each entry `(k, c)` sets `c_k = c` and `c_{-k} = conj(c)`, so the
    /// result is automatically a real field. Wavevectors must lie in the
    /// usable band (`|k_i| <= n/2 - 1`, `k != 0`).
    pub fn from_modes(grid: Grid, modes: &[([i64; 3], Complex)]) -> Result<Self> {
        let mut coeffs = vec![Complex::default(); grid.size()];
        for &(k, c) in modes {
            if k == [0, 0, 0] {
                return Err(Error::InvalidData("cannot place amplitude at k = 0 (fields are mean-zero)".into()));
            }
            if k.iter().any(|&ki| ki.abs() > grid.k_max()) {
                return Err(Error::InvalidData(format!(
                    "wavevector ({}, {}, {}) outside the usable band |k_i| <= {}",
                    k[0], k[1], k[2], grid.k_max()
                )));
            }
            coeffs[index_of(&grid, k)] += c;
            coeffs[index_of(&grid, [-k[0], -k[1], -k[2]])] += c.conj();
        }
        SpectralField::from_coeffs(grid, coeffs)
    }

    /// Evaluate the field at the collocation points.
    pub fn to_physical(&self) -> Vec<f64> {
        let mut data = self.coeffs.clone();
        fft::inverse3(self.grid.n(), &mut data);
        debug_assert!(
            data.iter().map(|c| c.im.abs()).fold(0.0_f64, f64::max)
                <= 1e-9 * (1.0 + data.iter().map(|c| c.re.abs()).fold(0.0_f64, f64::max)),
            "inverse transform of a real field left imaginary residue"
        );
        data.into_iter().map(|c| c.re).collect()
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    #[inline]
    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex] {
        &mut self.coeffs
    }

    pub(crate) fn from_raw(grid: Grid, coeffs: Vec<Complex>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.size());
        SpectralField { grid, coeffs }
    }

    /// Coefficient at wavevector `k` (components in `[-n/2, n/2)`).
    pub fn coeff(&self, k: [i64; 3]) -> Complex {
        self.coeffs[index_of(&self.grid, k)]
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `L^2` norm over the box, via Parseval: `sqrt(vol * sum |c_k|^2)`.
    ///
    /// Because represented fields carry no Nyquist content, this equals the
    /// collocation quadrature norm exactly (up to rounding).
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum();
        (self.grid.volume() * sum).sqrt()
    }

    /// Collocation maximum of `|f|` (a lower bound for the true sup norm).
    pub fn linf_norm(&self) -> f64 {
        self.to_physical().iter().map(|s| s.abs()).fold(0.0, f64::max)
    }

    /// True if every coefficient is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// True if every coefficient is finite (no infinities, no NaN).
    ///
    /// This is the reliable overflow detector: maximum-based checks skip
    /// NaN because `f64::max` discards it.
    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Map every coefficient through `f(kappa, c)`, where `kappa` is the
    /// physical frequency vector of the mode.
    pub(crate) fn map_modes(&self, f: impl Fn([f64; 3], Complex) -> Complex) -> SpectralField {
        let n = self.grid.n();
        let ks = self.grid.k_axis();
        let mut out = vec![Complex::default(); self.coeffs.len()];
        let mut idx = 0;
        for iz in 0..n {
            let kz = ks[iz];
            for iy in 0..n {
                let ky = ks[iy];
                for ix in 0..n {
                    out[idx] = f([ks[ix], ky, kz], self.coeffs[idx]);
                    idx += 1;
                }
            }
        }
        SpectralField { grid: self.grid, coeffs: out }
    }

    /// Largest violation of `c_{-k} = conj(c_k)` over the usable band.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let n = self.grid.n();
        let mut worst = 0.0_f64;
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    let a = self.coeffs[self.grid.idx(ix, iy, iz)];
                    let b = self.coeffs[self.grid.idx((n - ix) % n, (n - iy) % n, (n - iz) % n)];
                    worst = worst.max((a - b.conj()).norm());
                }
            }
        }
        worst
    }

    /// Clear the mean mode and the Nyquist planes.
    fn canonicalize(&mut self) {
        let n = self.grid.n();
        self.coeffs[0] = Complex::default();
        let ny = n / 2;
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    if ix == ny || iy == ny || iz == ny {
                        self.coeffs[self.grid.idx(ix, iy, iz)] = Complex::default();
                    }
                }
            }
        }
    }
}

fn index_of(grid: &Grid, k: [i64; 3]) -> usize {
    let n = grid.n() as i64;
    let wrap = |ki: i64| -> usize {
        assert!(
            ki >= -n / 2 && ki < n / 2,
            "wavevector component {ki} outside [-{}, {})",
            n / 2,
            n / 2
        );
        ki.rem_euclid(n) as usize
    };
    grid.idx(wrap(k[0]), wrap(k[1]), wrap(k[2]))
}

/// Three-component real vector field in spectral form.
///
/// Components share one grid. Divergence-freeness is not forced — most
/// constructors in the crate produce exactly solenoidal fields, and
/// [`SpectralVectorField::div_defect_ratio`] measures the violation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVectorField {
    comps: [SpectralField; 3],
}

impl SpectralVectorField {
    pub fn zeros(grid: Grid) -> Self {
        SpectralVectorField {
            comps: [SpectralField::zeros(grid), SpectralField::zeros(grid), SpectralField::zeros(grid)],
        }
    }

    pub fn new(comps: [SpectralField; 3]) -> Result<Self> {
        comps[0].grid().ensure_same(comps[1].grid(), "vector components")?;
        comps[0].grid().ensure_same(comps[2].grid(), "vector components")?;
        Ok(SpectralVectorField { comps })
    }

    /// Build from three real sample cubes.
    pub fn from_physical(grid: Grid, samples: [&[f64]; 3]) -> Result<Self> {
        Ok(SpectralVectorField {
            comps: [
                SpectralField::from_physical(grid, samples[0])?,
                SpectralField::from_physical(grid, samples[1])?,
                SpectralField::from_physical(grid, samples[2])?,
            ],
        })
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        self.comps[0].grid()
    }

    #[inline]
    pub fn comp(&self, i: usize) -> &SpectralField {
        &self.comps[i]
    }

    #[inline]
    pub fn comps(&self) -> &[SpectralField; 3] {
        &self.comps
    }

    pub fn to_physical(&self) -> [Vec<f64>; 3] {
        [self.comps[0].to_physical(), self.comps[1].to_physical(), self.comps[2].to_physical()]
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.comps.iter().map(|c| c.max_coeff_norm()).fold(0.0, f64::max)
    }

    /// `L^2` norm of the vector magnitude.
    pub fn l2_norm(&self) -> f64 {
        let sum: f64 = self.comps.iter().map(|c| {
            c.coeffs().iter().map(|v| v.norm_sqr()).sum::<f64>()
        }).sum();
        (self.grid().volume() * sum).sqrt()
    }

    /// Collocation maximum of the pointwise Euclidean magnitude.
    pub fn linf_norm(&self) -> f64 {
        let [px, py, pz] = self.to_physical();
        px.iter()
            .zip(&py)
            .zip(&pz)
            .map(|((&a, &b), &c)| (a * a + b * b + c * c).sqrt())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// True if every coefficient of every component is finite.
    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|c| c.is_finite())
    }

    /// `max_k |kappa . v_k|` over modes, the absolute divergence defect.
    pub fn div_defect(&self) -> f64 {
        let grid = *self.grid();
        let n = grid.n();
        let ks = grid.k_axis();
        let mut worst = 0.0_f64;
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    let idx = grid.idx(ix, iy, iz);
                    let d = ks[ix] * self.comps[0].coeffs()[idx]
                        + ks[iy] * self.comps[1].coeffs()[idx]
                        + ks[iz] * self.comps[2].coeffs()[idx];
                    worst = worst.max(d.norm());
                }
            }
        }
        worst
    }

    /// Divergence defect scaled by the largest coefficient magnitude
    /// (0 for the zero field). Solenoidal fields keep this at rounding level.
    pub fn div_defect_ratio(&self) -> f64 {
        let scale = self.max_coeff_norm();
        if scale == 0.0 {
            0.0
        } else {
            self.div_defect() / scale
        }
    }
}

macro_rules! impl_field_linear_ops {
    ($ty:ty, $build:expr) => {
        impl std::ops::Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: Self) -> $ty {
                $build(self, rhs, |a: Complex, b: Complex| a + b)
            }
        }
        impl std::ops::Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: Self) -> $ty {
                $build(self, rhs, |a: Complex, b: Complex| a - b)
            }
        }
    };
}

fn zip_fields(a: &SpectralField, b: &SpectralField, f: impl Fn(Complex, Complex) -> Complex) -> SpectralField {
    a.grid().ensure_same(b.grid(), "field arithmetic").expect("field arithmetic on mismatched grids");
    let coeffs = a.coeffs().iter().zip(b.coeffs()).map(|(&x, &y)| f(x, y)).collect();
    SpectralField::from_raw(*a.grid(), coeffs)
}

fn zip_vectors(
    a: &SpectralVectorField,
    b: &SpectralVectorField,
    f: impl Fn(Complex, Complex) -> Complex + Copy,
) -> SpectralVectorField {
    SpectralVectorField {
        comps: [
            zip_fields(&a.comps[0], &b.comps[0], f),
            zip_fields(&a.comps[1], &b.comps[1], f),
            zip_fields(&a.comps[2], &b.comps[2], f),
        ],
    }
}

impl_field_linear_ops!(SpectralField, zip_fields);
impl_field_linear_ops!(SpectralVectorField, zip_vectors);

impl std::ops::Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, s: f64) -> SpectralField {
        let coeffs = self.coeffs().iter().map(|&c| c * s).collect();
        SpectralField::from_raw(*self.grid(), coeffs)
    }
}

impl std::ops::Mul<f64> for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn mul(self, s: f64) -> SpectralVectorField {
        SpectralVectorField { comps: [&self.comps[0] * s, &self.comps[1] * s, &self.comps[2] * s] }
    }
}

impl std::ops::Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self * -1.0
    }
}

impl std::ops::Neg for &SpectralVectorField {
    type Output = SpectralVectorField;
    fn neg(self) -> SpectralVectorField {
        self * -1.0
    }
}
