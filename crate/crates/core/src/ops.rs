//! Fourier-multiplier calculus and pointwise (physical-space) products.
//!
//! Differential operators act exactly on the represented band: gradient and
//! divergence multiply by `i kappa`, curl by `i kappa x`, the Laplacian by
//! `-|kappa|^2`. The inverse curl `i kappa x . / |kappa|^2` recovers a
//! divergence-free vector potential-free representative (mean mode zero by
//! convention). Products are computed on the collocation grid; with the
//! dealiasing flag set, the 2/3-rule mask (zero all modes with any
//! `|k_i| > n/3`) is applied to **both inputs and the output**, which makes
//! the product the exact truncated convolution of the masked inputs — the
//! discrete algebraic identities the solver relies on (Leibniz rearrangements,
//! pointwise cancellations) are exact in floating point under this rule.

use crate::error::Result;
use crate::field::{SpectralField, SpectralVectorField};
use crate::grid::Grid;
use crate::Complex;

const I: Complex = Complex::new(0.0, 1.0);

impl SpectralField {
    /// Gradient, `(i kappa) c_k` per component.
    pub fn gradient(&self) -> SpectralVectorField {
        let comps = std::array::from_fn(|axis| {
            self.map_modes(|k, c| I * k[axis] * c)
        });
        SpectralVectorField::new(comps).expect("components share the source grid")
    }

    /// Laplacian, `-|kappa|^2 c_k`.
    pub fn laplacian(&self) -> SpectralField {
        self.map_modes(|k, c| -(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) * c)
    }

    /// Copy with the 2/3-rule mask applied: modes with any `|k_i| > n/3`
    /// are zeroed.
    pub fn dealiased(&self) -> SpectralField {
        let bound = dealias_bound(self.grid());
        let n = self.grid().n();
        let keep: Vec<bool> = (0..n).map(|i| self.grid().k_int(i).abs() <= bound).collect();
        let mut out = self.clone();
        let grid = *self.grid();
        let coeffs = out.coeffs_mut();
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    if !(keep[ix] && keep[iy] && keep[iz]) {
                        coeffs[grid.idx(ix, iy, iz)] = Complex::default();
                    }
                }
            }
        }
        out
    }

    /// Heat flow `exp(t * diffusivity * Laplacian)` applied to the field.
    pub fn diffuse(&self, diffusivity: f64, t: f64) -> SpectralField {
        self.map_modes(|k, c| {
            let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            c * (-diffusivity * t * k2).exp()
        })
    }

    /// Dyadic spatial dilation `x -> 2^m x`: moves the coefficient at `k`
    /// to `2^m k` (amplitudes unchanged). The input must be band-limited to
    /// `|k_i| <= (n/2 - 1) / 2^m` so every target mode stays on the grid.
    pub fn dilate(&self, m: u32) -> Result<SpectralField> {
        let factor = 1i64 << m;
        let bound = self.grid().k_max() / factor;
        let grid = *self.grid();
        let n = grid.n();
        let mut out = vec![Complex::default(); grid.size()];
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    let c = self.coeffs()[grid.idx(ix, iy, iz)];
                    if c == Complex::default() {
                        continue;
                    }
                    let k = [grid.k_int(ix), grid.k_int(iy), grid.k_int(iz)];
                    if k.iter().any(|&ki| ki.abs() > bound) {
                        return Err(crate::error::Error::InvalidData(format!(
                            "dilation by 2^{m} needs band limit |k_i| <= {bound}, found content at ({}, {}, {})",
                            k[0], k[1], k[2]
                        )));
                    }
                    let kk = [k[0] * factor, k[1] * factor, k[2] * factor];
                    let wrap = |ki: i64| ki.rem_euclid(n as i64) as usize;
                    out[grid.idx(wrap(kk[0]), wrap(kk[1]), wrap(kk[2]))] = c;
                }
            }
        }
        Ok(SpectralField::from_raw(grid, out))
    }

    /// Inverse of [`SpectralField::dilate`]: moves `2^m k` back to `k`.
    /// Errors if any content sits on a mode not divisible by `2^m`.
    pub fn undilate(&self, m: u32) -> Result<SpectralField> {
        let factor = 1i64 << m;
        let grid = *self.grid();
        let n = grid.n();
        let mut out = vec![Complex::default(); grid.size()];
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    let c = self.coeffs()[grid.idx(ix, iy, iz)];
                    if c == Complex::default() {
                        continue;
                    }
                    let k = [grid.k_int(ix), grid.k_int(iy), grid.k_int(iz)];
                    if k.iter().any(|&ki| ki % factor != 0) {
                        return Err(crate::error::Error::InvalidData(format!(
                            "inverse dilation by 2^{m}: content at ({}, {}, {}) is not on the coarse lattice",
                            k[0], k[1], k[2]
                        )));
                    }
                    let kk = [k[0] / factor, k[1] / factor, k[2] / factor];
                    let wrap = |ki: i64| ki.rem_euclid(n as i64) as usize;
                    out[grid.idx(wrap(kk[0]), wrap(kk[1]), wrap(kk[2]))] = c;
                }
            }
        }
        Ok(SpectralField::from_raw(grid, out))
    }

    /// Zero-padding embedding onto a finer grid: every coefficient moves to
    /// the same integer wavenumber of `target`, all newly representable modes
    /// are zero. The represented trigonometric polynomial is unchanged, so
    /// collocation samples at shared points and all norms are preserved.
    /// Errors if `target` is coarser than the source grid.
    pub fn prolong(&self, target: Grid) -> Result<SpectralField> {
        let src = *self.grid();
        if target.n() < src.n() {
            return Err(crate::error::Error::InvalidData(format!(
                "prolongation target ({} points per axis) is coarser than the source ({})",
                target.n(),
                src.n()
            )));
        }
        let n = src.n();
        let tn = target.n() as i64;
        let wrap = |ki: i64| ki.rem_euclid(tn) as usize;
        let mut out = vec![Complex::default(); target.size()];
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    let c = self.coeffs()[src.idx(ix, iy, iz)];
                    if c == Complex::default() {
                        continue;
                    }
                    let k = [src.k_int(ix), src.k_int(iy), src.k_int(iz)];
                    out[target.idx(wrap(k[0]), wrap(k[1]), wrap(k[2]))] = c;
                }
            }
        }
        Ok(SpectralField::from_raw(target, out))
    }
}

impl SpectralVectorField {
    /// Divergence, `i kappa . v_k`.
    pub fn divergence(&self) -> SpectralField {
        let grid = *self.grid();
        let n = grid.n();
        let ks = grid.k_axis();
        let mut coeffs = vec![Complex::default(); grid.size()];
        let (vx, vy, vz) = (self.comp(0).coeffs(), self.comp(1).coeffs(), self.comp(2).coeffs());
        for iz in 0..n {
            for iy in 0..n {
                for ix in 0..n {
                    let idx = grid.idx(ix, iy, iz);
                    coeffs[idx] = I * (ks[ix] * vx[idx] + ks[iy] * vy[idx] + ks[iz] * vz[idx]);
                }
            }
        }
        SpectralField::from_raw(grid, coeffs)
    }

    /// Curl, `i kappa x v_k`.
    pub fn curl(&self) -> SpectralVectorField {
        self.mode_map(|k, v| {
            [
                I * (k[1] * v[2] - k[2] * v[1]),
                I * (k[2] * v[0] - k[0] * v[2]),
                I * (k[0] * v[1] - k[1] * v[0]),
            ]
        })
    }

    /// Inverse curl: the unique mean-zero divergence-free field `B` with
    /// `curl B = P J` (Leray projection of the input). Mode-wise
    /// `i kappa x J_k / |kappa|^2`; the output is divergence-free for every
    /// input.
    pub fn curl_inverse(&self) -> SpectralVectorField {
        self.mode_map(|k, v| {
            let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            if k2 == 0.0 {
                return [Complex::default(); 3];
            }
            let s = I / k2;
            [
                s * (k[1] * v[2] - k[2] * v[1]),
                s * (k[2] * v[0] - k[0] * v[2]),
                s * (k[0] * v[1] - k[1] * v[0]),
            ]
        })
    }

    /// Leray projection onto divergence-free fields:
    /// `v_k - kappa (kappa . v_k) / |kappa|^2`.
    pub fn leray_project(&self) -> SpectralVectorField {
        self.mode_map(|k, v| {
            let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            if k2 == 0.0 {
                return v;
            }
            let kdotv = (k[0] * v[0] + k[1] * v[1] + k[2] * v[2]) / k2;
            [v[0] - k[0] * kdotv, v[1] - k[1] * kdotv, v[2] - k[2] * kdotv]
        })
    }

    /// Component-wise Laplacian.
    pub fn laplacian(&self) -> SpectralVectorField {
        let comps = std::array::from_fn(|i| self.comp(i).laplacian());
        SpectralVectorField::new(comps).expect("components share the source grid")
    }

    /// Component-wise 2/3-rule mask.
    pub fn dealiased(&self) -> SpectralVectorField {
        let comps = std::array::from_fn(|i| self.comp(i).dealiased());
        SpectralVectorField::new(comps).expect("components share the source grid")
    }

    /// Component-wise heat flow.
    pub fn diffuse(&self, diffusivity: f64, t: f64) -> SpectralVectorField {
        let comps = std::array::from_fn(|i| self.comp(i).diffuse(diffusivity, t));
        SpectralVectorField::new(comps).expect("components share the source grid")
    }

    /// Component-wise dyadic dilation (see [`SpectralField::dilate`]).
    pub fn dilate(&self, m: u32) -> Result<SpectralVectorField> {
        SpectralVectorField::new([
            self.comp(0).dilate(m)?,
            self.comp(1).dilate(m)?,
            self.comp(2).dilate(m)?,
        ])
    }

    /// Component-wise inverse dilation (see [`SpectralField::undilate`]).
    pub fn undilate(&self, m: u32) -> Result<SpectralVectorField> {
        SpectralVectorField::new([
            self.comp(0).undilate(m)?,
            self.comp(1).undilate(m)?,
            self.comp(2).undilate(m)?,
        ])
    }

    /// Component-wise zero-padding embedding (see [`SpectralField::prolong`]).
    pub fn prolong(&self, target: Grid) -> Result<SpectralVectorField> {
        SpectralVectorField::new([
            self.comp(0).prolong(target)?,
            self.comp(1).prolong(target)?,
            self.comp(2).prolong(target)?,
        ])
    }

    /// The nine first derivatives `d_i v_j`, ordered `(i, j)` row-major.
    pub fn gradient_components(&self) -> Vec<SpectralField> {
        let mut out = Vec::with_capacity(9);
        for axis in 0..3 {
            for j in 0..3 {
                out.push(self.comp(j).map_modes(|k, c| I * k[axis] * c));
            }
        }
        out
    }

    fn mode_map(&self, f: impl Fn([f64; 3], [Complex; 3]) -> [Complex; 3]) -> SpectralVectorField {
        let grid = *self.grid();
        let n = grid.n();
        let ks = grid.k_axis();
        let size = grid.size();
        let mut out = [
            vec![Complex::default(); size],
            vec![Complex::default(); size],
            vec![Complex::default(); size],
        ];
        let (vx, vy, vz) = (self.comp(0).coeffs(), self.comp(1).coeffs(), self.comp(2).coeffs());
        for iz in 0..n {
            let kz = ks[iz];
            for iy in 0..n {
                let ky = ks[iy];
                for ix in 0..n {
                    let idx = grid.idx(ix, iy, iz);
                    let w = f([ks[ix], ky, kz], [vx[idx], vy[idx], vz[idx]]);
                    out[0][idx] = w[0];
                    out[1][idx] = w[1];
                    out[2][idx] = w[2];
                }
            }
        }
        let [ox, oy, oz] = out;
        SpectralVectorField::new([
            SpectralField::from_raw(grid, ox),
            SpectralField::from_raw(grid, oy),
            SpectralField::from_raw(grid, oz),
        ])
        .expect("components share the source grid")
    }
}

/// Largest integer wavenumber kept by the 2/3-rule mask, `floor(n/3)`.
pub fn dealias_bound(grid: &Grid) -> i64 {
    grid.n() as i64 / 3
}

/// Pointwise product of two scalar fields on the collocation grid.
///
/// With `dealias` set, inputs and output are truncated by the 2/3 rule; the
/// result is then the exact convolution of the masked inputs restricted to
/// the kept band. The product's mean is removed either way.
pub fn pointwise_product(a: &SpectralField, b: &SpectralField, dealias: bool) -> Result<SpectralField> {
    a.grid().ensure_same(b.grid(), "pointwise product")?;
    let (pa, pb);
    if dealias {
        pa = a.dealiased().to_physical();
        pb = b.dealiased().to_physical();
    } else {
        pa = a.to_physical();
        pb = b.to_physical();
    }
    Ok(forward_product(*a.grid(), &pa, &pb, dealias))
}

/// Transform the pointwise product of two sample cubes back to spectral
/// space, applying the output-side 2/3 mask if requested. Callers are
/// responsible for having masked the inputs when `dealias` is set.
pub(crate) fn forward_product(grid: Grid, a: &[f64], b: &[f64], dealias: bool) -> SpectralField {
    let samples: Vec<f64> = a.iter().zip(b).map(|(&x, &y)| x * y).collect();
    let field = SpectralField::from_physical(grid, &samples).expect("sample cube matches grid");
    if dealias {
        field.dealiased()
    } else {
        field
    }
}

/// Pointwise cross product `v x w` of two vector fields.
pub fn cross_product(
    v: &SpectralVectorField,
    w: &SpectralVectorField,
    dealias: bool,
) -> Result<SpectralVectorField> {
    v.grid().ensure_same(w.grid(), "cross product")?;
    let grid = *v.grid();
    let (pv, pw);
    if dealias {
        pv = v.dealiased().to_physical();
        pw = w.dealiased().to_physical();
    } else {
        pv = v.to_physical();
        pw = w.to_physical();
    }
    let size = grid.size();
    let mut cx = vec![0.0; size];
    let mut cy = vec![0.0; size];
    let mut cz = vec![0.0; size];
    for i in 0..size {
        cx[i] = pv[1][i] * pw[2][i] - pv[2][i] * pw[1][i];
        cy[i] = pv[2][i] * pw[0][i] - pv[0][i] * pw[2][i];
        cz[i] = pv[0][i] * pw[1][i] - pv[1][i] * pw[0][i];
    }
    let mut out = SpectralVectorField::from_physical(grid, [cx.as_slice(), cy.as_slice(), cz.as_slice()])?;
    if dealias {
        out = out.dealiased();
    }
    Ok(out)
}

/// Physical-space quadrature of `a * b` over the box:
/// `(L/n)^3 * sum_m a(x_m) b(x_m)`.
///
/// For represented fields (no Nyquist content) this agrees with the
/// coefficient pairing [`inner_product_spectral`] to rounding — products of
/// in-band modes cannot alias onto the mean.
pub fn inner_product(a: &SpectralField, b: &SpectralField) -> Result<f64> {
    a.grid().ensure_same(b.grid(), "inner product")?;
    let pa = a.to_physical();
    let pb = b.to_physical();
    let sum: f64 = pa.iter().zip(&pb).map(|(&x, &y)| x * y).sum();
    Ok(sum * a.grid().cell_volume())
}

/// Coefficient-space pairing `vol * sum_k a_k conj(b_k)` (real part).
pub fn inner_product_spectral(a: &SpectralField, b: &SpectralField) -> Result<f64> {
    a.grid().ensure_same(b.grid(), "inner product")?;
    let sum: f64 = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x * y.conj()).re).sum();
    Ok(sum * a.grid().volume())
}

/// Quadrature of the pointwise dot product of two vector fields.
pub fn vector_inner_product(a: &SpectralVectorField, b: &SpectralVectorField) -> Result<f64> {
    a.grid().ensure_same(b.grid(), "inner product")?;
    let mut total = 0.0;
    for i in 0..3 {
        total += inner_product(a.comp(i), b.comp(i))?;
    }
    Ok(total)
}

/// Coefficient-space pairing of two vector fields.
pub fn vector_inner_product_spectral(a: &SpectralVectorField, b: &SpectralVectorField) -> Result<f64> {
    a.grid().ensure_same(b.grid(), "inner product")?;
    let mut total = 0.0;
    for i in 0..3 {
        total += inner_product_spectral(a.comp(i), b.comp(i))?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    fn grid(n: usize) -> Grid {
        Grid::new(n).unwrap()
    }

    /// cos(x1) as a spectral field.
    fn cos_x1(g: Grid) -> SpectralField {
        SpectralField::from_modes(g, &[([1, 0, 0], Complex::new(0.5, 0.0))]).unwrap()
    }

    #[test]
    fn gradient_of_cos_is_minus_sin() {
        let g = grid(8);
        let f = cos_x1(g);
        let grad = f.gradient();
        // d/dx1 cos(x1) = -sin(x1): coefficients -+ i/2 at k = +-e1.
        assert!((grad.comp(0).coeff([1, 0, 0]) - Complex::new(0.0, 0.5)).norm() < 1e-14);
        assert!((grad.comp(0).coeff([-1, 0, 0]) - Complex::new(0.0, -0.5)).norm() < 1e-14);
        assert!(grad.comp(1).is_zero());
        assert!(grad.comp(2).is_zero());
        let phys = grad.comp(0).to_physical();
        let expect = -(g.x(1)).sin();
        assert!((phys[g.idx(1, 0, 0)] - expect).abs() < 1e-13);
    }

    #[test]
    fn laplacian_matches_mode_multiplier() {
        let g = grid(8);
        let f = SpectralField::from_modes(g, &[([1, 2, -2], Complex::new(0.2, 0.3))]).unwrap();
        let lap = f.laplacian();
        let expect = -(1.0 + 4.0 + 4.0);
        assert!((lap.coeff([1, 2, -2]) - Complex::new(0.2, 0.3) * expect).norm() < 1e-14);
    }

    #[test]
    fn curl_of_gradient_vanishes() {
        let g = grid(8);
        let f = SpectralField::from_modes(
            g,
            &[([1, 2, 0], Complex::new(0.3, -0.4)), ([0, 1, 3], Complex::new(-0.2, 0.1))],
        )
        .unwrap();
        let c = f.gradient().curl();
        assert!(c.max_coeff_norm() < 1e-14);
    }

    #[test]
    fn divergence_of_curl_vanishes() {
        let g = grid(8);
        let v = SpectralVectorField::new([
            cos_x1(g),
            SpectralField::from_modes(g, &[([0, 2, 1], Complex::new(0.1, 0.2))]).unwrap(),
            SpectralField::from_modes(g, &[([1, 1, 1], Complex::new(-0.3, 0.05))]).unwrap(),
        ])
        .unwrap();
        let d = v.curl().divergence();
        assert!(d.max_coeff_norm() < 1e-14);
    }

    #[test]
    fn leray_is_idempotent_and_kills_gradients() {
        let g = grid(8);
        let f = SpectralField::from_modes(g, &[([2, -1, 1], Complex::new(0.4, 0.1))]).unwrap();
        let grad = f.gradient();
        assert!(grad.leray_project().max_coeff_norm() < 1e-14, "gradients project to zero");
        let v = SpectralVectorField::new([
            cos_x1(g),
            SpectralField::from_modes(g, &[([1, 2, 0], Complex::new(0.2, -0.2))]).unwrap(),
            SpectralField::zeros(g),
        ])
        .unwrap();
        let p1 = v.leray_project();
        let p2 = p1.leray_project();
        let drift = (&p1 - &p2).max_coeff_norm();
        assert!(drift < 1e-15, "projection must be idempotent, drift {drift}");
        assert!(p1.div_defect_ratio() < 1e-14);
    }

    #[test]
    fn curl_inverse_recovers_divergence_free_fields() {
        let g = grid(8);
        // Divergence-free random-ish field via Leray projection.
        let v = SpectralVectorField::new([
            SpectralField::from_modes(g, &[([1, 2, 0], Complex::new(0.2, -0.1))]).unwrap(),
            SpectralField::from_modes(g, &[([1, 2, 0], Complex::new(-0.4, 0.3))]).unwrap(),
            SpectralField::from_modes(g, &[([2, 0, 1], Complex::new(0.15, 0.25))]).unwrap(),
        ])
        .unwrap()
        .leray_project();
        let j = v.curl();
        let back = j.curl_inverse();
        let err = (&back - &v).max_coeff_norm();
        assert!(err < 1e-14, "curl_inverse(curl v) = v for solenoidal v, err {err}");
        assert!(back.div_defect_ratio() < 1e-14);
    }

    #[test]
    fn product_of_cosines_has_exact_coefficients() {
        // cos(x1) * cos(x1) = 1/2 + cos(2 x1)/2; the mean half is removed.
        let g = grid(8);
        let f = cos_x1(g);
        let p = pointwise_product(&f, &f, false).unwrap();
        assert!((p.coeff([2, 0, 0]) - Complex::new(0.25, 0.0)).norm() < 1e-14);
        assert!((p.coeff([-2, 0, 0]) - Complex::new(0.25, 0.0)).norm() < 1e-14);
        assert!(p.coeff([1, 0, 0]).norm() < 1e-15);
        assert!(p.coeff([0, 1, 0]).norm() < 1e-15);
    }

    #[test]
    fn dealiased_product_drops_out_of_band_content() {
        // On n = 8 the mask keeps |k_i| <= 2; cos(2 x1)^2 has content at
        // k = 4 which must not wrap around or survive.
        let g = grid(8);
        let f = SpectralField::from_modes(g, &[([2, 0, 0], Complex::new(0.5, 0.0))]).unwrap();
        let p = pointwise_product(&f, &f, true).unwrap();
        assert!(p.max_coeff_norm() < 1e-15, "everything aliases out of band");
    }

    #[test]
    fn quadrature_inner_product_matches_parseval() {
        let g = grid(8);
        let f = cos_x1(g);
        let q = inner_product(&f, &f).unwrap();
        let s = inner_product_spectral(&f, &f).unwrap();
        let expect = g.volume() / 2.0; // integral of cos^2 over the box
        assert!((q - expect).abs() < 1e-12, "quadrature {q} vs {expect}");
        assert!((q - s).abs() < 1e-12 * expect.max(1.0));
    }

    #[test]
    fn curl_is_self_adjoint_in_the_pairing() {
        let g = grid(8);
        let a = SpectralVectorField::new([
            SpectralField::from_modes(g, &[([1, 0, 2], Complex::new(0.3, 0.2))]).unwrap(),
            SpectralField::from_modes(g, &[([0, 1, 0], Complex::new(-0.2, 0.1))]).unwrap(),
            SpectralField::from_modes(g, &[([2, 1, 0], Complex::new(0.1, -0.3))]).unwrap(),
        ])
        .unwrap();
        let b = SpectralVectorField::new([
            SpectralField::from_modes(g, &[([0, 2, 1], Complex::new(-0.1, 0.4))]).unwrap(),
            SpectralField::from_modes(g, &[([1, 1, 0], Complex::new(0.25, 0.0))]).unwrap(),
            SpectralField::from_modes(g, &[([1, 0, 0], Complex::new(0.0, 0.2))]).unwrap(),
        ])
        .unwrap();
        let lhs = vector_inner_product(&a.curl(), &b).unwrap();
        let rhs = vector_inner_product(&a, &b.curl()).unwrap();
        assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()), "curl adjointness: {lhs} vs {rhs}");
    }

    #[test]
    fn prolongation_preserves_the_represented_function() {
        let coarse = grid(8);
        let fine = grid(16);
        let f = SpectralField::from_modes(
            coarse,
            &[([1, 2, -3], Complex::new(0.3, -0.2)), ([3, 0, 1], Complex::new(0.05, 0.4))],
        )
        .unwrap();
        let p = f.prolong(fine).unwrap();
        assert_eq!(
            p.coeff([1, 2, -3]),
            f.coeff([1, 2, -3]),
            "coefficients transfer bitwise to the same wavenumbers"
        );
        assert_eq!(p.coeff([3, 0, 1]), f.coeff([3, 0, 1]));
        let ec = inner_product_spectral(&f, &f).unwrap();
        let ef = inner_product_spectral(&p, &p).unwrap();
        assert!((ec - ef).abs() < 1e-15 * ec, "padding adds no energy: {ec} vs {ef}");
        // The fine grid contains every coarse collocation point (stride 2);
        // samples there must agree since the polynomial is the same.
        let pc = f.to_physical();
        let pf = p.to_physical();
        for iz in 0..8 {
            for iy in 0..8 {
                for ix in 0..8 {
                    let a = pc[coarse.idx(ix, iy, iz)];
                    let b = pf[fine.idx(2 * ix, 2 * iy, 2 * iz)];
                    assert!(
                        (a - b).abs() < 1e-13,
                        "sample mismatch at ({ix}, {iy}, {iz}): {a} vs {b}"
                    );
                }
            }
        }
        assert!(p.prolong(coarse).is_err(), "coarsening targets are rejected");
        // Same-size prolongation is the identity.
        let same = f.prolong(coarse).unwrap();
        assert!((&same - &f).is_zero());
    }

    #[test]
    fn diffuse_decays_each_mode_exponentially() {
        let g = grid(8);
        let f = SpectralField::from_modes(g, &[([1, 2, 0], Complex::new(0.5, -0.1))]).unwrap();
        let d = f.diffuse(0.7, 0.3);
        let expect = Complex::new(0.5, -0.1) * (-0.7 * 0.3 * 5.0_f64).exp();
        assert!((d.coeff([1, 2, 0]) - expect).norm() < 1e-15);
    }
}
