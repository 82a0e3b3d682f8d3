//! Property tests for the structural invariants the solver relies on:
//! transform round trips, projector algebra, exact bilinear symmetries,
//! dyadic-decomposition completeness and lattice dilation round trips.

use hmhd_core::init;
use hmhd_core::lp::{bony_decomposition, dyadic_block, BlockProfile};
use hmhd_core::mhd::{nonlinear_q, q_b, PhysParams};
use hmhd_core::ops::pointwise_product;
use hmhd_core::{Complex, Grid, SpectralField, SpectralVectorField};
use proptest::prelude::*;

/// Candidate wavenumbers used by the scalar strategies; distinct, inside
/// the band `|k_i| <= 3` so products stay clear of the dealias mask at
/// `n = 16`.
const SCALAR_MODES: [[i64; 3]; 6] =
    [[1, 0, 0], [0, 1, 1], [2, 1, 0], [1, 2, 2], [0, 0, 3], [3, 1, 1]];

fn complex_unit() -> impl Strategy<Value = Complex> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex::new(re, im))
}

/// A mean-free scalar field supported on [`SCALAR_MODES`].
fn scalar_field(grid: Grid) -> impl Strategy<Value = SpectralField> {
    proptest::collection::vec(complex_unit(), SCALAR_MODES.len()).prop_map(move |coeffs| {
        let modes: Vec<([i64; 3], Complex)> =
            SCALAR_MODES.iter().zip(coeffs).map(|(&k, c)| (k, c)).collect();
        SpectralField::from_modes(grid, &modes).expect("modes fit the grid")
    })
}

fn vector_field(grid: Grid) -> impl Strategy<Value = SpectralVectorField> {
    (scalar_field(grid), scalar_field(grid), scalar_field(grid))
        .prop_map(|(a, b, c)| SpectralVectorField::new([a, b, c]).expect("same grid"))
}

fn grid16() -> Grid {
    Grid::new(16).expect("16 is even and large enough")
}

fn rel(defect: f64, scale: f64) -> f64 {
    defect / scale.max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Physical-space round trip reproduces every represented coefficient.
    #[test]
    fn physical_round_trip_is_identity(f in scalar_field(grid16())) {
        let samples = f.to_physical();
        let back = SpectralField::from_physical(*f.grid(), &samples).unwrap();
        let defect = (&back - &f).max_coeff_norm();
        prop_assert!(
            rel(defect, f.max_coeff_norm()) < 1e-13,
            "round-trip defect {defect}"
        );
    }

    /// The Leray projector is idempotent, annihilates gradients and lands
    /// on divergence-free fields.
    #[test]
    fn leray_projection_algebra(v in vector_field(grid16()), f in scalar_field(grid16())) {
        let p = v.leray_project();
        let drift = (&p.leray_project() - &p).max_coeff_norm();
        prop_assert!(rel(drift, v.max_coeff_norm().max(1e-30)) < 1e-13, "idempotence drift {drift}");
        prop_assert!(p.div_defect_ratio() < 1e-12, "divergence defect {}", p.div_defect_ratio());
        let grad = f.gradient();
        let killed = grad.leray_project().max_coeff_norm();
        prop_assert!(
            rel(killed, grad.max_coeff_norm().max(1e-30)) < 1e-13,
            "gradient survived projection: {killed}"
        );
    }

    /// Summing every sharp dyadic block reconstructs the field exactly
    /// (the blocks partition the represented modes).
    #[test]
    fn dyadic_blocks_telescope_to_the_field(f in scalar_field(grid16())) {
        let profile = BlockProfile::Sharp;
        let (lo, hi) = profile.j_range(f.grid());
        let mut acc = SpectralField::zeros(*f.grid());
        for j in lo..=hi {
            acc = &acc + &dyadic_block(&f, j, &profile);
        }
        let defect = (&acc - &f).max_coeff_norm();
        prop_assert!(rel(defect, f.max_coeff_norm().max(1e-30)) < 1e-13, "reconstruction defect {defect}");
    }

    /// Both paraproducts plus the remainder reassemble the plain product.
    #[test]
    fn paraproducts_reassemble_the_product(
        f in scalar_field(grid16()),
        g in scalar_field(grid16()),
    ) {
        let parts = bony_decomposition(&f, &g, &BlockProfile::Sharp).unwrap();
        let sum = &(&parts.t_uv + &parts.t_vu) + &parts.remainder;
        let product = pointwise_product(&f, &g, false).unwrap();
        let defect = (&sum - &product).max_coeff_norm();
        prop_assert!(
            rel(defect, product.max_coeff_norm().max(1e-30)) < 1e-12,
            "telescoping defect {defect}"
        );
    }

    /// Dilation followed by its inverse is the identity on fields
    /// supported inside the dilation-safe band.
    #[test]
    fn dilation_round_trips_on_the_coarse_lattice(f in scalar_field(grid16())) {
        let back = f.dilate(1).unwrap().undilate(1).unwrap();
        prop_assert!((&back - &f).is_zero(), "coefficient transport must be exact");
    }

    /// Heat flow is a semigroup: flowing `t1` then `t2` equals flowing
    /// `t1 + t2`.
    #[test]
    fn heat_flow_is_a_semigroup(
        f in scalar_field(grid16()),
        t1 in 0.0..0.5f64,
        t2 in 0.0..0.5f64,
    ) {
        let two_step = f.diffuse(0.7, t1).diffuse(0.7, t2);
        let one_step = f.diffuse(0.7, t1 + t2);
        let defect = (&two_step - &one_step).max_coeff_norm();
        prop_assert!(
            rel(defect, f.max_coeff_norm().max(1e-30)) < 1e-13,
            "semigroup defect {defect}"
        );
    }
}

proptest! {
    // The quadratic-form cases run full pseudospectral products, so fewer
    // cases keep the suite fast.
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The magnetic bilinear form is antisymmetric bitwise: swapping its
    /// arguments swaps the two tensor divergences it subtracts.
    #[test]
    fn magnetic_bilinear_is_exactly_antisymmetric(
        v in vector_field(grid16()),
        w in vector_field(grid16()),
    ) {
        let vw = q_b(&v, &w, true).unwrap();
        let wv = q_b(&w, &v, true).unwrap();
        let sum = (&vw + &wv).max_coeff_norm();
        prop_assert!(sum == 0.0, "antisymmetry must be exact, got residual {sum}");
    }

    /// Doubling the state multiplies the quadratic right-hand side by
    /// exactly four: every operation scales bitwise under powers of two.
    #[test]
    fn quadratic_form_is_exactly_homogeneous_under_doubling(
        a in complex_unit(),
        b in complex_unit(),
        c in complex_unit(),
        d in complex_unit(),
    ) {
        let grid = grid16();
        let params = PhysParams::new(0.9, 1.1, 2.0).unwrap();
        let state = init::from_mode_lists(
            grid,
            &[([1, 0, 0], [a, b, c]), ([0, 2, 1], [d, a, b])],
            &[([1, 1, 0], [c, d, a]), ([0, 0, 1], [b, c, d])],
        )
        .unwrap();
        let q = nonlinear_q(&state, &state, &params).unwrap();
        let doubled = nonlinear_q(&(&state * 2.0), &(&state * 2.0), &params).unwrap();
        let defect = (&doubled - &(&q * 4.0)).max_coeff_norm();
        prop_assert!(defect == 0.0, "dyadic homogeneity must be exact, got {defect}");
    }
}
