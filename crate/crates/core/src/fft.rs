//! Raw 3D FFT with the crate's normalization convention.
//!
//! The forward transform maps `n^3` complex samples to Fourier-series
//! coefficients, dividing by `n^3`, so a field with coefficient `c_k` takes
//! the value `sum_k c_k exp(i kappa . x)` at the collocation points; the
//! inverse transform is the unnormalized adjoint and the pair round-trips to
//! machine precision. Data is stored x-fastest (see [`crate::grid::Grid::idx`]).
//!
//! Plans are cached per resolution in thread-local storage. All work is
//! single-threaded and runs in a fixed order, so transforms are bit-level
//! deterministic.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::Complex;

struct Plans {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

thread_local! {
    static PLAN_CACHE: RefCell<HashMap<usize, Rc<Plans>>> = RefCell::new(HashMap::new());
}

fn plans_for(n: usize) -> Rc<Plans> {
    PLAN_CACHE.with(|cache| {
        cache
            .borrow_mut()
            .entry(n)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                Rc::new(Plans {
                    fwd: planner.plan_fft_forward(n),
                    inv: planner.plan_fft_inverse(n),
                })
            })
            .clone()
    })
}

/// Apply a 1D transform along every line of the given axis (0 = x, 1 = y,
/// 2 = z) of an `n^3` cube stored x-fastest.
fn transform_axis(fft: &dyn Fft<f64>, n: usize, axis: usize, data: &mut [Complex]) {
    debug_assert_eq!(data.len(), n * n * n);
    let mut scratch = vec![Complex::default(); fft.get_inplace_scratch_len()];
    match axis {
        0 => {
            for line in data.chunks_exact_mut(n) {
                fft.process_with_scratch(line, &mut scratch);
            }
        }
        1 | 2 => {
            let stride = if axis == 1 { n } else { n * n };
            let mut line = vec![Complex::default(); n];
            // Line starts: for y they are (ix, 0, iz) = iz*n^2 + ix, for z
            // they are (ix, iy, 0) = iy*n + ix, i.e. every index in [0, n^2).
            let bases: Vec<usize> = if axis == 1 {
                (0..n).flat_map(|iz| (0..n).map(move |ix| iz * n * n + ix)).collect()
            } else {
                (0..n * n).collect()
            };
            for base in bases {
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, value) in line.iter().enumerate() {
                    data[base + j * stride] = *value;
                }
            }
        }
        _ => unreachable!("axis must be 0, 1 or 2"),
    }
}

/// In-place forward 3D transform: samples -> coefficients (scaled by `1/n^3`).
pub fn forward3(n: usize, data: &mut [Complex]) {
    let plans = plans_for(n);
    for axis in 0..3 {
        transform_axis(plans.fwd.as_ref(), n, axis, data);
    }
    let scale = 1.0 / (n * n * n) as f64;
    for value in data.iter_mut() {
        *value *= scale;
    }
}

/// In-place inverse 3D transform: coefficients -> samples (unnormalized).
pub fn inverse3(n: usize, data: &mut [Complex]) {
    let plans = plans_for(n);
    for axis in 0..3 {
        transform_axis(plans.inv.as_ref(), n, axis, data);
    }
}
