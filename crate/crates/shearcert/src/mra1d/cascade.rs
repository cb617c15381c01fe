use crate::dyadic::Exact;
use crate::error::{Error, Result};

use super::filter::FilterCoefficients;
use super::sampled::SampledFunction1D;

/// Number of consecutive growing iterate differences that counts as divergence.
pub const DIVERGENCE_STREAK: u32 = 3;

/// `out[n] = sum_k mask_k v[n - k 2^level]`, for `v` on `[0, 2N-1]` at `level`.
fn apply_mask(mask: &[f64], v: &[f64], level: u32) -> Vec<f64> {
    let stride = 1usize << level;
    let len = 2 * (v.len() - 1) + 1;
    let mut out = vec![0.0; len];
    for (k, &a) in mask.iter().enumerate() {
        let shift = k * stride;
        for (i, &x) in v.iter().enumerate() {
            if let Some(o) = out.get_mut(i + shift) {
                *o += a * x;
            }
        }
    }
    out
}

fn check_span(filter: &FilterCoefficients, f: &SampledFunction1D) -> Result<()> {
    let expected = (filter.support_length() << f.level()) + 1;
    if !f.support_min().is_zero() || f.values().len() != expected {
        return Err(Error::InvalidArgument(
            "refinement needs samples spanning exactly [0, 2N-1]".into(),
        ));
    }
    Ok(())
}

/// One application of the refinement operator `f -> sum_k a_k f(2 . - k)`.
pub fn refine(filter: &FilterCoefficients, f: &SampledFunction1D) -> Result<SampledFunction1D> {
    check_span(filter, f)?;
    let values = apply_mask(filter.mask(), f.values(), f.level());
    SampledFunction1D::new(f.level() + 1, Exact::zero(), values)
}

/// Scaling function samples on `2^-level Z ∩ [0, 2N-1]`.
///
/// Starts from the hat function (a unit impulse on the integers) and applies
/// the refinement operator `level` times. The result is the piecewise-linear
/// iterate itself, so Riemann sums at `level` reproduce the discrete
/// orthonormality of the mask exactly.
///
/// ```
/// use shearcert::mra1d::{cascade, daubechies_filter};
/// let phi = cascade(&daubechies_filter(2).unwrap(), 10).unwrap();
/// assert!((phi.riemann_sum() - 1.0).abs() < 1e-12);
/// ```
pub fn cascade(filter: &FilterCoefficients, level: u32) -> Result<SampledFunction1D> {
    let len = filter.support_length() + 1;
    let mut v = vec![0.0; len];
    v[0] = 1.0;
    let mut previous_diff = f64::INFINITY;
    let mut streak = 0;
    for i in 0..level {
        let next = apply_mask(filter.mask(), &v, i);
        let diff = v
            .iter()
            .enumerate()
            .map(|(m, &x)| (next[2 * m] - x).abs())
            .fold(0.0, f64::max);
        if diff > previous_diff && diff > 1e-12 {
            streak += 1;
            if streak >= DIVERGENCE_STREAK {
                return Err(Error::CascadeDivergence { iteration: i + 1 });
            }
        } else {
            streak = 0;
        }
        previous_diff = diff;
        v = next;
    }
    SampledFunction1D::new(level, Exact::zero(), v)
}

/// Wavelet samples on `2^-level Z ∩ [0, 2N-1]` from the level `level - 1` cascade.
///
/// Uses the high-pass mask of [`FilterCoefficients::highpass`], so the support
/// is `[0, 2N-1]`, shifted right by `N - 1` from the textbook wavelet.
pub fn wavelet_from_filter(filter: &FilterCoefficients, level: u32) -> Result<SampledFunction1D> {
    if level == 0 {
        return Err(Error::InsufficientLevel { needed: 1, got: 0 });
    }
    let phi = cascade(filter, level - 1)?;
    let values = apply_mask(&filter.highpass(), phi.values(), level - 1);
    SampledFunction1D::new(level, Exact::zero(), values)
}
