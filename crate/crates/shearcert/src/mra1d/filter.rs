use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest order accepted by [`daubechies_filter`].
pub const MAX_ORDER: usize = 20;

/// Residual above which spectral factorization is treated as broken down.
pub const FACTORIZATION_TOLERANCE: f64 = 1e-10;

/// A finite refinement mask `a_0..a_{2N-1}` with `phi(x) = sum_k a_k phi(2x - k)`.
///
/// Masks are unnormalized: `sum a_k = 2` and `sum_k a_k a_{k+2l} = 2 delta_l`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterCoefficients {
    order: usize,
    mask: Vec<f64>,
}

impl FilterCoefficients {
    /// Wraps a mask of length `2 * order`.
    pub fn from_mask(order: usize, mask: Vec<f64>) -> Result<Self> {
        if order == 0 || mask.len() != 2 * order {
            return Err(Error::InvalidMask {
                order,
                len: mask.len(),
            });
        }
        Ok(FilterCoefficients { order, mask })
    }

    pub fn haar() -> Self {
        FilterCoefficients {
            order: 1,
            mask: vec![1.0, 1.0],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mask(&self) -> &[f64] {
        &self.mask
    }

    /// Length `2N - 1` of the support `[0, 2N - 1]` of the scaling function.
    pub fn support_length(&self) -> usize {
        2 * self.order - 1
    }

    pub fn sum(&self) -> f64 {
        self.mask.iter().sum()
    }

    /// `sum_k a_k a_{k+2l}` for every `l >= 0` with a nonzero overlap.
    pub fn autocorrelation(&self) -> Vec<f64> {
        let n = self.mask.len();
        (0..self.order)
            .map(|l| {
                (0..n.saturating_sub(2 * l))
                    .map(|k| self.mask[k] * self.mask[k + 2 * l])
                    .sum()
            })
            .collect()
    }

    /// `max_l |sum_k a_k a_{k+2l} - 2 delta_l|`.
    pub fn qmf_residual(&self) -> f64 {
        self.autocorrelation()
            .iter()
            .enumerate()
            .map(|(l, &c)| (c - if l == 0 { 2.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max)
    }

    /// High-pass mask `g_k = (-1)^k a_{2N-1-k}`, `k = 0..2N-1`.
    ///
    /// This is the textbook mask `(-1)^k a_{1-k}` moved right by
    /// [`wavelet_shift`](Self::wavelet_shift) so the wavelet support starts at 0.
    pub fn highpass(&self) -> Vec<f64> {
        let n = self.mask.len();
        (0..n)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * self.mask[n - 1 - k]
            })
            .collect()
    }

    /// Integer shift between the textbook wavelet (support `[1-N, N]`) and ours.
    pub fn wavelet_shift(&self) -> i64 {
        self.order as i64 - 1
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Complex roots of `sum_i coeffs[i] y^i` by Aberth iteration and Newton polishing.
fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0
        + monic[..deg]
            .iter()
            .map(|c| c.abs())
            .fold(0.0, f64::max)
            .powf(1.0 / deg as f64);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|i| {
            let angle = 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / deg as f64 + 0.4;
            Complex64::from_polar(0.5 * radius, angle)
        })
        .collect();
    for _ in 0..500 {
        let mut largest = 0.0f64;
        for i in 0..deg {
            let (p, dp) = horner(&monic, roots[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg)
                .filter(|&k| k != i)
                .map(|k| (roots[i] - roots[k]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            roots[i] -= step;
            largest = largest.max(step.norm() / roots[i].norm().max(1.0));
        }
        if largest < 1e-16 {
            break;
        }
    }
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(coeffs, *r);
            if dp.norm() > 0.0 {
                *r -= p / dp;
            }
        }
    }
    roots
}

/// Daubechies mask of order `N` (`2N` taps) by minimal-phase spectral factorization.
///
/// ```
/// let db2 = shearcert::mra1d::daubechies_filter(2).unwrap();
/// let s3 = 3f64.sqrt();
/// let expected = [(1.0 + s3) / 4.0, (3.0 + s3) / 4.0, (3.0 - s3) / 4.0, (1.0 - s3) / 4.0];
/// for (a, b) in db2.mask().iter().zip(expected) {
///     assert!((a - b).abs() < 1e-14);
/// }
/// ```
pub fn daubechies_filter(order: usize) -> Result<FilterCoefficients> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::InvalidOrder(order));
    }
    let p: Vec<f64> = (0..order).map(|s| binomial(order - 1 + s, s)).collect();
    let one = Complex64::new(1.0, 0.0);
    let mut poly = vec![one];
    for _ in 0..order {
        poly = multiply_linear(&poly, one);
    }
    for y in polynomial_roots(&p) {
        // z + 1/z = 2 - 4y; keep the root inside the unit disk.
        let b = Complex64::new(2.0, 0.0) - 4.0 * y;
        let disc = (b * b - 4.0).sqrt();
        let (z1, z2) = ((b + disc) / 2.0, (b - disc) / 2.0);
        let z = if z1.norm() < z2.norm() { z1 } else { z2 };
        poly = multiply_linear(&poly, -z);
    }
    let raw: Vec<f64> = poly.iter().map(|c| c.re).collect();
    let total: f64 = raw.iter().sum();
    let mask: Vec<f64> = raw.iter().map(|c| 2.0 * c / total).collect();
    let filter = FilterCoefficients::from_mask(order, mask)?;
    let residual = filter.qmf_residual();
    if residual.is_nan() || residual > FACTORIZATION_TOLERANCE {
        return Err(Error::FactorizationResidual { order, residual });
    }
    Ok(filter)
}

/// Multiplies the polynomial by `(1 + c x)`.
fn multiply_linear(poly: &[Complex64], c: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
    for (i, &a) in poly.iter().enumerate() {
        out[i] += a;
        out[i + 1] += a * c;
    }
    out
}
