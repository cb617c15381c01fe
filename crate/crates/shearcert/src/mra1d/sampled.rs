use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::dyadic::Exact;
use crate::error::{Error, Result};

/// Samples of a compactly supported function on `support_min + 2^-level Z`.
///
/// Sample `n` sits at `support_min + n 2^-level`; the last sample sits at
/// `support_max`. Between samples the function is the piecewise-linear
/// interpolant, and it is zero outside `[support_min, support_max]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction1D {
    level: u32,
    support_min: Exact,
    support_max: Exact,
    values: Vec<f64>,
    #[serde(skip)]
    origin: f64,
}

impl SampledFunction1D {
    pub fn new(level: u32, support_min: Exact, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidArgument(
                "a sampled function needs at least two samples".into(),
            ));
        }
        let span = Exact::from_int(values.len() as i64 - 1).mul_pow2(-(level as i64));
        let support_max = &support_min + &span;
        let origin = support_min.to_f64();
        Ok(SampledFunction1D {
            level,
            support_min,
            support_max,
            values,
            origin,
        })
    }

    /// Restores the cached origin after deserialization.
    pub fn rehydrate(mut self) -> Self {
        self.origin = self.support_min.to_f64();
        self
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn support_min(&self) -> &Exact {
        &self.support_min
    }

    pub fn support_max(&self) -> &Exact {
        &self.support_max
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        (-(self.level as f64)).exp2()
    }

    pub fn grid_point(&self, n: usize) -> f64 {
        self.origin + n as f64 * self.step()
    }

    /// Piecewise-linear evaluation.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let t = (x - self.origin) * (self.level as f64).exp2();
        if t.is_nan() || t < 0.0 {
            return 0.0;
        }
        let i = t.floor();
        let last = self.values.len() - 1;
        let iu = i as usize;
        if iu >= last {
            return if t == last as f64 {
                self.values[last]
            } else {
                0.0
            };
        }
        let frac = t - i;
        let a = self.values[iu];
        if frac == 0.0 {
            a
        } else {
            a + frac * (self.values[iu + 1] - a)
        }
    }

    /// `x -> f(2^j x - shift)`, an exact relabeling of the grid.
    pub fn dilate_translate(&self, j: u32, shift: &Exact) -> Self {
        let support_min = (&self.support_min + shift).mul_pow2(-(j as i64));
        let support_max = (&self.support_max + shift).mul_pow2(-(j as i64));
        let origin = support_min.to_f64();
        SampledFunction1D {
            level: self.level + j,
            support_min,
            support_max,
            values: self.values.clone(),
            origin,
        }
    }

    /// `x -> f(x - shift)`.
    pub fn translate(&self, shift: &Exact) -> Self {
        self.dilate_translate(0, shift)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    /// Riemann sum `2^-level * sum_n f_n`.
    pub fn riemann_sum(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.step()
    }

    /// Every other sample: the same function read at `level - 1`.
    pub fn subsample(&self) -> Result<Self> {
        if self.level == 0 {
            return Err(Error::InsufficientLevel { needed: 1, got: 0 });
        }
        let values: Vec<f64> = self.values.iter().step_by(2).copied().collect();
        SampledFunction1D::new(self.level - 1, self.support_min.clone(), values)
    }

    /// Smallest and largest grid points where `|f|` exceeds `threshold`.
    pub fn detected_support(&self, threshold: f64) -> Option<(f64, f64)> {
        let first = self.values.iter().position(|v| v.abs() > threshold)?;
        let last = self.values.iter().rposition(|v| v.abs() > threshold)?;
        Some((self.grid_point(first), self.grid_point(last)))
    }

    /// Indices `i` with `i 2^-level` inside the support, for quadrature at `level`.
    pub fn index_range(&self, level: u32) -> (i64, i64) {
        let lo = self.support_min.mul_pow2(level as i64).ceil();
        let hi = self.support_max.mul_pow2(level as i64).floor();
        (
            lo.to_i64().unwrap_or(i64::MIN),
            hi.to_i64().unwrap_or(i64::MAX),
        )
    }

    /// Values at `i 2^-level` for `i` in [`index_range`](Self::index_range).
    pub fn sample_at_level(&self, level: u32) -> (i64, Vec<f64>) {
        let (lo, hi) = self.index_range(level);
        let h = (-(level as f64)).exp2();
        let values = (lo..=hi).map(|i| self.eval(i as f64 * h)).collect();
        (lo, values)
    }

    /// Riemann-sum inner product on the grid `2^-level Z`.
    pub fn inner(&self, other: &Self, level: u32) -> f64 {
        let (la, va) = self.sample_at_level(level);
        let (lb, vb) = other.sample_at_level(level);
        dot_overlap(la, &va, lb, &vb) * (-(level as f64)).exp2()
    }
}

/// Dot product of two index-offset sample vectors over their overlap.
pub(crate) fn dot_overlap(la: i64, va: &[f64], lb: i64, vb: &[f64]) -> f64 {
    let lo = la.max(lb);
    let hi = (la + va.len() as i64).min(lb + vb.len() as i64);
    if hi <= lo {
        return 0.0;
    }
    let a = &va[(lo - la) as usize..(hi - la) as usize];
    let b = &vb[(lo - lb) as usize..(hi - lb) as usize];
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> SampledFunction1D {
        SampledFunction1D::new(1, Exact::zero(), vec![0.0, 1.0, 2.0, 0.0]).unwrap()
    }

    #[test]
    fn interpolation_and_support() {
        let f = ramp();
        assert_eq!(f.support_max(), &Exact::ratio(3, 2).unwrap());
        assert_eq!(f.eval(0.25), 0.5);
        assert_eq!(f.eval(1.0), 2.0);
        assert_eq!(f.eval(1.25), 1.0);
        assert_eq!(f.eval(-0.1), 0.0);
        assert_eq!(f.eval(1.6), 0.0);
    }

    #[test]
    fn dilation_relabels_exactly() {
        let f = ramp();
        let g = f.dilate_translate(1, &Exact::ratio(1, 3).unwrap());
        assert_eq!(g.support_min(), &Exact::ratio(1, 6).unwrap());
        for x in [0.2, 0.4, 0.55, 0.7] {
            assert!((g.eval(x) - f.eval(2.0 * x - 1.0 / 3.0)).abs() < 1e-14);
        }
        let t = f.translate(&Exact::from_int(2));
        assert_eq!(t.support_min(), &Exact::from_int(2));
        assert_eq!(t.eval(3.0), 2.0);
    }

    #[test]
    fn riemann_and_inner() {
        let f = ramp();
        assert_eq!(f.riemann_sum(), 1.5);
        assert_eq!(f.inner(&f, 1), 2.5);
    }

    #[test]
    fn too_few_samples() {
        assert!(SampledFunction1D::new(0, Exact::zero(), vec![1.0]).is_err());
    }
}
