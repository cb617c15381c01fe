use serde::{Deserialize, Serialize};

use crate::dyadic::Exact;
use crate::error::{Error, Result};
use crate::shearlet2d::{
    lower_support_profile, Axis, SampledFunction2D, ShearletIndex, ShearletSystem, SlopeWindow,
    WINDOW,
};

/// `x2` grid level of the diagnostic grid.
pub const DIAGNOSTIC_LEVEL: u32 = 6;
/// Extra refinement of the `x1` grid, so slopes down to `1/4` move whole cells per row.
pub const X1_REFINEMENT: u32 = 3;
/// Windows with `|slope|` at or below this are unsheared.
pub const TRIVIAL_SLOPE: f64 = 0.05;
/// Margin around slope magnitude one separating the two cones.
pub const CONE_MARGIN: f64 = 1e-2;
/// Windows whose fit misses a slice by more than this many cells are discarded.
pub const MAX_RESIDUAL_CELLS: f64 = 0.35;
/// Support threshold relative to `max |f|`.
pub const RELATIVE_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeVerdict {
    /// Slope magnitudes in `(0.05, 1]`.
    Cone1,
    /// Slope magnitudes above one.
    Cone2,
    Unsheared,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeClassification {
    pub label: String,
    /// Slopes `dx1/dx2` of all accepted windows.
    pub slopes: Vec<f64>,
    pub windows: Vec<SlopeWindow>,
    /// Lowest point of the support, `(x1, x2)`.
    pub global_minimum: Option<(f64, f64)>,
    /// Slope of the accepted window nearest the global minimum.
    pub slope_at_minimum: Option<f64>,
    pub verdict: SlopeVerdict,
}

/// Verdict for a set of window slopes.
pub fn classify_slopes(slopes: &[f64]) -> SlopeVerdict {
    if slopes.is_empty() {
        return SlopeVerdict::Mixed;
    }
    let sheared: Vec<f64> = slopes
        .iter()
        .map(|s| s.abs())
        .filter(|s| *s > TRIVIAL_SLOPE)
        .collect();
    if sheared.is_empty() {
        SlopeVerdict::Unsheared
    } else if sheared.iter().all(|s| *s <= 1.0 + CONE_MARGIN) {
        SlopeVerdict::Cone1
    } else if sheared.iter().all(|s| *s > 1.0 + CONE_MARGIN) {
        SlopeVerdict::Cone2
    } else {
        SlopeVerdict::Mixed
    }
}

/// Classifies `f` by the slopes of its lower support bound along `x1`.
///
/// Windows that straddle a kink of the profile are discarded; the remaining
/// slopes decide the verdict.
pub fn cone_slope_diagnostic(f: &SampledFunction2D) -> Result<SlopeClassification> {
    let threshold = RELATIVE_THRESHOLD * f.max_abs();
    if threshold == 0.0 {
        return Err(Error::EmptySupport(threshold));
    }
    let profile = lower_support_profile(f, Axis::X1, threshold)?;
    let windows: Vec<SlopeWindow> = profile
        .windows
        .into_iter()
        .filter(|w| w.max_residual_cells <= MAX_RESIDUAL_CELLS)
        .collect();
    let slopes: Vec<f64> = windows.iter().map(|w| w.slope).collect();
    let global_minimum = profile
        .slices
        .iter()
        .zip(&profile.minima)
        .filter_map(|(y, m)| m.map(|x| (x, *y)))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let span = (WINDOW - 1) as f64 * f.step_x2();
    let slope_at_minimum = global_minimum.and_then(|(_, y)| {
        windows
            .iter()
            .min_by(|a, b| {
                let da = (a.start + span / 2.0 - y).abs();
                let db = (b.start + span / 2.0 - y).abs();
                da.total_cmp(&db)
            })
            .map(|w| w.slope)
    });
    Ok(SlopeClassification {
        label: "combination".into(),
        verdict: classify_slopes(&slopes),
        slopes,
        windows,
        global_minimum,
        slope_at_minimum,
    })
}

/// Diagnostic grid for one element: `x1` at `2^-(L+3)`, `x2` at `2^-L`.
pub fn diagnostic_grid(system: &ShearletSystem, idx: &ShearletIndex) -> Result<SampledFunction2D> {
    system.evaluate_aniso(idx, DIAGNOSTIC_LEVEL + X1_REFINEMENT, DIAGNOSTIC_LEVEL)
}

/// Cascade level needed to run the diagnostic on elements up to scale `j_max`.
pub fn required_cascade_level(j_max: u32) -> u32 {
    DIAGNOSTIC_LEVEL + X1_REFINEMENT + j_max
}

pub fn classify_element(
    system: &ShearletSystem,
    idx: &ShearletIndex,
) -> Result<SlopeClassification> {
    let f = diagnostic_grid(system, idx)?;
    let mut c = cone_slope_diagnostic(&f)?;
    c.label = idx.to_string();
    Ok(c)
}

/// Classifies `sum c_i psi_i` on the union of the elements' diagnostic grids.
pub fn classify_combination(
    system: &ShearletSystem,
    terms: &[(f64, ShearletIndex)],
) -> Result<SlopeClassification> {
    let grids: Vec<SampledFunction2D> = terms
        .iter()
        .map(|(_, idx)| diagnostic_grid(system, idx))
        .collect::<Result<_>>()?;
    let first = grids.first().ok_or(Error::EmptySelection)?;
    let (l1, l2) = (first.level_x1 as i64, first.level_x2 as i64);
    let cells = |f: &SampledFunction2D| -> (Exact, Exact, Exact, Exact) {
        let a = f.origin.0.mul_pow2(l1);
        let b = f.origin.1.mul_pow2(l2);
        let c = &a + &Exact::from_int(f.nx1 as i64);
        let d = &b + &Exact::from_int(f.nx2 as i64);
        (a, b, c, d)
    };
    let (mut x0, mut y0, mut x1, mut y1) = cells(first);
    for g in &grids[1..] {
        let (a, b, c, d) = cells(g);
        x0 = x0.min(a);
        y0 = y0.min(b);
        x1 = x1.max(c);
        y1 = y1.max(d);
    }
    let to_usize = |e: Exact| num_traits::ToPrimitive::to_usize(&e.floor()).unwrap_or(0);
    let nx1 = to_usize(&x1 - &x0);
    let nx2 = to_usize(&y1 - &y0);
    let origin = (x0.mul_pow2(-l1), y0.mul_pow2(-l2));
    let padded: Vec<SampledFunction2D> = grids
        .iter()
        .map(|g| g.padded_to(origin.clone(), nx1, nx2))
        .collect::<Result<_>>()?;
    let parts: Vec<(f64, &SampledFunction2D)> =
        terms.iter().map(|(c, _)| *c).zip(padded.iter()).collect();
    let f = SampledFunction2D::combine(&parts)?;
    let mut c = cone_slope_diagnostic(&f)?;
    c.label = terms
        .iter()
        .map(|(a, idx)| format!("{a:+}*{idx}"))
        .collect::<Vec<_>>()
        .join(" ");
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_sets() {
        assert_eq!(classify_slopes(&[0.0, -0.5, 0.01]), SlopeVerdict::Cone1);
        assert_eq!(classify_slopes(&[-1.0, 1.005]), SlopeVerdict::Cone1);
        assert_eq!(classify_slopes(&[0.0, 2.0, -4.0]), SlopeVerdict::Cone2);
        assert_eq!(classify_slopes(&[0.01, -0.04]), SlopeVerdict::Unsheared);
        assert_eq!(classify_slopes(&[0.5, 2.0]), SlopeVerdict::Mixed);
        assert_eq!(classify_slopes(&[]), SlopeVerdict::Mixed);
    }
}
