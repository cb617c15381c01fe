use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::system::SampledFunction2D;

/// Number of consecutive slices per slope window.
pub const WINDOW: usize = 5;

/// Direction along which the support minimum is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    /// Minimum over `x1` on each row `x2 = const`.
    X1,
    /// Minimum over `x2` on each column `x1 = const`.
    X2,
}

/// Least-squares line through one window of the profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeWindow {
    /// Slice coordinate of the window's first slice.
    pub start: f64,
    /// Slope of support minimum against slice coordinate.
    pub slope: f64,
    /// Largest deviation from the fitted line, in grid cells along the axis.
    pub max_residual_cells: f64,
}

/// Lower support bound per slice and its local slopes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportProfile {
    pub axis: Axis,
    pub slices: Vec<f64>,
    pub minima: Vec<Option<f64>>,
    pub windows: Vec<SlopeWindow>,
}

fn fit(points: &[(f64, f64)], cell: f64) -> SlopeWindow {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let max_residual_cells = points
        .iter()
        .map(|p| (p.1 - (my + slope * (p.0 - mx))).abs() / cell)
        .fold(0.0, f64::max);
    SlopeWindow {
        start: points[0].0,
        slope,
        max_residual_cells,
    }
}

/// Smallest coordinate along `axis` where `|f| > threshold`, per slice, with
/// least-squares slopes over non-overlapping windows of [`WINDOW`] slices.
///
/// Windows only span consecutive nonempty slices.
pub fn lower_support_profile(
    f: &SampledFunction2D,
    axis: Axis,
    threshold: f64,
) -> Result<SupportProfile> {
    let (n_slices, n_along) = match axis {
        Axis::X1 => (f.nx2, f.nx1),
        Axis::X2 => (f.nx1, f.nx2),
    };
    let value = |slice: usize, along: usize| match axis {
        Axis::X1 => f.at(along, slice),
        Axis::X2 => f.at(slice, along),
    };
    let slice_coord = |s: usize| match axis {
        Axis::X1 => f.x2(s),
        Axis::X2 => f.x1(s),
    };
    let along_coord = |a: usize| match axis {
        Axis::X1 => f.x1(a),
        Axis::X2 => f.x2(a),
    };
    let cell = match axis {
        Axis::X1 => f.step_x1(),
        Axis::X2 => f.step_x2(),
    };
    let slices: Vec<f64> = (0..n_slices).map(slice_coord).collect();
    let minima: Vec<Option<f64>> = (0..n_slices)
        .map(|s| {
            (0..n_along)
                .find(|&a| value(s, a).abs() > threshold)
                .map(along_coord)
        })
        .collect();
    if minima.iter().all(Option::is_none) {
        return Err(Error::EmptySupport(threshold));
    }
    let mut windows = Vec::new();
    let mut run: Vec<(f64, f64)> = Vec::with_capacity(WINDOW);
    for (s, m) in slices.iter().zip(&minima) {
        match m {
            Some(v) => {
                run.push((*s, *v));
                if run.len() == WINDOW {
                    windows.push(fit(&run, cell));
                    run.clear();
                }
            }
            None => run.clear(),
        }
    }
    Ok(SupportProfile {
        axis,
        slices,
        minima,
        windows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_fit() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 3.0 - 2.0 * i as f64)).collect();
        let w = fit(&pts, 0.5);
        assert!((w.slope + 2.0).abs() < 1e-14);
        assert!(w.max_residual_cells < 1e-12);
    }

    #[test]
    fn kink_has_large_residual() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (4.0, -1.0)];
        let w = fit(&pts, 1.0);
        assert!((w.slope + 0.2).abs() < 1e-14);
        assert!((w.max_residual_cells - 0.4).abs() < 1e-14);
    }
}
