use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::gram::{gram, InnerProductFamily, Verdict};

/// Slack allowed when checking that the bounds do not increase.
pub const INTERLACING_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameBoundReport {
    pub sizes: Vec<usize>,
    /// `A_N`: smallest eigenvalue of the Gram matrix of the `N`-th index set.
    pub bounds: Vec<f64>,
    pub infimum: f64,
    pub nonincreasing: bool,
    pub quadrature_level: u32,
    pub gram_verdict: Verdict,
}

/// Lower frame bounds of nested subfamilies from one Gram matrix.
///
/// `nesting[n]` lists positions into `gram`; each set must strictly contain
/// the previous one.
pub fn frame_bounds_from_gram(gram: &DMatrix<f64>, nesting: &[Vec<usize>]) -> Result<Vec<f64>> {
    if nesting.is_empty() {
        return Err(Error::EmptySelection);
    }
    for (n, w) in nesting.windows(2).enumerate() {
        let strict = w[1].len() > w[0].len() && w[0].iter().all(|i| w[1].contains(i));
        if !strict {
            return Err(Error::NotNested(n + 1));
        }
    }
    nesting
        .iter()
        .map(|set| {
            if set.is_empty() {
                return Err(Error::EmptySelection);
            }
            if let Some(&bad) = set.iter().find(|&&i| i >= gram.nrows()) {
                return Err(Error::InvalidArgument(format!("index {bad} out of range")));
            }
            let sub = DMatrix::from_fn(set.len(), set.len(), |a, b| gram[(set[a], set[b])]);
            Ok(sub
                .symmetric_eigenvalues()
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min))
        })
        .collect()
}

/// `A_N` for nested index sets of `family`, with the Gram matrix certified at
/// quadrature levels `l0..=l1`.
pub fn frame_bound_sequence<F: InnerProductFamily>(
    family: &F,
    nesting: &[Vec<usize>],
    l0: u32,
    l1: u32,
    tolerance: f64,
) -> Result<FrameBoundReport> {
    let report = gram(family, l0, l1, tolerance)?;
    let bounds = frame_bounds_from_gram(&report.gram, nesting)?;
    let nonincreasing = bounds.windows(2).all(|w| w[1] <= w[0] + INTERLACING_SLACK);
    Ok(FrameBoundReport {
        sizes: nesting.iter().map(Vec::len).collect(),
        infimum: bounds.iter().copied().fold(f64::INFINITY, f64::min),
        bounds,
        nonincreasing,
        quadrature_level: report.quadrature_level,
        gram_verdict: report.verdict,
    })
}

/// Prefix nesting `{0..s_1} ⊂ {0..s_2} ⊂ ...`.
pub fn prefix_nesting(sizes: &[usize]) -> Vec<Vec<usize>> {
    sizes.iter().map(|&s| (0..s).collect()).collect()
}
