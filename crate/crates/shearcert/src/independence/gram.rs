use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mra1d::{dot_overlap, SampledFunction1D};
use crate::shearlet2d::{ShearletIndex, ShearletSystem};

/// Default relative tolerance on `sigma_min / max diagonal`.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Row chunks per Gram assembly; fixed so sums do not depend on thread count.
pub const CHUNKS: usize = 8;
/// Entry deltas below this fraction of the largest diagonal count as converged.
pub const CONVERGED_DELTA: f64 = 1e-12;

/// A finite family of functions whose Gram matrix can be assembled by
/// quadrature on `2^-level Z^d`.
pub trait InnerProductFamily: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn label(&self, i: usize) -> String;

    /// Riemann-sum Gram matrix at one quadrature level.
    fn gram_matrix(&self, level: u32) -> Result<DMatrix<f64>>;
}

/// Outcome of a Gram certification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Independent,
    Dependent,
    Inconclusive,
}

/// Per-level quantities recorded during certification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: u32,
    pub sigma_min: f64,
    pub relative_sigma_min: f64,
    pub max_diagonal: f64,
    /// Largest entry change against the previous level.
    pub max_entry_delta: Option<f64>,
}

/// Gram matrix at the finest level with its convergence history and verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GramReport {
    pub labels: Vec<String>,
    #[serde(skip)]
    pub gram: DMatrix<f64>,
    pub quadrature_level: u32,
    pub sigma_min: f64,
    pub relative_sigma_min: f64,
    pub max_diagonal: f64,
    pub min_eigenvalue: f64,
    pub symmetry_defect: f64,
    pub tolerance: f64,
    /// `(level, max entry delta)` for every level after the first.
    pub convergence: Vec<(u32, f64)>,
    pub history: Vec<LevelRecord>,
    /// `|rel sigma(L1) - rel sigma(L1 - 1)|`.
    pub sigma_tail: f64,
    pub verdict: Verdict,
}

impl GramReport {
    pub fn size(&self) -> usize {
        self.labels.len()
    }
}

fn smallest_singular_value(g: &DMatrix<f64>) -> f64 {
    g.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Certifies linear independence of `family` from Gram matrices at quadrature
/// levels `l0..=l1` (at least three levels).
///
/// * `independent`: relative `sigma_min` above `tolerance` at `l1`, its change
///   from `l1 - 1` below a tenth of its value, and entry deltas decreasing.
/// * `dependent`: relative `sigma_min` at or below `tolerance` at both `l1 - 1`
///   and `l1`.
/// * `inconclusive` otherwise.
pub fn gram<F: InnerProductFamily>(
    family: &F,
    l0: u32,
    l1: u32,
    tolerance: f64,
) -> Result<GramReport> {
    if l1 < l0 + 2 {
        return Err(Error::QuadratureLevels(l0, l1));
    }
    if family.is_empty() {
        return Err(Error::EmptySelection);
    }
    let mut history: Vec<LevelRecord> = Vec::new();
    let mut previous: Option<DMatrix<f64>> = None;
    for level in l0..=l1 {
        let g = family.gram_matrix(level)?;
        let max_diagonal = g.diagonal().iter().copied().fold(0.0, f64::max);
        let sigma_min = smallest_singular_value(&g);
        let max_entry_delta = previous.as_ref().map(|p| (&g - p).amax());
        history.push(LevelRecord {
            level,
            sigma_min,
            relative_sigma_min: if max_diagonal > 0.0 {
                sigma_min / max_diagonal
            } else {
                0.0
            },
            max_diagonal,
            max_entry_delta,
        });
        previous = Some(g);
    }
    let gram = previous.expect("at least one level");
    let last = history.last().expect("at least one level").clone();
    let before = &history[history.len() - 2];
    let sigma_tail = (last.relative_sigma_min - before.relative_sigma_min).abs();
    let deltas: Vec<f64> = history.iter().filter_map(|r| r.max_entry_delta).collect();
    let floor = CONVERGED_DELTA * last.max_diagonal;
    let deltas_decrease = deltas.windows(2).all(|w| w[1] < w[0] || w[1] <= floor);
    let verdict = if last.relative_sigma_min > tolerance
        && sigma_tail < last.relative_sigma_min / 10.0
        && deltas_decrease
    {
        Verdict::Independent
    } else if last.relative_sigma_min <= tolerance && before.relative_sigma_min <= tolerance {
        Verdict::Dependent
    } else {
        Verdict::Inconclusive
    };
    let min_eigenvalue = gram
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let symmetry_defect = (&gram - gram.transpose()).amax();
    Ok(GramReport {
        labels: (0..family.len()).map(|i| family.label(i)).collect(),
        quadrature_level: l1,
        sigma_min: last.sigma_min,
        relative_sigma_min: last.relative_sigma_min,
        max_diagonal: last.max_diagonal,
        min_eigenvalue,
        symmetry_defect,
        tolerance,
        convergence: history
            .iter()
            .filter_map(|r| r.max_entry_delta.map(|d| (r.level, d)))
            .collect(),
        history,
        sigma_tail,
        verdict,
        gram,
    })
}

/// Labelled 1D functions; inner products by Riemann sums on `2^-level Z`.
#[derive(Clone, Debug, Default)]
pub struct Family1D {
    pub functions: Vec<(String, SampledFunction1D)>,
}

impl Family1D {
    pub fn new(functions: Vec<(String, SampledFunction1D)>) -> Self {
        Family1D { functions }
    }

    pub fn push(&mut self, label: impl Into<String>, f: SampledFunction1D) {
        self.functions.push((label.into(), f));
    }
}

impl InnerProductFamily for Family1D {
    fn len(&self) -> usize {
        self.functions.len()
    }

    fn label(&self, i: usize) -> String {
        self.functions[i].0.clone()
    }

    fn gram_matrix(&self, level: u32) -> Result<DMatrix<f64>> {
        let samples: Vec<(i64, Vec<f64>)> = self
            .functions
            .par_iter()
            .map(|(_, f)| f.sample_at_level(level))
            .collect();
        let n = samples.len();
        let h = (-(level as f64)).exp2();
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|a| {
                (0..n)
                    .map(|b| {
                        if b < a {
                            0.0
                        } else {
                            let (la, va) = &samples[a];
                            let (lb, vb) = &samples[b];
                            dot_overlap(*la, va, *lb, vb) * h
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(DMatrix::from_fn(n, n, |a, b| {
            if a <= b {
                rows[a][b]
            } else {
                rows[b][a]
            }
        }))
    }
}

/// Elements of a shearlet system; inner products by Riemann sums on
/// `(2^-level Z)^2`, assembled row by row in `x2`.
#[derive(Clone, Debug)]
pub struct ShearletFamily<'a> {
    pub system: &'a ShearletSystem,
    pub indices: Vec<ShearletIndex>,
}

impl<'a> ShearletFamily<'a> {
    pub fn new(system: &'a ShearletSystem, indices: Vec<ShearletIndex>) -> Self {
        ShearletFamily { system, indices }
    }
}

impl InnerProductFamily for ShearletFamily<'_> {
    fn len(&self) -> usize {
        self.indices.len()
    }

    fn label(&self, i: usize) -> String {
        self.indices[i].to_string()
    }

    fn gram_matrix(&self, level: u32) -> Result<DMatrix<f64>> {
        let needed = level + self.system.spec().j_max;
        if self.system.cascade_level() < needed {
            return Err(Error::InsufficientLevel {
                needed,
                got: self.system.cascade_level(),
            });
        }
        let n = self.indices.len();
        let h = (-(level as f64)).exp2();
        let kernels: Vec<_> = self.indices.iter().map(|i| self.system.kernel(i)).collect();
        let spans: Vec<(i64, i64)> = kernels
            .iter()
            .map(|k| {
                (
                    (k.y_range.0 / h).ceil() as i64,
                    (k.y_range.1 / h).floor() as i64,
                )
            })
            .collect();
        let row_lo = spans.iter().map(|s| s.0).min().unwrap_or(0);
        let row_hi = spans.iter().map(|s| s.1).max().unwrap_or(-1);
        let total = (row_hi - row_lo + 1).max(0);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (spans[i].0, i));
        let partials: Vec<Vec<f64>> = (0..CHUNKS)
            .into_par_iter()
            .map(|chunk| {
                let r_start = row_lo + total * chunk as i64 / CHUNKS as i64;
                let r_end = row_lo + total * (chunk as i64 + 1) / CHUNKS as i64;
                let mut acc = vec![0.0; n * n];
                let mut active: Vec<usize> = Vec::new();
                let mut next = order.partition_point(|&i| spans[i].0 < r_start);
                active.extend(order[..next].iter().filter(|&&i| spans[i].1 >= r_start));
                for r in r_start..r_end {
                    while next < n && spans[order[next]].0 <= r {
                        active.push(order[next]);
                        next += 1;
                    }
                    active.retain(|&i| spans[i].1 >= r);
                    let y = r as f64 * h;
                    let mut rows: Vec<(usize, i64, Vec<f64>)> = active
                        .iter()
                        .filter_map(|&i| {
                            self.system.row(&kernels[i], y, h).map(|(lo, v)| (i, lo, v))
                        })
                        .collect();
                    rows.sort_by_key(|(i, lo, _)| (*lo, *i));
                    for a in 0..rows.len() {
                        let (ia, la, ref va) = rows[a];
                        let hi_a = la + va.len() as i64;
                        for row_b in &rows[a..] {
                            let (ib, lb, ref vb) = *row_b;
                            if lb >= hi_a {
                                break;
                            }
                            let (p, q) = if ia <= ib { (ia, ib) } else { (ib, ia) };
                            acc[p * n + q] += dot_overlap(la, va, lb, vb);
                        }
                    }
                }
                acc
            })
            .collect();
        let mut total_acc = vec![0.0; n * n];
        for part in &partials {
            for (t, p) in total_acc.iter_mut().zip(part) {
                *t += p;
            }
        }
        let w = h * h;
        Ok(DMatrix::from_fn(n, n, |a, b| {
            let (p, q) = if a <= b { (a, b) } else { (b, a) };
            total_acc[p * n + q] * w
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Exact;
    use crate::mra1d::{wavelet_from_filter, FilterCoefficients};

    fn haar_wavelets() -> Family1D {
        let psi = wavelet_from_filter(&FilterCoefficients::haar(), 8).unwrap();
        let mut fam = Family1D::default();
        for j in 0..=2u32 {
            for m in -2..=2i64 {
                let f = psi
                    .dilate_translate(j, &Exact::from_int(m))
                    .scaled((j as f64 / 2.0).exp2());
                fam.push(format!("psi_{j},{m}"), f);
            }
        }
        fam
    }

    #[test]
    fn haar_wavelets_are_orthonormal() {
        let r = gram(&haar_wavelets(), 4, 6, DEFAULT_TOLERANCE).unwrap();
        let id = DMatrix::<f64>::identity(15, 15);
        assert!((&r.gram - id).amax() < 1e-8);
        assert_eq!(r.verdict, Verdict::Independent);
    }

    #[test]
    fn duplicate_is_dependent() {
        let mut fam = haar_wavelets();
        let dup = fam.functions[3].clone();
        fam.functions.push(dup);
        let r = gram(&fam, 4, 6, DEFAULT_TOLERANCE).unwrap();
        assert!(r.sigma_min < 1e-10);
        assert_eq!(r.verdict, Verdict::Dependent);
    }

    #[test]
    fn too_few_levels() {
        assert!(matches!(
            gram(&haar_wavelets(), 4, 5, DEFAULT_TOLERANCE),
            Err(Error::QuadratureLevels(4, 5))
        ));
        assert!(gram(&Family1D::default(), 4, 6, DEFAULT_TOLERANCE).is_err());
    }
}
