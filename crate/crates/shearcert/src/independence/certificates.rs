use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dyadic::{lattice_collision, Exact};
use crate::error::{Error, Result};
use crate::mra1d::{cascade, wavelet_from_filter, FilterCoefficients, SampledFunction1D};
use crate::shearlet2d::ShearletSystemSpec;

use super::gram::{gram, Family1D, GramReport, Verdict, DEFAULT_TOLERANCE};

/// Default seed for every randomized check.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;
/// Support detection threshold relative to `max |f|`.
pub const SUPPORT_THRESHOLD: f64 = 1e-8;
/// Grid level of the lattice-lemma scan.
pub const LATTICE_LEVEL: u32 = 12;
/// Translation window `|m| <= 8` of the lattice-lemma draws.
pub const LATTICE_WINDOW: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMethod {
    StaggeredSupport,
    GramRank,
    LatticeLemma,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    SupportMinima {
        minima: Vec<Exact>,
        collision: Option<(usize, usize)>,
        trials: usize,
        /// Combinations whose support minimum missed every `a_i` by more than one cell.
        misses: usize,
        seed: u64,
    },
    Gram {
        sigma_min: f64,
        relative_sigma_min: f64,
        levels: (u32, u32),
    },
    Lattice {
        worst_distance: f64,
        tolerance: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceCertificate {
    pub method: CertificateMethod,
    pub witness: Witness,
    pub passed: bool,
}

impl IndependenceCertificate {
    pub fn from_gram(report: &GramReport) -> Self {
        let first = report.history.first().map_or(0, |r| r.level);
        IndependenceCertificate {
            method: CertificateMethod::GramRank,
            witness: Witness::Gram {
                sigma_min: report.sigma_min,
                relative_sigma_min: report.relative_sigma_min,
                levels: (first, report.quadrature_level),
            },
            passed: report.verdict == Verdict::Independent,
        }
    }
}

/// Grid points of `sum_i alpha_i f_i` at level `level` from its leftmost
/// support point, stopping at the first value above `SUPPORT_THRESHOLD max|f|`.
fn combination_minimum(functions: &[SampledFunction1D], alpha: &[f64], level: u32) -> Option<f64> {
    let h = (-(level as f64)).exp2();
    let terms: Vec<(&SampledFunction1D, f64)> = functions
        .iter()
        .zip(alpha.iter().copied())
        .filter(|(_, a)| *a != 0.0)
        .collect();
    let lo = terms.iter().map(|(f, _)| f.index_range(level).0).min()?;
    let hi = terms.iter().map(|(f, _)| f.index_range(level).1).max()?;
    let values: Vec<f64> = (lo..=hi)
        .map(|i| terms.iter().map(|(f, a)| a * f.eval(i as f64 * h)).sum())
        .collect();
    let peak = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let first = values
        .iter()
        .position(|v| v.abs() > SUPPORT_THRESHOLD * peak)?;
    Some((lo + first as i64) as f64 * h)
}

/// Staggered-support certificate: pairwise distinct exact support minima.
///
/// Also draws `trials` random combinations and checks that the support
/// minimum of each lies within one grid cell of some `support_min`.
pub fn staggered_support_certificate(
    functions: &[SampledFunction1D],
    trials: usize,
    seed: u64,
) -> IndependenceCertificate {
    let minima: Vec<Exact> = functions.iter().map(|f| f.support_min().clone()).collect();
    let collision = minima
        .iter()
        .enumerate()
        .flat_map(|(i, a)| {
            minima[i + 1..]
                .iter()
                .position(|b| a == b)
                .map(|k| (i, i + 1 + k))
        })
        .next();
    let level = functions.iter().map(|f| f.level()).max().unwrap_or(0);
    let cell = (-(level as f64)).exp2();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut misses = 0;
    let mut done = 0;
    while done < trials && !functions.is_empty() {
        let alpha: Vec<f64> = functions
            .iter()
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let Some(x) = combination_minimum(functions, &alpha, level) else {
            continue;
        };
        done += 1;
        let near = minima
            .iter()
            .any(|a| (x - a.to_f64()).abs() <= cell * (1.0 + 1e-9));
        if !near {
            misses += 1;
        }
    }
    IndependenceCertificate {
        method: CertificateMethod::StaggeredSupport,
        passed: collision.is_none() && misses == 0,
        witness: Witness::SupportMinima {
            minima,
            collision,
            trials,
            misses,
            seed,
        },
    }
}

/// One failed draw of the lattice-lemma scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeFailure {
    pub trial: usize,
    pub detected: f64,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub order: usize,
    pub scale: u32,
    pub level: u32,
    pub trials: usize,
    pub redraws: usize,
    pub seed: u64,
    pub worst_distance: f64,
    pub tolerance: f64,
    pub failures: Vec<LatticeFailure>,
    pub passed: bool,
}

impl LatticeReport {
    pub fn certificate(&self) -> IndependenceCertificate {
        IndependenceCertificate {
            method: CertificateMethod::LatticeLemma,
            witness: Witness::Lattice {
                worst_distance: self.worst_distance,
                tolerance: self.tolerance,
            },
            passed: self.passed,
        }
    }
}

/// Wavelet samples addressed by exact grid index at a fixed level.
struct WaveletTable {
    level: u32,
    first: i64,
    values: Vec<f64>,
}

impl WaveletTable {
    fn new(psi: &SampledFunction1D) -> Self {
        let first = psi
            .support_min()
            .mul_pow2(psi.level() as i64)
            .floor()
            .to_i64()
            .expect("support fits in i64");
        WaveletTable {
            level: psi.level(),
            first,
            values: psi.values().to_vec(),
        }
    }

    /// Adds `alpha psi(2^j x - m)` at `x = i 2^-level` for all `i`, with `x` grid starting at `lo`.
    fn accumulate(&self, out: &mut [f64], lo: i64, alpha: f64, j: u32, m: i64) {
        let scale = 1i64 << j;
        let shift = m << self.level;
        let n = out.len() as i64;
        let len = self.values.len() as i64;
        // psi index 2^j i - m 2^L - first, for 0 <= index < len
        let i_min = (shift + self.first).div_euclid(scale);
        let i_max = (shift + self.first + len - 1).div_euclid(scale) + 1;
        for i in i_min.max(lo)..=i_max.min(lo + n - 1) {
            let idx = scale * i - shift - self.first;
            if (0..len).contains(&idx) {
                out[(i - lo) as usize] += alpha * self.values[idx as usize];
            }
        }
    }
}

/// Support minimum, as a grid index at `level`, of `sum alpha psi(2^j x - m)`.
pub fn wavelet_combination_minimum(
    psi: &SampledFunction1D,
    terms: &[(f64, u32, i64)],
) -> Option<i64> {
    let table = WaveletTable::new(psi);
    let span = psi.values().len() as i64;
    let lo = terms
        .iter()
        .map(|&(_, j, m)| ((m << table.level) + table.first) >> j)
        .min()?
        - 1;
    let hi = terms
        .iter()
        .map(|&(_, j, m)| ((m << table.level) + table.first + span) >> j)
        .max()?
        + 1;
    let mut values = vec![0.0; (hi - lo + 1) as usize];
    for &(a, j, m) in terms {
        table.accumulate(&mut values, lo, a, j, m);
    }
    let peak = values.iter().fold(0.0_f64, |p, v| p.max(v.abs()));
    if peak == 0.0 {
        return None;
    }
    let first = values
        .iter()
        .position(|v| v.abs() > SUPPORT_THRESHOLD * peak)?;
    Some(lo + first as i64)
}

/// Random sparse combinations of `psi(2^j x - m)`, `0 <= j <= scale`,
/// `|m| <= 8`; each detected support minimum must lie within `2^(1-L)` of
/// `2^-(scale+1) Z`.
pub fn verify_min_support_lemma(
    filter: &FilterCoefficients,
    scale: u32,
    trials: usize,
    seed: u64,
) -> Result<LatticeReport> {
    if scale > 4 {
        return Err(Error::InvalidArgument(format!("scale {scale} exceeds 4")));
    }
    let level = LATTICE_LEVEL;
    let psi = wavelet_from_filter(filter, level)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spacing = 1i64 << (level - scale - 1);
    let h = (-(level as f64)).exp2();
    let tolerance = 2.0 * h;
    let mut redraws = 0;
    let mut worst = 0.0_f64;
    let mut failures = Vec::new();
    for trial in 0..trials {
        let found = loop {
            let mut terms = Vec::new();
            for j in 0..=scale {
                for m in -LATTICE_WINDOW..=LATTICE_WINDOW {
                    if rng.random_bool(0.25) {
                        let mag: f64 = rng.random_range(0.1..1.0);
                        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                        terms.push((sign * mag, j, m));
                    }
                }
            }
            match wavelet_combination_minimum(&psi, &terms) {
                Some(i) => break i,
                None => redraws += 1,
            }
        };
        let r = found.rem_euclid(spacing);
        let distance = r.min(spacing - r) as f64 * h;
        worst = worst.max(distance);
        if distance >= tolerance {
            failures.push(LatticeFailure {
                trial,
                detected: found as f64 * h,
                distance,
            });
        }
    }
    Ok(LatticeReport {
        order: filter.order(),
        scale,
        level,
        trials,
        redraws,
        seed,
        worst_distance: worst,
        tolerance,
        passed: failures.is_empty(),
        failures,
    })
}

/// Quadrature and cascade settings for the 1D Gram checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub cascade_level: u32,
    pub levels: (u32, u32),
    pub tolerance: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            cascade_level: 12,
            levels: (8, 10),
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// The family `{psi(2^j (x - t_i) + l)}`, `0 <= j <= scale`, `|l| <= window`,
/// labelled `i,j,l`.
pub fn shifted_wavelet_family(
    psi: &SampledFunction1D,
    scale: u32,
    t: &[Exact],
    window: i64,
) -> Family1D {
    let mut fam = Family1D::default();
    for (i, ti) in t.iter().enumerate() {
        for j in 0..=scale {
            for l in -window..=window {
                let shift = &ti.mul_pow2(j as i64) - &Exact::from_int(l);
                let f = psi
                    .dilate_translate(j, &shift)
                    .scaled((j as f64 / 2.0).exp2());
                fam.push(format!("t{i},j{j},l{l}"), f);
            }
        }
    }
    fam
}

/// Gram certificate for shifted wavelet systems with offsets `t`.
///
/// Fails with [`Error::HypothesisFailed`] when two offsets differ by an
/// element of `2^-(scale+1) Z`.
pub fn verify_prop33(
    filter: &FilterCoefficients,
    scale: u32,
    t: &[Exact],
    window: i64,
    settings: QuadratureSettings,
) -> Result<GramReport> {
    if let Some((i, j)) = lattice_collision(t, scale) {
        return Err(Error::HypothesisFailed {
            i,
            j,
            diff: (&t[i] - &t[j]).to_string(),
            exponent: scale + 1,
        });
    }
    let psi = wavelet_from_filter(filter, settings.cascade_level)?;
    let fam = shifted_wavelet_family(&psi, scale, t, window);
    gram(
        &fam,
        settings.levels.0,
        settings.levels.1,
        settings.tolerance,
    )
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxisCheck {
    pub c: Exact,
    pub odd_denominator: bool,
    pub gram: GramReport,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub order: usize,
    pub desk_scale: u32,
    pub window: i64,
    pub format_admissible: bool,
    pub axes: Vec<AxisCheck>,
    pub passed: bool,
    pub note: String,
}

/// Odd-denominator check on both sampling constants plus a 1D Gram check of
/// `{phi(x - c m), psi(2^j x - c m)}` for each constant.
pub fn admissibility_check(
    spec: &ShearletSystemSpec,
    desk_scale: u32,
    window: i64,
    settings: QuadratureSettings,
) -> Result<AdmissibilityReport> {
    let filter = crate::mra1d::daubechies_filter(spec.order)?;
    let phi = cascade(&filter, settings.cascade_level)?;
    let psi = wavelet_from_filter(&filter, settings.cascade_level)?;
    let mut axes = Vec::new();
    for c in [&spec.c.0, &spec.c.1] {
        let mut fam = Family1D::default();
        for m in -window..=window {
            let shift = c * &Exact::from_int(m);
            fam.push(format!("phi,m{m}"), phi.translate(&shift));
            for j in 0..=desk_scale {
                let f = psi
                    .dilate_translate(j, &shift)
                    .scaled((j as f64 / 2.0).exp2());
                fam.push(format!("psi,j{j},m{m}"), f);
            }
        }
        let report = gram(
            &fam,
            settings.levels.0,
            settings.levels.1,
            settings.tolerance,
        )?;
        axes.push(AxisCheck {
            c: c.clone(),
            odd_denominator: c.two_exponent() == 0,
            gram: report,
        });
    }
    let format_admissible = spec.format_admissible();
    let passed = format_admissible && axes.iter().all(|a| a.gram.verdict == Verdict::Independent);
    Ok(AdmissibilityReport {
        order: spec.order,
        desk_scale,
        window,
        format_admissible,
        axes,
        passed,
        note: "the Gram check covers finitely many scales and translations; it is evidence for \
               the independence assumption on the 1D generators, not a proof of it"
            .into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_wavelet_minima() {
        let psi = wavelet_from_filter(&FilterCoefficients::haar(), LATTICE_LEVEL).unwrap();
        assert_eq!(wavelet_combination_minimum(&psi, &[(1.0, 0, 0)]), Some(0));
        let i = wavelet_combination_minimum(&psi, &[(1.0, 1, 3)]).unwrap();
        assert_eq!(i, 3 << (LATTICE_LEVEL - 1));
    }

    #[test]
    fn lattice_collision_is_reported() {
        let t = [Exact::zero(), Exact::ratio(1, 4).unwrap()];
        let err = verify_prop33(
            &FilterCoefficients::haar(),
            1,
            &t,
            1,
            QuadratureSettings::default(),
        );
        assert!(matches!(
            err,
            Err(Error::HypothesisFailed {
                i: 0,
                j: 1,
                exponent: 2,
                ..
            })
        ));
    }

    #[test]
    fn staggered_translates() {
        let phi = cascade(&FilterCoefficients::haar(), 8).unwrap();
        let fs: Vec<_> = (0..3)
            .map(|i| phi.translate(&Exact::ratio(i, 3).unwrap()))
            .collect();
        let cert = staggered_support_certificate(&fs, 20, DEFAULT_SEED);
        assert!(cert.passed);
        let dup = [phi.clone(), phi];
        let cert = staggered_support_certificate(&dup, 5, DEFAULT_SEED);
        assert!(!cert.passed);
        assert!(matches!(
            cert.witness,
            Witness::SupportMinima {
                collision: Some((0, 1)),
                ..
            }
        ));
    }
}
