//! Frequency-side checks on scaling functions and wavelets.
//!
//! Fourier transforms use `f^(xi) = ∫ f(x) e^{-2πi x xi} dx`, approximated by
//! Riemann sums of the cascade samples. The closed-form low-pass symbol
//! [`lowpass_symbol`] uses a half-frequency convention and is only used for the
//! positivity check on `(-1, 1)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::sampled::SampledFunction1D;

/// Minimum cascade level for the essential-infimum check.
pub const MIN_INF_PHI_LEVEL: u32 = 8;
/// Relative change that triggers a grid-resolution warning.
pub const RESOLUTION_WARNING: f64 = 0.1;
/// Floor for `|psi^|` on a dyadic band to count as bounded below.
pub const BETA_FLOOR: f64 = 1e-6;
/// Smallest dyadic exponent tried by [`find_beta`].
pub const BETA_MAX_EXPONENT: u32 = 10;
/// Absolute slack for numerically-zero transform values in [`check_decay`].
pub const DECAY_ABS_TOL: f64 = 1e-12;
/// Default frequency range `|xi| <= XI_MAX` for decay checks.
pub const XI_MAX: f64 = 64.0;

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Closed-form Daubechies low-pass symbol
/// `((1 + e^{-iπξ})/2)^N · Σ_{s<N} C(N-1+s, s) sin^{2s}(πξ/2)`.
pub fn lowpass_symbol(order: u32, xi: f64) -> Complex64 {
    let half = (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, -PI * xi)) / 2.0;
    let s2 = (PI * xi / 2.0).sin().powi(2);
    let poly: f64 = (0..order as u64)
        .map(|s| binomial(order as u64 - 1 + s, s) * s2.powi(s as i32))
        .sum();
    half.powu(order) * poly
}

/// Grid minimum of `|lowpass_symbol|` over `[-1 + 1e-6, 1 - 1e-6]` (10^4 points).
///
/// Returns whether the minimum is positive together with its value.
pub fn m0_positive_on_interval(order: u32) -> (bool, f64) {
    let eps = 1e-6;
    let points = 10_000;
    let min = (0..points)
        .map(|i| {
            let xi = -1.0 + eps + (2.0 - 2.0 * eps) * i as f64 / (points - 1) as f64;
            lowpass_symbol(order, xi).norm()
        })
        .fold(f64::INFINITY, f64::min);
    (min > 0.0, min)
}

/// Riemann-sum Fourier transform `2^-L Σ_n f_n e^{-2πi x_n ξ}` at each `ξ`.
pub fn fourier_transform(f: &SampledFunction1D, xis: &[f64]) -> Vec<Complex64> {
    let h = f.step();
    let x0 = f.grid_point(0);
    xis.iter()
        .map(|&xi| {
            let step = Complex64::from_polar(1.0, -2.0 * PI * h * xi);
            let mut phase = Complex64::from_polar(1.0, -2.0 * PI * x0 * xi);
            let mut acc = Complex64::new(0.0, 0.0);
            for (n, &v) in f.values().iter().enumerate() {
                if n % 1024 == 0 {
                    // Re-anchor the phase to stop rounding drift.
                    phase = Complex64::from_polar(1.0, -2.0 * PI * (x0 + n as f64 * h) * xi);
                }
                acc += phase * v;
                phase *= step;
            }
            acc * h
        })
        .collect()
}

/// `count` equally spaced points on `[a, b]`.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![a];
    }
    (0..count)
        .map(|i| a + (b - a) * i as f64 / (count - 1) as f64)
        .collect()
}

/// `(ξ, |f^(ξ)|)` on `count` points of `[-xi_max, xi_max]`.
pub fn spectrum(f: &SampledFunction1D, xi_max: f64, count: usize) -> Vec<(f64, f64)> {
    let xis = linspace(-xi_max, xi_max, count);
    let ft = fourier_transform(f, &xis);
    xis.into_iter().zip(ft.iter().map(|c| c.norm())).collect()
}

/// Outcome of the essential-infimum check on `|phi^|^2` over `|ξ| <= 1/2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfPhiReport {
    pub positive: bool,
    pub min_value: f64,
    pub min_at: f64,
    pub level: u32,
    pub half_resolution_min: f64,
    pub warning: Option<String>,
}

fn min_power(f: &SampledFunction1D, xis: &[f64]) -> (f64, f64) {
    fourier_transform(f, xis)
        .iter()
        .zip(xis)
        .map(|(c, &xi)| (c.norm_sqr(), xi))
        .fold((f64::INFINITY, 0.0), |best, cur| {
            if cur.0 < best.0 {
                cur
            } else {
                best
            }
        })
}

/// Grid minimum of `|phi^(ξ)|^2` on `|ξ| <= 1/2`.
///
/// The estimate is repeated on the half-resolution subsample; a relative
/// change above 10% produces a warning.
pub fn check_inf_phi(phi: &SampledFunction1D) -> Result<InfPhiReport> {
    if phi.level() < MIN_INF_PHI_LEVEL {
        return Err(Error::InsufficientLevel {
            needed: MIN_INF_PHI_LEVEL,
            got: phi.level(),
        });
    }
    let xis = linspace(-0.5, 0.5, 257);
    let (min_value, min_at) = min_power(phi, &xis);
    let (half_min, _) = min_power(&phi.subsample()?, &xis);
    let change = (min_value - half_min).abs();
    let warning = (change > RESOLUTION_WARNING * min_value.abs() && change > 0.0).then(|| {
        format!(
            "minimum moved from {half_min:.6e} to {min_value:.6e} between levels {} and {}",
            phi.level() - 1,
            phi.level()
        )
    });
    Ok(InfPhiReport {
        positive: min_value > 0.0,
        min_value,
        min_at,
        level: phi.level(),
        half_resolution_min: half_min,
        warning,
    })
}

/// Witness for a band `β/2 <= |ξ| <= β` on which `|psi^|` stays above the floor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaWitness {
    pub beta: f64,
    pub min_modulus: f64,
}

/// Largest `β ∈ {1, 1/2, ..., 2^-10}` with `min_{β/2<=|ξ|<=β} |psi^(ξ)| > 1e-6`.
///
/// Only positive frequencies are scanned: `|psi^|` is even for real `psi`.
pub fn find_beta(psi: &SampledFunction1D) -> Option<BetaWitness> {
    (0..=BETA_MAX_EXPONENT).find_map(|e| {
        let beta = (-(e as f64)).exp2();
        let xis = linspace(beta / 2.0, beta, 129);
        let min_modulus = fourier_transform(psi, &xis)
            .iter()
            .map(|c| c.norm())
            .fold(f64::INFINITY, f64::min);
        (min_modulus > BETA_FLOOR).then_some(BetaWitness { beta, min_modulus })
    })
}

/// Decay exponents and constants for the frame hypotheses.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameHypothesisParams {
    pub alpha: f64,
    pub gamma: f64,
    pub k1: f64,
    pub k2: f64,
    pub beta: f64,
}

impl FrameHypothesisParams {
    /// `γ + 4 > α > γ > 4` and `0 < β <= 1`.
    pub fn is_valid(&self) -> bool {
        self.gamma + 4.0 > self.alpha
            && self.alpha > self.gamma
            && self.gamma > 4.0
            && self.beta > 0.0
            && self.beta <= 1.0
    }
}

/// Which decay bound a transform is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayKind {
    /// `|phi^(ξ)| <= K2 / (1 + |ξ|^2)^{γ/2}`.
    Scaling,
    /// `|psi^(ξ)| <= K1 |ξ|^α / (1 + |ξ|^2)^{γ/2}`.
    Wavelet,
}

fn decay_profile(xi: f64, params: &FrameHypothesisParams, kind: DecayKind) -> f64 {
    let base = (1.0 + xi * xi).powf(-params.gamma / 2.0);
    match kind {
        DecayKind::Scaling => base,
        DecayKind::Wavelet => xi.abs().powf(params.alpha) * base,
    }
}

/// Smallest constant making the bound hold on the samples with `0 < |ξ| <= band`.
pub fn fit_decay_constant(
    samples: &[(f64, f64)],
    params: &FrameHypothesisParams,
    kind: DecayKind,
    band: f64,
) -> f64 {
    samples
        .iter()
        .filter(|(xi, _)| *xi != 0.0 && xi.abs() <= band)
        .map(|&(xi, m)| m / decay_profile(xi, params, kind))
        .fold(0.0, f64::max)
}

/// Result of a grid decay check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub kind: DecayKind,
    pub constant: f64,
    pub holds: bool,
    pub first_violation: Option<f64>,
    pub points: usize,
}

/// Checks `|f^(ξ)| <= K · profile(ξ)` at every sample, `K` taken from `params`.
pub fn check_decay(
    samples: &[(f64, f64)],
    params: &FrameHypothesisParams,
    kind: DecayKind,
) -> DecayReport {
    let constant = match kind {
        DecayKind::Scaling => params.k2,
        DecayKind::Wavelet => params.k1,
    };
    let first_violation = samples
        .iter()
        .find(|&&(xi, m)| {
            m > constant * decay_profile(xi, params, kind) * (1.0 + 1e-12) + DECAY_ABS_TOL
        })
        .map(|&(xi, _)| xi);
    DecayReport {
        kind,
        constant,
        holds: first_violation.is_none(),
        first_violation,
        points: samples.len(),
    }
}

/// All spectral hypotheses for one filter order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub order: usize,
    pub level: u32,
    pub params: FrameHypothesisParams,
    pub inf_phi: InfPhiReport,
    pub beta: Option<BetaWitness>,
    pub m0_positive: bool,
    pub m0_min: f64,
    pub decay_scaling: DecayReport,
    pub decay_wavelet: DecayReport,
}

impl HypothesisReport {
    pub fn decay_holds(&self) -> bool {
        self.decay_scaling.holds && self.decay_wavelet.holds
    }
}

/// Runs every spectral check for `phi`, `psi` of the given order.
///
/// Decay constants are fitted on `|ξ| <= xi_max / 4` and then checked on the
/// full grid `|ξ| <= xi_max`, so a bound that only holds at low frequency is
/// reported with its first violating `ξ`.
pub fn check_hypotheses(
    order: usize,
    phi: &SampledFunction1D,
    psi: &SampledFunction1D,
    alpha: f64,
    gamma: f64,
    xi_max: f64,
) -> Result<HypothesisReport> {
    let inf_phi = check_inf_phi(phi)?;
    let beta = find_beta(psi);
    let (m0_positive, m0_min) = m0_positive_on_interval(order as u32);
    let count = (16.0 * xi_max) as usize + 1;
    let phi_hat = spectrum(phi, xi_max, count);
    let psi_hat = spectrum(psi, xi_max, count);
    let mut params = FrameHypothesisParams {
        alpha,
        gamma,
        k1: 0.0,
        k2: 0.0,
        beta: beta.as_ref().map_or(1.0, |b| b.beta),
    };
    params.k2 = fit_decay_constant(&phi_hat, &params, DecayKind::Scaling, xi_max / 4.0);
    params.k1 = fit_decay_constant(&psi_hat, &params, DecayKind::Wavelet, xi_max / 4.0);
    Ok(HypothesisReport {
        order,
        level: phi.level(),
        params,
        decay_scaling: check_decay(&phi_hat, &params, DecayKind::Scaling),
        decay_wavelet: check_decay(&psi_hat, &params, DecayKind::Wavelet),
        inf_phi,
        beta,
        m0_positive,
        m0_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Exact;

    #[test]
    fn m0_examples() {
        assert!((lowpass_symbol(1, 0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(lowpass_symbol(3, 1.0).norm() < 1e-15);
        assert!((lowpass_symbol(2, 0.5) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn m0_haar_edge_minimum() {
        let (pos, min) = m0_positive_on_interval(1);
        assert!(pos);
        let expected = (PI * (1.0 - 1e-6) / 2.0).cos();
        assert!((min - expected).abs() < 1e-12);
    }

    #[test]
    fn zero_function_has_no_beta_and_zero_inf() {
        let z = SampledFunction1D::new(8, Exact::zero(), vec![0.0; 300]).unwrap();
        assert!(find_beta(&z).is_none());
        let r = check_inf_phi(&z).unwrap();
        assert!(!r.positive);
        assert_eq!(r.min_value, 0.0);
        assert!(r.warning.is_none());
    }

    #[test]
    fn low_level_rejected() {
        let z = SampledFunction1D::new(4, Exact::zero(), vec![1.0; 17]).unwrap();
        assert!(matches!(
            check_inf_phi(&z),
            Err(Error::InsufficientLevel { needed: 8, got: 4 })
        ));
    }

    #[test]
    fn zero_transform_meets_any_bound() {
        let samples: Vec<(f64, f64)> = linspace(-64.0, 64.0, 101)
            .into_iter()
            .map(|x| (x, 0.0))
            .collect();
        let params = FrameHypothesisParams {
            alpha: 6.0,
            gamma: 5.0,
            k1: 1.0,
            k2: 1e-3,
            beta: 1.0,
        };
        assert!(check_decay(&samples, &params, DecayKind::Scaling).holds);
        assert!(check_decay(&samples, &params, DecayKind::Wavelet).holds);
    }

    #[test]
    fn params_validity() {
        let ok = FrameHypothesisParams {
            alpha: 8.5,
            gamma: 8.0,
            k1: 1.0,
            k2: 1.0,
            beta: 1.0,
        };
        assert!(ok.is_valid());
        assert!(!FrameHypothesisParams { alpha: 13.0, ..ok }.is_valid());
        assert!(!FrameHypothesisParams {
            gamma: 3.0,
            alpha: 3.5,
            ..ok
        }
        .is_valid());
    }
}
