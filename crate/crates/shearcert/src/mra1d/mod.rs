//! One-dimensional Daubechies multiresolution analysis.
//!
//! Filters come from spectral factorization, scaling functions and wavelets
//! from the cascade, and [`spectral`] checks the frequency-side hypotheses.

mod cascade;
mod filter;
mod sampled;
pub mod spectral;

pub use cascade::{cascade, refine, wavelet_from_filter, DIVERGENCE_STREAK};
pub use filter::{daubechies_filter, FilterCoefficients, FACTORIZATION_TOLERANCE, MAX_ORDER};
pub(crate) use sampled::dot_overlap;
pub use sampled::SampledFunction1D;
pub use spectral::{
    check_decay, check_hypotheses, check_inf_phi, find_beta, fit_decay_constant, lowpass_symbol,
    m0_positive_on_interval, DecayKind, FrameHypothesisParams,
};

use crate::error::Result;

/// A filter together with its scaling function and wavelet at one cascade level.
#[derive(Clone, Debug)]
pub struct Mra {
    pub filter: FilterCoefficients,
    pub phi: SampledFunction1D,
    pub psi: SampledFunction1D,
}

impl Mra {
    /// Daubechies MRA of the given order sampled at `level`.
    pub fn daubechies(order: usize, level: u32) -> Result<Self> {
        Self::from_filter(daubechies_filter(order)?, level)
    }

    pub fn from_filter(filter: FilterCoefficients, level: u32) -> Result<Self> {
        let phi = cascade(&filter, level)?;
        let psi = wavelet_from_filter(&filter, level)?;
        Ok(Mra { filter, phi, psi })
    }

    pub fn level(&self) -> u32 {
        self.phi.level()
    }
}
