//! Independence certificates: Gram rank, staggered supports, lattice minima,
//! cone slopes, frame bounds and oversampling containment.

mod certificates;
mod cones;
mod frames;
mod gram;
mod oversampling;

pub use certificates::{
    admissibility_check, shifted_wavelet_family, staggered_support_certificate,
    verify_min_support_lemma, verify_prop33, wavelet_combination_minimum, AdmissibilityReport,
    AxisCheck, CertificateMethod, IndependenceCertificate, LatticeFailure, LatticeReport,
    QuadratureSettings, Witness, DEFAULT_SEED, LATTICE_LEVEL, LATTICE_WINDOW, SUPPORT_THRESHOLD,
};
pub use cones::{
    classify_combination, classify_element, classify_slopes, cone_slope_diagnostic,
    diagnostic_grid, required_cascade_level, SlopeClassification, SlopeVerdict, CONE_MARGIN,
    DIAGNOSTIC_LEVEL, MAX_RESIDUAL_CELLS, RELATIVE_THRESHOLD, TRIVIAL_SLOPE, X1_REFINEMENT,
};
pub use frames::{
    frame_bound_sequence, frame_bounds_from_gram, prefix_nesting, FrameBoundReport,
    INTERLACING_SLACK,
};
pub use gram::{
    gram, Family1D, GramReport, InnerProductFamily, LevelRecord, ShearletFamily, Verdict, CHUNKS,
    CONVERGED_DELTA, DEFAULT_TOLERANCE,
};
pub use oversampling::{oversampling_containment, OversamplingReport};
