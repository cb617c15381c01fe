pub mod dyadic;
pub mod error;
pub mod independence;
pub mod io;
pub mod mra1d;
pub mod shearlet2d;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact-arithmetic.md")]
    mod exact_arithmetic {}
    #[doc = include_str!("../../../book/src/mra.md")]
    mod mra {}
    #[doc = include_str!("../../../book/src/shearlet-systems.md")]
    mod shearlet_systems {}
    #[doc = include_str!("../../../book/src/gram.md")]
    mod gram {}
    #[doc = include_str!("../../../book/src/support-certificates.md")]
    mod support_certificates {}
    #[doc = include_str!("../../../book/src/cones.md")]
    mod cones {}
    #[doc = include_str!("../../../book/src/frames-oversampling.md")]
    mod frames_oversampling {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
