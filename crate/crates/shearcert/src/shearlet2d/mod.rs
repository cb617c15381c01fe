//! Separable shearlet generators, cone-adapted systems and their supports.

mod geometry;
mod index;
mod profile;
mod svg;
mod system;

pub use geometry::{cone_slope, support_polygon, Point, SupportPolygon};
pub use index::{Cone, DomainRule, Rect, ShearletIndex, ShearletSystemSpec};
pub use profile::{lower_support_profile, Axis, SlopeWindow, SupportProfile, WINDOW};
pub use svg::support_svg;
pub use system::{enumerate, make_generators, Generator2D, SampledFunction2D, ShearletSystem};
