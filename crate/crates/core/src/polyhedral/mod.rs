//! Rational polyhedral cones and fans with exact predicates.

pub mod cone;
pub mod convexity;
pub mod fan;
pub mod group;
pub mod hrep;

pub use cone::Cone;
pub use convexity::{projectivity, tiles_target, verify_support_function, SupportFunction};
pub use fan::{measure_less, Fan, SmoothnessReport, ValidationReport, Violation};
pub use group::MatrixGroup;
pub use hrep::{extreme_rays, hull_hrep, HRep};
