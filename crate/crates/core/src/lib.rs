//! Exact rational convex geometry for toric Newton bodies.
//!
//! Polytopes with rational vertices, mixed volumes and mixed area measures,
//! the dictionary between toric divisors, Newton bodies, Lelong numbers and
//! restricted volumes, and seeded checkers for volume inequalities.

pub mod area_measure;
pub mod error;
pub mod geometry;
pub mod lab;
pub mod mixed_volume;
pub mod piecewise;
pub mod rat;
pub mod report;
pub mod toric;

pub use area_measure::{minkowski_formula_check, mixed_area_measure, support_integral, MixedAreaMeasure};
pub use error::{GeometryError, Result};
pub use geometry::{unimodular_to_e1, Halfspace, Polytope, UnimodularMap};
pub use mixed_volume::{mixed_volume, mixed_volume_oracle, PolytopeTuple};
pub use rat::{IntVector, Point, Rat};
pub use report::{Quantity, Relation, Report};
pub use toric::{NewtonBody, ToricData};
