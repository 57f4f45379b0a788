//! Exact rational polytope kernel.

mod hull;
pub mod json;
pub(crate) mod linalg;
mod polytope;
mod unimodular;

pub use polytope::{Halfspace, Polytope};
#[cfg(test)]
pub(crate) use polytope::for_each_combination;
pub use unimodular::{unimodular_to_e1, UnimodularMap};

#[cfg(test)]
mod tests;
