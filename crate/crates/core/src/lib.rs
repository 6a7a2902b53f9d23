//! Exact computations with skeleta and tropicalizations of curves.
//!
//! The pipeline runs from punctured curves (genus 0 trees and Tate circles)
//! through piecewise-linear potentials to weighted tropical complexes, and
//! independently from implicit plane equations through Newton subdivisions.
//! All arithmetic is over the rationals.

pub mod certify;
pub mod complex;
pub mod elimination;
pub mod error;
pub mod exactnum;
pub mod lattice;
pub mod newton;
pub mod potential;
pub mod render;
pub mod scenario;
pub mod schema;
pub mod skeleton;
pub mod tropicalize;

pub use complex::TropicalComplex;
pub use error::{Error, Result};
pub use exactnum::{PuiseuxElement, Rat, Valuation};
pub use potential::{Divisor, PLFunction};
pub use skeleton::Skeleton;
