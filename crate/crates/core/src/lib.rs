//! Decides whether a pointed torsor on a curve extends as an fppf torsor or
//! only as a logarithmic one over a regular model.
//!
//! The pipeline runs from dual graphs and intersection matrices to the
//! component group `Φ`, then from horizontal incidences to the rational
//! vertical part `q`, whose class `γ = q mod Z` is the obstruction. The
//! [`modelkit`] module reproduces the desingularization computations needed
//! to obtain the intersection data in the first place.

pub mod divisors;
pub mod error;
pub mod fiber;
pub mod formats;
pub mod graphs;
pub mod linalg;
pub mod modelkit;
pub mod paperdata;

pub use error::{Error, Result};
