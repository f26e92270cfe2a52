//! Exact polynomial tooling for arithmetic surfaces: parsing, singular point
//! search over `F_p`, regularity tests, point blow-ups, local lengths and
//! component checks.

pub mod blowup;
pub mod chart;
pub mod component;
pub mod curves;
pub mod fp;
pub mod local;
pub mod parse;
pub mod poly;

pub use blowup::{blowup_point, extract_prime, BlowupCharts};
pub use chart::{
    fiber_points, singular_points_mod_p, tangent_dimension, AffineChart, FpPoint, TangentSpace,
    DEFAULT_POINT_CAP,
};
pub use component::{point_on_component, verify_component};
pub use curves::{curve_charts, family_polynomial, CurveCharts};
pub use local::{local_multiplicity, DEFAULT_DEGREE_CAP};
pub use parse::{parse_equation, parse_polynomial};
pub use poly::IntPolynomial;
