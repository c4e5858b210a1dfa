//! Polynomials over F, interpolation and RS/GRS codes.

mod code;
mod poly;

pub use code::{grs_dual_multipliers, RsCode, MDS_ENUMERATION_BUDGET};
pub use poly::{
    formal_derivative, lagrange_coeff, lagrange_interpolate, poly_eval, vanishing_poly,
    PointEvaluator, PolyF,
};
