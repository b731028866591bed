//! Exact arithmetic over ℚ(i): scalars, polynomials, constant matrices and
//! matrix polynomials.

pub mod gaussian;
pub mod matpoly;
pub mod matrix;
pub mod poly;

pub use gaussian::{rat, GaussianRational, GR};
pub use matpoly::{matpoly_det, matpoly_inverse_triangular, MatrixPolynomial};
pub use matrix::Matrix;
pub use poly::{poly_arith, poly_derivative, PolyOp, Polynomial, Var};
