//! Matrix-valued orthogonal polynomials attached to the spherical functions
//! of the pair (SO(4), SO(3)).
//!
//! Everything algebraic is computed exactly over the Gaussian rationals.
//! Only [`group`] works in floating point.

pub mod algebra;
pub mod error;
pub mod family;
pub mod group;
pub mod hyp;
pub mod io;
pub mod operators;
pub mod orthogonality;
pub mod special;
pub mod structures;
pub mod verify;

pub use error::{Error, Result};
