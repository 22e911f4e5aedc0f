//! Perspective functions of convex functions: evaluation, recession,
//! subdifferentials, a calculus of perspective operations, divergences and
//! gradient-perspective functionals, together with randomized property checks.

pub mod calculus;
pub mod catalog;
pub mod cli;
pub mod divergences;
pub mod error;
pub mod extreal;
pub mod function;
pub mod functionals;
pub mod io;
pub mod linalg;
pub mod perspective;
pub mod verify;

pub use error::{Error, Result};
pub use extreal::ExtReal;
pub use function::{ConvexFunction, Flags, SubgradientSet};
pub use linalg::{Matrix, Vector};
pub use perspective::{Perspective, PerspectivePoint, SubgradientPair};
