//! Numerical radius, operator norms and integral averages over convex
//! combinations of complex matrices, with checkers for the inequality
//! chains that relate them.

pub mod error;
pub mod generators;
pub mod inequalities;
pub mod io;
pub mod linalg;
pub mod quadrature;
pub mod radius;

pub use error::{Error, Result};
pub use generators::{family_residual, generate, Family, FamilySpec, NilpotentForm};
pub use linalg::{ComplexMatrix, HermitianMatrix};
pub use num_complex::Complex64;
pub use quadrature::{gauss_legendre_rule, integrate_convex, IntegralEstimate, QuadratureRule};
pub use radius::{numerical_radius, omega_off_diag, scalar_integral_modulus, RadiusConfig, RadiusResult};
pub use inequalities::{CheckConfig, CheckInputs, CheckKind, CheckReport, Checker};
