//! Numerical building blocks: dense complex matrices, ODE integration,
//! quadrature and special functions.

pub mod matrix;
pub mod ode;
pub mod quad;
pub mod special;

pub use matrix::{exp2x2, log2x2_principal, log2x2_unimodular, mat_exp, mat_log_principal, CMatrix, Lu};
pub use ode::{integrate, integrate_plain, linspace, OdeHalt, OdeOptions, OdeSolution};
pub use special::{legendre_p, ln_gamma, scaled_legendre, sech};
