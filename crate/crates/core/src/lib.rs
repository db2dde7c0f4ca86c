//! Unitary dynamics of time-dependent non-Hermitian Hamiltonians built from
//! su(1,1) and su(2) generators, through a Hermitian time-dependent Dyson map.
//!
//! The Hamiltonian `H = 2ωK₀ + 2αK₋ + 2βK₊` is mapped to a Hermitian
//! counterpart `h = ηHη⁻¹ + i(∂ₜη)η⁻¹`, whose evolution is solved with a
//! squeeze-type unitary. Two-mode bosonic realizations give the entanglement
//! generated by the dynamics.
//!
//! Every routine is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the `*F64` aliases name the double-precision versions.

// `!(x > y)` is used on purpose so that NaN fails the guard.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod algebra;
pub mod counterpart;
pub mod dyson;
pub mod error;
pub mod evolution;
pub mod fock;
pub mod numerics;
pub mod profile;
pub mod scalar;

pub use algebra::{adjoint_transfer, commutator, unified_trig, AdjointTransfer, AlgebraKind, CoeffVector, Rep2};
pub use counterpart::{counterpart, counterpart_raw, hermiticity_residual, HermCoeffs, RawCoeffs, Residual};
pub use dyson::{
    chi, critical_times, dyson_ode_rhs, gauss_decompose, integrate_dyson, k0_closed_form, k0_trajectory, recompose,
    validity, Breakdown, CriticalTimes, DysonRates, DysonTrajectory, ExpParams, GaussState, Validity,
};
pub use error::{Error, Result};
pub use evolution::{
    k0_closed_form_squeeze, omega_eff, phase_integral, squeeze_ode_rhs, BranchChoice, SqueezeRates, SqueezeState,
    SqueezeTrajectory,
};
pub use numerics::{CMatrix, OdeOptions};
pub use profile::{HamiltonianProfile, Polynomial, Profile};
pub use scalar::{Real, C};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type GaussStateF64 = GaussState<f64>;
pub type ExpParamsF64 = ExpParams<f64>;
pub type CoeffVectorF64 = CoeffVector<f64>;
pub type HamiltonianProfileF64 = HamiltonianProfile<f64>;
pub type ProfileF64 = Profile<f64>;
pub type SqueezeStateF64 = SqueezeState<f64>;
pub type HermCoeffsF64 = HermCoeffs<f64>;
pub type RawCoeffsF64 = RawCoeffs<f64>;
pub type CriticalTimesF64 = CriticalTimes<f64>;
pub type DysonTrajectoryF64 = DysonTrajectory<f64>;
pub type CMatrixF64 = CMatrix<f64>;
pub type FockWorkspaceF64 = fock::FockWorkspace<f64>;
