//! Simulator for a single-mode cavity field damped by a squeezed vacuum
//! reservoir with a time-dependent coupling rate.
//!
//! Two independent propagation paths are provided and cross-validate each
//! other:
//!
//! * [`liouvillian`] builds the master-equation generator as a dense
//!   superoperator over column-stacked density matrices and integrates the
//!   nonautonomous equation with an adaptive embedded Runge-Kutta pair; it
//!   also exposes the generator's spectrum and numeric steady state.
//! * [`su11`] evaluates the closed-form solution that follows from the
//!   su(1,1) structure of the generator in the squeezed frame: a gauge
//!   function α(t) solving α̇ = γ(t)(α+1) turns propagation into a finite
//!   lowering series per Fock component.
//!
//! [`fock`] supplies the truncated-space operators and canonical states,
//! [`diagnostics`] the physical observables (quadrature variances, fidelity,
//! trace distance, convergence rates), and [`profile`] the time-dependent
//! rate profiles γ(t).
//!
//! The crate is `no_std` (with `alloc`); all IO, configuration, and the
//! command-line front end live in the companion CLI crate.

#![cfg_attr(not(test), no_std)]
// Negated comparisons (`!(x < tol)`) are deliberate: they fail closed when a
// computed defect is NaN. Range loops with index arithmetic are the natural
// shape for the banded/blocked matrix kernels here.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod cmat;
pub mod diagnostics;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod liouvillian;
pub mod ode;
pub mod profile;
pub mod quad;
pub mod su11;

pub use cmat::CMat;
pub use error::{Error, Result};
pub use fock::{
    bogoliubov_transform, density_from_spec, make_ladder, make_squeeze_operator,
    squeezed_vacuum_state, vacuum_state, DensityMatrix, InitialStateSpec, ReservoirMoments,
    SqueezeParams, StateAudit, DEFAULT_LEAKAGE_TOL,
};
pub use liouvillian::{
    build_lindblad, build_rate_operator, integrate, make_k_generators, spectrum,
    steady_state_numeric, Superoperator, Trajectory,
};
pub use profile::GammaProfile;
pub use su11::{
    analytic_propagate, apply_exp_kminus, asymptotic_state, component_rho_nm, solve_gauge,
    AnalyticPropagator, GaugeSample, GaugeSolution,
};
