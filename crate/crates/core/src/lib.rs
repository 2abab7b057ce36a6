//! Exact quantum propagation of time-dependent harmonic oscillators.
//!
//! A time-dependent dilatation `x -> chi(t) x` followed by a quadratic phase
//! maps the oscillator `H = p^2/2m(t) + m(t) w^2(t) x^2/2` onto a free particle
//! (or onto a fixed-frequency oscillator) once a positive solution `chi` of a
//! scalar auxiliary equation is known. This crate solves that auxiliary
//! equation, assembles the resulting closed-form evolution operator and its
//! Heisenberg-picture symplectic map, and checks both against brute-force
//! oracles.
//!
//! Module map:
//!
//! * [`profiles`]: mass and squared-frequency time profiles.
//! * [`auxode`]: the auxiliary ODE `[d/dt(m chi') + m w^2 chi] m chi^3 = k^2`.
//! * [`canon`]: coefficient-level canonical transformations, solvability
//!   classification and the closed-form configuration-space diffeomorphisms.
//! * [`propagator`]: the five-factor evolution operator, the symplectic map
//!   and analytic Gaussian evolution.
//! * [`oracle`]: fundamental-matrix integration, split-step grid propagation
//!   and discretized generator-algebra checks.
//! * [`config`]: run configuration files and tabulated profile CSVs.
//!
//! Units: `hbar = 1` throughout.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod auxode;
pub mod canon;
pub mod config;
pub mod error;
pub mod export;
pub mod ode;
pub mod oracle;
pub mod profiles;
pub mod propagator;
pub mod quadrature;
pub mod spline;

pub use auxode::{AuxiliarySolution, KBranch};
pub use error::{Error, ErrorCategory, Result};
pub use profiles::{OscillatorProfile, ProfileSample};
pub use propagator::{GaussianState, PropagatorFactorization, SymplecticMap};
