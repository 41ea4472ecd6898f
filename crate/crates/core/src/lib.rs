//! Symmetry analysis of the Doebner-Goldin family of nonlinear Schroedinger equations.
//!
//! The crate is split along the natural layers of the problem:
//!
//! * [`params`]: the eight model parameters, the nonlinear gauge group acting on them,
//!   gauge invariants and the maximal-symmetry classifier.
//! * [`symexpr`]: a small exact expression engine for vector-field coefficients.
//! * [`symmetry`]: symmetry generators, their commutators, the determining equations and
//!   one-parameter flows acting on wavefunctions.
//! * [`pde`]: log-polar fields, finite-difference residuals, an RK4 stepper and closed-form
//!   reference solutions.
//! * [`linearize`]: the linearizing gauge transformations and the heat/Schroedinger-driven flows.
//!
//! Wavefunctions are always carried in log-polar form `psi = exp(r + i s)` with the phase `s`
//! unwrapped.
//!
//! ```
//! use dgsym_core::linearize::linearization_data;
//! use dgsym_core::params::{classify, compute_invariants, int, rat};
//! use dgsym_core::{DgParams, SymmetryClass};
//!
//! // The linear equation i psi_t = -Laplacian psi.
//! let p = DgParams::builder(1, int(-1)).mu(2, rat(-1, 2)).mu(3, int(1)).mu(5, rat(1, 4)).build()?;
//! assert_eq!(classify(&p), SymmetryClass::Sym1c);
//! assert_eq!(compute_invariants(&p).iota1, rat(1, 2));
//! assert_eq!(linearization_data(&p)?.lambda_cap, Some(1.0));
//! # Ok::<(), dgsym_core::Error>(())
//! ```
#![cfg_attr(not(test), no_std)]
#![warn(missing_docs)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod linearize;
pub mod params;
pub mod pde;
pub mod symexpr;
pub mod symmetry;

pub use error::{Error, Result};
pub use params::{DgParams, GaugeElement, GaugeInvariants, Rational, SymmetryClass};
pub use pde::{Grid, LogPolarField, Trajectory};
pub use symexpr::{SymExpr, Var, VectorFieldSpec};
pub use symmetry::GeneratorName;
