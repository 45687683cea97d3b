//! Exact reduced dynamics of a qubit coupled to a boson bath with a
//! periodically modulated form factor.
//!
//! The excited-state survival amplitude `a(t)` determines everything: the
//! qubit evolves through an amplitude-damping channel parametrized by `a`,
//! and the evolution is a semigroup exactly when `a(t+s) = a(t)a(s)`. For a
//! coupling with period `2π/T` in frequency that identity holds for all
//! `t + s ≤ T` and fails afterwards.
//!
//! * [`coupling`]: form factors, spectral densities and self-energies;
//! * [`amplitude`]: four independent ways to compute `a(t)`;
//! * [`channel`]: density matrices, rates, generators and Choi matrices;
//! * [`markovianity`]: semigroup defects, hidden horizon, bound states;
//! * [`cli`]: the config-driven runner behind the `hnm` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplitude;
pub mod channel;
pub mod cli;
pub mod coupling;
pub mod error;
pub mod markovianity;

pub use amplitude::{AmplitudeTrace, Backend, TimeGrid};
pub use coupling::{CouplingSpec, ModelParams};
pub use error::{Error, Result};
