//! Finite-dimensional quantum entanglement workbench.
//!
//! The crate is organised around a small dense linear-algebra layer
//! ([`qla`]) and a state factory ([`states`]); on top of those sit the
//! entanglement monotones ([`measures`]), pure-state transformation
//! criteria ([`transform`]), the symmetric-group-reduced linear programs
//! for Werner states ([`werner_lp`]), the order-permutation distillation
//! formulas ([`perm_distill`]), branch-enumerating distributed-gate
//! verification ([`nlgates`]) and the quantized two-player games
//! ([`games`]).
//!
//! Everything is `no_std`-compatible (with `alloc`); the companion CLI
//! crate carries IO and file formats.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub(crate) mod fmath;

pub mod games;
pub mod measures;
pub mod nlgates;
pub mod perm_distill;
pub mod qla;
pub mod rng;
pub mod states;
pub mod transform;
pub mod werner_lp;

use core::fmt;

/// Errors shared across the workbench modules.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A matrix expected to be Hermitian failed the symmetry check.
    NotHermitian { deviation: f64 },
    /// A matrix expected to be unitary failed the check.
    NotUnitary { deviation: f64 },
    /// Density-matrix validation failed (trace, positivity).
    InvalidState(&'static str),
    /// Operand dimensions do not match.
    DimensionMismatch { expected: usize, got: usize },
    /// A subsystem index or partition is out of range.
    BadIndex,
    /// A partition does not cover the subsystems exactly once.
    BadPartition,
    /// A scalar parameter is outside its admissible range.
    BadParameter(&'static str),
    /// An ensemble's probabilities are invalid.
    BadEnsemble(&'static str),
    /// Structural hypotheses of a criterion are violated.
    BadInput(&'static str),
    /// A linear program has an empty feasible region.
    Infeasible,
    /// An instruction touches qubits owned by two different parties.
    LocalityViolation,
    /// A discarded qubit was still correlated with the rest.
    DiscardNotProduct { qubit: usize },
    /// Problem size exceeds the supported desk scale.
    DimensionTooLarge,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (deviation {deviation:.3e})")
            }
            Error::NotUnitary { deviation } => {
                write!(f, "matrix is not unitary (deviation {deviation:.3e})")
            }
            Error::InvalidState(what) => write!(f, "invalid density matrix: {what}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::BadIndex => write!(f, "subsystem index out of range"),
            Error::BadPartition => write!(f, "partition does not cover the subsystems"),
            Error::BadParameter(what) => write!(f, "bad parameter: {what}"),
            Error::BadEnsemble(what) => write!(f, "bad ensemble: {what}"),
            Error::BadInput(what) => write!(f, "hypotheses violated: {what}"),
            Error::Infeasible => write!(f, "linear program is infeasible"),
            Error::LocalityViolation => {
                write!(f, "instruction acts on qubits of more than one party")
            }
            Error::DiscardNotProduct { qubit } => {
                write!(f, "qubit {qubit} is not in a product state at discard")
            }
            Error::DimensionTooLarge => write!(f, "dimension exceeds supported size"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
