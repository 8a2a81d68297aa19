//! Quantum search laboratory.
//!
//! A dense state-vector simulator together with the algorithms built on top
//! of it: Grover search with a known or unknown number of marked items,
//! generic amplitude amplification, amplitude estimation / quantum counting
//! via phase estimation, and a numerical verifier for the hybrid-argument
//! query lower bound.
//!
//! Register layout: qubit 0 is the least significant bit of a basis index.
//! Operators that act on "the low `n` qubits" therefore act independently on
//! every contiguous block of `2^n` amplitudes.

pub mod amplify;
pub mod analytic;
pub mod count;
mod error;
pub mod linalg;
pub mod lowerbound;
pub mod rng;
pub mod search;
pub mod sv;

pub use amplify::{Amplifier, AmplifyOutcome, EigenStructure, HadamardTransform, StatePreparation};
pub use analytic::RotationModel;
pub use count::{CountPath, PhaseEstimate};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use lowerbound::{AlgorithmSpec, HybridTranscript};
pub use search::{LoopRecord, SearchOutcome, SearchParams};
pub use sv::{OracleSpec, StateVector};

pub use num_complex::Complex64;

/// Largest register the simulator will allocate (`2^24` amplitudes, 256 MiB).
pub const MAX_QUBITS: u32 = 24;
