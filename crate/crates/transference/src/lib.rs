//! Transference theorems for Diophantine approximation, verified on real
//! lattices.
//!
//! This crate builds the lattice pair `Λ(Θ)` / `Λ*(Θ)` of a target matrix,
//! manipulates weighted parallelepipeds (pseudocompounds, dual weights, hat
//! normalization), searches boxes for nonzero lattice points by exhaustive
//! enumeration, estimates ordinary and multiplicative Diophantine exponents
//! at finite scale, and empirically verifies the classical transference
//! theorem, its multiplicative analogue, and every link of the truncated
//! proof chain on generated instances.
//!
//! Start with the runnable examples in `examples/`:
//!
//! * `box_calculus` - weight functionals, pseudocompounds, hat normalization
//! * `lattice_duality` - bases, the duality pairing, point searches
//! * `verify_mahler` - the classical theorem on random instances
//! * `verify_multiplicative` - the multiplicative analogue and the proof chain
//! * `exponent_estimate` - exponent traces for the algebraic presets
//! * `exponent_transfer` - the per-scale transfer implication
//!
//! The `transference` binary wraps the same machinery behind `search`,
//! `verify` and `exponent` subcommands with JSON/CSV output.

pub mod box_calculus;
pub mod cli;
pub mod error;
pub mod exponents;
pub mod instances;
pub mod lattice;
pub mod theorems;

pub use box_calculus::{BoxSpec, HatResult, ParamPoint, WeightTuple};
pub use error::{Error, Result};
pub use exponents::{ApproxRecord, ExponentEstimate, ExponentKind, GridSpec};
pub use lattice::{LatticeBasis, LatticePoint, TargetMatrix, DEFAULT_CAP};
pub use theorems::{TransferenceConstants, VerificationReport, Verdict};
