//! Explicit symplectic embeddings of polydisks.
//!
//! The crate is split in four layers:
//!
//! - [`geometry`]: phase-space points, the standard symplectic form, shape
//!   descriptors with exact volumes, and deterministic domain samplers.
//! - [`maps`]: evaluable maps with analytic Jacobians (the linear squeeze, the
//!   lattice-avoiding shear, the strip lift, the snake and its cotangent lift,
//!   the disk/rectangle transport) and composition machinery.
//! - [`verify`]: sampling-based checks that turn the claimed properties of the
//!   maps into falsifiable numerical tests with margin reporting.
//! - [`certify`]: embedding claims, obstruction checks, the claim-producing
//!   rules and the planner that assembles full claim chains with a constant
//!   ledger.

pub mod certify;
pub mod error;
pub mod geometry;
pub mod maps;
pub mod verify;

pub use certify::{validate_chain, EmbeddingClaim, Justification};
pub use error::{Error, Result};
pub use geometry::{
    form_eval, parse_shape, sample, volume, Factor, PhasePoint, SampleMode, SampleSpec,
    ShapeDescriptor, SymplecticForm,
};
pub use maps::{compose, JacobianMode, MapKind, MapNode};
pub use verify::{Verdict, VerificationReport};
