//! Block decompositions of small group algebras and the biset structure
//! of their Sylow-invariant bases.
//!
//! The pipeline: enumerate a finite permutation group, pick a Sylow
//! p-subgroup S, decompose the group algebra over a finite splitting
//! field into blocks, recover each block's S-invariant basis as an
//! (S,S)-biset from Brauer-quotient dimensions, and machine-check the
//! fusion-theoretic properties of that biset together with the classical
//! defect-group consequences.

pub mod field;
pub mod fusion;
pub mod linalg;
pub mod permgroup;

pub use field::{FieldElement, FiniteField};
pub use permgroup::{Group, GroupError, Monomorphism, Perm, Subgroup, DEFAULT_MAX_ORDER};
