//! Exact invariants of small Seifert fibered spaces and the contact structures
//! they carry, together with decision procedures for symplectic rational
//! homology ball fillings.

pub mod contact;
pub mod error;
pub mod exactmath;
pub mod farey;
pub mod obstruct;
pub mod plumbing;

pub use error::{Error, Result};
pub use exactmath::{FareySlope, NegCF, Rational};
