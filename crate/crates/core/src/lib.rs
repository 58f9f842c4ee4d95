//! Exact construction of irreducible `U_q(g)` modules, quantum Weyl group
//! operators on them, and truncated verification of eta-power trace identities.

pub mod braid;
pub mod cache;
pub mod error;
pub mod fraction;
pub mod identities;
pub mod qseries;
pub mod linalg;
pub mod qmodule;
pub mod rootdata;

pub use error::{Error, Result};
