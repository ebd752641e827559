//! Exact construction, exhaustive search and verification of unitary-weight
//! `g`-group decodable space-time block codes on `2^a` transmit antennas.
//!
//! Module map:
//!
//! - [`exactmat`]: Gaussian-rational scalars and matrices, exact rank.
//! - [`clifford`]: generator representations, anti-hermitian basis, threads.
//! - [`lambda`]: enumeration of admissible `Λ` matrices.
//! - [`search`]: `Γ`-set search, weight reconstruction, maximum rates.
//! - [`codecheck`]: decodability, independence, coding gain, complexity.

pub mod clifford;
pub mod code;
pub mod codecheck;
pub mod error;
pub mod exactmat;
pub mod exec;
pub mod fixtures;
pub mod lambda;
pub mod monomial;
pub mod search;

pub use error::{Error, Result};
