//! Support-constrained Gabidulin codes.
//!
//! Builds generator matrices of maximum rank distance codes whose entries
//! vanish on prescribed positions, together with the linearized-polynomial
//! machinery behind them and brute-force oracles to check the results.

pub mod builder;
pub mod cli;
pub mod error;
pub mod field;
pub mod io;
pub mod linq;
pub mod matrix;
pub mod oracle;
pub mod patterns;

pub use error::{Error, Result};
pub use field::{FElem, FieldCtx};
pub use linq::LinPoly;
pub use matrix::Matrix;
pub use patterns::{BipartiteSpec, FeasibilityReport, ZeroPattern};
pub use builder::{construct, construct_subcode, CodeArtifact, ConstructOptions, Mode, Strategy};
