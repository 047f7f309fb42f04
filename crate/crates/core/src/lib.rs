//! Graph realizability: labeled graphs whose walks spell strings of a
//! Dyck-like grammar, decided by repeated squaring of a standard matrix of
//! realizable pairs together with a gap matrix of "paths with a gap".

pub mod auxpda;
pub mod bits;
pub mod closure;
pub mod digraph;
pub mod error;
pub mod format;
pub mod grammar;
pub mod instance;
pub mod matrix;
pub mod oracle;
pub mod pram;
pub mod reductions;
pub mod tensor;

pub use error::{Error, Result};
