//! Identification of causal effects in graphs with latent variables.

pub mod ccomp;
pub mod cli;
pub mod docalc;
pub mod error;
pub mod expr;
pub mod graph;
pub mod ident;
pub mod oracle;
pub mod sep;
pub mod table;

pub use error::{Error, Result};
