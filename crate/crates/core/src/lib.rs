//! Exact analysis of polynomial maps of the plane whose branch locus is a line,
//! with constructive reduction to normal forms and replayable certificates.

pub mod analyze;
pub mod automorph;
pub mod error;
pub mod harness;
pub mod normalize;
pub mod poly;
pub mod rectify;

pub use error::{Error, Result};
