//! Entanglement dynamics of two two-level atoms coupled to two degenerate
//! field modes.

pub mod classify;
pub mod error;
pub mod fields;
pub mod evolution;
pub mod linalg;
pub mod measures;
pub mod model;
pub mod scenario;
pub mod space;
pub mod state;
pub mod table;

pub use error::{Error, Result};
