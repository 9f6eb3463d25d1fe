pub mod anyon;
pub mod error;
pub mod group;
pub mod hamiltonian;
pub mod io;
pub mod lattice;
pub mod operators;
pub mod rep;
pub mod sectors;
pub mod sparse;
pub mod spectrum;
pub mod verify;

pub use error::{QdError, Result};
