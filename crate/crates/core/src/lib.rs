pub mod error;
pub mod lattice;
pub mod linalg;
pub mod polytope;
pub mod rational;

pub use error::{Error, Result};
pub mod moments;
pub mod polynomial;
pub mod blowup;
pub mod extremal;
pub mod indicial;
pub mod obstruction;
pub mod io;
