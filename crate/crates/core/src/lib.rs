pub mod arrangement;
pub mod complex;
pub mod cone;
pub mod engine;
pub mod error;
pub mod models;
mod linalg;
pub mod poly;

pub use complex::{sector_fan, ChamberComplex, Decomposition, Wall, WallSides};
pub use cone::{LatticeVector, Position, RationalCone};
pub use error::{Error, Result};
