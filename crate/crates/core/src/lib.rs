pub mod continuous;
pub mod discrete;
pub mod epd;
pub mod error;
pub mod exec;
pub mod lattice;
pub mod icnet;
pub mod lowdim;
pub mod mesh;
pub mod net;
pub mod specfun;
pub mod suite;
pub mod vector;

pub use error::{Error, Result};
pub use exec::{Exec, SweepStats};
