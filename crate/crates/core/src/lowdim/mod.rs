//! Explicit closed forms for confocal conics (N=2) and quadrics (N=3),
//! written out component by component, independently of the general-N code.

pub mod planar;
pub mod spatial;
pub mod umbilic;

pub use planar::Params2D;
pub use spatial::Params3D;
