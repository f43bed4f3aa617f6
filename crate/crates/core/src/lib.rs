//! Exact computations with Grothendieck-Witt rings, Milnor-Witt K-theory of concrete fields,
//! residue and transfer maps, Rost-Schmid complexes of curves and finite Milnor-Witt
//! correspondences between zero-dimensional schemes.

pub mod error;
pub mod field;
pub mod gw;
pub mod harness;
pub mod kmw;
pub mod mw_corr;
pub mod numtheory;
pub mod residues;
pub mod rost_schmid;
pub mod sample;
pub mod transfers;

pub use error::{Error, Result};
pub use field::{Elem, Field, Poly};
pub use kmw::{MWElement, Projection, Twist};
