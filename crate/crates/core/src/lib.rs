//! Construction and certification of equiangular and biangular tight frames.
//!
//! Frames are built from character tables of abelian groups (selected by
//! difference sets and their relatives), from Steiner systems with flat
//! building blocks, from an explicit one-parameter curve in `R^3`, and from
//! the Plücker embedding of a tight fusion frame. Every constructor checks
//! its output numerically before returning it.

pub mod algebra;
pub mod assembly;
pub mod curve;
pub mod designs;
pub mod diffsets;
pub mod error;
pub mod frames;
pub mod fusion;
pub mod harmonic;
pub mod io;
pub mod numerics;

pub use error::{Error, Result};
pub use frames::{Classification, Field, Frame};
pub use numerics::{Complex, Matrix, Tolerance};
