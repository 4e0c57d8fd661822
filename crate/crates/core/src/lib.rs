//! Affine SL(2,q)-unitals, their closures and automorphisms.

pub mod aut;
pub mod design;
pub mod gf;
pub mod perm;
pub mod quadrangle;
pub mod sl2;
pub mod theorems;

pub use serde::Serialize;
