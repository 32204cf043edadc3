//! Exact lattice combinatorics for ADE rational surfaces: Picard lattices of
//! blow-ups of ℙ² and 𝔽₁, their root systems, exceptional curves and
//! rulings, Chevalley Lie algebras and weight modules built from divisor
//! classes, and the Torelli correspondence with homomorphisms from the root
//! lattice to an elliptic curve.

#![allow(clippy::needless_range_loop)]

pub mod chevalley;
pub mod error;
pub mod intmat;
pub mod picard;
pub mod roots;
pub mod torelli;
pub mod torus;

pub use error::{Error, Result};
pub use picard::{DivisorClass, Family, PicardLattice, SurfaceKind};
pub use torelli::{HomToTorus, OrbitVerdict, PointConfig, TorelliSystem};
pub use torus::TorusPoint;
