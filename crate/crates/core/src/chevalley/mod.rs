//! Chevalley Lie algebras from root data, and weight modules built from
//! exceptional classes, rulings, spinor and wedge weights.

pub mod algebra;
pub mod duality;
pub mod module;
pub mod symmetric;

pub use algebra::{ChevalleyAlgebra, SparseVec, Violation};
pub use duality::{check_duality, quadratic_form_pairs, DualityPair, DualityReport, MapCheck};
pub use module::{build_module, build_module_with, wedge_weights, Construction, ModuleKind, WeightModule};
