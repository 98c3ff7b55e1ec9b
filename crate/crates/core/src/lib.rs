//! Exact computations with based root data: weight multiplicities, Kottwitz
//! maps and signs, Hecke transfer kernels on class functions, fixed-point
//! counts on flag varieties and affine Grassmannians, and multiplicities of
//! dual-group representations restricted to finite abelian centralizers.

pub mod checks;
pub mod cyclotomic;
pub mod error;
pub mod group_spec;
pub mod kottwitz;
pub mod lefschetz;
pub mod linalg;
pub mod root_datum;
pub mod spectral;
pub mod transfer;
pub mod weights;

pub use error::{Error, Result};
