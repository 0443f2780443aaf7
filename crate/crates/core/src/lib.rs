//! Temperley–Lieb representations built from an invertible bilinear form `b`,
//! the associated braid and Baxterized R-matrices, the L-operator of the
//! centralising quantum algebra, and the open-chain Hamiltonian `H = sum X_j`.
//!
//! Each construction has a matching residual check.

pub mod bform;
pub mod chain;
pub mod chainop;
pub mod error;
pub mod io;
pub mod linalg;
pub mod qalg;
pub mod rep_ring;
pub mod report;
pub mod rmatrix;
pub mod sample;
pub mod scalar;
pub mod sparse;
pub mod tl;

pub use bform::{builtin_bform, make_bform, BForm, BFormOptions, Family, EPS};
pub use chainop::ChainOp;
pub use error::{Error, Result};
pub use report::{Check, ResidualReport};
pub use scalar::C64;
pub use tl::LocalOp;
