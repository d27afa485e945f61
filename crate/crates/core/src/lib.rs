//! Two-boson one-fermion realizations of the osp(2,1) superalgebra, their
//! similarity transforms to one-variable quasi-exactly-solvable form, and
//! the Jaynes-Cummings spectra built on them.

pub mod algebra;
pub mod eigen;
pub mod error;
pub mod expr;
pub mod fock;
pub mod gamma;
pub mod json;
pub mod operator;
pub mod scalar;
pub mod spectra;
pub mod spinor;
pub mod spinor_op;
pub mod transform;

pub use error::{Error, Result};
