//! Vectorial Boolean functions over GF(2^m): field arithmetic, Walsh and
//! differential spectra, CCZ-equivalence and AB/APN families obtained from
//! Gold functions.

pub mod ccz;
pub mod constructions;
pub mod error;
pub mod gf2m;
pub mod linalg;
mod par;
pub mod report;
pub mod spectra;
pub mod vbf;

pub use error::{Error, Result};
pub use gf2m::{Elem, FieldCtx};
pub use linalg::BinLinearMap;
pub use vbf::{FuncTable, UnivariatePoly};
