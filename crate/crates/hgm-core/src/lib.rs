//! Finite-field hypergeometric sums and the zeta functions of cyclic covers
//! of tori whose point counts they describe.

pub mod arith;
pub mod charsums;
pub mod error;
pub mod family;
pub mod ffield;
pub mod hgm_sums;
pub mod series;
pub mod verify;
pub mod zeta;

pub use error::{HgmError, Result};
