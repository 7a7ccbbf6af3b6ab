//! Finite-field arithmetic and the two component code families: systematic
//! Reed-Solomon with error-erasure decoding and shortened binary BCH with
//! syndrome-targeted decoding.

pub mod bch;
pub mod field;
pub mod locator;
pub mod rs;

pub use bch::{BchCode, BchError};
pub use field::{FieldContext, FieldError};
pub use rs::{DecodeFailure, RsCode, RsError};
