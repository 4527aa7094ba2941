//! Waring decompositions of homogeneous forms, apolarity, and dimensions of
//! secant varieties.
//!
//! Rank decisions on given forms are exact over the rationals. Genericity
//! sampling for secant dimensions runs over prime fields. Complex floating
//! point only appears in emitted decompositions.

pub mod apolarity;
pub mod binary;
pub mod bounds;
pub mod decomposition;
pub mod dispatch;
pub mod error;
pub mod field;
pub mod form;
pub mod linalg;
pub mod modp;
pub mod monomial;
pub mod multivar;
pub mod parse;
pub mod roots;
pub mod secant;

pub use error::{Error, Result};
pub use field::{Field, Rational, C64};
pub use form::{apolar_apply, Form, HomogeneousForm, LinearForm};
pub use parse::parse_form;
