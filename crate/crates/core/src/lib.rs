pub mod algebra;
pub mod blueprint;
pub mod decomp;
pub mod error;
pub mod field;
pub mod fpoly;
pub mod hall;
pub mod hallpoly;
pub mod homological;
pub mod liecomp;
pub mod linalg;
pub mod module;

pub use error::{Error, Result};
