//! Exact computations in length categories of finite dimensional modules
//! whose simple objects are pairwise orthogonal.

pub mod error;
pub mod expr;
pub mod field;
pub mod linalg;
pub mod pointed;
pub mod poly;
pub mod presentation;
pub mod fdmod;
pub mod fixtures;
pub mod extension;
pub mod defm;
pub mod uniserial;
pub mod weyl;
pub mod json;
pub mod quiver;

pub use error::{Error, Result};
pub use field::{Field, Fp};

pub type Q = num_rational::BigRational;
pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
