pub mod algebra;
pub mod aspec;
pub mod error;
pub mod ext;
pub mod field;
pub mod groebner;
pub mod hochschild;
pub mod hull;
pub mod linalg;
pub mod module;
pub mod oalg;
pub mod poly;
pub mod polyline;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use linalg::{Mat, Vector};
