pub mod actions;
pub mod algebra;
pub mod crossed_product;
pub mod error;
pub mod groups;
pub mod harness;
pub mod linalg;
pub mod outerness;
pub mod spectral;

pub use error::{Error, Result};
