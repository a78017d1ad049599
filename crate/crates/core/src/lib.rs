pub mod dirac;
pub mod error;
pub mod ncalg;
pub mod qmetric;
pub mod report;
pub mod scalar;
pub mod uqact;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::ScalarQ;
