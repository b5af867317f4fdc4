pub mod error;
pub mod fan;
pub mod field;
pub mod hull;
pub mod monomial_ideal;
pub mod par;
pub mod poly;
pub mod resolve;
pub mod trace;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
