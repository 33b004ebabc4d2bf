pub mod abb;
pub mod cli;
pub mod clubs;
pub mod error;
pub mod field;
pub mod linalg;
pub mod nrc;
pub mod par;
pub mod projective;
pub mod reduction;
pub mod report;
pub mod segre;
pub mod theorems;

pub use error::{Error, Result};
