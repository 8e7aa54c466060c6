pub mod bits;
pub mod error;
pub mod quantum;

pub use bits::BitString;
pub use error::{Error, Result};
pub mod algorithms;
pub mod families;
pub mod generator;
pub mod harness;
pub mod histories;
pub mod sharing;
