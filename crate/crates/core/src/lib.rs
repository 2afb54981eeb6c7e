pub mod cli;
pub mod clustering;
pub mod error;
pub mod features;
pub mod geometry;
pub mod imaging;
pub mod synthesis;

pub use error::{Error, Result};
