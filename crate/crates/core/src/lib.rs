pub mod cli;
pub mod colorings;
pub mod density;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod optimize;
pub mod report;
pub mod sums;
pub mod verify;

pub use error::{Error, Result};
