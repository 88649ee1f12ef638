pub mod analysis;
pub mod cli;
pub mod config;
pub mod error;
pub mod friction;
pub mod interval;
pub mod models;
mod quad;
pub mod scenarios;
pub mod signals;
pub mod solver;

pub use error::{Error, Result};
pub use interval::ValueInterval;
