pub mod blowup;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod models;
pub mod output;
pub mod parametrisation;
pub mod params;
pub mod slowfast;
pub mod taylor;

pub use error::{Error, Result};
