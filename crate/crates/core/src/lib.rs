pub mod bent;
pub mod cli;
pub mod constructions;
pub mod cyclotomic;
pub mod engine;
pub mod error;
pub mod io;
pub mod selfcheck;
pub mod zmod;

pub use error::{Error, Result};
