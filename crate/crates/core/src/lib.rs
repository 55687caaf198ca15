pub mod backend;
pub mod ball;
pub mod certify;
pub mod config;
pub mod coset;
pub mod error;
pub mod experiment;
pub mod fsa;
pub mod gog;
pub mod higgins;
pub mod report;
pub mod word;

pub use error::{Error, Result};
