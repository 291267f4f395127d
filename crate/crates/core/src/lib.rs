pub mod cli;
pub mod connection;
pub mod diffop;
pub mod error;
pub mod hochschild;
pub mod ideal;
pub mod linalg;
pub mod linfty;
pub mod matrix;
pub mod parse;
pub mod poisson;
pub mod poly;
pub mod problem;
pub mod quantize;
pub mod quotient;

pub use error::{Error, Result};
