pub mod budget;
pub mod cli;
pub mod error;
pub mod field;
pub mod geometry;
pub mod linalg;
pub mod density;
pub mod poly;
pub mod report;
pub mod sections;
pub mod smoothing;
pub mod zeta;

pub use budget::Budget;
pub use error::{Error, Result};
