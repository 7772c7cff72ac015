pub mod agent;
pub mod cli;
pub mod error;
pub mod machine;
pub mod prior;
pub mod qalg;
pub mod qsim;
pub mod rng;

pub use error::{Error, Result};
