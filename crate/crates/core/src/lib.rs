pub mod error;
pub mod extend_db;
pub mod gpr;
pub mod io;
pub mod maniplex;
pub mod mix;
pub mod permcore;
pub mod pipeline;
pub mod report;
pub mod toroidal;
pub mod two_s_m;

pub use error::{Error, Result};
