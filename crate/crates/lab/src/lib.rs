//! File formats, JSON reports and the command line for
//! [`closure_lab_core`].

pub mod cli;
pub mod error;
pub mod format;
pub mod parallel;
pub mod report;

pub use closure_lab_core as core;
pub use error::{LabError, Result};
