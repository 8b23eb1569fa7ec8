//! Line-list IO, report formats and the `digitlaw` command-line tool built
//! on [`digitlaw_core`].

#![forbid(unsafe_code)]

pub mod cli;
pub mod io;

pub use digitlaw_core as core;
