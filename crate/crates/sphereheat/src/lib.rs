//! Command line, report formats and parallel drivers for [`sphereheat_core`].

pub mod cli;
pub mod parallel;
pub mod ranges;
pub mod report;

pub use cli::run;
pub use sphereheat_core;
