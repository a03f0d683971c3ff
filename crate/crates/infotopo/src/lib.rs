//! File formats, a thread-pool executor and the command line for
//! [`infotopo_core`].

pub mod cli;
pub mod ingest;
pub mod output;
pub mod parallel;

pub use parallel::RayonExecutor;
