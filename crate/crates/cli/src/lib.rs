//! Problem files and the `diffcoh` command line over [`diffcoh_core`].

pub mod bundled;
pub mod cli;
pub mod problem;
