//! File formats, instance generator, plotting and the command line for
//! `compactvrp-core`.

pub mod cli;
pub mod clock;
pub mod gen;
pub mod io;
pub mod plot;
