//! Support library for the `copulakit` binary: CSV I/O, SVG scatter
//! rendering, and the check-report model. The command-line surface itself
//! lives in `main.rs`.

pub mod csvio;
pub mod report;
pub mod svg;
