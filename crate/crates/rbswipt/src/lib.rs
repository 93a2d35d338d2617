pub mod cli;
pub mod config;
pub mod curve;
pub mod figures;
pub mod presets;
pub mod runner;
pub mod units;
