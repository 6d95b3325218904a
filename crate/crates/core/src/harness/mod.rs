pub mod acceptance;
pub mod config;
pub mod emit;
pub mod experiment;
