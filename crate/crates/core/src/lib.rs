pub mod cli;
pub mod driver;
pub mod encoder;
pub mod error;
pub mod exporter;
pub mod lasre;
pub mod sat;
pub mod spec;
pub mod verifier;
