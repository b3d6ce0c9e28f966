//! Library surface of the command-line front end: the configuration format,
//! presets, and manifest writer, exposed so integration tests can exercise
//! them directly.

pub mod config;
