//! Experiment harness behind the `goalbench` binary: configuration,
//! translator stubs, the five pipeline stages, and report rendering.
//!
//! The pieces live in a library so integration tests and other tooling can
//! drive exactly the code the binary runs — assembling the same prompts,
//! hashing the same requests, sampling the same probe sets, and rendering
//! the same reports.

pub mod config;
pub mod report;
pub mod stages;
pub mod stub;
