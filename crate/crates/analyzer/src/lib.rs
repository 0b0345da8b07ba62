//! Command-line and HTTP front ends for the SLA4OAI validity analyzer.

pub mod cli;
pub mod render;
pub mod service;
