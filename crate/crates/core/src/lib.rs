//! Pricing plans for APIs: the SLA4OAI document format, a pricing model with
//! exact arithmetic, validity analysis of plan limits, and a window simulator.

pub mod analysis;
pub mod model;
pub mod pipeline;
pub mod rational;
pub mod simulator;
pub mod sla4oai;
