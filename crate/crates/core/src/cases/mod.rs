//! Built-in building-energy decision problems.

pub mod ashp;
pub mod gshp;
pub mod ventilation;
