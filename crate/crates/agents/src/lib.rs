//! Virtual study group orchestration and reviewed-report rendering.

pub mod report;
pub mod vsg;
