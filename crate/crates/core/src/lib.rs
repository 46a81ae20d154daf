//! Core algorithms of the activity-guided floorplan pipeline.

pub mod actsim;
pub mod floorplan;
pub mod furnish;
pub mod genlab;
pub mod grid;
pub mod metrics;
pub mod synth;
pub mod vectorize;

#[cfg(test)]
mod testutil;
