pub mod elo;
pub mod eval;
pub mod fixtures;
pub mod generate;
pub mod serve;
pub mod simulate;
pub mod vectorize;

use actfloor_core::actsim::BiRrtParams;

use crate::Common;

pub fn rrt_params(common: &Common) -> BiRrtParams {
    BiRrtParams {
        runs_per_edge: common.config.runs_per_edge,
        ..BiRrtParams::default()
    }
}
