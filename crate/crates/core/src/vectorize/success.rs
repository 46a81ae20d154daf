use serde::{Deserialize, Serialize};

use crate::floorplan::RoomLabel;

use super::geometry::edges;
use super::{on_boundary, VectorFloorplan, DOMINANCE_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuccessCondition {
    /// Every room is closed and unambiguously typed.
    ClosedRooms,
    /// At least one living room and one master bedroom.
    BalancedTypes,
    /// The main entrance opens into a living room and every private room
    /// has a door onto one.
    LivingConnectivity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuccessReport {
    pub ok: bool,
    pub failed_conditions: Vec<SuccessCondition>,
}

/// Rooms allowed to be reached through something other than a living room.
fn needs_living_door(t: RoomLabel) -> bool {
    !matches!(
        t,
        RoomLabel::Living | RoomLabel::Bathroom | RoomLabel::Balcony
    )
}

pub fn check_success(vf: &VectorFloorplan) -> SuccessReport {
    let mut failed = Vec::new();
    if vf.rooms.is_empty()
        || vf
            .rooms
            .iter()
            .any(|r| !r.closed || r.dominance < DOMINANCE_THRESHOLD)
    {
        failed.push(SuccessCondition::ClosedRooms);
    }
    let has = |t| vf.rooms.iter().any(|r| r.room_type == t);
    if !has(RoomLabel::Living) || !has(RoomLabel::Master) {
        failed.push(SuccessCondition::BalancedTypes);
    }
    let living: Vec<_> = vf
        .rooms
        .iter()
        .filter(|r| r.room_type == RoomLabel::Living)
        .collect();
    let entrance_ok = vf.main_entrance.is_some_and(|me| {
        living
            .iter()
            .any(|l| edges(&l.polygon).iter().any(|e| e.overlap(&me).is_some()))
    });
    let doors_ok = vf
        .rooms
        .iter()
        .enumerate()
        .filter(|(_, r)| needs_living_door(r.room_type))
        .all(|(i, _)| {
            vf.doors
                .iter()
                .filter(|d| d.room_index == i)
                .any(|d| living.iter().any(|l| on_boundary(&l.polygon, d.position)))
        });
    if !entrance_ok || !doors_ok {
        failed.push(SuccessCondition::LivingConnectivity);
    }
    SuccessReport {
        ok: failed.is_empty(),
        failed_conditions: failed,
    }
}
