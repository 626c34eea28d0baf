//! Zone-local walking distance.
//!
//! Within an aisle the rack coordinate is freely walkable. Moving to another
//! aisle is only possible along one of the zone's three cross-aisle racks, so
//! a trip between aisles detours through the cheapest cross-aisle.

use crate::error::{Error, Result};
use crate::model::{Location, ZoneSpec};

/// Walking distance in grid steps between two locations of `zone`.
pub fn steps(zone: &ZoneSpec, x: Location, y: Location) -> Result<u64> {
    for loc in [x, y] {
        if loc.zone != zone.id {
            return Err(Error::CrossZone(zone.id, loc.zone));
        }
    }
    Ok(grid_steps(&zone.cross_aisle_racks, x, y))
}

/// Walking distance between two locations of `zone`.
pub fn distance(zone: &ZoneSpec, x: Location, y: Location) -> Result<f64> {
    steps(zone, x, y).map(|s| s as f64)
}

pub fn distance_to_depot(zone: &ZoneSpec, x: Location) -> Result<f64> {
    distance(zone, zone.depot(), x)
}

/// Unchecked metric on raw coordinates; callers guarantee both locations
/// share the zone owning `cross_aisle_racks`.
#[inline]
pub(crate) fn grid_steps(cross_aisle_racks: &[u32; 3], x: Location, y: Location) -> u64 {
    if x.aisle == y.aisle {
        return u64::from(x.rack.abs_diff(y.rack));
    }
    let detour = cross_aisle_racks
        .iter()
        .map(|&c| u64::from(x.rack.abs_diff(c)) + u64::from(y.rack.abs_diff(c)))
        .min()
        .unwrap_or(u64::MAX);
    u64::from(x.aisle.abs_diff(y.aisle)) + detour
}
