//! Picklist routing cost and the heuristic split of a batch's items into
//! picklists.

use crate::error::{Error, Result};
use crate::geometry::grid_steps;
use crate::model::{Instance, ItemId, Picklist, ZoneId};

/// Round-trip length depot -> items in sequence -> depot, in grid steps.
pub fn route_steps(instance: &Instance, zone: ZoneId, items: &[ItemId]) -> Result<u64> {
    if items.is_empty() {
        return Err(Error::EmptyPicklist);
    }
    let spec = instance
        .zones()
        .get(zone.index())
        .ok_or(Error::Invariant(format!("unknown zone {zone}")))?;
    let mut total = 0;
    let mut here = spec.depot();
    for &id in items {
        let item = instance.items().get(id.index()).ok_or(Error::UnknownItem(id))?;
        if item.location.zone != zone {
            return Err(Error::ItemOutsideZone { item: id, zone });
        }
        total += grid_steps(&spec.cross_aisle_racks, here, item.location);
        here = item.location;
    }
    Ok(total + grid_steps(&spec.cross_aisle_racks, here, spec.depot()))
}

/// Cost of walking the picklist in its stored order.
pub fn picklist_cost(instance: &Instance, p: &Picklist) -> Result<f64> {
    route_steps(instance, p.zone, &p.items).map(|s| s as f64)
}

/// Splits `selected` into picklists: per zone (ascending id), items sorted by
/// (aisle, rack, id) and packed first-fit in that order. A picklist is closed
/// as soon as the next item would overflow the picklist volume.
pub fn compute_picklists(instance: &Instance, selected: &[ItemId]) -> Vec<Picklist> {
    let mut by_zone: Vec<Vec<ItemId>> = vec![Vec::new(); instance.zones().len()];
    for &id in selected {
        by_zone[instance.item(id).location.zone.index()].push(id);
    }

    let limit = instance.picklist_volume();
    let mut picklists = Vec::new();
    for (zone, mut items) in by_zone.into_iter().enumerate() {
        if items.is_empty() {
            continue;
        }
        let zone = ZoneId(zone as u32);
        items.sort_by_key(|&id| {
            let loc = instance.item(id).location;
            (loc.aisle, loc.rack, id)
        });

        let mut current: Vec<ItemId> = Vec::new();
        let mut volume = 0.0;
        for id in items {
            let v = instance.item_volume(id);
            if volume + v <= limit {
                volume += v;
            } else {
                picklists.push(Picklist {
                    items: std::mem::take(&mut current),
                    zone,
                });
                volume = v;
            }
            current.push(id);
        }
        if !current.is_empty() {
            picklists.push(Picklist { items: current, zone });
        }
    }
    picklists
}
