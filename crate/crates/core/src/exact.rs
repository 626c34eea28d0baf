//! Exhaustive optimal solver for tiny instances.
//!
//! Enumerates every order subset that reaches the item goal (or the whole
//! pool when it cannot), every split of the chosen orders into batches of at
//! most `Q` orders, every assignment of warehouse items to those batches, and
//! every split of each batch's items into single-zone, volume-feasible
//! picklists. Picklists are walked in their optimal visiting order, so this
//! solver can beat the heuristic routes even on identical item sets.
//!
//! Items and orders are represented as bitmasks; tour and picklist-partition
//! costs are tabulated once per instance over all item subsets.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::grid_steps;
use crate::model::{Batch, Instance, ItemId, OrderId, Picklist, Solution};

/// Largest instance the solver accepts.
pub const MAX_ITEMS: usize = 14;
pub const MAX_ORDER_ARTICLES: usize = 10;

const INF: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactLimits {
    pub max_total_order_articles: usize,
    pub max_items: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        Self {
            max_total_order_articles: MAX_ORDER_ARTICLES,
            max_items: MAX_ITEMS,
        }
    }
}

/// Optimal solution of a tiny instance. Limits above [`MAX_ITEMS`] and
/// [`MAX_ORDER_ARTICLES`] are capped. Among equal-cost optima the first one
/// in enumeration order (ascending order masks, then submasks) is returned.
pub fn exact_solve(instance: &Instance, limits: &ExactLimits) -> Result<Solution> {
    let max_items = limits.max_items.min(MAX_ITEMS);
    let max_order_articles = limits.max_total_order_articles.min(MAX_ORDER_ARTICLES);
    let items = instance.items().len();
    let order_articles = instance.total_order_articles();
    if items > max_items || order_articles > max_order_articles {
        return Err(Error::LimitsExceeded {
            order_articles,
            max_order_articles,
            items,
            max_items,
        });
    }

    let routes = RouteTables::build(instance);
    let mut search = BatchSearch::new(instance, &routes);
    let orders = instance.orders().len();
    let all_orders = (1u32 << orders) - 1;
    let all_items = (1u32 << items) - 1;
    let goal = instance.item_goal();
    let pool_short = order_articles < goal;

    let mut best: Option<(u32, u32)> = None;
    for selection in 0..=all_orders {
        let admissible = if pool_short {
            selection == all_orders
        } else {
            search.articles_of(selection) >= goal
        };
        if !admissible {
            continue;
        }
        let cost = search.cost(selection, all_items);
        if best.is_none_or(|(c, _)| cost < c) {
            best = Some((cost, selection));
        }
    }
    let (cost, selection) = best.ok_or_else(|| Error::Invariant("no admissible order selection".into()))?;

    let batches = search.reconstruct(selection, all_items);
    let mut solution = Solution::assemble(instance, "exact", 0, batches)?;
    if solution.objective != f64::from(cost) {
        return Err(Error::Invariant(format!(
            "reconstructed objective {} differs from search cost {cost}",
            solution.objective
        )));
    }
    solution.optimal = true;
    Ok(solution)
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |b| mask & (1 << b) != 0)
}

/// Submasks of `mask`, including 0 and `mask` itself, in descending order.
fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let current = next?;
        next = (current != 0).then(|| (current - 1) & mask);
        Some(current)
    })
}

struct RouteTables {
    n: usize,
    depot: Vec<u32>,
    dist: Vec<u32>,
    /// Best route cost ending at each item, per single-zone mask.
    path: Vec<u32>,
    /// Optimal closed tour per single-zone mask, INF otherwise.
    tour: Vec<u32>,
    /// Cheapest split into feasible picklists, and the picklist holding the
    /// lowest item in that split.
    pick: Vec<u32>,
    pick_first: Vec<u32>,
}

impl RouteTables {
    fn build(instance: &Instance) -> Self {
        let n = instance.items().len();
        let full = 1usize << n;
        let locs: Vec<_> = instance.items().iter().map(|i| i.location).collect();

        let mut depot = vec![0; n];
        let mut dist = vec![INF; n * n];
        for i in 0..n {
            let zone = instance.zone(locs[i].zone);
            depot[i] = grid_steps(&zone.cross_aisle_racks, zone.depot(), locs[i]) as u32;
            for j in 0..n {
                if locs[i].zone == locs[j].zone {
                    dist[i * n + j] = grid_steps(&zone.cross_aisle_racks, locs[i], locs[j]) as u32;
                }
            }
        }

        // Zone of each mask (-1 when mixed) and its volume.
        let mut zone_of = vec![-1i64; full];
        let mut volume = vec![0.0f64; full];
        for mask in 1..full {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let z = i64::from(locs[low].zone.0);
            zone_of[mask] = if rest == 0 || zone_of[rest] == z { z } else { -1 };
            volume[mask] = volume[rest] + instance.item_volume(ItemId(low as u32));
        }

        let mut path = vec![INF; full * n];
        let mut tour = vec![INF; full];
        for mask in 1..full {
            if zone_of[mask] < 0 {
                continue;
            }
            let mut closed = INF;
            for last in bits(mask as u32) {
                let prev_mask = mask ^ (1 << last);
                let cost = if prev_mask == 0 {
                    depot[last]
                } else {
                    bits(prev_mask as u32)
                        .map(|prev| path[prev_mask * n + prev] + dist[prev * n + last])
                        .min()
                        .unwrap_or(INF)
                };
                path[mask * n + last] = cost;
                closed = closed.min(cost + depot[last]);
            }
            tour[mask] = closed;
        }

        let limit = instance.picklist_volume();
        let mut pick = vec![INF; full];
        let mut pick_first = vec![0u32; full];
        pick[0] = 0;
        for mask in 1..full as u32 {
            let low = mask & mask.wrapping_neg();
            let rest = mask ^ low;
            for sub in submasks(rest) {
                let part = sub | low;
                let t = tour[part as usize];
                if t == INF || volume[part as usize] > limit {
                    continue;
                }
                let cost = t.saturating_add(pick[(mask ^ part) as usize]);
                if cost < pick[mask as usize] {
                    pick[mask as usize] = cost;
                    pick_first[mask as usize] = part;
                }
            }
        }

        Self {
            n,
            depot,
            dist,
            path,
            tour,
            pick,
            pick_first,
        }
    }

    /// Optimal visiting sequence of a single-zone mask.
    fn route(&self, mask: u32) -> Vec<usize> {
        let n = self.n;
        let target = self.tour[mask as usize];
        let mut last = bits(mask)
            .find(|&l| self.path[mask as usize * n + l] + self.depot[l] == target)
            .expect("tour has an end point");
        let mut remaining = mask;
        let mut sequence = vec![last];
        while remaining != 1 << last {
            let here = self.path[remaining as usize * n + last];
            let prev_mask = remaining ^ (1 << last);
            let prev = bits(prev_mask)
                .find(|&p| self.path[prev_mask as usize * n + p] + self.dist[p * n + last] == here)
                .expect("route predecessor exists");
            sequence.push(prev);
            remaining = prev_mask;
            last = prev;
        }
        sequence.reverse();
        sequence
    }

    fn picklists(&self, instance: &Instance, mut mask: u32) -> Vec<Picklist> {
        let mut out = Vec::new();
        while mask != 0 {
            let part = self.pick_first[mask as usize];
            let items: Vec<ItemId> = self.route(part).into_iter().map(|i| ItemId(i as u32)).collect();
            out.push(Picklist {
                zone: instance.item(items[0]).location.zone,
                items,
            });
            mask ^= part;
        }
        out.sort_by_key(|p| (p.zone, p.items[0]));
        out
    }
}

struct BatchSearch<'a> {
    instance: &'a Instance,
    routes: &'a RouteTables,
    /// Item mask per article id.
    article_items: Vec<u32>,
    /// Cost of batching the remaining orders with the free items, and the
    /// batch (orders, items) holding the lowest remaining order.
    memo: HashMap<(u32, u32), (u32, u32, u32)>,
}

impl<'a> BatchSearch<'a> {
    fn new(instance: &'a Instance, routes: &'a RouteTables) -> Self {
        let mut article_items = vec![0u32; instance.articles().len()];
        for item in instance.items() {
            article_items[item.article.index()] |= 1 << item.id.0;
        }
        Self {
            instance,
            routes,
            article_items,
            memo: HashMap::new(),
        }
    }

    fn articles_of(&self, orders: u32) -> usize {
        bits(orders)
            .map(|o| self.instance.orders()[o].articles.len())
            .sum()
    }

    /// Item masks within `free` that match the article multiset of `orders`.
    fn allocations(&self, orders: u32, free: u32) -> Vec<u32> {
        let mut demand: Vec<(usize, u32)> = Vec::new();
        for o in bits(orders) {
            for a in &self.instance.orders()[o].articles {
                match demand.iter_mut().find(|(x, _)| *x == a.index()) {
                    Some((_, k)) => *k += 1,
                    None => demand.push((a.index(), 1)),
                }
            }
        }
        let mut masks = vec![0u32];
        for (article, count) in demand {
            let candidates = self.article_items[article] & free;
            let choices: Vec<u32> = submasks(candidates).filter(|m| m.count_ones() == count).collect();
            masks = masks
                .iter()
                .flat_map(|&m| choices.iter().map(move |&c| m | c))
                .collect();
        }
        masks
    }

    fn cost(&mut self, remaining: u32, free: u32) -> u32 {
        if remaining == 0 {
            return 0;
        }
        if let Some(&(cost, _, _)) = self.memo.get(&(remaining, free)) {
            return cost;
        }
        let q = self.instance.orders_per_batch() as u32;
        let low = remaining & remaining.wrapping_neg();
        let mut best = (INF, 0, 0);
        for sub in submasks(remaining ^ low) {
            let batch = sub | low;
            if batch.count_ones() > q {
                continue;
            }
            for items in self.allocations(batch, free) {
                let here = self.routes.pick[items as usize];
                if here == INF {
                    continue;
                }
                let rest = self.cost(remaining ^ batch, free ^ items);
                if rest == INF {
                    continue;
                }
                if here + rest < best.0 {
                    best = (here + rest, batch, items);
                }
            }
        }
        self.memo.insert((remaining, free), best);
        best.0
    }

    fn reconstruct(&mut self, mut remaining: u32, mut free: u32) -> Vec<Batch> {
        let mut batches = Vec::new();
        while remaining != 0 {
            self.cost(remaining, free);
            let (_, orders, items) = self.memo[&(remaining, free)];
            batches.push(Batch {
                orders: bits(orders).map(|o| OrderId(o as u32)).collect(),
                picklists: self.routes.picklists(self.instance, items),
            });
            remaining ^= orders;
            free ^= items;
        }
        batches
    }
}
