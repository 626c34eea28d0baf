//! Test-only oracles and fixtures. Nothing here calls into the solver's
//! scoring or the geometry fast path except where noted.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use josabpp::generator::{generate, GenParams, Preset};
use josabpp::solver::SelectionState;
use josabpp::{
    Article, ArticleId, Batch, Instance, ItemId, Location, Order, OrderId, Params, Picklist, Solution,
    WarehouseItem, ZoneId, ZoneSpec,
};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Shortest path on the explicit movement graph: rack steps inside an aisle
/// are always allowed, aisle steps only on cross-aisle racks.
pub fn bfs_distances(zone: &ZoneSpec, from: (u32, u32)) -> HashMap<(u32, u32), u64> {
    let mut dist = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(from, 0);
    queue.push_back(from);
    while let Some((aisle, rack)) = queue.pop_front() {
        let d = dist[&(aisle, rack)];
        let mut next = Vec::new();
        if rack > 0 {
            next.push((aisle, rack - 1));
        }
        if rack + 1 < zone.racks {
            next.push((aisle, rack + 1));
        }
        if zone.cross_aisle_racks.contains(&rack) {
            if aisle > 0 {
                next.push((aisle - 1, rack));
            }
            if aisle + 1 < zone.aisles {
                next.push((aisle + 1, rack));
            }
        }
        for n in next {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(n) {
                e.insert(d + 1);
                queue.push_back(n);
            }
        }
    }
    dist
}

pub fn bfs_distance(zone: &ZoneSpec, x: Location, y: Location) -> u64 {
    bfs_distances(zone, (x.aisle, x.rack))[&(y.aisle, y.rack)]
}

/// Random zone with arbitrary (not default) cross-aisle placement.
pub fn random_zone(rng: &mut impl Rng, max_side: u32) -> ZoneSpec {
    let aisles = rng.random_range(1..=max_side);
    let racks = rng.random_range(3..=max_side);
    let mut others: Vec<u32> = (1..racks).collect();
    others.shuffle(rng);
    let mut cross = [0, others[0], others[1]];
    cross[1..].sort_unstable();
    ZoneSpec {
        id: ZoneId(0),
        aisles,
        racks,
        cross_aisle_racks: cross,
    }
}

/// Result of re-evaluating every pool order from scratch.
#[derive(Debug, Clone, PartialEq)]
pub struct Rescored {
    pub order: OrderId,
    pub items: Vec<ItemId>,
    pub distance_sum: u64,
}

/// Naive re-implementation of the greedy order choice, using BFS distances
/// on the explicit movement graph. Intended for zones of at most ~12x12.
pub fn brute_force_best_order(instance: &Instance, pool: &[OrderId], state: &SelectionState) -> Rescored {
    let mut best: Option<(f64, Rescored)> = None;
    for &o in pool {
        let mut chosen: Vec<ItemId> = Vec::new();
        let mut sum = 0u64;
        for &a in &instance.order(o).articles {
            let mut refs: Vec<Location> = instance.zones().iter().map(|z| z.depot()).collect();
            refs.extend(state.batch_selected().iter().map(|&i| instance.item(i).location));
            refs.extend(chosen.iter().map(|&i| instance.item(i).location));

            let mut pick: Option<(u64, ItemId)> = None;
            for item in instance.items() {
                if item.article != a || !state.is_available(item.id) || chosen.contains(&item.id) {
                    continue;
                }
                let zone = instance.zone(item.location.zone);
                let d = refs
                    .iter()
                    .filter(|r| r.zone == item.location.zone)
                    .map(|&r| bfs_distance(zone, item.location, r))
                    .min()
                    .expect("own depot is a reference");
                if pick.is_none_or(|(bd, bi)| d < bd || (d == bd && item.id < bi)) {
                    pick = Some((d, item.id));
                }
            }
            let (d, id) = pick.expect("supply covers demand");
            sum += d;
            chosen.push(id);
        }
        let score = sum as f64 / chosen.len() as f64;
        let candidate = Rescored {
            order: o,
            items: chosen,
            distance_sum: sum,
        };
        match &best {
            Some((s, b)) if score > *s || (score == *s && o > b.order) => {}
            _ => best = Some((score, candidate)),
        }
    }
    best.expect("non-empty pool").1
}

/// Generated instance within the exact solver's limits: at most 10 order
/// articles and 14 items, zones up to 6x6.
pub fn tiny_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_7195);
    for attempt in 0.. {
        let items = rng.random_range(6..=14);
        let params = GenParams {
            name: format!("tiny-{seed}"),
            items,
            orders: rng.random_range(2..=5),
            zones: rng.random_range(1..=2),
            aisles: rng.random_range(2..=6),
            racks: rng.random_range(3..=6),
            articles: rng.random_range(2..=4),
            mean_order_size: 1.8,
            max_order_size: 4,
            ig_ratio: rng.random_range(0.2..=1.0),
            volume_range: (1, 5),
            picklist_volume: f64::from(rng.random_range(5..=12u32)),
            orders_per_batch: rng.random_range(1..=3),
            seed: seed.wrapping_mul(1000).wrapping_add(attempt),
        };
        if let Ok(inst) = generate(&params) {
            if inst.total_order_articles() <= 10 {
                return inst;
            }
        }
    }
    unreachable!()
}

/// Tiny instance with exactly three single-zone orders over six items.
pub fn three_order_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0.. {
        let params = GenParams {
            name: format!("three-{seed}"),
            items: 6,
            orders: 3,
            zones: 1,
            aisles: 5,
            racks: 5,
            articles: 3,
            mean_order_size: 1.5,
            max_order_size: 2,
            ig_ratio: rng.random_range(0.3..=1.0),
            volume_range: (1, 5),
            picklist_volume: 8.0,
            orders_per_batch: rng.random_range(1..=2),
            seed: seed.wrapping_mul(7919).wrapping_add(attempt),
        };
        if let Ok(inst) = generate(&params) {
            return inst;
        }
    }
    unreachable!()
}

/// Small-preset instance `small-{k}` with seed `k`.
pub fn small(k: u64) -> Instance {
    let mut params = GenParams::preset(Preset::Small, k);
    params.name = format!("small-{k}");
    generate(&params).expect("small preset generates")
}

/// A uniformly random feasible solution (not optimized in any way).
pub fn random_feasible_solution(instance: &Instance, rng: &mut impl Rng) -> Solution {
    let mut orders: Vec<OrderId> = instance.orders().iter().map(|o| o.id).collect();
    orders.shuffle(rng);
    let mut take = 0;
    let mut count = 0;
    while take < orders.len() && count < instance.item_goal() {
        count += instance.order(orders[take]).articles.len();
        take += 1;
    }
    while take < orders.len() && rng.random_bool(0.3) {
        take += 1;
    }
    orders.truncate(take);

    let mut available: Vec<bool> = vec![true; instance.items().len()];
    let mut batches = Vec::new();
    let mut rest = &orders[..];
    while !rest.is_empty() {
        let size = rng.random_range(1..=instance.orders_per_batch().min(rest.len()));
        let (batch_orders, tail) = rest.split_at(size);
        rest = tail;

        let mut items = Vec::new();
        for &o in batch_orders {
            for &a in &instance.order(o).articles {
                let options: Vec<ItemId> = instance
                    .items()
                    .iter()
                    .filter(|i| i.article == a && available[i.id.index()])
                    .map(|i| i.id)
                    .collect();
                let &pick = options.choose(rng).expect("supply covers demand");
                available[pick.index()] = false;
                items.push(pick);
            }
        }
        items.shuffle(rng);

        let mut picklists: Vec<Picklist> = Vec::new();
        for zone in instance.zones() {
            let mut current: Vec<ItemId> = Vec::new();
            let mut volume = 0.0;
            for &i in items.iter().filter(|&&i| instance.item(i).location.zone == zone.id) {
                let v = instance.item_volume(i);
                let split = !current.is_empty() && (volume + v > instance.picklist_volume() || rng.random_bool(0.25));
                if split {
                    picklists.push(Picklist {
                        items: std::mem::take(&mut current),
                        zone: zone.id,
                    });
                    volume = 0.0;
                }
                current.push(i);
                volume += v;
            }
            if !current.is_empty() {
                picklists.push(Picklist { items: current, zone: zone.id });
            }
        }
        batches.push(Batch {
            orders: batch_orders.to_vec(),
            picklists,
        });
    }
    Solution::assemble(instance, "sample", 0, batches).expect("sampled picklists are routable")
}

/// Two zones, three orders, seven items. The base solution is feasible and
/// each `mutate(k, ..)` breaks exactly constraint `k`.
pub struct MutationFixture {
    pub instance: Instance,
    pub base: Solution,
}

impl MutationFixture {
    pub fn new() -> Self {
        let zones = vec![
            ZoneSpec::with_default_cross_aisles(ZoneId(0), 5, 5),
            ZoneSpec::with_default_cross_aisles(ZoneId(1), 5, 5),
        ];
        let articles = vec![
            Article { id: ArticleId(0), volume: 2.0 },
            Article { id: ArticleId(1), volume: 2.0 },
            Article { id: ArticleId(2), volume: 9.0 },
        ];
        let spec = [
            (0, 0, 1, 1),
            (1, 0, 2, 1),
            (0, 1, 1, 2),
            (1, 0, 3, 3),
            (0, 0, 4, 4),
            (1, 1, 2, 2),
            (2, 0, 1, 4),
        ];
        let items = spec
            .iter()
            .enumerate()
            .map(|(k, &(a, z, aisle, rack))| WarehouseItem {
                id: ItemId(k as u32),
                article: ArticleId(a),
                location: Location::new(ZoneId(z), aisle, rack),
            })
            .collect();
        let order = |id: u32, arts: &[u32]| Order {
            id: OrderId(id),
            articles: arts.iter().copied().map(ArticleId).collect(),
        };
        let instance = Instance::new(
            "mutation-fixture",
            Params {
                item_goal: 4,
                picklist_volume: 10.0,
                orders_per_batch: 2,
            },
            zones,
            articles,
            items,
            vec![order(0, &[0, 1]), order(1, &[0, 1]), order(2, &[2])],
        )
        .unwrap();
        let pl = |zone: u32, items: &[u32]| Picklist {
            items: items.iter().copied().map(ItemId).collect(),
            zone: ZoneId(zone),
        };
        let batches = vec![
            Batch {
                orders: vec![OrderId(0)],
                picklists: vec![pl(0, &[0, 1])],
            },
            Batch {
                orders: vec![OrderId(1), OrderId(2)],
                picklists: vec![pl(0, &[4]), pl(0, &[6]), pl(1, &[5])],
            },
        ];
        let base = Solution::assemble(&instance, "fixture", 0, batches).unwrap();
        Self { instance, base }
    }

    /// Minimal mutation targeting `constraint` (2..=8), with every recorded
    /// field recomputed honestly where it is defined.
    pub fn mutate(&self, constraint: u8) -> Solution {
        let mut s = self.base.clone();
        let b = &mut s.batches;
        match constraint {
            // Order 1 batched twice, with fresh items covering it.
            2 => {
                b[0].orders.push(OrderId(1));
                b[0].picklists.push(Picklist { items: vec![ItemId(2)], zone: ZoneId(1) });
                b[0].picklists.push(Picklist { items: vec![ItemId(3)], zone: ZoneId(0) });
            }
            // Item 0 (already in batch 0) replaces item 4: same article and zone.
            3 => b[1].picklists[0].items = vec![ItemId(0)],
            // One picked item deleted.
            4 => b[0].picklists[0].items = vec![ItemId(0)],
            // Zone-1 item moved into a zone-0 picklist of the same batch.
            5 => {
                b[1].picklists.pop();
                b[1].picklists[0].items.push(ItemId(5));
            }
            // Two zone-0 picklists merged: volume 2 + 9 > 10.
            6 => {
                let merged = b[1].picklists.remove(1);
                b[1].picklists[0].items.extend(merged.items);
            }
            // All three orders in one batch, Q = 2.
            7 => {
                let first = b.remove(0);
                b[0].orders.extend(first.orders);
                b[0].picklists.extend(first.picklists);
            }
            // Batch 0 dropped: 3 items selected, goal 4, order 0 still pooled.
            8 => {
                b.remove(0);
            }
            other => panic!("no mutation for constraint {other}"),
        }
        refresh(&self.instance, s)
    }
}

/// Recomputes recorded fields after a mutation. When a picklist has no
/// defined cost the previous objective and pcpi are kept.
pub fn refresh(instance: &Instance, solution: Solution) -> Solution {
    match Solution::assemble(instance, solution.algorithm.clone(), solution.seed, solution.batches.clone()) {
        Ok(fresh) => Solution {
            selected_items: distinct_items(&fresh),
            goal_met: distinct_items(&fresh) >= instance.item_goal(),
            pcpi: fresh.objective / distinct_items(&fresh).max(1) as f64,
            ..fresh
        },
        Err(_) => {
            let n = distinct_items(&solution);
            Solution {
                selected_items: n,
                goal_met: n >= instance.item_goal(),
                ..solution
            }
        }
    }
}

pub fn distinct_items(solution: &Solution) -> usize {
    let mut ids: Vec<ItemId> = solution
        .batches
        .iter()
        .flat_map(|b| &b.picklists)
        .flat_map(|p| p.items.iter().copied())
        .collect();
    ids.sort();
    ids.dedup();
    ids.len()
}
