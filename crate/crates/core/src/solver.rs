//! Distance greedy batching (DGA) and its randomized variant (RDGA).
//!
//! Batches are built one at a time. Each step adds one order from the pool
//! together with concrete warehouse items for each of its articles, until the
//! batch holds `Q` orders, the pool is empty, or the batch alone covers the
//! remaining item goal. The batch's items are then split into picklists.
//!
//! DGA picks the order whose allocated items lie closest, on average, to the
//! items already in the batch (or to a depot). RDGA picks uniformly at random
//! and allocates items with the same nearest-location rule.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::grid_steps;
use crate::model::{ArticleId, Batch, Instance, ItemId, Location, OrderId, Solution};
use crate::picklist::compute_picklists;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Dga,
    Rdga,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Dga => "dga",
            Algorithm::Rdga => "rdga",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dga" => Ok(Algorithm::Dga),
            "rdga" => Ok(Algorithm::Rdga),
            other => Err(format!("unknown algorithm {other:?} (expected dga or rdga)")),
        }
    }
}

/// Ties are always broken towards the lowest order id, then the lowest item
/// id, so a run is fully determined by the instance, algorithm and seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    /// Only consumed by RDGA, but recorded in every solution.
    pub seed: u64,
}

impl SolverConfig {
    pub fn dga() -> Self {
        Self {
            algorithm: Algorithm::Dga,
            seed: 0,
        }
    }

    pub fn rdga(seed: u64) -> Self {
        Self {
            algorithm: Algorithm::Rdga,
            seed,
        }
    }
}

/// Solver bookkeeping: the items still in the warehouse, the items `S`
/// selected for the batch under construction, and the remaining item goal.
#[derive(Debug, Clone)]
pub struct SelectionState {
    available: Vec<bool>,
    by_article: Vec<Vec<ItemId>>,
    batch_selected: Vec<ItemId>,
    batch_refs: Vec<Vec<Location>>,
    remaining_goal: i64,
}

impl SelectionState {
    pub fn new(instance: &Instance) -> Self {
        let mut by_article = vec![Vec::new(); instance.articles().len()];
        for item in instance.items() {
            by_article[item.article.index()].push(item.id);
        }
        Self {
            available: vec![true; instance.items().len()],
            by_article,
            batch_selected: Vec::new(),
            batch_refs: vec![Vec::new(); instance.zones().len()],
            remaining_goal: instance.item_goal() as i64,
        }
    }

    pub fn is_available(&self, item: ItemId) -> bool {
        self.available[item.index()]
    }

    pub fn remaining_inventory(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.available
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| ItemId(i as u32))
    }

    /// Available items of `article`, ascending by id.
    pub fn available_of(&self, article: ArticleId) -> &[ItemId] {
        &self.by_article[article.index()]
    }

    pub fn batch_selected(&self) -> &[ItemId] {
        &self.batch_selected
    }

    /// May go negative once the final batch overshoots the goal.
    pub fn remaining_goal(&self) -> i64 {
        self.remaining_goal
    }

    fn take(&mut self, instance: &Instance, items: &[ItemId]) {
        for &id in items {
            let item = instance.item(id);
            debug_assert!(self.available[id.index()]);
            self.available[id.index()] = false;
            let list = &mut self.by_article[item.article.index()];
            if let Ok(pos) = list.binary_search(&id) {
                list.remove(pos);
            }
            self.batch_selected.push(id);
            self.batch_refs[item.location.zone.index()].push(item.location);
        }
    }

    fn close_batch(&mut self) -> Vec<ItemId> {
        for refs in &mut self.batch_refs {
            refs.clear();
        }
        let selected = std::mem::take(&mut self.batch_selected);
        self.remaining_goal -= selected.len() as i64;
        selected
    }

    /// Distance from `loc` to the nearest reference point in its zone: the
    /// depot, an item of the current batch, or an item in `pending`.
    fn nearest_reference(&self, instance: &Instance, loc: Location, pending: &[ItemId]) -> u64 {
        let zone = instance.zone(loc.zone);
        let cross = &zone.cross_aisle_racks;
        let mut best = grid_steps(cross, loc, zone.depot());
        for &r in &self.batch_refs[loc.zone.index()] {
            if best == 0 {
                return 0;
            }
            best = best.min(grid_steps(cross, loc, r));
        }
        for &p in pending {
            let other = instance.item(p).location;
            if other.zone == loc.zone {
                best = best.min(grid_steps(cross, loc, other));
            }
        }
        best
    }
}

/// An order together with the items allocated to it and the summed
/// nearest-reference distance of those items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderChoice {
    pub order: OrderId,
    pub items: Vec<ItemId>,
    pub distance: u64,
}

impl OrderChoice {
    /// Average distance per allocated item.
    pub fn score(&self) -> f64 {
        self.distance as f64 / self.items.len() as f64
    }

    /// Exact comparison of average distances.
    fn beats(&self, other: &OrderChoice) -> bool {
        let lhs = u128::from(self.distance) * other.items.len() as u128;
        let rhs = u128::from(other.distance) * self.items.len() as u128;
        lhs < rhs || (lhs == rhs && self.order < other.order)
    }
}

/// Allocates one item per article occurrence of `order`, each the available
/// item nearest to the current references (ties to the lowest item id).
/// Items already allocated to this order are excluded and become references
/// for its later articles.
pub fn allocate(instance: &Instance, state: &SelectionState, order: OrderId) -> Result<OrderChoice> {
    let articles = &instance.order(order).articles;
    let mut items: Vec<ItemId> = Vec::with_capacity(articles.len());
    let mut distance = 0;
    for &article in articles {
        let mut best: Option<(u64, ItemId)> = None;
        for &candidate in state.available_of(article) {
            if items.contains(&candidate) {
                continue;
            }
            let d = state.nearest_reference(instance, instance.item(candidate).location, &items);
            if best.is_none_or(|b| (d, candidate) < b) {
                best = Some((d, candidate));
            }
        }
        let (d, item) = best.ok_or_else(|| {
            Error::Invariant(format!(
                "no available item of article {article} left for order {order}"
            ))
        })?;
        distance += d;
        items.push(item);
    }
    Ok(OrderChoice {
        order,
        items,
        distance,
    })
}

/// The pool order with the smallest average allocation distance.
pub fn best_order(instance: &Instance, pool: &[OrderId], state: &SelectionState) -> Result<OrderChoice> {
    let mut best: Option<OrderChoice> = None;
    for &order in pool {
        let choice = allocate(instance, state, order)?;
        if best.as_ref().is_none_or(|b| choice.beats(b)) {
            best = Some(choice);
        }
    }
    best.ok_or_else(|| Error::Invariant("best_order called with an empty pool".into()))
}

/// A uniformly drawn pool order with the nearest-location allocation.
pub fn random_order(
    instance: &Instance,
    pool: &[OrderId],
    state: &SelectionState,
    rng: &mut impl Rng,
) -> Result<OrderChoice> {
    if pool.is_empty() {
        return Err(Error::Invariant("random_order called with an empty pool".into()));
    }
    let order = pool[rng.random_range(0..pool.len())];
    allocate(instance, state, order)
}

/// One order selection, reported before it is applied.
pub struct Decision<'a> {
    pub pool: &'a [OrderId],
    pub state: &'a SelectionState,
    pub choice: &'a OrderChoice,
}

pub fn solve(instance: &Instance, config: &SolverConfig) -> Result<Solution> {
    solve_observed(instance, config, |_| {})
}

/// Like [`solve`], calling `observer` for every order selection.
pub fn solve_observed(
    instance: &Instance,
    config: &SolverConfig,
    mut observer: impl FnMut(&Decision<'_>),
) -> Result<Solution> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = SelectionState::new(instance);
    let mut pool: Vec<OrderId> = instance.orders().iter().map(|o| o.id).collect();
    let q = instance.orders_per_batch();
    let mut batches = Vec::new();

    while state.remaining_goal > 0 && !pool.is_empty() {
        let mut orders = Vec::new();
        while orders.len() < q && !pool.is_empty() && (state.batch_selected.len() as i64) < state.remaining_goal {
            let choice = match config.algorithm {
                Algorithm::Dga => best_order(instance, &pool, &state)?,
                Algorithm::Rdga => random_order(instance, &pool, &state, &mut rng)?,
            };
            observer(&Decision {
                pool: &pool,
                state: &state,
                choice: &choice,
            });
            let pos = pool
                .binary_search(&choice.order)
                .map_err(|_| Error::Invariant(format!("order {} not in pool", choice.order)))?;
            pool.remove(pos);
            state.take(instance, &choice.items);
            orders.push(choice.order);
        }
        let selected = state.close_batch();
        batches.push(Batch {
            orders,
            picklists: compute_picklists(instance, &selected),
        });
    }

    Solution::assemble(instance, config.algorithm.as_str(), config.seed, batches)
}
