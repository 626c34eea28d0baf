//! Seeded benchmark instance generation.
//!
//! Each instance is drawn from a single ChaCha8 stream, in this order:
//! article volumes, order sizes and contents, item articles, item locations.
//! The same parameters and seed therefore always give the same instance.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    demand_profile, Article, ArticleId, Instance, ItemId, Location, Order, OrderId, Params, WarehouseItem,
    ZoneId, ZoneSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Small,
    Medium,
    Large,
}

impl Preset {
    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Small => "small",
            Preset::Medium => "medium",
            Preset::Large => "large",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "small" => Ok(Preset::Small),
            "medium" => Ok(Preset::Medium),
            "large" => Ok(Preset::Large),
            other => Err(format!("unknown preset {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub name: String,
    pub items: usize,
    pub orders: usize,
    pub zones: usize,
    pub aisles: u32,
    pub racks: u32,
    pub articles: usize,
    /// Mean of the order-size distribution (geometric on 1, 2, ...).
    pub mean_order_size: f64,
    /// Larger draws are redrawn.
    pub max_order_size: usize,
    /// Item goal as a fraction of the total order articles.
    pub ig_ratio: f64,
    /// Article volumes are uniform integers in this closed range.
    pub volume_range: (u32, u32),
    pub picklist_volume: f64,
    pub orders_per_batch: usize,
    pub seed: u64,
}

impl GenParams {
    pub fn preset(preset: Preset, seed: u64) -> Self {
        let (items, orders, zones) = match preset {
            Preset::Small => (10_000, 500, 10),
            Preset::Medium => (100_000, 5_000, 50),
            Preset::Large => (1_000_000, 50_000, 100),
        };
        Self {
            name: preset.to_string(),
            items,
            orders,
            zones,
            aisles: 100,
            racks: 100,
            articles: items / 20,
            mean_order_size: 2.64,
            max_order_size: 20,
            ig_ratio: 0.20,
            volume_range: (1, 10),
            picklist_volume: 60.0,
            orders_per_batch: 46,
            seed,
        }
    }

    fn check(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Generation(msg));
        if self.items == 0 || self.zones == 0 || self.aisles == 0 || self.articles == 0 {
            return fail("items, zones, aisles and articles must be positive".into());
        }
        if self.racks < 3 {
            return fail(format!("{} racks cannot hold three distinct cross-aisles", self.racks));
        }
        if !(self.mean_order_size >= 1.0 && self.mean_order_size.is_finite()) {
            return fail(format!("mean order size {} is below 1", self.mean_order_size));
        }
        if self.max_order_size == 0 {
            return fail("max order size must be positive".into());
        }
        if !(self.ig_ratio > 0.0 && self.ig_ratio <= 1.0) {
            return fail(format!("ig_ratio {} outside (0, 1]", self.ig_ratio));
        }
        let (lo, hi) = self.volume_range;
        if lo == 0 || lo > hi {
            return fail(format!("volume range [{lo}, {hi}] is empty or not positive"));
        }
        if f64::from(hi) > self.picklist_volume {
            return fail(format!("volume {hi} exceeds picklist volume {}", self.picklist_volume));
        }
        if self.orders_per_batch == 0 {
            return fail("orders per batch must be positive".into());
        }
        Ok(())
    }
}

/// `round(ratio * total)` with halves rounded up, at least 1.
pub fn item_goal_for(total_order_articles: usize, ratio: f64) -> usize {
    ((ratio * total_order_articles as f64 + 0.5).floor() as usize).max(1)
}

pub fn generate(params: &GenParams) -> Result<Instance> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let (lo, hi) = params.volume_range;
    let articles: Vec<Article> = (0..params.articles)
        .map(|id| Article {
            id: ArticleId(id as u32),
            volume: f64::from(rng.random_range(lo..=hi)),
        })
        .collect();

    let sizes = Geometric::new(1.0 / params.mean_order_size)
        .map_err(|e| Error::Generation(format!("order size distribution: {e}")))?;
    let mut orders = Vec::with_capacity(params.orders);
    for id in 0..params.orders {
        let size = loop {
            let size = 1 + sizes.sample(&mut rng) as usize;
            if size <= params.max_order_size {
                break size;
            }
        };
        let contents = (0..size)
            .map(|_| ArticleId(rng.random_range(0..params.articles) as u32))
            .collect();
        orders.push(Order {
            id: OrderId(id as u32),
            articles: contents,
        });
    }

    let total: usize = orders.iter().map(|o| o.articles.len()).sum();
    if total > params.items {
        return Err(Error::Generation(format!(
            "{} items cannot cover {total} ordered articles",
            params.items
        )));
    }

    // Every demanded copy first, then uniform filler; shuffled so item ids
    // carry no article pattern.
    let mut demand = vec![0usize; params.articles];
    for a in orders.iter().flat_map(|o| &o.articles) {
        demand[a.index()] += 1;
    }
    let mut item_articles: Vec<ArticleId> = demand
        .iter()
        .enumerate()
        .flat_map(|(a, &n)| std::iter::repeat_n(ArticleId(a as u32), n))
        .collect();
    while item_articles.len() < params.items {
        item_articles.push(ArticleId(rng.random_range(0..params.articles) as u32));
    }
    item_articles.shuffle(&mut rng);

    let items = item_articles
        .into_iter()
        .enumerate()
        .map(|(id, article)| {
            let zone = ZoneId(rng.random_range(0..params.zones) as u32);
            let aisle = rng.random_range(0..params.aisles);
            let rack = rng.random_range(0..params.racks);
            WarehouseItem {
                id: ItemId(id as u32),
                article,
                location: Location::new(zone, aisle, rack),
            }
        })
        .collect();

    let zones = (0..params.zones)
        .map(|z| ZoneSpec::with_default_cross_aisles(ZoneId(z as u32), params.aisles, params.racks))
        .collect();

    Instance::new(
        params.name.clone(),
        Params {
            item_goal: item_goal_for(total, params.ig_ratio).min(params.items),
            picklist_volume: params.picklist_volume,
            orders_per_batch: params.orders_per_batch,
        },
        zones,
        articles,
        items,
        orders,
    )
}

/// One manifest line: what was generated and its realized size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub file: String,
    pub seed: u64,
    pub params: GenParams,
    pub total_order_articles: usize,
    pub item_goal: usize,
}

impl ManifestEntry {
    pub fn new(params: &GenParams, instance: &Instance, file: impl Into<String>) -> Self {
        Self {
            name: instance.name().to_owned(),
            file: file.into(),
            seed: params.seed,
            params: params.clone(),
            total_order_articles: instance.total_order_articles(),
            item_goal: instance.item_goal(),
        }
    }
}

/// Shrinks the order pool to a uniformly drawn subset whose article count
/// first reaches the item goal. Warehouse and parameters are untouched;
/// surviving orders keep their relative order and are renumbered densely.
pub fn trim_order_pool(instance: &Instance, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<usize> = (0..instance.orders().len()).collect();
    ids.shuffle(&mut rng);

    let mut keep = Vec::new();
    let mut count = 0;
    for id in ids {
        if count >= instance.item_goal() {
            break;
        }
        count += instance.orders()[id].articles.len();
        keep.push(id);
    }
    keep.sort_unstable();

    let orders = keep
        .into_iter()
        .map(|id| instance.orders()[id].articles.clone())
        .collect();
    let trimmed = instance.with_orders(format!("{}-trim{seed}", instance.name()), orders)?;
    debug_assert!(demand_profile(&trimmed)
        .iter()
        .zip(demand_profile(instance))
        .all(|(a, b)| *a <= b));
    Ok(trimmed)
}
