//! Problem input and solution types.
//!
//! Every entity is referenced by a dense id equal to its position in the
//! owning list, so lookups are plain indexing. Instances are checked once at
//! construction and are immutable afterwards.

use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picklist;

/// Schema version written into instance and solution files.
pub const FORMAT_VERSION: &str = "1.0";

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

id_type!(ArticleId);
id_type!(OrderId);
id_type!(ItemId);
id_type!(ZoneId);

#[derive(Debug, Clone, PartialEq)]
pub struct Article {
    pub id: ArticleId,
    pub volume: f64,
}

/// A customer order: a multiset of articles, duplicates kept in place.
#[derive(Debug, Clone, PartialEq)]
pub struct Order {
    pub id: OrderId,
    pub articles: Vec<ArticleId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Location {
    pub zone: ZoneId,
    pub aisle: u32,
    pub rack: u32,
}

impl Location {
    pub fn new(zone: ZoneId, aisle: u32, rack: u32) -> Self {
        Self { zone, aisle, rack }
    }
}

/// One picking zone: an `aisles x racks` grid whose depot sits at aisle 0,
/// rack 0. Pickers change aisles only at the three cross-aisle racks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZoneSpec {
    pub id: ZoneId,
    pub aisles: u32,
    pub racks: u32,
    pub cross_aisle_racks: [u32; 3],
}

impl ZoneSpec {
    /// Zone with cross-aisles at the front, middle and back rack.
    pub fn with_default_cross_aisles(id: ZoneId, aisles: u32, racks: u32) -> Self {
        let last = racks.saturating_sub(1);
        Self {
            id,
            aisles,
            racks,
            cross_aisle_racks: [0, last / 2, last],
        }
    }

    #[inline]
    pub fn depot(&self) -> Location {
        Location::new(self.id, 0, 0)
    }

    pub fn contains(&self, loc: Location) -> bool {
        loc.zone == self.id && loc.aisle < self.aisles && loc.rack < self.racks
    }

    fn check(&self) -> Option<String> {
        if self.aisles == 0 || self.racks == 0 {
            return Some(format!("grid {}x{} is empty", self.aisles, self.racks));
        }
        let [a, b, c] = self.cross_aisle_racks;
        if a != 0 {
            return Some("first cross-aisle must be rack 0 (the depot rack)".into());
        }
        if a == b || b == c || a == c {
            return Some(format!("cross-aisles {:?} are not distinct", self.cross_aisle_racks));
        }
        if self.cross_aisle_racks.iter().any(|&r| r >= self.racks) {
            return Some(format!(
                "cross-aisles {:?} outside racks [0, {})",
                self.cross_aisle_racks, self.racks
            ));
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WarehouseItem {
    pub id: ItemId,
    pub article: ArticleId,
    pub location: Location,
}

/// Item goal `IG`, picklist volume `V` and orders per batch `Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub item_goal: usize,
    pub picklist_volume: f64,
    pub orders_per_batch: usize,
}

/// A single problem invariant broken by an instance.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InstanceViolation {
    #[error("{kind} at position {position} has id {id}; ids must be dense and in order")]
    NonDenseId {
        kind: &'static str,
        position: usize,
        id: u32,
    },
    #[error("parameter {name}: {reason}")]
    Param { name: &'static str, reason: String },
    #[error("zone {zone}: {reason}")]
    Zone { zone: ZoneId, reason: String },
    #[error("article {article} volume {volume} outside (0, {limit}]")]
    ArticleVolume {
        article: ArticleId,
        volume: f64,
        limit: f64,
    },
    #[error("item {item} references unknown article {article}")]
    ItemArticle { item: ItemId, article: ArticleId },
    #[error("item {item} location {location:?} is outside its zone grid")]
    ItemLocation { item: ItemId, location: Location },
    #[error("order {order} is empty")]
    EmptyOrder { order: OrderId },
    #[error("order {order} references unknown article {article}")]
    OrderArticle { order: OrderId, article: ArticleId },
    #[error("supply < demand for article {article}: {supply} items, {demand} ordered")]
    Supply {
        article: ArticleId,
        supply: usize,
        demand: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    params: Params,
    zones: Vec<ZoneSpec>,
    articles: Vec<Article>,
    items: Vec<WarehouseItem>,
    orders: Vec<Order>,
}

impl Instance {
    /// Builds an instance, checking every structural invariant. All
    /// violations are collected, not just the first.
    pub fn new(
        name: impl Into<String>,
        params: Params,
        zones: Vec<ZoneSpec>,
        articles: Vec<Article>,
        items: Vec<WarehouseItem>,
        orders: Vec<Order>,
    ) -> Result<Self> {
        let instance = Self {
            name: name.into(),
            params,
            zones,
            articles,
            items,
            orders,
        };
        let violations = instance.check();
        if violations.is_empty() {
            Ok(instance)
        } else {
            Err(Error::InvalidInstance(violations))
        }
    }

    fn check(&self) -> Vec<InstanceViolation> {
        use InstanceViolation as V;
        let mut out = Vec::new();

        let dense = |kind, ids: &mut dyn Iterator<Item = u32>, out: &mut Vec<V>| {
            for (position, id) in ids.enumerate() {
                if id as usize != position {
                    out.push(V::NonDenseId { kind, position, id });
                }
            }
        };
        dense("zone", &mut self.zones.iter().map(|z| z.id.0), &mut out);
        dense("article", &mut self.articles.iter().map(|a| a.id.0), &mut out);
        dense("item", &mut self.items.iter().map(|i| i.id.0), &mut out);
        dense("order", &mut self.orders.iter().map(|o| o.id.0), &mut out);
        if !out.is_empty() {
            // Everything below indexes by id.
            return out;
        }

        let p = &self.params;
        if !(p.picklist_volume.is_finite() && p.picklist_volume > 0.0) {
            out.push(V::Param {
                name: "picklist_volume",
                reason: format!("{} is not a positive number", p.picklist_volume),
            });
        }
        if p.orders_per_batch == 0 {
            out.push(V::Param {
                name: "orders_per_batch",
                reason: "must be at least 1".into(),
            });
        }
        if p.item_goal == 0 {
            out.push(V::Param {
                name: "item_goal",
                reason: "must be at least 1".into(),
            });
        } else if p.item_goal > self.items.len() {
            out.push(V::Param {
                name: "item_goal",
                reason: format!("{} exceeds the {} warehouse items", p.item_goal, self.items.len()),
            });
        }

        for zone in &self.zones {
            if let Some(reason) = zone.check() {
                out.push(V::Zone { zone: zone.id, reason });
            }
        }

        for a in &self.articles {
            if !(a.volume.is_finite() && a.volume > 0.0 && a.volume <= p.picklist_volume) {
                out.push(V::ArticleVolume {
                    article: a.id,
                    volume: a.volume,
                    limit: p.picklist_volume,
                });
            }
        }

        let mut supply = vec![0usize; self.articles.len()];
        for item in &self.items {
            match supply.get_mut(item.article.index()) {
                Some(count) => *count += 1,
                None => out.push(V::ItemArticle {
                    item: item.id,
                    article: item.article,
                }),
            }
            let inside = self
                .zones
                .get(item.location.zone.index())
                .is_some_and(|z| z.contains(item.location));
            if !inside {
                out.push(V::ItemLocation {
                    item: item.id,
                    location: item.location,
                });
            }
        }

        for order in &self.orders {
            if order.articles.is_empty() {
                out.push(V::EmptyOrder { order: order.id });
            }
            for &article in &order.articles {
                if article.index() >= self.articles.len() {
                    out.push(V::OrderArticle {
                        order: order.id,
                        article,
                    });
                }
            }
        }

        let demand = demand_profile(self);
        for (index, (&have, &need)) in supply.iter().zip(&demand).enumerate() {
            if have < need {
                out.push(V::Supply {
                    article: ArticleId(index as u32),
                    supply: have,
                    demand: need,
                });
            }
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn item_goal(&self) -> usize {
        self.params.item_goal
    }

    pub fn picklist_volume(&self) -> f64 {
        self.params.picklist_volume
    }

    pub fn orders_per_batch(&self) -> usize {
        self.params.orders_per_batch
    }

    pub fn zones(&self) -> &[ZoneSpec] {
        &self.zones
    }

    pub fn articles(&self) -> &[Article] {
        &self.articles
    }

    pub fn items(&self) -> &[WarehouseItem] {
        &self.items
    }

    pub fn orders(&self) -> &[Order] {
        &self.orders
    }

    #[inline]
    pub fn zone(&self, id: ZoneId) -> &ZoneSpec {
        &self.zones[id.index()]
    }

    #[inline]
    pub fn item(&self, id: ItemId) -> &WarehouseItem {
        &self.items[id.index()]
    }

    #[inline]
    pub fn order(&self, id: OrderId) -> &Order {
        &self.orders[id.index()]
    }

    #[inline]
    pub fn item_volume(&self, id: ItemId) -> f64 {
        self.articles[self.item(id).article.index()].volume
    }

    /// Sum of order sizes over the whole pool.
    pub fn total_order_articles(&self) -> usize {
        self.orders.iter().map(|o| o.articles.len()).sum()
    }

    /// Same warehouse and parameters, different order pool. Orders are
    /// renumbered densely in the given sequence.
    pub fn with_orders(&self, name: impl Into<String>, orders: Vec<Vec<ArticleId>>) -> Result<Self> {
        let orders = orders
            .into_iter()
            .enumerate()
            .map(|(index, articles)| Order {
                id: OrderId(index as u32),
                articles,
            })
            .collect();
        Self::new(
            name,
            self.params,
            self.zones.clone(),
            self.articles.clone(),
            self.items.clone(),
            orders,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&InstanceFile::from(self)).expect("instance serializes")
    }
}

/// Total demanded count per article, indexed by article id. Articles never
/// ordered map to 0; unknown article references are ignored.
pub fn demand_profile(instance: &Instance) -> Vec<usize> {
    let mut demand = vec![0usize; instance.articles.len()];
    for article in instance.orders.iter().flat_map(|o| &o.articles) {
        if let Some(count) = demand.get_mut(article.index()) {
            *count += 1;
        }
    }
    demand
}

/// Parses and validates an instance file.
pub fn load_instance(mut source: impl Read) -> Result<Instance> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let file: InstanceFile = serde_json::from_str(&text)?;
    check_version(file.format_version.as_deref())?;
    file.into_instance()
}

/// Writes the canonical form: keys sorted, compact, shortest round-trip floats.
pub fn save_instance(instance: &Instance, mut sink: impl Write) -> Result<()> {
    serde_json::to_writer(&mut sink, &InstanceFile::from(instance))?;
    sink.write_all(b"\n")?;
    Ok(())
}

fn check_version(version: Option<&str>) -> Result<()> {
    match version {
        None => Ok(()),
        Some(v) if v.split('.').next() == Some("1") => Ok(()),
        Some(v) => Err(Error::UnsupportedVersion(v.to_owned())),
    }
}

// Wire structs declare fields alphabetically so serde emits sorted keys.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    articles: Vec<ArticleRecord>,
    #[serde(default)]
    format_version: Option<String>,
    items: Vec<ItemRecord>,
    name: String,
    orders: Vec<OrderRecord>,
    params: ParamsRecord,
    zones: Vec<ZoneRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArticleRecord {
    id: u32,
    volume: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemRecord {
    aisle: u32,
    article: u32,
    id: u32,
    rack: u32,
    zone: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrderRecord {
    articles: Vec<u32>,
    id: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsRecord {
    item_goal: u64,
    orders_per_batch: u64,
    picklist_volume: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZoneRecord {
    aisles: u32,
    cross_aisle_racks: Vec<u32>,
    id: u32,
    racks: u32,
}

impl From<&Instance> for InstanceFile {
    fn from(instance: &Instance) -> Self {
        Self {
            articles: instance
                .articles
                .iter()
                .map(|a| ArticleRecord {
                    id: a.id.0,
                    volume: a.volume,
                })
                .collect(),
            format_version: Some(FORMAT_VERSION.to_owned()),
            items: instance
                .items
                .iter()
                .map(|i| ItemRecord {
                    aisle: i.location.aisle,
                    article: i.article.0,
                    id: i.id.0,
                    rack: i.location.rack,
                    zone: i.location.zone.0,
                })
                .collect(),
            name: instance.name.clone(),
            orders: instance
                .orders
                .iter()
                .map(|o| OrderRecord {
                    articles: o.articles.iter().map(|a| a.0).collect(),
                    id: o.id.0,
                })
                .collect(),
            params: ParamsRecord {
                item_goal: instance.params.item_goal as u64,
                orders_per_batch: instance.params.orders_per_batch as u64,
                picklist_volume: instance.params.picklist_volume,
            },
            zones: instance
                .zones
                .iter()
                .map(|z| ZoneRecord {
                    aisles: z.aisles,
                    cross_aisle_racks: z.cross_aisle_racks.to_vec(),
                    id: z.id.0,
                    racks: z.racks,
                })
                .collect(),
        }
    }
}

impl InstanceFile {
    fn into_instance(self) -> Result<Instance> {
        let mut zones = Vec::with_capacity(self.zones.len());
        let mut bad_zones = Vec::new();
        for z in self.zones {
            match <[u32; 3]>::try_from(z.cross_aisle_racks.as_slice()) {
                Ok(cross_aisle_racks) => zones.push(ZoneSpec {
                    id: ZoneId(z.id),
                    aisles: z.aisles,
                    racks: z.racks,
                    cross_aisle_racks,
                }),
                Err(_) => bad_zones.push(InstanceViolation::Zone {
                    zone: ZoneId(z.id),
                    reason: format!(
                        "expected exactly 3 cross-aisles, got {}",
                        z.cross_aisle_racks.len()
                    ),
                }),
            }
        }
        if !bad_zones.is_empty() {
            return Err(Error::InvalidInstance(bad_zones));
        }
        Instance::new(
            self.name,
            Params {
                item_goal: self.params.item_goal as usize,
                picklist_volume: self.params.picklist_volume,
                orders_per_batch: self.params.orders_per_batch as usize,
            },
            zones,
            self.articles
                .into_iter()
                .map(|a| Article {
                    id: ArticleId(a.id),
                    volume: a.volume,
                })
                .collect(),
            self.items
                .into_iter()
                .map(|i| WarehouseItem {
                    id: ItemId(i.id),
                    article: ArticleId(i.article),
                    location: Location::new(ZoneId(i.zone), i.aisle, i.rack),
                })
                .collect(),
            self.orders
                .into_iter()
                .map(|o| Order {
                    id: OrderId(o.id),
                    articles: o.articles.into_iter().map(ArticleId).collect(),
                })
                .collect(),
        )
    }
}

/// Ordered pick sequence inside one zone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Picklist {
    pub items: Vec<ItemId>,
    pub zone: ZoneId,
}

/// Orders `O_b` together with the picklists `P_b` that cover their articles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Batch {
    pub orders: Vec<OrderId>,
    pub picklists: Vec<Picklist>,
}

impl Batch {
    pub fn item_count(&self) -> usize {
        self.picklists.iter().map(|p| p.items.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub algorithm: String,
    pub batches: Vec<Batch>,
    #[serde(default)]
    pub format_version: Option<String>,
    pub goal_met: bool,
    pub instance: String,
    pub objective: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub optimal: bool,
    pub pcpi: f64,
    pub seed: u64,
    pub selected_items: usize,
}

impl Solution {
    /// Fills in objective, pcpi, selected item count and goal flag from the
    /// batches. pcpi is 0 when nothing was selected.
    pub fn assemble(
        instance: &Instance,
        algorithm: impl Into<String>,
        seed: u64,
        batches: Vec<Batch>,
    ) -> Result<Self> {
        let mut objective = 0.0;
        for p in batches.iter().flat_map(|b| &b.picklists) {
            objective += picklist::picklist_cost(instance, p)?;
        }
        let selected_items: usize = batches.iter().map(Batch::item_count).sum();
        let pcpi = if selected_items == 0 {
            0.0
        } else {
            objective / selected_items as f64
        };
        Ok(Self {
            algorithm: algorithm.into(),
            batches,
            format_version: Some(FORMAT_VERSION.to_owned()),
            goal_met: selected_items >= instance.item_goal(),
            instance: instance.name().to_owned(),
            objective,
            optimal: false,
            pcpi,
            seed,
            selected_items,
        })
    }

    pub fn picklist_count(&self) -> usize {
        self.batches.iter().map(|b| b.picklists.len()).sum()
    }

    pub fn from_json(mut source: impl Read) -> Result<Self> {
        let mut text = String::new();
        source.read_to_string(&mut text)?;
        let solution: Solution = serde_json::from_str(&text)?;
        check_version(solution.format_version.as_deref())?;
        Ok(solution)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string(self).expect("solution serializes");
        out.push('\n');
        out
    }
}
