//! Order selection, allocation, batching and picking for zoned
//! mixed-shelves warehouses.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: instance and solution types, JSON loading and saving.
//! - [`geometry`]: the zone-local walking distance.
//! - [`picklist`]: picklist routing cost and the location-ordered first-fit split.
//! - [`solver`]: the distance greedy algorithm (DGA) and its randomized variant (RDGA).
//! - [`validate`]: an independent feasibility checker.
//! - [`exact`]: an exhaustive optimal solver for tiny instances.
//! - [`generator`]: seeded benchmark instance generation and order-pool trimming.
//! - [`bench`]: benchmark campaigns and the order-selection study.

pub mod bench;
pub mod error;
pub mod exact;
pub mod generator;
pub mod geometry;
pub mod model;
pub mod picklist;
pub mod solver;
pub mod validate;

pub use error::{Error, Result};
pub use model::{
    demand_profile, load_instance, save_instance, Article, ArticleId, Batch, Instance,
    InstanceViolation, ItemId, Location, Order, OrderId, Params, Picklist, Solution,
    WarehouseItem, ZoneId, ZoneSpec, FORMAT_VERSION,
};
pub use solver::{solve, Algorithm, SelectionState, SolverConfig};
pub use validate::{validate, ValidationReport, Violation};
