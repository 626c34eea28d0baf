use crate::model::{InstanceViolation, ItemId, ZoneId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("unsupported format_version {0:?} (this build reads major version 1)")]
    UnsupportedVersion(String),

    #[error("invalid instance ({} violation(s)): {}", .0.len(), join(.0))]
    InvalidInstance(Vec<InstanceViolation>),

    #[error("walking distance is undefined across zones ({0} vs {1})")]
    CrossZone(ZoneId, ZoneId),

    #[error("item {item} is not stored in zone {zone}")]
    ItemOutsideZone { item: ItemId, zone: ZoneId },

    #[error("unknown item id {0}")]
    UnknownItem(ItemId),

    #[error("empty picklist has no route")]
    EmptyPicklist,

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(
        "instance exceeds exact-solver limits: {order_articles} order articles (max {max_order_articles}), \
         {items} items (max {max_items})"
    )]
    LimitsExceeded {
        order_articles: usize,
        max_order_articles: usize,
        items: usize,
        max_items: usize,
    },

    #[error("cannot generate instance: {0}")]
    Generation(String),

    #[error("recorded objective {recorded} does not match recomputed {recomputed}")]
    ObjectiveMismatch { recorded: f64, recomputed: f64 },

    #[error("pcpi is undefined for a solution without selected items")]
    EmptySolution,

    #[error("solution of {algorithm} on {instance} is infeasible: {detail}")]
    Infeasible {
        instance: String,
        algorithm: String,
        detail: String,
    },
}

fn join(violations: &[InstanceViolation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
