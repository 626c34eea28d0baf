//! Independent feasibility checker.
//!
//! Checks a [`Solution`] against an [`Instance`] without touching solver
//! code. Constraint numbers in the report:
//!
//! | no. | meaning |
//! |-----|---------|
//! | 0 | reference to an unknown order, item or zone |
//! | 1 | recorded objective, pcpi, item count or goal flag disagree with the batches |
//! | 2 | an order appears more than once |
//! | 3 | an item appears more than once, or a picklist is empty |
//! | 4 | a batch's order articles and picklist articles differ as multisets |
//! | 5 | a picklist holds items outside its zone |
//! | 6 | a picklist exceeds the picklist volume |
//! | 7 | a batch holds more than `Q` orders |
//! | 8 | fewer than `IG` items selected |
//!
//! Constraint 8 is downgraded to a warning when the goal flag is unset and
//! every order of the pool was batched: the greedy solvers stop legally when
//! the pool runs dry.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ArticleId, Instance, ItemId, Solution, ZoneId};
use crate::picklist::{picklist_cost, route_steps};

pub const REFERENCE: u8 = 0;
pub const RECORDED_FIELDS: u8 = 1;
pub const ORDER_DISJOINT: u8 = 2;
pub const ITEM_DISJOINT: u8 = 3;
pub const ARTICLE_MATCH: u8 = 4;
pub const SINGLE_ZONE: u8 = 5;
pub const PICKLIST_VOLUME: u8 = 6;
pub const ORDERS_PER_BATCH: u8 = 7;
pub const ITEM_GOAL: u8 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: u8,
    /// Batch index, or -1 for solution-wide findings.
    pub batch: i64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
    pub objective: f64,
    pub pcpi: f64,
    #[serde(default)]
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    /// Constraint numbers of all violations, deduplicated and sorted.
    pub fn violated_constraints(&self) -> Vec<u8> {
        self.violations
            .iter()
            .map(|v| v.constraint)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} objective={} pcpi={:.2}",
            if self.feasible { "feasible" } else { "INFEASIBLE" },
            self.objective,
            self.pcpi
        )?;
        for v in &self.violations {
            writeln!(f, "  error   ({}) batch {}: {}", v.constraint, v.batch, v.detail)?;
        }
        for v in &self.warnings {
            writeln!(f, "  warning ({}) batch {}: {}", v.constraint, v.batch, v.detail)?;
        }
        Ok(())
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

pub fn validate(instance: &Instance, solution: &Solution) -> ValidationReport {
    let mut violations = Vec::new();
    let mut warnings = Vec::new();
    let mut flag = |constraint: u8, batch: usize, detail: String| {
        violations.push(Violation {
            constraint,
            batch: batch as i64,
            detail,
        })
    };

    let n_orders = instance.orders().len();
    let n_items = instance.items().len();
    let n_zones = instance.zones().len();
    let mut order_home: Vec<Option<usize>> = vec![None; n_orders];
    let mut item_home: Vec<Option<(usize, usize)>> = vec![None; n_items];
    let mut selected = 0usize;
    let mut steps = 0u64;
    let mut cost_defined = true;

    for (b, batch) in solution.batches.iter().enumerate() {
        // Positive: demanded by orders but not picked; negative: picked surplus.
        let mut balance: BTreeMap<ArticleId, i64> = BTreeMap::new();

        let mut distinct = BTreeSet::new();
        for &o in &batch.orders {
            if o.index() >= n_orders {
                flag(REFERENCE, b, format!("unknown order {o}"));
                continue;
            }
            if !distinct.insert(o) {
                flag(ORDER_DISJOINT, b, format!("order {o} listed twice in the batch"));
                continue;
            }
            match order_home[o.index()] {
                Some(first) => flag(ORDER_DISJOINT, b, format!("order {o} already batched in batch {first}")),
                None => order_home[o.index()] = Some(b),
            }
            for &a in &instance.order(o).articles {
                *balance.entry(a).or_default() += 1;
            }
        }
        if distinct.len() > instance.orders_per_batch() {
            flag(
                ORDERS_PER_BATCH,
                b,
                format!("{} orders exceed the limit of {}", distinct.len(), instance.orders_per_batch()),
            );
        }

        for (k, p) in batch.picklists.iter().enumerate() {
            let zone_known = p.zone.index() < n_zones;
            if !zone_known {
                flag(REFERENCE, b, format!("picklist {k} names unknown zone {}", p.zone));
            }
            if p.items.is_empty() {
                flag(ITEM_DISJOINT, b, format!("picklist {k} is empty"));
            }
            let mut routable = zone_known && !p.items.is_empty();
            let mut volume = 0.0;
            let mut foreign: Vec<(ItemId, ZoneId)> = Vec::new();
            for &i in &p.items {
                if i.index() >= n_items {
                    flag(REFERENCE, b, format!("picklist {k} names unknown item {i}"));
                    routable = false;
                    continue;
                }
                match item_home[i.index()] {
                    Some((pb, pk)) => flag(
                        ITEM_DISJOINT,
                        b,
                        format!("item {i} in picklist {k} already picked in batch {pb} picklist {pk}"),
                    ),
                    None => {
                        item_home[i.index()] = Some((b, k));
                        selected += 1;
                    }
                }
                let item = instance.item(i);
                *balance.entry(item.article).or_default() -= 1;
                volume += instance.item_volume(i);
                if item.location.zone != p.zone {
                    foreign.push((i, item.location.zone));
                }
            }
            if !foreign.is_empty() {
                routable = false;
                let list: Vec<String> = foreign.iter().map(|(i, z)| format!("{i}@zone{z}")).collect();
                flag(
                    SINGLE_ZONE,
                    b,
                    format!("picklist {k} of zone {} holds {}", p.zone, list.join(", ")),
                );
            }
            if volume > instance.picklist_volume() {
                flag(
                    PICKLIST_VOLUME,
                    b,
                    format!("picklist {k} volume {volume} exceeds {}", instance.picklist_volume()),
                );
            }
            if routable {
                // Cannot fail: zone, ids and zone purity were checked above.
                steps += route_steps(instance, p.zone, &p.items).unwrap_or(0);
            } else {
                cost_defined = false;
            }
        }

        let mismatched: Vec<String> = balance
            .iter()
            .filter(|(_, &n)| n != 0)
            .map(|(a, &n)| {
                if n > 0 {
                    format!("article {a}: {n} ordered but not picked")
                } else {
                    format!("article {a}: {} picked but not ordered", -n)
                }
            })
            .collect();
        if !mismatched.is_empty() {
            flag(ARTICLE_MATCH, b, mismatched.join(", "));
        }
    }

    let objective = steps as f64;
    let pcpi = pcpi_of(objective, selected).unwrap_or(0.0);
    let reached = selected >= instance.item_goal();

    if !reached {
        let pool_exhausted = order_home.iter().all(Option::is_some);
        let entry = Violation {
            constraint: ITEM_GOAL,
            batch: -1,
            detail: format!("{selected} items selected, item goal is {}", instance.item_goal()),
        };
        if pool_exhausted && !solution.goal_met {
            warnings.push(Violation {
                detail: format!("{} (order pool exhausted)", entry.detail),
                ..entry
            });
        } else {
            violations.push(entry);
        }
    }

    let mut record = |detail: String| {
        violations.push(Violation {
            constraint: RECORDED_FIELDS,
            batch: -1,
            detail,
        })
    };
    if cost_defined && !close(solution.objective, objective) {
        record(format!("recorded objective {} but picklists cost {objective}", solution.objective));
    }
    if cost_defined && !close(solution.pcpi, pcpi) {
        record(format!("recorded pcpi {} but recomputed {pcpi}", solution.pcpi));
    }
    if solution.selected_items != selected {
        record(format!("recorded {} selected items but picklists hold {selected}", solution.selected_items));
    }
    if solution.goal_met != reached {
        record(format!("goal_met is {} but {selected} of {} items selected", solution.goal_met, instance.item_goal()));
    }

    ValidationReport {
        feasible: violations.is_empty(),
        violations,
        objective,
        pcpi,
        warnings,
    }
}

/// Recomputes the total picklist cost and checks it against the recorded
/// objective.
pub fn objective(instance: &Instance, solution: &Solution) -> Result<f64> {
    let mut total = 0.0;
    for p in solution.batches.iter().flat_map(|b| &b.picklists) {
        total += picklist_cost(instance, p)?;
    }
    if !close(total, solution.objective) {
        return Err(Error::ObjectiveMismatch {
            recorded: solution.objective,
            recomputed: total,
        });
    }
    Ok(total)
}

/// Picklist cost per selected item, from a recomputed objective.
pub fn pcpi(instance: &Instance, solution: &Solution) -> Result<f64> {
    let total = objective(instance, solution)?;
    let items: BTreeSet<ItemId> = solution
        .batches
        .iter()
        .flat_map(|b| &b.picklists)
        .flat_map(|p| p.items.iter().copied())
        .collect();
    pcpi_of(total, items.len()).ok_or(Error::EmptySolution)
}

pub fn pcpi_of(objective: f64, items: usize) -> Option<f64> {
    (items > 0).then(|| objective / items as f64)
}
