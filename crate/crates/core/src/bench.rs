//! Benchmark campaigns: solver comparison and the order-selection study.
//!
//! Solver runs that produce timing columns execute one at a time on the
//! calling thread. Validation of finished solutions is the only work spread
//! over the worker pool. Every recorded row belongs to a validated solution.

use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::trim_order_pool;
use crate::model::{Instance, Solution};
use crate::solver::{solve, SolverConfig};
use crate::validate::validate;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub algorithm: String,
    pub seed: u64,
    pub runtime_s: f64,
    pub objective: f64,
    pub selected_items: usize,
    pub picklists: usize,
    pub batches: usize,
    pub pcpi: f64,
    pub goal_met: bool,
    pub os: String,
    pub arch: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionRow {
    pub instance: String,
    pub pcpi_modified: f64,
    pub pcpi_original: f64,
    pub difference_pct: f64,
}

fn ensure_feasible(instance: &Instance, solution: &Solution) -> Result<()> {
    let report = validate(instance, solution);
    if report.feasible {
        return Ok(());
    }
    let detail = report
        .violations
        .iter()
        .map(|v| format!("({}) batch {}: {}", v.constraint, v.batch, v.detail))
        .collect::<Vec<_>>()
        .join("; ");
    Err(Error::Infeasible {
        instance: instance.name().to_owned(),
        algorithm: solution.algorithm.clone(),
        detail,
    })
}

fn timed_solve(instance: &Instance, config: &SolverConfig) -> Result<(Solution, f64)> {
    let start = Instant::now();
    let solution = solve(instance, config)?;
    Ok((solution, start.elapsed().as_secs_f64()))
}

/// One row per (instance, config), instance-major. `jobs` bounds the
/// validation thread pool.
pub fn run_benchmark(instances: &[Instance], configs: &[SolverConfig], jobs: usize) -> Result<Vec<BenchRow>> {
    let mut runs = Vec::with_capacity(instances.len() * configs.len());
    for instance in instances {
        for config in configs {
            let (solution, runtime) = timed_solve(instance, config)?;
            runs.push((instance, solution, runtime));
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Invariant(format!("validation pool: {e}")))?;
    pool.install(|| {
        runs.par_iter()
            .map(|(instance, solution, _)| ensure_feasible(instance, solution))
            .collect::<Result<Vec<()>>>()
    })?;

    Ok(runs
        .into_iter()
        .map(|(instance, s, runtime_s)| BenchRow {
            instance: instance.name().to_owned(),
            algorithm: s.algorithm.clone(),
            seed: s.seed,
            runtime_s,
            objective: s.objective,
            selected_items: s.selected_items,
            picklists: s.picklist_count(),
            batches: s.batches.len(),
            pcpi: s.pcpi,
            goal_met: s.goal_met,
            os: std::env::consts::OS.to_owned(),
            arch: std::env::consts::ARCH.to_owned(),
        })
        .collect())
}

/// DGA on the full pool versus DGA on `repeats` trimmed pools drawn with
/// seeds `seed, seed + 1, ...`. The difference is relative to the trimmed
/// mean, so a negative value means the full pool did better.
pub fn run_selection_study(instance: &Instance, repeats: usize, seed: u64) -> Result<SelectionRow> {
    let config = SolverConfig::dga();
    let original = solve(instance, &config)?;
    ensure_feasible(instance, &original)?;

    let mut total = 0.0;
    for r in 0..repeats.max(1) {
        let trimmed = trim_order_pool(instance, seed.wrapping_add(r as u64))?;
        let solution = solve(&trimmed, &config)?;
        ensure_feasible(&trimmed, &solution)?;
        total += solution.pcpi;
    }
    let pcpi_modified = total / repeats.max(1) as f64;
    Ok(SelectionRow {
        instance: instance.name().to_owned(),
        pcpi_modified,
        pcpi_original: original.pcpi,
        difference_pct: (original.pcpi - pcpi_modified) / pcpi_modified * 100.0,
    })
}

pub fn write_csv<T: Serialize>(rows: &[T], sink: impl Write) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Aligned text layout of a benchmark campaign.
pub fn format_bench_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<16} {:<6} {:>12} {:>12} {:>9} {:>9} {:>7} {:>7}",
        "Instance", "Algo", "Runtime(s)", "Objective", "Selected", "Picklists", "Batches", "pcpi"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<16} {:<6} {:>12.3} {:>12} {:>9} {:>9} {:>7} {:>7.2}",
            r.instance, r.algorithm, r.runtime_s, r.objective, r.selected_items, r.picklists, r.batches, r.pcpi
        );
    }
    out
}

pub fn format_selection_table(rows: &[SelectionRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<16} {:>15} {:>15} {:>11}",
        "Instance", "pcpi modified", "pcpi original", "Difference"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<16} {:>15.2} {:>15.2} {:>10.0}%",
            r.instance, r.pcpi_modified, r.pcpi_original, r.difference_pct
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{generate, GenParams, Preset};

    fn tiny(seed: u64) -> Instance {
        generate(&GenParams {
            name: format!("tiny-{seed}"),
            items: 600,
            orders: 60,
            zones: 2,
            aisles: 20,
            racks: 20,
            articles: 30,
            orders_per_batch: 8,
            ..GenParams::preset(Preset::Small, seed)
        })
        .unwrap()
    }

    #[test]
    fn rows_follow_instance_then_config_order() {
        let instances = [tiny(1), tiny(2)];
        let configs = [SolverConfig::dga(), SolverConfig::rdga(9)];
        let rows = run_benchmark(&instances, &configs, 2).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.instance.as_str(), r.algorithm.as_str())).collect();
        assert_eq!(
            keys,
            vec![("tiny-1", "dga"), ("tiny-1", "rdga"), ("tiny-2", "dga"), ("tiny-2", "rdga")]
        );
        assert!(rows.iter().all(|r| r.goal_met));
    }

    #[test]
    fn csv_header_matches_schema() {
        let rows = run_benchmark(&[tiny(3)], &[SolverConfig::dga()], 1).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(
            "instance,algorithm,seed,runtime_s,objective,selected_items,picklists,batches,pcpi,goal_met,os,arch\n"
        ));
    }

    #[test]
    fn minimal_pool_has_no_selection_gain() {
        let inst = tiny(4);
        // Goal equal to the whole pool: trimming keeps every order.
        let exact = Instance::new(
            inst.name(),
            crate::model::Params {
                item_goal: inst.total_order_articles(),
                ..inst.params()
            },
            inst.zones().to_vec(),
            inst.articles().to_vec(),
            inst.items().to_vec(),
            inst.orders().to_vec(),
        )
        .unwrap();
        let row = run_selection_study(&exact, 3, 0).unwrap();
        assert!(row.difference_pct.abs() < 1e-9, "{row:?}");
    }
}
