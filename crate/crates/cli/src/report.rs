//! Deterministic report rendering: fixed six-decimal floats, stable column
//! order, byte-identical output for identical inputs.

use prodline_core::baseline::BaselineMetrics;
use prodline_core::schedule::{ScheduleResult, SlotAssignment};

/// Schema of the per-vehicle report.
pub const REPORT_HEADER: &str = "vehicle_id,lane,arrival_s,slot_s,wait_s,right_turn,exit_s";

pub fn report_csv(assignments: &[SlotAssignment]) -> String {
    let mut out = String::with_capacity(64 * (assignments.len() + 1));
    out.push_str(REPORT_HEADER);
    out.push('\n');
    for a in assignments {
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{:.6},{},{:.6}\n",
            a.vehicle_id,
            a.lane,
            a.arrival_time_s,
            a.slot_time_s,
            a.wait_s,
            a.right_turn.symbol(),
            a.exit_time_s
        ));
    }
    out
}

pub fn summary_text(result: &ScheduleResult, conflicts: usize, prefix: &str) -> String {
    format!(
        "{prefix}vehicles_admitted: {}\n\
         {prefix}vehicles_rejected: {}\n\
         {prefix}avg_wait_s: {:.6}\n\
         {prefix}max_wait_s: {:.6}\n\
         {prefix}extra_space_pct: {:.6}\n\
         {prefix}conflicts: {}\n",
        result.assignments.len(),
        result.rejected.len(),
        result.avg_wait_s,
        result.max_wait_s,
        result.extra_space_pct,
        conflicts
    )
}

pub fn baseline_summary(metrics: &BaselineMetrics, runs: u32, seed: u64) -> String {
    format!(
        "model: baseline\n\
         vehicles: {}\n\
         runs: {}\n\
         seed: {}\n\
         expected_collisions_per_vehicle: {:.6}\n\
         avg_wait_s: {:.6}\n",
        metrics.vehicles, runs, seed, metrics.expected_collisions_per_vehicle, metrics.avg_wait_s
    )
}

/// One column of the side-by-side comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonColumn {
    pub model: &'static str,
    pub vehicles: usize,
    pub avg_wait_s: f64,
    pub max_wait_s: f64,
    pub extra_space_pct: f64,
    pub collisions_per_vehicle: f64,
}

pub fn comparison_csv(a: &ComparisonColumn, b: &ComparisonColumn) -> String {
    format!(
        "metric,spec_a,spec_b\n\
         model,{},{}\n\
         vehicles,{},{}\n\
         avg_wait_s,{:.6},{:.6}\n\
         max_wait_s,{:.6},{:.6}\n\
         extra_space_pct,{:.6},{:.6}\n\
         collisions_per_vehicle,{:.6},{:.6}\n",
        a.model,
        b.model,
        a.vehicles,
        b.vehicles,
        a.avg_wait_s,
        b.avg_wait_s,
        a.max_wait_s,
        b.max_wait_s,
        a.extra_space_pct,
        b.extra_space_pct,
        a.collisions_per_vehicle,
        b.collisions_per_vehicle
    )
}
