//! Orchestration: expand an experiment into requests, run the matching
//! model, and emit reports.

use std::path::{Path, PathBuf};

use prodline_core::baseline::{resolve_crossing, simulate_baseline, BaselineMetrics};
use prodline_core::gate::GroupId;
use prodline_core::schedule::{
    corridor_handoff, occupancy_check, simulate_run, IntersectionConfig, ScheduleResult,
    VehicleRequest,
};
use prodline_core::units::CorridorLink;

use crate::error::CliError;
use crate::experiment::{build_requests, BaselineSpec, ExperimentSpec, ModelKind, ProductionSpec};
use crate::report::{baseline_summary, comparison_csv, report_csv, summary_text, ComparisonColumn};

/// Everything a production run produced.
pub struct ProductionOutput {
    pub result: ScheduleResult,
    pub conflicts: usize,
    pub downstream: Option<DownstreamOutput>,
    pub summary: String,
    pub written: Vec<PathBuf>,
}

pub struct DownstreamOutput {
    pub config: IntersectionConfig,
    pub result: ScheduleResult,
    pub conflicts: usize,
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, content)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

/// Run the slot intersection for a production experiment and write
/// `report.csv` and `summary.txt` (plus downstream variants when a corridor
/// is configured) into the output directory.
pub fn run_production(spec: &ExperimentSpec) -> Result<ProductionOutput, CliError> {
    if spec.model != ModelKind::Production {
        return Err(CliError::usage(
            "this experiment declares model = \"baseline\"; run it with the `baseline` subcommand",
        ));
    }
    let prod = spec.production()?;
    let requests = build_requests(prod)?;
    let result = simulate_run(&prod.config, &requests, &prod.predictor)
        .map_err(|e| CliError::runtime(e.to_string()))?;
    let conflicts = occupancy_check(&result, &prod.config).len();

    let downstream = match &prod.corridor {
        Some(plan) => Some(run_downstream(prod, plan, &result)?),
        None => None,
    };

    let mut summary = String::from("model: production\n");
    summary.push_str(&summary_text(&result, conflicts, ""));
    if let Some(down) = &downstream {
        summary.push_str(&summary_text(&down.result, down.conflicts, "downstream_"));
    }

    let dir = spec.effective_output_dir();
    let mut written = vec![
        write_file(&dir, "report.csv", &report_csv(&result.assignments))?,
        write_file(&dir, "summary.txt", &summary)?,
    ];
    if let Some(down) = &downstream {
        written.push(write_file(
            &dir,
            "report_downstream.csv",
            &report_csv(&down.result.assignments),
        )?);
    }

    Ok(ProductionOutput {
        result,
        conflicts,
        downstream,
        summary,
        written,
    })
}

/// Chain the upstream exits through the corridor into a second intersection
/// that shares everything but the speed band. The downstream run window is
/// stretched to cover the handed-off arrivals.
fn run_downstream(
    prod: &ProductionSpec,
    plan: &crate::experiment::CorridorPlan,
    upstream: &ScheduleResult,
) -> Result<DownstreamOutput, CliError> {
    let upstream_config = &prod.config;
    let link = CorridorLink::new(
        upstream_config.speed_range().average(),
        plan.downstream_range.average(),
        plan.zone_length_ft,
    )
    .map_err(|e| CliError::config(format!("corridor: {e}")))?;

    let provisional = IntersectionConfig::new(
        plan.downstream_range,
        upstream_config.container_length_ft(),
        upstream_config.containers_per_lane(),
        upstream_config.run_duration_s(),
        upstream_config.gates().clone(),
        upstream_config.lanes().to_vec(),
    )
    .map_err(|e| CliError::config(format!("corridor: {e}")))?;

    let mut requests: Vec<VehicleRequest> = Vec::with_capacity(upstream.assignments.len());
    for exit in &upstream.assignments {
        requests.push(
            corridor_handoff(&link, exit, &provisional)
                .map_err(|e| CliError::config(format!("corridor: {e}")))?,
        );
    }

    let horizon = requests
        .iter()
        .map(|r| r.arrival_time_s)
        .fold(provisional.run_duration_s(), f64::max)
        .ceil()
        + 1.0;
    let config = IntersectionConfig::new(
        plan.downstream_range,
        upstream_config.container_length_ft(),
        upstream_config.containers_per_lane(),
        horizon,
        upstream_config.gates().clone(),
        upstream_config.lanes().to_vec(),
    )
    .map_err(|e| CliError::config(format!("corridor: {e}")))?;

    let result = simulate_run(&config, &requests, &prod.predictor)
        .map_err(|e| CliError::runtime(e.to_string()))?;
    let conflicts = occupancy_check(&result, &config).len();
    Ok(DownstreamOutput {
        config,
        result,
        conflicts,
    })
}

/// Run the Monte-Carlo crossing experiment; optionally sweep extra vehicle
/// counts into `baseline_sweep.csv` for plotting.
pub fn run_baseline(
    spec: &ExperimentSpec,
    sweep: &[usize],
) -> Result<(BaselineMetrics, String, Vec<PathBuf>), CliError> {
    if spec.model != ModelKind::Baseline {
        return Err(CliError::usage(
            "this experiment declares model = \"production\"; run it with the `simulate` subcommand",
        ));
    }
    let base = spec.baseline()?;
    let metrics = simulate_baseline(&base.scenario, base.runs, base.seed)
        .map_err(|e| CliError::config(format!("baseline: {e}")))?;
    let summary = baseline_summary(&metrics, base.runs, base.seed);

    let mut written = Vec::new();
    if !sweep.is_empty() {
        let mut csv = String::from("vehicles,collisions_per_vehicle,avg_wait_s\n");
        for &count in sweep {
            let mut scenario = base.scenario.clone();
            scenario.vehicle_count = count;
            let m = simulate_baseline(&scenario, base.runs, base.seed)
                .map_err(|e| CliError::config(format!("baseline sweep at {count}: {e}")))?;
            csv.push_str(&format!(
                "{},{:.6},{:.6}\n",
                count, m.expected_collisions_per_vehicle, m.avg_wait_s
            ));
        }
        written.push(write_file(
            &spec.effective_output_dir(),
            "baseline_sweep.csv",
            &csv,
        )?);
    }
    Ok((metrics, summary, written))
}

/// Feed one production experiment's arrivals through the reservation model:
/// lanes map onto the two crossing directions by group, and the crossing is
/// resolved with the baseline's conflict window, headway and stop penalty.
pub fn baseline_on_requests(
    requests: &[VehicleRequest],
    epsilon_s: f64,
    container_length_ft: f64,
    speed_fps: f64,
    stop_penalty_s: f64,
) -> prodline_core::baseline::CrossingOutcome {
    let mut side_a: Vec<f64> = requests
        .iter()
        .filter(|r| r.lane.group() == GroupId::A)
        .map(|r| r.arrival_time_s)
        .collect();
    let mut side_b: Vec<f64> = requests
        .iter()
        .filter(|r| r.lane.group() == GroupId::B)
        .map(|r| r.arrival_time_s)
        .collect();
    side_a.sort_by(f64::total_cmp);
    side_b.sort_by(f64::total_cmp);
    resolve_crossing(
        &side_a,
        &side_b,
        epsilon_s,
        container_length_ft / speed_fps,
        stop_penalty_s,
    )
}

fn production_column(
    spec: &ProductionSpec,
    requests: &[VehicleRequest],
) -> Result<ComparisonColumn, CliError> {
    let result = simulate_run(&spec.config, requests, &spec.predictor)
        .map_err(|e| CliError::runtime(e.to_string()))?;
    let conflicts = occupancy_check(&result, &spec.config).len();
    let vehicles = result.assignments.len();
    Ok(ComparisonColumn {
        model: "production",
        vehicles,
        avg_wait_s: result.avg_wait_s,
        max_wait_s: result.max_wait_s,
        extra_space_pct: result.extra_space_pct,
        collisions_per_vehicle: if vehicles == 0 {
            0.0
        } else {
            conflicts as f64 / vehicles as f64
        },
    })
}

fn baseline_column(spec: &BaselineSpec, requests: &[VehicleRequest]) -> ComparisonColumn {
    let outcome = baseline_on_requests(
        requests,
        spec.scenario.epsilon_s,
        spec.scenario.container_length_ft,
        spec.scenario.speed.as_fps(),
        spec.scenario.stop_penalty_s,
    );
    ComparisonColumn {
        model: "baseline",
        vehicles: outcome.vehicles,
        avg_wait_s: outcome.avg_wait_s(),
        max_wait_s: outcome.max_wait_s,
        extra_space_pct: 0.0,
        collisions_per_vehicle: outcome.conflicts_per_vehicle(),
    }
}

/// Side-by-side summary of two experiments on identical arrivals.
///
/// Arrivals come from `spec_a`'s lane patterns; each spec is then evaluated
/// under its own model. Production configs must agree on the run duration.
pub fn run_compare(spec_a: &ExperimentSpec, spec_b: &ExperimentSpec) -> Result<String, CliError> {
    let prod_a = spec_a.production().map_err(|_| {
        CliError::usage(
            "compare: spec_a must define [intersection] and [lanes.*] to generate arrivals",
        )
    })?;
    if let Some(prod_b) = &spec_b.production {
        if (prod_b.config.run_duration_s() - prod_a.config.run_duration_s()).abs() > 1e-9 {
            return Err(CliError::config(format!(
                "compare: incompatible run durations ({} s vs {} s)",
                prod_a.config.run_duration_s(),
                prod_b.config.run_duration_s()
            )));
        }
    }
    let requests = build_requests(prod_a)?;

    let column_a = match spec_a.model {
        ModelKind::Production => production_column(prod_a, &requests)?,
        ModelKind::Baseline => baseline_column(spec_a.baseline()?, &requests),
    };
    let column_b = match spec_b.model {
        ModelKind::Production => production_column(spec_b.production()?, &requests)?,
        ModelKind::Baseline => baseline_column(spec_b.baseline()?, &requests),
    };
    Ok(comparison_csv(&column_a, &column_b))
}
