//! Experiment files: a TOML description of one run, validated into core
//! types at load time.
//!
//! ```toml
//! model = "production"            # or "baseline"; inferred when omitted
//!
//! [intersection]
//! speed_range_mph = [60.0, 65.0]
//! container_length_ft = 26.2467
//! containers_per_lane = 60
//! run_duration_s = 60.0
//!
//! [predictor]                     # optional, defaults k = 3, builtin table
//! k = 3
//! table = "builtin"               # or a path relative to this file
//!
//! [features]                      # optional, defaults fixed [1, 9, 0]
//! source = "random"               # "fixed" | "random" | "tables"
//! seed = 7
//!
//! [lanes.A1]
//! pattern = "matched"             # "worst" | "recorded-random"
//! [lanes.A2]
//! pattern = { random = { p = 0.5, seed = 11 } }
//! [lanes.B1]
//! pattern = { arrivals = [1.0, 5.0, 9.0] }
//! speed_mph = 63.0                # optional, defaults to the band midpoint
//! ```
//!
//! `matched` aligns to each lane's own gate offset, so group B lanes request
//! on odd seconds under the standard timetable and every lane is wait-free.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use prodline_core::baseline::BaselineScenario;
use prodline_core::gate::{GateSchedule, GroupId, LaneId};
use prodline_core::patterns;
use prodline_core::schedule::{IntersectionConfig, VehicleRequest};
use prodline_core::turn::{FeatureVector, PredictorState};
use prodline_core::units::{Speed, SpeedRange};

use crate::error::CliError;
use crate::tables::{read_feature_rows, read_training_table};

/// Name of the environment variable that overrides `[output] dir`.
pub const OUT_DIR_ENV: &str = "PRODLINE_OUT_DIR";

// ---------------------------------------------------------------------------
// raw serde layer
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    model: Option<String>,
    intersection: Option<RawIntersection>,
    predictor: Option<RawPredictor>,
    features: Option<RawFeatures>,
    lanes: Option<BTreeMap<String, RawLane>>,
    corridor: Option<RawCorridor>,
    baseline: Option<RawBaseline>,
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIntersection {
    speed_range_mph: [f64; 2],
    container_length_ft: f64,
    containers_per_lane: u32,
    run_duration_s: f64,
    gates: Option<RawGates>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGates {
    cycle_period_s: f64,
    open_duration_s: f64,
    group_a_open_s: f64,
    group_b_open_s: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPredictor {
    k: usize,
    table: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFeatures {
    source: String,
    value: Option<[u8; 3]>,
    seed: Option<u64>,
    group_a: Option<PathBuf>,
    group_b: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLane {
    pattern: RawPattern,
    speed_mph: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawPattern {
    Named(String),
    Random { random: RawRandom },
    Explicit { arrivals: Vec<f64> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRandom {
    p: f64,
    seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorridor {
    zone_length_ft: f64,
    downstream_speed_range_mph: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBaseline {
    vehicle_count: usize,
    #[serde(default = "default_capacity")]
    capacity_per_side: usize,
    #[serde(default = "default_baseline_speed")]
    speed_mph: f64,
    #[serde(default = "default_runs")]
    runs: u32,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_epsilon")]
    epsilon_s: f64,
    #[serde(default = "default_container")]
    container_length_ft: f64,
    #[serde(default = "default_stop_penalty")]
    stop_penalty_s: f64,
}

fn default_capacity() -> usize {
    722
}
fn default_baseline_speed() -> f64 {
    100.0
}
fn default_runs() -> u32 {
    100
}
fn default_epsilon() -> f64 {
    0.5
}
fn default_container() -> f64 {
    26.2467
}
fn default_stop_penalty() -> f64 {
    prodline_core::baseline::DEFAULT_STOP_PENALTY_S
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: PathBuf,
}

// ---------------------------------------------------------------------------
// validated model
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Production,
    Baseline,
}

#[derive(Debug, Clone)]
pub enum PatternPlan {
    Matched,
    Worst,
    RecordedRandom,
    Random { p: f64, seed: u64 },
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct LanePlan {
    pub pattern: PatternPlan,
    pub speed: Speed,
}

#[derive(Debug, Clone)]
pub enum FeaturePlan {
    Fixed(FeatureVector),
    Random {
        seed: u64,
    },
    Tables {
        group_a: Vec<FeatureVector>,
        group_b: Vec<FeatureVector>,
    },
}

#[derive(Debug, Clone)]
pub struct CorridorPlan {
    pub zone_length_ft: f64,
    pub downstream_range: SpeedRange,
}

#[derive(Debug, Clone)]
pub struct ProductionSpec {
    pub config: IntersectionConfig,
    pub predictor: PredictorState,
    pub lanes: BTreeMap<LaneId, LanePlan>,
    pub features: FeaturePlan,
    pub corridor: Option<CorridorPlan>,
}

#[derive(Debug, Clone)]
pub struct BaselineSpec {
    pub scenario: BaselineScenario,
    pub runs: u32,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub model: ModelKind,
    pub production: Option<ProductionSpec>,
    pub baseline: Option<BaselineSpec>,
    pub output_dir: PathBuf,
}

impl ExperimentSpec {
    pub fn production(&self) -> Result<&ProductionSpec, CliError> {
        self.production.as_ref().ok_or_else(|| {
            CliError::usage("this experiment defines no [lanes]/[intersection] sections")
        })
    }

    pub fn baseline(&self) -> Result<&BaselineSpec, CliError> {
        self.baseline
            .as_ref()
            .ok_or_else(|| CliError::usage("this experiment defines no [baseline] section"))
    }

    /// Output directory after applying the `PRODLINE_OUT_DIR` override.
    pub fn effective_output_dir(&self) -> PathBuf {
        match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => self.output_dir.clone(),
        }
    }
}

fn field<T>(result: Result<T, impl std::fmt::Display>, name: &str) -> Result<T, CliError> {
    result.map_err(|e| CliError::config(format!("{name}: {e}")))
}

/// Load and validate an experiment file. Every invariant is enforced here;
/// error messages name the offending field.
pub fn load_spec(path: &Path) -> Result<ExperimentSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::runtime(format!("cannot read {}: {e}", path.display())))?;
    let raw: RawSpec =
        toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let base_dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();

    let model = match raw.model.as_deref() {
        Some("production") => ModelKind::Production,
        Some("baseline") => ModelKind::Baseline,
        Some(other) => {
            return Err(CliError::config(format!(
                "model: expected \"production\" or \"baseline\", got {other:?}"
            )))
        }
        None if raw.lanes.is_none() && raw.baseline.is_some() => ModelKind::Baseline,
        None => ModelKind::Production,
    };

    let production = match (&raw.intersection, &raw.lanes) {
        (Some(intersection), Some(lanes)) => Some(validate_production(
            intersection,
            lanes,
            raw.predictor.as_ref(),
            raw.features.as_ref(),
            raw.corridor.as_ref(),
            &base_dir,
        )?),
        (None, None) => None,
        (Some(_), None) => {
            return Err(CliError::config(
                "lanes: an [intersection] needs at least one [lanes.*] section".to_string(),
            ))
        }
        (None, Some(_)) => {
            return Err(CliError::config(
                "intersection: [lanes.*] sections need an [intersection] section".to_string(),
            ))
        }
    };

    let baseline = raw.baseline.as_ref().map(validate_baseline).transpose()?;

    if model == ModelKind::Production && production.is_none() {
        return Err(CliError::config(
            "model: a production experiment needs [intersection] and [lanes.*]".to_string(),
        ));
    }
    if model == ModelKind::Baseline && baseline.is_none() {
        return Err(CliError::config(
            "model: a baseline experiment needs a [baseline] section".to_string(),
        ));
    }

    Ok(ExperimentSpec {
        model,
        production,
        baseline,
        output_dir: raw
            .output
            .map(|o| o.dir)
            .unwrap_or_else(|| PathBuf::from("out")),
    })
}

fn validate_production(
    raw: &RawIntersection,
    raw_lanes: &BTreeMap<String, RawLane>,
    raw_predictor: Option<&RawPredictor>,
    raw_features: Option<&RawFeatures>,
    raw_corridor: Option<&RawCorridor>,
    base_dir: &Path,
) -> Result<ProductionSpec, CliError> {
    let speed_range = field(
        SpeedRange::from_mph(raw.speed_range_mph[0], raw.speed_range_mph[1]),
        "intersection.speed_range_mph",
    )?;
    let gates = match &raw.gates {
        Some(g) => field(
            GateSchedule::new(
                g.cycle_period_s,
                g.open_duration_s,
                g.group_a_open_s,
                g.group_b_open_s,
            ),
            "intersection.gates",
        )?,
        None => GateSchedule::alternating(),
    };
    let config = field(
        IntersectionConfig::new(
            speed_range,
            raw.container_length_ft,
            raw.containers_per_lane,
            raw.run_duration_s,
            gates,
            LaneId::ALL.to_vec(),
        ),
        "intersection",
    )?;

    let mut lanes = BTreeMap::new();
    for (name, raw_lane) in raw_lanes {
        let lane: LaneId = name
            .parse()
            .map_err(|e| CliError::config(format!("lanes.{name}: {e}")))?;
        let speed = match raw_lane.speed_mph {
            Some(mph) => field(Speed::mph(mph), &format!("lanes.{name}.speed_mph"))?,
            None => config.speed_range().average(),
        };
        let pattern = validate_pattern(&raw_lane.pattern, &config, name)?;
        lanes.insert(lane, LanePlan { pattern, speed });
    }

    let predictor = match raw_predictor {
        Some(p) => {
            let table = match p.table.as_deref() {
                None | Some("builtin") => prodline_core::turn::default_training_table(),
                Some(path) => read_training_table(&base_dir.join(path))?,
            };
            field(PredictorState::new(table, p.k), "predictor.k")?
        }
        None => field(PredictorState::with_default_table(3), "predictor.k")?,
    };

    let features = match raw_features {
        None => FeaturePlan::Fixed(FeatureVector::new(1, 9, 0).expect("static default")),
        Some(f) => match f.source.as_str() {
            "fixed" => {
                let value = f.value.ok_or_else(|| {
                    CliError::config("features.value: required when source = \"fixed\"")
                })?;
                FeaturePlan::Fixed(field(
                    FeatureVector::new(value[0], value[1], value[2]),
                    "features.value",
                )?)
            }
            "random" => FeaturePlan::Random {
                seed: f.seed.unwrap_or(0),
            },
            "tables" => {
                let a = f.group_a.as_ref().ok_or_else(|| {
                    CliError::config("features.group_a: required when source = \"tables\"")
                })?;
                let b = f.group_b.as_ref().ok_or_else(|| {
                    CliError::config("features.group_b: required when source = \"tables\"")
                })?;
                FeaturePlan::Tables {
                    group_a: read_feature_rows(&base_dir.join(a))?,
                    group_b: read_feature_rows(&base_dir.join(b))?,
                }
            }
            other => {
                return Err(CliError::config(format!(
                    "features.source: expected \"fixed\", \"random\" or \"tables\", got {other:?}"
                )))
            }
        },
    };

    let corridor = raw_corridor
        .map(|c| -> Result<CorridorPlan, CliError> {
            if !c.zone_length_ft.is_finite() || c.zone_length_ft < 0.0 {
                return Err(CliError::config(format!(
                    "corridor.zone_length_ft: must be finite and non-negative, got {}",
                    c.zone_length_ft
                )));
            }
            Ok(CorridorPlan {
                zone_length_ft: c.zone_length_ft,
                downstream_range: field(
                    SpeedRange::from_mph(
                        c.downstream_speed_range_mph[0],
                        c.downstream_speed_range_mph[1],
                    ),
                    "corridor.downstream_speed_range_mph",
                )?,
            })
        })
        .transpose()?;

    Ok(ProductionSpec {
        config,
        predictor,
        lanes,
        features,
        corridor,
    })
}

fn validate_pattern(
    raw: &RawPattern,
    config: &IntersectionConfig,
    lane_name: &str,
) -> Result<PatternPlan, CliError> {
    match raw {
        RawPattern::Named(name) => match name.as_str() {
            "matched" => Ok(PatternPlan::Matched),
            "worst" => Ok(PatternPlan::Worst),
            "recorded-random" => Ok(PatternPlan::RecordedRandom),
            other => Err(CliError::config(format!(
                "lanes.{lane_name}.pattern: unknown pattern {other:?}, expected \"matched\", \
                 \"worst\", \"recorded-random\", {{ random = {{ p, seed }} }} or \
                 {{ arrivals = [...] }}"
            ))),
        },
        RawPattern::Random { random } => {
            if !random.p.is_finite() || !(0.0..=1.0).contains(&random.p) {
                return Err(CliError::config(format!(
                    "lanes.{lane_name}.pattern.random.p: must lie in [0, 1], got {}",
                    random.p
                )));
            }
            Ok(PatternPlan::Random {
                p: random.p,
                seed: random.seed,
            })
        }
        RawPattern::Explicit { arrivals } => {
            for &t in arrivals {
                if !t.is_finite() || t < 0.0 || t > config.run_duration_s() {
                    return Err(CliError::config(format!(
                        "lanes.{lane_name}.pattern.arrivals: {t} lies outside [0, {}]",
                        config.run_duration_s()
                    )));
                }
            }
            let mut sorted = arrivals.clone();
            sorted.sort_by(f64::total_cmp);
            Ok(PatternPlan::Explicit(sorted))
        }
    }
}

fn validate_baseline(raw: &RawBaseline) -> Result<BaselineSpec, CliError> {
    let speed = field(Speed::mph(raw.speed_mph), "baseline.speed_mph")?;
    if speed.as_fps() <= 0.0 {
        return Err(CliError::config(
            "baseline.speed_mph: must be strictly positive".to_string(),
        ));
    }
    if raw.runs == 0 {
        return Err(CliError::config(
            "baseline.runs: must be at least 1".to_string(),
        ));
    }
    if !raw.epsilon_s.is_finite() || raw.epsilon_s < 0.0 {
        return Err(CliError::config(format!(
            "baseline.epsilon_s: must be finite and non-negative, got {}",
            raw.epsilon_s
        )));
    }
    if !raw.container_length_ft.is_finite() || raw.container_length_ft <= 0.0 {
        return Err(CliError::config(format!(
            "baseline.container_length_ft: must be positive, got {}",
            raw.container_length_ft
        )));
    }
    if !raw.stop_penalty_s.is_finite() || raw.stop_penalty_s < 0.0 {
        return Err(CliError::config(format!(
            "baseline.stop_penalty_s: must be finite and non-negative, got {}",
            raw.stop_penalty_s
        )));
    }
    let scenario = BaselineScenario {
        vehicle_count: raw.vehicle_count,
        capacity_per_side: raw.capacity_per_side,
        speed,
        epsilon_s: raw.epsilon_s,
        container_length_ft: raw.container_length_ft,
        stop_penalty_s: raw.stop_penalty_s,
    };
    if scenario.vehicle_count > 2 * scenario.capacity_per_side {
        return Err(CliError::config(format!(
            "baseline.vehicle_count: {} exceeds 2 x capacity_per_side = {}",
            scenario.vehicle_count,
            2 * scenario.capacity_per_side
        )));
    }
    Ok(BaselineSpec {
        scenario,
        runs: raw.runs,
        seed: raw.seed,
    })
}

// ---------------------------------------------------------------------------
// request building
// ---------------------------------------------------------------------------

/// Vehicle ids follow the lane: A1 gets 100 + i, A2 200 + i, and so on.
fn vehicle_id(lane: LaneId, index: usize) -> u64 {
    (lane.index() as u64 + 1) * 100 + index as u64
}

fn lane_arrivals(
    plan: &PatternPlan,
    config: &IntersectionConfig,
    lane: LaneId,
) -> Result<Vec<f64>, CliError> {
    let length = config.run_duration_s().floor() as usize;
    Ok(match plan {
        PatternPlan::Matched => {
            let offset = config.gates().offset_s(lane.group());
            if offset.fract() != 0.0 {
                return Err(CliError::config(format!(
                    "lanes.{lane}.pattern: \"matched\" needs whole-second gate offsets, got {offset}"
                )));
            }
            patterns::matched_offset(length, offset as usize).arrivals()
        }
        PatternPlan::Worst => patterns::worst(length).arrivals(),
        PatternPlan::RecordedRandom => patterns::recorded_random().arrivals(),
        PatternPlan::Random { p, seed } => patterns::random(length, *p, *seed)
            .map_err(|e| CliError::config(format!("lanes.{lane}.pattern: {e}")))?
            .arrivals(),
        PatternPlan::Explicit(arrivals) => arrivals.clone(),
    })
}

fn feature_sequence(
    plan: &FeaturePlan,
    lane: LaneId,
    count: usize,
) -> Result<Vec<FeatureVector>, CliError> {
    match plan {
        FeaturePlan::Fixed(f) => Ok(vec![*f; count]),
        FeaturePlan::Random { seed } => {
            // both lanes of a group share one stream: the features describe
            // the environment, so paired lanes see the same sequence
            let group_salt = (lane.group().index() as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ group_salt);
            Ok((0..count)
                .map(|_| {
                    FeatureVector::new(
                        rng.random_range(1..=5),
                        rng.random_range(0..=23),
                        rng.random_range(0..=1),
                    )
                    .expect("sampled in range")
                })
                .collect())
        }
        FeaturePlan::Tables { group_a, group_b } => {
            let rows = match lane.group() {
                GroupId::A => group_a,
                GroupId::B => group_b,
            };
            if rows.len() < count {
                return Err(CliError::config(format!(
                    "features tables: lane {lane} needs {count} rows, table has {}",
                    rows.len()
                )));
            }
            Ok(rows[..count].to_vec())
        }
    }
}

/// Expand every lane plan into concrete [`VehicleRequest`]s.
pub fn build_requests(spec: &ProductionSpec) -> Result<Vec<VehicleRequest>, CliError> {
    let mut requests = Vec::new();
    for (&lane, plan) in &spec.lanes {
        let arrivals = lane_arrivals(&plan.pattern, &spec.config, lane)?;
        let features = feature_sequence(&spec.features, lane, arrivals.len())?;
        for (i, (&arrival, feature)) in arrivals.iter().zip(&features).enumerate() {
            let request =
                VehicleRequest::new(vehicle_id(lane, i), lane, arrival, plan.speed, *feature)
                    .map_err(|e| CliError::config(format!("lanes.{lane}: {e}")))?;
            requests.push(request);
        }
    }
    Ok(requests)
}
