//! Admission, FIFO slot assignment, run metrics, and corridor handoff for
//! the slot intersection.
//!
//! The intersection prepares one fixed-length container per lane per gate
//! opening. An arriving vehicle is admitted if its speed lies in the
//! configured band, snapped to the band midpoint, and queued into the first
//! free slot of its lane at or after its arrival. Demand beyond the run's
//! slot budget spills into later slots; the extra-space metric quantifies
//! that spill.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::gate::{GateSchedule, GroupId, LaneId};
use crate::turn::{FeatureVector, PredictorState, TurnClass, TurnError};
use crate::units::{CorridorLink, Speed, SpeedRange};

const TIME_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("container_length_ft must be positive and finite, got {value}")]
    InvalidContainerLength { value: f64 },
    #[error("containers_per_lane must be at least 1")]
    NoContainers,
    #[error("run_duration_s must be positive and finite, got {value}")]
    InvalidRunDuration { value: f64 },
    #[error("lanes must be non-empty and free of duplicates")]
    InvalidLanes,
    #[error("arrival_time_s must be non-negative and finite, got {value}")]
    InvalidArrivalTime { value: f64 },
}

#[derive(Debug, Error, PartialEq)]
pub enum SimulationError {
    #[error("vehicle {vehicle_id} arrives at {arrival_s} s, outside the {run_duration_s} s run")]
    ArrivalOutsideRun {
        vehicle_id: u64,
        arrival_s: f64,
        run_duration_s: f64,
    },
    #[error("vehicle {vehicle_id} is on lane {lane}, which this intersection does not serve")]
    UnknownLane { vehicle_id: u64, lane: LaneId },
    #[error(transparent)]
    Turn(#[from] TurnError),
}

#[derive(Debug, Error, PartialEq)]
pub enum HandoffError {
    #[error("a zero-length transition zone cannot bridge {exit_mph} mph to {target_mph} mph")]
    UnreachableTarget { exit_mph: f64, target_mph: f64 },
    #[error(
        "corridor target speed {target_mph} mph lies outside the downstream admission band {band}"
    )]
    TargetOutsideDownstreamBand { target_mph: f64, band: String },
}

/// Static description of one slot intersection.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionConfig {
    speed_range: SpeedRange,
    container_length_ft: f64,
    containers_per_lane: u32,
    run_duration_s: f64,
    gates: GateSchedule,
    lanes: Vec<LaneId>,
}

impl IntersectionConfig {
    pub fn new(
        speed_range: SpeedRange,
        container_length_ft: f64,
        containers_per_lane: u32,
        run_duration_s: f64,
        gates: GateSchedule,
        lanes: Vec<LaneId>,
    ) -> Result<Self, ConfigError> {
        if !container_length_ft.is_finite() || container_length_ft <= 0.0 {
            return Err(ConfigError::InvalidContainerLength {
                value: container_length_ft,
            });
        }
        if containers_per_lane == 0 {
            return Err(ConfigError::NoContainers);
        }
        if !run_duration_s.is_finite() || run_duration_s <= 0.0 {
            return Err(ConfigError::InvalidRunDuration {
                value: run_duration_s,
            });
        }
        let mut seen = [false; 4];
        for lane in &lanes {
            if std::mem::replace(&mut seen[lane.index()], true) {
                return Err(ConfigError::InvalidLanes);
            }
        }
        if lanes.is_empty() {
            return Err(ConfigError::InvalidLanes);
        }
        Ok(IntersectionConfig {
            speed_range,
            container_length_ft,
            containers_per_lane,
            run_duration_s,
            gates,
            lanes,
        })
    }

    pub fn speed_range(&self) -> &SpeedRange {
        &self.speed_range
    }

    pub fn container_length_ft(&self) -> f64 {
        self.container_length_ft
    }

    pub fn containers_per_lane(&self) -> u32 {
        self.containers_per_lane
    }

    pub fn run_duration_s(&self) -> f64 {
        self.run_duration_s
    }

    pub fn gates(&self) -> &GateSchedule {
        &self.gates
    }

    pub fn lanes(&self) -> &[LaneId] {
        &self.lanes
    }

    /// Total lane length: containers per lane times container length.
    pub fn lane_length_ft(&self) -> f64 {
        self.containers_per_lane as f64 * self.container_length_ft
    }

    /// Seconds an admitted vehicle spends crossing the lane at the band
    /// midpoint speed. Constant per configuration.
    pub fn traversal_time_s(&self) -> f64 {
        self.lane_length_ft() / self.speed_range.average().as_fps()
    }

    /// Slot budget of a lane group for the configured run.
    pub fn base_slots(&self, group: GroupId) -> u64 {
        self.gates.slots_before(group, self.run_duration_s)
    }
}

impl Default for IntersectionConfig {
    /// The standard four-lane setup: a 60-65 mph admission band, 26.2467 ft
    /// containers, 60 containers per lane, a one-minute run, and
    /// alternating one-second gates.
    fn default() -> Self {
        IntersectionConfig {
            speed_range: SpeedRange::from_mph(60.0, 65.0).expect("static band is valid"),
            container_length_ft: 26.2467,
            containers_per_lane: 60,
            run_duration_s: 60.0,
            gates: GateSchedule::alternating(),
            lanes: LaneId::ALL.to_vec(),
        }
    }
}

/// One arrival event at the intersection.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleRequest {
    pub vehicle_id: u64,
    pub lane: LaneId,
    pub arrival_time_s: f64,
    pub arrival_speed: Speed,
    pub features: FeatureVector,
}

impl VehicleRequest {
    pub fn new(
        vehicle_id: u64,
        lane: LaneId,
        arrival_time_s: f64,
        arrival_speed: Speed,
        features: FeatureVector,
    ) -> Result<Self, ConfigError> {
        if !arrival_time_s.is_finite() || arrival_time_s < 0.0 {
            return Err(ConfigError::InvalidArrivalTime {
                value: arrival_time_s,
            });
        }
        Ok(VehicleRequest {
            vehicle_id,
            lane,
            arrival_time_s,
            arrival_speed,
            features,
        })
    }
}

/// Why a request was turned away.
#[derive(Debug, Clone, PartialEq)]
pub enum RejectReason {
    SpeedOutOfRange {
        speed_mph: f64,
        min_mph: f64,
        max_mph: f64,
    },
}

/// Outcome of the admission check.
#[derive(Debug, Clone, PartialEq)]
pub enum Admission {
    /// The vehicle is snapped to the band midpoint on entry.
    Accepted {
        entry_speed: Speed,
    },
    Rejected {
        reason: RejectReason,
    },
}

/// Admit iff the arrival speed lies inside the band (inclusive); admitted
/// vehicles are assigned the band midpoint as their entry speed.
pub fn admit(request: &VehicleRequest, config: &IntersectionConfig) -> Admission {
    let range = config.speed_range();
    if range.contains(request.arrival_speed) {
        Admission::Accepted {
            entry_speed: range.average(),
        }
    } else {
        Admission::Rejected {
            reason: RejectReason::SpeedOutOfRange {
                speed_mph: request.arrival_speed.as_mph(),
                min_mph: range.min_mph(),
                max_mph: range.max_mph(),
            },
        }
    }
}

/// Greedy FIFO slot assignment for one lane.
///
/// Each arrival takes the first slot of the lane's group at or after both
/// its arrival time and every previously assigned slot. Returns one slot
/// start time per arrival.
///
/// # Panics
///
/// If `arrivals` is not sorted non-decreasing.
pub fn assign_slots(schedule: &GateSchedule, group: GroupId, arrivals: &[f64]) -> Vec<f64> {
    assert!(
        arrivals.windows(2).all(|w| w[0] <= w[1]),
        "arrivals must be sorted non-decreasing"
    );
    let mut next_index = 0u64;
    let mut slots = Vec::with_capacity(arrivals.len());
    for &arrival in arrivals {
        let index = next_index.max(schedule.slot_index_at_or_after(group, arrival));
        slots.push(schedule.slot_time(group, index));
        next_index = index + 1;
    }
    slots
}

/// Queue spill past the slot budget, as a percentage of that budget:
/// `0` when `n <= base_slots`, else `(n - base_slots) / base_slots * 100`.
pub fn extra_space_pct(n: u64, base_slots: u64) -> f64 {
    assert!(base_slots > 0, "base_slots must be positive");
    if n <= base_slots {
        0.0
    } else {
        (n - base_slots) as f64 / base_slots as f64 * 100.0
    }
}

/// When a vehicle granted `slot_time_s` leaves the far end of its lane.
pub fn exit_time(slot_time_s: f64, config: &IntersectionConfig) -> f64 {
    slot_time_s + config.traversal_time_s()
}

/// One admitted vehicle's slot grant.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotAssignment {
    pub vehicle_id: u64,
    pub lane: LaneId,
    pub arrival_time_s: f64,
    pub slot_time_s: f64,
    pub wait_s: f64,
    pub entry_speed: Speed,
    pub right_turn: TurnClass,
    pub exit_time_s: f64,
    pub features: FeatureVector,
}

/// A turned-away request and the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectedVehicle {
    pub request: VehicleRequest,
    pub reason: RejectReason,
}

/// Aggregate outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleResult {
    /// Sorted by slot time, then lane, then vehicle id.
    pub assignments: Vec<SlotAssignment>,
    pub avg_wait_s: f64,
    pub max_wait_s: f64,
    /// Worst per-lane spill past the run's slot budget.
    pub extra_space_pct: f64,
    pub rejected: Vec<RejectedVehicle>,
}

/// Run the whole intersection: per-lane admission, FIFO slot assignment,
/// right-turn prediction, exit times, and aggregated metrics.
///
/// Each lane replays its own copy of `predictor`, feeding predictions back
/// as it goes, so lanes with identical arrival features produce identical
/// turn sequences. Deterministic given identical inputs.
pub fn simulate_run(
    config: &IntersectionConfig,
    requests: &[VehicleRequest],
    predictor: &PredictorState,
) -> Result<ScheduleResult, SimulationError> {
    let mut by_lane: BTreeMap<LaneId, Vec<&VehicleRequest>> = BTreeMap::new();
    for request in requests {
        if !config.lanes().contains(&request.lane) {
            return Err(SimulationError::UnknownLane {
                vehicle_id: request.vehicle_id,
                lane: request.lane,
            });
        }
        if request.arrival_time_s < 0.0 || request.arrival_time_s > config.run_duration_s() {
            return Err(SimulationError::ArrivalOutsideRun {
                vehicle_id: request.vehicle_id,
                arrival_s: request.arrival_time_s,
                run_duration_s: config.run_duration_s(),
            });
        }
        by_lane.entry(request.lane).or_default().push(request);
    }

    let mut assignments = Vec::new();
    let mut rejected = Vec::new();
    let mut worst_extra = 0.0f64;

    for (&lane, lane_requests) in &mut by_lane {
        let mut admitted = Vec::with_capacity(lane_requests.len());
        for request in lane_requests.iter() {
            match admit(request, config) {
                Admission::Accepted { entry_speed } => admitted.push((*request, entry_speed)),
                Admission::Rejected { reason } => rejected.push(RejectedVehicle {
                    request: (*request).clone(),
                    reason,
                }),
            }
        }
        admitted.sort_by(|a, b| a.0.arrival_time_s.total_cmp(&b.0.arrival_time_s));

        let arrivals: Vec<f64> = admitted.iter().map(|(r, _)| r.arrival_time_s).collect();
        let slots = assign_slots(config.gates(), lane.group(), &arrivals);

        let queries: Vec<FeatureVector> = admitted.iter().map(|(r, _)| r.features).collect();
        let turns = predictor.clone().predict_sequence(&queries)?;

        for (((request, entry_speed), slot), turn) in admitted.iter().zip(&slots).zip(&turns) {
            assignments.push(SlotAssignment {
                vehicle_id: request.vehicle_id,
                lane,
                arrival_time_s: request.arrival_time_s,
                slot_time_s: *slot,
                wait_s: slot - request.arrival_time_s,
                entry_speed: *entry_speed,
                right_turn: *turn,
                exit_time_s: exit_time(*slot, config),
                features: request.features,
            });
        }

        worst_extra = worst_extra.max(extra_space_pct(
            admitted.len() as u64,
            config.base_slots(lane.group()),
        ));
    }

    let (avg_wait_s, max_wait_s) = if assignments.is_empty() {
        (0.0, 0.0)
    } else {
        let total: f64 = assignments.iter().map(|a| a.wait_s).sum();
        let max = assignments.iter().map(|a| a.wait_s).fold(0.0f64, f64::max);
        (total / assignments.len() as f64, max)
    };

    assignments.sort_by(|a, b| {
        a.slot_time_s
            .total_cmp(&b.slot_time_s)
            .then(a.lane.index().cmp(&b.lane.index()))
            .then(a.vehicle_id.cmp(&b.vehicle_id))
    });

    Ok(ScheduleResult {
        assignments,
        avg_wait_s,
        max_wait_s,
        extra_space_pct: if by_lane.is_empty() { 0.0 } else { worst_extra },
        rejected,
    })
}

/// A violation found by [`occupancy_check`].
#[derive(Debug, Clone, PartialEq)]
pub enum Conflict {
    /// Two vehicles in the same lane share a slot.
    DuplicateSlot { lane: LaneId, slot_time_s: f64 },
    /// A slot was granted while the lane's gate was closed.
    GateClosed { lane: LaneId, slot_time_s: f64 },
}

/// Audit a result for physical impossibilities: duplicated slots within a
/// lane and grants outside the lane group's open intervals.
///
/// Always empty for the output of [`simulate_run`]; a non-empty return
/// means the result was not produced by this scheduler.
pub fn occupancy_check(result: &ScheduleResult, config: &IntersectionConfig) -> Vec<Conflict> {
    let mut conflicts = Vec::new();
    let mut by_lane: BTreeMap<LaneId, Vec<f64>> = BTreeMap::new();
    for assignment in &result.assignments {
        if !config
            .gates()
            .is_open(assignment.lane.group(), assignment.slot_time_s)
        {
            conflicts.push(Conflict::GateClosed {
                lane: assignment.lane,
                slot_time_s: assignment.slot_time_s,
            });
        }
        by_lane
            .entry(assignment.lane)
            .or_default()
            .push(assignment.slot_time_s);
    }
    for (lane, mut slots) in by_lane {
        slots.sort_by(f64::total_cmp);
        for pair in slots.windows(2) {
            if (pair[1] - pair[0]).abs() <= TIME_TOL {
                conflicts.push(Conflict::DuplicateSlot {
                    lane,
                    slot_time_s: pair[0],
                });
            }
        }
    }
    conflicts
}

/// Carry one upstream exit across a corridor link, producing the arrival
/// request the downstream intersection sees.
///
/// The vehicle leaves the upstream lane at its exit time, crosses the
/// transition zone under the linear speed ramp, and arrives at the
/// downstream gate at the link's target speed.
pub fn corridor_handoff(
    link: &CorridorLink,
    exit: &SlotAssignment,
    downstream: &IntersectionConfig,
) -> Result<VehicleRequest, HandoffError> {
    let exit_mph = link.exit_speed().as_mph();
    let target_mph = link.target_speed().as_mph();
    if link.zone_length_ft() == 0.0 && (exit_mph - target_mph).abs() > 1e-6 {
        return Err(HandoffError::UnreachableTarget {
            exit_mph,
            target_mph,
        });
    }
    if !downstream.speed_range().contains(link.target_speed()) {
        return Err(HandoffError::TargetOutsideDownstreamBand {
            target_mph,
            band: downstream.speed_range().to_string(),
        });
    }
    Ok(VehicleRequest {
        vehicle_id: exit.vehicle_id,
        lane: exit.lane,
        arrival_time_s: exit.exit_time_s + link.traversal_time_s(),
        arrival_speed: link.target_speed().to_mph(),
        features: exit.features,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::Speed;
    use approx::assert_abs_diff_eq;

    fn fv() -> FeatureVector {
        FeatureVector::new(1, 9, 0).unwrap()
    }

    fn request(id: u64, lane: LaneId, arrival: f64, mph: f64) -> VehicleRequest {
        VehicleRequest::new(id, lane, arrival, Speed::mph(mph).unwrap(), fv()).unwrap()
    }

    fn predictor() -> PredictorState {
        PredictorState::with_default_table(3).unwrap()
    }

    #[test]
    fn config_invariants() {
        let band = SpeedRange::from_mph(60.0, 65.0).unwrap();
        assert_eq!(
            IntersectionConfig::new(
                band,
                0.0,
                60,
                60.0,
                GateSchedule::alternating(),
                LaneId::ALL.to_vec()
            ),
            Err(ConfigError::InvalidContainerLength { value: 0.0 })
        );
        assert_eq!(
            IntersectionConfig::new(
                band,
                26.2467,
                0,
                60.0,
                GateSchedule::alternating(),
                LaneId::ALL.to_vec()
            ),
            Err(ConfigError::NoContainers)
        );
        assert_eq!(
            IntersectionConfig::new(
                band,
                26.2467,
                60,
                0.0,
                GateSchedule::alternating(),
                LaneId::ALL.to_vec()
            ),
            Err(ConfigError::InvalidRunDuration { value: 0.0 })
        );
        assert_eq!(
            IntersectionConfig::new(
                band,
                26.2467,
                60,
                60.0,
                GateSchedule::alternating(),
                vec![LaneId::A1, LaneId::A1]
            ),
            Err(ConfigError::InvalidLanes)
        );
    }

    #[test]
    fn default_config_traversal_constant() {
        let config = IntersectionConfig::default();
        assert_abs_diff_eq!(config.lane_length_ft(), 1574.802, epsilon = 1e-9);
        assert_abs_diff_eq!(config.traversal_time_s(), 17.1797, epsilon = 1e-3);
        assert_eq!(config.base_slots(GroupId::A), 30);
        assert_eq!(config.base_slots(GroupId::B), 30);
    }

    #[test]
    fn admission_band_is_inclusive() {
        let config = IntersectionConfig::default();
        let accepted = admit(&request(1, LaneId::A1, 0.0, 61.0), &config);
        assert_eq!(
            accepted,
            Admission::Accepted {
                entry_speed: Speed::mph(62.5).unwrap()
            }
        );
        assert!(matches!(
            admit(&request(2, LaneId::A1, 0.0, 60.0), &config),
            Admission::Accepted { .. }
        ));
        assert!(matches!(
            admit(&request(3, LaneId::A1, 0.0, 65.0), &config),
            Admission::Accepted { .. }
        ));
        assert_eq!(
            admit(&request(4, LaneId::A1, 0.0, 59.0), &config),
            Admission::Rejected {
                reason: RejectReason::SpeedOutOfRange {
                    speed_mph: 59.0,
                    min_mph: 60.0,
                    max_mph: 65.0
                }
            }
        );
    }

    #[test]
    fn matched_arrivals_take_their_own_slots() {
        let gates = GateSchedule::alternating();
        let arrivals: Vec<f64> = (0..30).map(|i| (2 * i) as f64).collect();
        let slots = assign_slots(&gates, GroupId::A, &arrivals);
        assert_eq!(slots, arrivals);
    }

    #[test]
    fn worst_case_arrivals_spill_to_118() {
        let gates = GateSchedule::alternating();
        let arrivals: Vec<f64> = (0..60).map(|i| i as f64).collect();
        let slots = assign_slots(&gates, GroupId::A, &arrivals);
        let expected: Vec<f64> = (0..60).map(|i| (2 * i) as f64).collect();
        assert_eq!(slots, expected);
        assert_eq!(*slots.last().unwrap(), 118.0);
    }

    #[test]
    fn empty_arrivals_empty_slots() {
        let gates = GateSchedule::alternating();
        assert!(assign_slots(&gates, GroupId::A, &[]).is_empty());
    }

    #[test]
    fn extra_space_formula() {
        assert_eq!(extra_space_pct(60, 30), 100.0);
        assert_eq!(extra_space_pct(30, 30), 0.0);
        assert_eq!(extra_space_pct(45, 30), 50.0);
        assert_eq!(extra_space_pct(0, 30), 0.0);
    }

    #[test]
    fn exit_time_anchors() {
        let config = IntersectionConfig::default();
        assert_abs_diff_eq!(exit_time(0.0, &config), 17.1797, epsilon = 1e-3);
        assert_abs_diff_eq!(exit_time(9.0, &config), 26.1797, epsilon = 1e-3);
    }

    #[test]
    fn simulate_matched_pattern_is_wait_free() {
        let config = IntersectionConfig::default();
        let mut requests = Vec::new();
        for lane in LaneId::ALL {
            let offset = config.gates().offset_s(lane.group()) as u64;
            for i in 0..30u64 {
                requests.push(request(
                    (lane.index() as u64 + 1) * 100 + i,
                    lane,
                    (2 * i + offset) as f64,
                    62.0,
                ));
            }
        }
        let result = simulate_run(&config, &requests, &predictor()).unwrap();
        assert_eq!(result.assignments.len(), 120);
        assert_eq!(result.avg_wait_s, 0.0);
        assert_eq!(result.max_wait_s, 0.0);
        assert_eq!(result.extra_space_pct, 0.0);
        assert!(result.rejected.is_empty());
        assert!(occupancy_check(&result, &config).is_empty());
    }

    #[test]
    fn simulate_empty_run() {
        let config = IntersectionConfig::default();
        let result = simulate_run(&config, &[], &predictor()).unwrap();
        assert!(result.assignments.is_empty());
        assert_eq!(result.avg_wait_s, 0.0);
        assert_eq!(result.extra_space_pct, 0.0);
    }

    #[test]
    fn simulate_rejects_out_of_band_speeds_separately() {
        let config = IntersectionConfig::default();
        let requests = vec![
            request(1, LaneId::A1, 0.0, 62.0),
            request(2, LaneId::A1, 2.0, 59.0),
            request(3, LaneId::A1, 4.0, 66.0),
        ];
        let result = simulate_run(&config, &requests, &predictor()).unwrap();
        assert_eq!(result.assignments.len(), 1);
        assert_eq!(result.rejected.len(), 2);
        // rejected vehicles do not influence wait statistics
        assert_eq!(result.avg_wait_s, 0.0);
    }

    #[test]
    fn simulate_validates_arrival_window() {
        let config = IntersectionConfig::default();
        let late = request(9, LaneId::A1, 61.0, 62.0);
        assert_eq!(
            simulate_run(&config, &[late], &predictor()),
            Err(SimulationError::ArrivalOutsideRun {
                vehicle_id: 9,
                arrival_s: 61.0,
                run_duration_s: 60.0
            })
        );
    }

    #[test]
    fn simulate_validates_lanes() {
        let band = SpeedRange::from_mph(60.0, 65.0).unwrap();
        let config = IntersectionConfig::new(
            band,
            26.2467,
            60,
            60.0,
            GateSchedule::alternating(),
            vec![LaneId::A1, LaneId::A2],
        )
        .unwrap();
        let stray = request(5, LaneId::B1, 0.0, 62.0);
        assert_eq!(
            simulate_run(&config, &[stray], &predictor()),
            Err(SimulationError::UnknownLane {
                vehicle_id: 5,
                lane: LaneId::B1
            })
        );
    }

    #[test]
    fn occupancy_check_flags_constructed_violations() {
        let config = IntersectionConfig::default();
        let good = simulate_run(&config, &[request(1, LaneId::A1, 0.0, 62.0)], &predictor())
            .unwrap()
            .assignments
            .remove(0);

        let dup = SlotAssignment {
            vehicle_id: 2,
            slot_time_s: good.slot_time_s,
            ..good.clone()
        };
        let result = ScheduleResult {
            assignments: vec![good.clone(), dup],
            avg_wait_s: 0.0,
            max_wait_s: 0.0,
            extra_space_pct: 0.0,
            rejected: Vec::new(),
        };
        assert_eq!(
            occupancy_check(&result, &config),
            vec![Conflict::DuplicateSlot {
                lane: LaneId::A1,
                slot_time_s: good.slot_time_s
            }]
        );

        let closed = SlotAssignment {
            lane: LaneId::B1,
            slot_time_s: 0.0,
            ..good.clone()
        };
        let result = ScheduleResult {
            assignments: vec![closed],
            avg_wait_s: 0.0,
            max_wait_s: 0.0,
            extra_space_pct: 0.0,
            rejected: Vec::new(),
        };
        assert_eq!(
            occupancy_check(&result, &config),
            vec![Conflict::GateClosed {
                lane: LaneId::B1,
                slot_time_s: 0.0
            }]
        );
    }

    fn exit_assignment() -> SlotAssignment {
        let config = IntersectionConfig::default();
        simulate_run(&config, &[request(1, LaneId::A1, 0.0, 62.0)], &predictor())
            .unwrap()
            .assignments
            .remove(0)
    }

    #[test]
    fn identity_corridor_is_a_no_op() {
        let exit = exit_assignment();
        let downstream = IntersectionConfig::default();
        let avg = downstream.speed_range().average();
        let link = CorridorLink::new(avg, avg, 0.0).unwrap();
        let handed = corridor_handoff(&link, &exit, &downstream).unwrap();
        assert_eq!(handed.arrival_time_s, exit.exit_time_s);
        assert_eq!(handed.arrival_speed.as_mph(), 62.5);
        assert_eq!(handed.vehicle_id, exit.vehicle_id);
    }

    #[test]
    fn corridor_reaches_the_faster_band() {
        let exit = exit_assignment();
        let band = SpeedRange::from_mph(102.5, 107.5).unwrap();
        let downstream = IntersectionConfig::new(
            band,
            26.2467,
            60,
            60.0,
            GateSchedule::alternating(),
            LaneId::ALL.to_vec(),
        )
        .unwrap();
        let link = CorridorLink::new(
            Speed::mph(62.5).unwrap(),
            Speed::mph(105.0).unwrap(),
            1000.0,
        )
        .unwrap();
        let handed = corridor_handoff(&link, &exit, &downstream).unwrap();
        assert_eq!(handed.arrival_speed.as_mph(), 105.0);
        assert_abs_diff_eq!(
            handed.arrival_time_s,
            exit.exit_time_s + 8.322895081526752,
            epsilon = 1e-9
        );
    }

    #[test]
    fn zero_zone_with_differing_speeds_fails() {
        let exit = exit_assignment();
        let downstream = IntersectionConfig::default();
        let link =
            CorridorLink::new(Speed::mph(62.5).unwrap(), Speed::mph(105.0).unwrap(), 0.0).unwrap();
        assert!(matches!(
            corridor_handoff(&link, &exit, &downstream),
            Err(HandoffError::UnreachableTarget { .. })
        ));
    }

    #[test]
    fn corridor_target_must_sit_in_downstream_band() {
        let exit = exit_assignment();
        let downstream = IntersectionConfig::default(); // 60-65 band
        let link = CorridorLink::new(
            Speed::mph(62.5).unwrap(),
            Speed::mph(105.0).unwrap(),
            1000.0,
        )
        .unwrap();
        assert!(matches!(
            corridor_handoff(&link, &exit, &downstream),
            Err(HandoffError::TargetOutsideDownstreamBand { .. })
        ));
    }
}
