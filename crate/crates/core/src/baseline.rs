//! The reservation-style crossing model the slot intersection is compared
//! against: vehicles request passage, the manager accepts, adjusts a speed,
//! or stops them, and stopped vehicles delay their followers.
//!
//! A blocked vehicle comes to a full stop. Braking, standing and getting
//! back to speed are not modelled individually; their combined dead time is
//! the scenario's `stop_penalty_s`, paid on every blocking reservation the
//! vehicle encounters before it finally crosses.
//!
//! The Monte-Carlo simulation places vehicles randomly on two crossing
//! one-lane approaches and measures how conflict resolution degrades as
//! density grows. Every run derives its own ChaCha8 sub-seed from the
//! master seed, so results are bit-reproducible and runs stay independent.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::units::{Speed, SpeedRange};

/// Margin added past a blocking reservation when re-granting a crossing
/// time, so the freed slot clears the conflict window even when the stop
/// penalty is zero.
const CLEARANCE_S: f64 = 1e-3;

/// Default dead time of one full stop and restart.
pub const DEFAULT_STOP_PENALTY_S: f64 = 5.0;

#[derive(Debug, Error, PartialEq)]
pub enum BaselineError {
    #[error("conflict prediction requires a shared point, got {a} and {b}")]
    PointMismatch { a: PointId, b: PointId },
    #[error("distance_to_point_ft must be finite and non-negative, got {value}")]
    InvalidDistance { value: f64 },
    #[error("trajectory speed must be strictly positive, got {value} mph")]
    NonPositiveSpeed { value: f64 },
    #[error("epsilon_s must be finite and non-negative, got {value}")]
    InvalidEpsilon { value: f64 },
    #[error("vehicle_count {count} exceeds the crossing capacity of {max} (2 x {per_side})")]
    OverCapacity {
        count: usize,
        per_side: usize,
        max: usize,
    },
    #[error("runs must be at least 1")]
    NoRuns,
    #[error("container_length_ft must be positive and finite, got {value}")]
    InvalidContainerLength { value: f64 },
    #[error("stop_penalty_s must be finite and non-negative, got {value}")]
    InvalidStopPenalty { value: f64 },
}

/// Label of a conflict point inside the intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PointId(pub u32);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

/// A vehicle's approach to one conflict point: how far away it is, how fast
/// it is going, and which point it will occupy.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryQuery {
    pub vehicle_id: u64,
    distance_to_point_ft: f64,
    speed: Speed,
    pub point: PointId,
}

impl TrajectoryQuery {
    pub fn new(
        vehicle_id: u64,
        distance_to_point_ft: f64,
        speed: Speed,
        point: PointId,
    ) -> Result<Self, BaselineError> {
        if !distance_to_point_ft.is_finite() || distance_to_point_ft < 0.0 {
            return Err(BaselineError::InvalidDistance {
                value: distance_to_point_ft,
            });
        }
        if speed.as_fps() <= 0.0 {
            return Err(BaselineError::NonPositiveSpeed {
                value: speed.as_mph(),
            });
        }
        Ok(TrajectoryQuery {
            vehicle_id,
            distance_to_point_ft,
            speed,
            point,
        })
    }

    pub fn distance_to_point_ft(&self) -> f64 {
        self.distance_to_point_ft
    }

    pub fn speed(&self) -> Speed {
        self.speed
    }

    /// Seconds until this vehicle reaches its point at its current speed.
    pub fn time_to_point(&self) -> f64 {
        self.distance_to_point_ft / self.speed.as_fps()
    }
}

/// Two trajectories that occupy the same point at the same time.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedConflict {
    pub point: PointId,
    pub time_a_s: f64,
    pub time_b_s: f64,
}

/// Conflict iff both vehicles reach the shared point within `epsilon_s` of
/// each other. Requires the queries to reference the same point.
pub fn predict_conflict(
    a: &TrajectoryQuery,
    b: &TrajectoryQuery,
    epsilon_s: f64,
) -> Result<Option<PredictedConflict>, BaselineError> {
    if a.point != b.point {
        return Err(BaselineError::PointMismatch {
            a: a.point,
            b: b.point,
        });
    }
    if !epsilon_s.is_finite() || epsilon_s < 0.0 {
        return Err(BaselineError::InvalidEpsilon { value: epsilon_s });
    }
    let time_a_s = a.time_to_point();
    let time_b_s = b.time_to_point();
    Ok(if (time_a_s - time_b_s).abs() <= epsilon_s {
        Some(PredictedConflict {
            point: a.point,
            time_a_s,
            time_b_s,
        })
    } else {
        None
    })
}

/// An accepted crossing: the vehicle will occupy `point` at `time_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reservation {
    pub vehicle_id: u64,
    pub point: PointId,
    pub time_s: f64,
}

/// The manager's answer to a crossing request.
#[derive(Debug, Clone, PartialEq)]
pub enum ReservationDecision {
    Accept,
    /// The nearest in-band speed that clears every reservation.
    AdjustSpeed(Speed),
    Stop,
}

/// Decide one request against the existing reservations.
///
/// Accept if the request conflicts with nothing. Otherwise search a 1 mph
/// grid anchored at the current speed, nearest candidates first with
/// deceleration preferred at equal distance, for a speed inside `bounds`
/// whose arrival time clears every reservation at the same point. If no
/// such speed exists the vehicle is stopped.
pub fn decide(
    request: &TrajectoryQuery,
    reservations: &[Reservation],
    bounds: &SpeedRange,
    epsilon_s: f64,
) -> ReservationDecision {
    let conflicts_at = |t: f64| {
        reservations
            .iter()
            .any(|r| r.point == request.point && (r.time_s - t).abs() <= epsilon_s)
    };
    if !conflicts_at(request.time_to_point()) {
        return ReservationDecision::Accept;
    }
    let current_mph = request.speed.as_mph();
    let widest = (current_mph - bounds.min_mph())
        .abs()
        .max((bounds.max_mph() - current_mph).abs());
    let max_delta = widest.ceil() as i64 + 1;
    for delta in 1..=max_delta {
        for candidate_mph in [current_mph - delta as f64, current_mph + delta as f64] {
            if candidate_mph < bounds.min_mph() || candidate_mph > bounds.max_mph() {
                continue;
            }
            let candidate = Speed::mph(candidate_mph).expect("bounded candidate is valid");
            let t = request.distance_to_point_ft() / candidate.as_fps();
            if !conflicts_at(t) {
                return ReservationDecision::AdjustSpeed(candidate);
            }
        }
    }
    ReservationDecision::Stop
}

/// Aggregate of one deterministic crossing evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingOutcome {
    pub vehicles: usize,
    /// Total number of blocking reservations encountered.
    pub conflicts: u64,
    pub total_wait_s: f64,
    pub max_wait_s: f64,
}

impl CrossingOutcome {
    pub fn conflicts_per_vehicle(&self) -> f64 {
        if self.vehicles == 0 {
            0.0
        } else {
            self.conflicts as f64 / self.vehicles as f64
        }
    }

    pub fn avg_wait_s(&self) -> f64 {
        if self.vehicles == 0 {
            0.0
        } else {
            self.total_wait_s / self.vehicles as f64
        }
    }
}

/// Resolve two crossing streams of desired point-arrival times against one
/// shared conflict point.
///
/// Vehicles are processed in desired-time order (side A first on ties) and
/// obey two constraints:
///
/// - same side: a vehicle may not cross sooner than `headway_s` after its
///   predecessor (vehicles queue, they do not collide with each other);
/// - cross side: a reservation from the other direction blocks the window
///   `+-epsilon_s` around itself. A blocked vehicle stops, waits until the
///   blocking reservation clears, then pays `stop_penalty_s` to get moving
///   again, by which time a new reservation may block it once more.
///
/// Any vehicle held up at all has braked to a halt (there are no partial
/// slowdowns in this model), so a vehicle queued behind a stopped
/// predecessor pays the restart penalty as well. That is how one stop
/// propagates backwards through its followers.
///
/// A vehicle's conflict count is the number of cross-side reservations that
/// fell inside its risk window `[desired - epsilon, granted + epsilon]`:
/// every crossing it had to let pass is one collision its stop avoided.
/// Both input slices must be sorted.
pub fn resolve_crossing(
    side_a: &[f64],
    side_b: &[f64],
    epsilon_s: f64,
    headway_s: f64,
    stop_penalty_s: f64,
) -> CrossingOutcome {
    debug_assert!(side_a.windows(2).all(|w| w[0] <= w[1]));
    debug_assert!(side_b.windows(2).all(|w| w[0] <= w[1]));

    // two-pointer merge keeps processing order deterministic
    let mut merged = Vec::with_capacity(side_a.len() + side_b.len());
    let (mut i, mut j) = (0, 0);
    while i < side_a.len() || j < side_b.len() {
        let take_a = match (side_a.get(i), side_b.get(j)) {
            (Some(a), Some(b)) => a <= b,
            (Some(_), None) => true,
            _ => false,
        };
        if take_a {
            merged.push((0usize, side_a[i]));
            i += 1;
        } else {
            merged.push((1usize, side_b[j]));
            j += 1;
        }
    }

    let mut reserved: [Vec<f64>; 2] = [
        Vec::with_capacity(side_a.len()),
        Vec::with_capacity(side_b.len()),
    ];
    let mut last_granted: [Option<f64>; 2] = [None, None];
    let mut conflicts = 0u64;
    let mut total_wait_s = 0.0;
    let mut max_wait_s = 0.0f64;

    for (side, desired) in merged {
        let mut granted = match last_granted[side] {
            Some(prev) => desired.max(prev + headway_s),
            None => desired,
        };
        // braking behind the queue is already a stop needing a restart
        let mut pending_restart = granted > desired;
        let crossing = &reserved[1 - side];
        loop {
            let from = crossing.partition_point(|&r| r < granted - epsilon_s);
            match crossing.get(from) {
                Some(&r) if r <= granted + epsilon_s => {
                    // the hop past the blocker includes this stop's restart
                    granted = r + epsilon_s + CLEARANCE_S + stop_penalty_s;
                    pending_restart = false;
                }
                _ if pending_restart => {
                    granted += stop_penalty_s;
                    pending_restart = false;
                }
                _ => break,
            }
        }
        let window_from = crossing.partition_point(|&r| r < desired - epsilon_s);
        let window_to = crossing.partition_point(|&r| r <= granted + epsilon_s);
        conflicts += (window_to - window_from) as u64;

        total_wait_s += granted - desired;
        max_wait_s = max_wait_s.max(granted - desired);
        let own = &mut reserved[side];
        let at = own.partition_point(|&r| r < granted);
        own.insert(at, granted);
        last_granted[side] = Some(granted);
    }

    CrossingOutcome {
        vehicles: side_a.len() + side_b.len(),
        conflicts,
        total_wait_s,
        max_wait_s,
    }
}

/// Static description of the Monte-Carlo crossing experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineScenario {
    pub vehicle_count: usize,
    /// How many vehicles fit bumper-to-bumper on one approach.
    pub capacity_per_side: usize,
    pub speed: Speed,
    pub epsilon_s: f64,
    pub container_length_ft: f64,
    /// Dead time of one full stop and restart.
    pub stop_penalty_s: f64,
}

impl BaselineScenario {
    /// The standard crossing: 722 vehicles of capacity per side, everyone
    /// at 100 mph, a 0.5 s conflict window, 26.2467 ft headway, and a 5 s
    /// stop penalty.
    pub fn with_vehicle_count(vehicle_count: usize) -> Self {
        BaselineScenario {
            vehicle_count,
            capacity_per_side: 722,
            speed: Speed::mph(100.0).expect("static speed is valid"),
            epsilon_s: 0.5,
            container_length_ft: 26.2467,
            stop_penalty_s: DEFAULT_STOP_PENALTY_S,
        }
    }
}

/// Averaged outcome of the Monte-Carlo crossing runs.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineMetrics {
    pub vehicles: usize,
    pub expected_collisions_per_vehicle: f64,
    pub avg_wait_s: f64,
}

/// Monte-Carlo the crossing: `runs` independent placements of
/// `scenario.vehicle_count` vehicles split over the two approaches, each
/// resolved with [`resolve_crossing`]. Deterministic per `seed`.
pub fn simulate_baseline(
    scenario: &BaselineScenario,
    runs: u32,
    seed: u64,
) -> Result<BaselineMetrics, BaselineError> {
    if runs == 0 {
        return Err(BaselineError::NoRuns);
    }
    if scenario.vehicle_count > 2 * scenario.capacity_per_side {
        return Err(BaselineError::OverCapacity {
            count: scenario.vehicle_count,
            per_side: scenario.capacity_per_side,
            max: 2 * scenario.capacity_per_side,
        });
    }
    if !scenario.epsilon_s.is_finite() || scenario.epsilon_s < 0.0 {
        return Err(BaselineError::InvalidEpsilon {
            value: scenario.epsilon_s,
        });
    }
    if !scenario.container_length_ft.is_finite() || scenario.container_length_ft <= 0.0 {
        return Err(BaselineError::InvalidContainerLength {
            value: scenario.container_length_ft,
        });
    }
    if !scenario.stop_penalty_s.is_finite() || scenario.stop_penalty_s < 0.0 {
        return Err(BaselineError::InvalidStopPenalty {
            value: scenario.stop_penalty_s,
        });
    }
    let fps = scenario.speed.as_fps();
    if fps <= 0.0 {
        return Err(BaselineError::NonPositiveSpeed {
            value: scenario.speed.as_mph(),
        });
    }

    let approach_length = scenario.capacity_per_side as f64 * scenario.container_length_ft;
    let headway_s = scenario.container_length_ft / fps;
    let count_a = scenario.vehicle_count.div_ceil(2);
    let count_b = scenario.vehicle_count / 2;

    // pre-drawn sub-seeds keep runs independent and order-insensitive
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let sub_seeds: Vec<u64> = (0..runs).map(|_| master.random()).collect();

    let mut collisions_sum = 0.0;
    let mut wait_sum = 0.0;
    for sub_seed in sub_seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
        let times_a = sample_crossing_times(
            &mut rng,
            count_a,
            approach_length,
            scenario.container_length_ft,
            fps,
        );
        let times_b = sample_crossing_times(
            &mut rng,
            count_b,
            approach_length,
            scenario.container_length_ft,
            fps,
        );
        let outcome = resolve_crossing(
            &times_a,
            &times_b,
            scenario.epsilon_s,
            headway_s,
            scenario.stop_penalty_s,
        );
        collisions_sum += outcome.conflicts_per_vehicle();
        wait_sum += outcome.avg_wait_s();
    }

    Ok(BaselineMetrics {
        vehicles: scenario.vehicle_count,
        expected_collisions_per_vehicle: collisions_sum / runs as f64,
        avg_wait_s: wait_sum / runs as f64,
    })
}

/// Uniform positions on the approach with a minimum headway of one
/// container length, converted to point-arrival times (sorted).
fn sample_crossing_times(
    rng: &mut ChaCha8Rng,
    count: usize,
    approach_length_ft: f64,
    headway_ft: f64,
    fps: f64,
) -> Vec<f64> {
    if count == 0 {
        return Vec::new();
    }
    let usable = approach_length_ft - (count as f64 - 1.0) * headway_ft;
    debug_assert!(usable >= 0.0, "capacity check guarantees feasibility");
    let mut offsets: Vec<f64> = (0..count).map(|_| rng.random::<f64>() * usable).collect();
    offsets.sort_by(f64::total_cmp);
    offsets
        .iter()
        .enumerate()
        .map(|(i, &offset)| (offset + i as f64 * headway_ft) / fps)
        .collect()
}
