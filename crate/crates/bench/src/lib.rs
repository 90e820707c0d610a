//! Input builders shared by the benchmark targets.

use prodline_core::gate::LaneId;
use prodline_core::patterns;
use prodline_core::schedule::VehicleRequest;
use prodline_core::turn::{FeatureVector, PredictorState, TrainingInstance, TurnClass};
use prodline_core::units::Speed;

/// Requests for all four lanes from seeded Bernoulli flows.
pub fn four_lane_requests(seed: u64, p: f64) -> Vec<VehicleRequest> {
    let mut requests = Vec::new();
    for lane in LaneId::ALL {
        let pattern = patterns::random(60, p, seed * 4 + lane.index() as u64).unwrap();
        for (i, &arrival) in pattern.arrivals().iter().enumerate() {
            requests.push(
                VehicleRequest::new(
                    (lane.index() as u64 + 1) * 1000 + i as u64,
                    lane,
                    arrival,
                    Speed::mph(62.0).unwrap(),
                    FeatureVector::new(1 + (i % 5) as u8, (i % 24) as u8, (i % 2) as u8).unwrap(),
                )
                .unwrap(),
            );
        }
    }
    requests
}

/// Every point of the (day, hour, event) feature space.
pub fn feature_grid() -> Vec<FeatureVector> {
    let mut grid = Vec::with_capacity(240);
    for day in 1..=5 {
        for hour in 0..=23 {
            for event in 0..=1 {
                grid.push(FeatureVector::new(day, hour, event).unwrap());
            }
        }
    }
    grid
}

/// A predictor whose training set has grown to `size` rows.
pub fn grown_predictor(size: usize) -> PredictorState {
    let mut state = PredictorState::with_default_table(3).unwrap();
    let grid = feature_grid();
    for i in state.len()..size {
        state.observe(TrainingInstance::new(
            grid[i % grid.len()],
            if i % 3 == 0 {
                TurnClass::Right
            } else {
                TurnClass::Straight
            },
        ));
    }
    state
}

/// A saturated single-lane arrival ramp: one request per second.
pub fn dense_arrivals(count: usize) -> Vec<f64> {
    (0..count).map(|i| i as f64).collect()
}
