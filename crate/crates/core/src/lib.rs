//! Slot-based intersection scheduling, modelled on a production line: the
//! intersection prepares fixed-length containers on alternating gates ahead
//! of any request, admits vehicles by speed band, snaps them to the band
//! midpoint, and queues them FIFO into their lane's slots. Alongside it sits
//! the reservation-style crossing model the scheduler is evaluated against,
//! a KNN classifier that routes vehicles into right-turn containers, and the
//! arrival-flow generators used by the experiments.
//!
//! Everything is deterministic: random flows and Monte-Carlo runs are
//! ChaCha8-seeded, and equal inputs produce bit-equal outputs.

pub mod baseline;
pub mod gate;
pub mod patterns;
pub mod schedule;
pub mod turn;
pub mod units;

pub use baseline::{
    BaselineMetrics, BaselineScenario, CrossingOutcome, PointId, PredictedConflict, Reservation,
    ReservationDecision, TrajectoryQuery,
};
pub use gate::{GateSchedule, GroupId, LaneId};
pub use patterns::RequestPattern;
pub use schedule::{
    Admission, Conflict, IntersectionConfig, RejectReason, RejectedVehicle, ScheduleResult,
    SlotAssignment, VehicleRequest,
};
pub use turn::{FeatureVector, PredictorState, TrainingInstance, TurnClass};
pub use units::{CorridorLink, Speed, SpeedRange, SpeedUnit};
