//! Lane groups and the alternating gate timetable.
//!
//! The four lanes form two conflicting groups: A1/A2 open together while
//! B1/B2 are closed, and vice versa. The timetable tiles the cycle with the
//! two open intervals, so exactly one group is open at every instant and
//! conflict detection inside the intersection becomes unnecessary.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum GateError {
    #[error("cycle_period_s must be positive and finite, got {value}")]
    InvalidCyclePeriod { value: f64 },
    #[error("open_duration_s must be positive and finite, got {value}")]
    InvalidOpenDuration { value: f64 },
    #[error(
        "gates must keep exactly one group open at every instant: with cycle {cycle_period_s} s \
         and open duration {open_duration_s} s, offsets must be 0 and {open_duration_s} \
         (got {offset_a_s} for A, {offset_b_s} for B)"
    )]
    NotExclusive {
        cycle_period_s: f64,
        open_duration_s: f64,
        offset_a_s: f64,
        offset_b_s: f64,
    },
}

/// One of the two conflicting lane groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupId {
    A,
    B,
}

impl GroupId {
    pub const ALL: [GroupId; 2] = [GroupId::A, GroupId::B];

    pub fn index(self) -> usize {
        match self {
            GroupId::A => 0,
            GroupId::B => 1,
        }
    }

    pub fn other(self) -> GroupId {
        match self {
            GroupId::A => GroupId::B,
            GroupId::B => GroupId::A,
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupId::A => write!(f, "A"),
            GroupId::B => write!(f, "B"),
        }
    }
}

/// One of the four approach lanes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LaneId {
    A1,
    A2,
    B1,
    B2,
}

impl LaneId {
    pub const ALL: [LaneId; 4] = [LaneId::A1, LaneId::A2, LaneId::B1, LaneId::B2];

    pub fn group(self) -> GroupId {
        match self {
            LaneId::A1 | LaneId::A2 => GroupId::A,
            LaneId::B1 | LaneId::B2 => GroupId::B,
        }
    }

    pub fn index(self) -> usize {
        match self {
            LaneId::A1 => 0,
            LaneId::A2 => 1,
            LaneId::B1 => 2,
            LaneId::B2 => 3,
        }
    }
}

impl fmt::Display for LaneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LaneId::A1 => write!(f, "A1"),
            LaneId::A2 => write!(f, "A2"),
            LaneId::B1 => write!(f, "B1"),
            LaneId::B2 => write!(f, "B2"),
        }
    }
}

impl FromStr for LaneId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A1" => Ok(LaneId::A1),
            "A2" => Ok(LaneId::A2),
            "B1" => Ok(LaneId::B1),
            "B2" => Ok(LaneId::B2),
            other => Err(format!("unknown lane {other:?}, expected A1, A2, B1 or B2")),
        }
    }
}

/// Periodic open/close timetable for the two lane groups.
///
/// Each cycle, group A is open on `[offset_a, offset_a + open_duration)` and
/// group B on `[offset_b, offset_b + open_duration)`. Construction requires
/// the two intervals to tile the cycle exactly, which is what guarantees the
/// exclusivity invariant.
///
/// One container is produced per lane per opening, so slot `k` of a group
/// starts at `offset + k * cycle_period`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSchedule {
    cycle_period_s: f64,
    open_duration_s: f64,
    offsets: [f64; 2],
}

impl GateSchedule {
    pub fn new(
        cycle_period_s: f64,
        open_duration_s: f64,
        offset_a_s: f64,
        offset_b_s: f64,
    ) -> Result<Self, GateError> {
        if !cycle_period_s.is_finite() || cycle_period_s <= 0.0 {
            return Err(GateError::InvalidCyclePeriod {
                value: cycle_period_s,
            });
        }
        if !open_duration_s.is_finite() || open_duration_s <= 0.0 {
            return Err(GateError::InvalidOpenDuration {
                value: open_duration_s,
            });
        }
        let exclusive = (cycle_period_s - 2.0 * open_duration_s).abs() <= TOL
            && offset_a_s.min(offset_b_s).abs() <= TOL
            && (offset_a_s.max(offset_b_s) - open_duration_s).abs() <= TOL;
        if !exclusive || !offset_a_s.is_finite() || !offset_b_s.is_finite() {
            return Err(GateError::NotExclusive {
                cycle_period_s,
                open_duration_s,
                offset_a_s,
                offset_b_s,
            });
        }
        Ok(GateSchedule {
            cycle_period_s,
            open_duration_s,
            offsets: [offset_a_s, offset_b_s],
        })
    }

    /// The standard timetable: 2 s cycle, group A open on even seconds,
    /// group B on odd seconds.
    pub fn alternating() -> Self {
        GateSchedule {
            cycle_period_s: 2.0,
            open_duration_s: 1.0,
            offsets: [0.0, 1.0],
        }
    }

    pub fn cycle_period_s(&self) -> f64 {
        self.cycle_period_s
    }

    pub fn open_duration_s(&self) -> f64 {
        self.open_duration_s
    }

    pub fn offset_s(&self, group: GroupId) -> f64 {
        self.offsets[group.index()]
    }

    /// Is the group's gate open at time `t`?
    pub fn is_open(&self, group: GroupId, t: f64) -> bool {
        let phase = t.rem_euclid(self.cycle_period_s);
        let offset = self.offsets[group.index()];
        phase >= offset && phase < offset + self.open_duration_s
    }

    /// Start time of the group's `index`-th slot.
    pub fn slot_time(&self, group: GroupId, index: u64) -> f64 {
        self.offsets[group.index()] + index as f64 * self.cycle_period_s
    }

    /// Index of the first slot whose start time is `>= after`.
    pub fn slot_index_at_or_after(&self, group: GroupId, after: f64) -> u64 {
        let offset = self.offsets[group.index()];
        if after <= offset {
            0
        } else {
            ((after - offset) / self.cycle_period_s).ceil() as u64
        }
    }

    /// Smallest slot start time `>= after` that is not in `occupied`.
    ///
    /// Occupied entries are matched within 1e-9 s; slots extend past any run
    /// horizon, which is exactly the spill the extra-space metric measures.
    pub fn next_open_slot(&self, group: GroupId, after: f64, occupied: &[f64]) -> f64 {
        let mut index = self.slot_index_at_or_after(group, after);
        loop {
            let t = self.slot_time(group, index);
            if !occupied.iter().any(|&o| (o - t).abs() <= TOL) {
                return t;
            }
            index += 1;
        }
    }

    /// Number of slots whose start time falls strictly before `horizon`.
    ///
    /// This is the group's slot budget for a run of that length (30 per
    /// group under the standard timetable and a 60 s run).
    pub fn slots_before(&self, group: GroupId, horizon: f64) -> u64 {
        let offset = self.offsets[group.index()];
        if horizon <= offset {
            0
        } else {
            ((horizon - offset) / self.cycle_period_s).ceil() as u64
        }
    }
}

impl Default for GateSchedule {
    fn default() -> Self {
        GateSchedule::alternating()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lanes_partition_into_groups() {
        assert_eq!(LaneId::A1.group(), GroupId::A);
        assert_eq!(LaneId::A2.group(), GroupId::A);
        assert_eq!(LaneId::B1.group(), GroupId::B);
        assert_eq!(LaneId::B2.group(), GroupId::B);
        for group in GroupId::ALL {
            let members: Vec<_> = LaneId::ALL.iter().filter(|l| l.group() == group).collect();
            assert_eq!(members.len(), 2);
        }
    }

    #[test]
    fn lane_parsing_round_trips() {
        for lane in LaneId::ALL {
            assert_eq!(lane.to_string().parse::<LaneId>().unwrap(), lane);
        }
        assert!("C3".parse::<LaneId>().is_err());
    }

    #[test]
    fn alternating_gates_at_origin() {
        let g = GateSchedule::alternating();
        assert!(g.is_open(GroupId::A, 0.0));
        assert!(!g.is_open(GroupId::B, 0.0));
        assert!(g.is_open(GroupId::B, 1.0));
        assert!(!g.is_open(GroupId::A, 1.0));
    }

    #[test]
    fn exactly_one_group_open_over_dense_grid() {
        let g = GateSchedule::alternating();
        for step in 0..4000 {
            let t = step as f64 * g.cycle_period_s() / 1000.0;
            let open = GroupId::ALL.iter().filter(|&&gr| g.is_open(gr, t)).count();
            assert_eq!(open, 1, "at t = {t}");
        }
    }

    #[test]
    fn construction_rejects_non_exclusive_timetables() {
        assert!(GateSchedule::new(2.0, 1.0, 0.0, 1.0).is_ok());
        assert!(GateSchedule::new(4.0, 2.0, 0.0, 2.0).is_ok());
        // gap in the cycle
        assert!(matches!(
            GateSchedule::new(3.0, 1.0, 0.0, 1.0),
            Err(GateError::NotExclusive { .. })
        ));
        // overlapping intervals
        assert!(matches!(
            GateSchedule::new(2.0, 1.0, 0.0, 0.5),
            Err(GateError::NotExclusive { .. })
        ));
        assert!(matches!(
            GateSchedule::new(0.0, 1.0, 0.0, 1.0),
            Err(GateError::InvalidCyclePeriod { .. })
        ));
        assert!(matches!(
            GateSchedule::new(2.0, -1.0, 0.0, 1.0),
            Err(GateError::InvalidOpenDuration { .. })
        ));
    }

    #[test]
    fn slot_times_follow_the_offsets() {
        let g = GateSchedule::alternating();
        assert_eq!(g.slot_time(GroupId::A, 0), 0.0);
        assert_eq!(g.slot_time(GroupId::A, 3), 6.0);
        assert_eq!(g.slot_time(GroupId::B, 0), 1.0);
        assert_eq!(g.slot_time(GroupId::B, 3), 7.0);
    }

    #[test]
    fn next_open_slot_scans_forward() {
        let g = GateSchedule::alternating();
        assert_eq!(g.next_open_slot(GroupId::A, 0.0, &[]), 0.0);
        assert_eq!(g.next_open_slot(GroupId::A, 1.0, &[]), 2.0);
        assert_eq!(g.next_open_slot(GroupId::A, 0.0, &[0.0, 2.0]), 4.0);
        assert_eq!(g.next_open_slot(GroupId::B, 0.0, &[]), 1.0);
        // a vehicle arriving mid-interval has missed that slot's start
        assert_eq!(g.next_open_slot(GroupId::A, 0.5, &[]), 2.0);
    }

    #[test]
    fn slot_budget_for_a_minute() {
        let g = GateSchedule::alternating();
        assert_eq!(g.slots_before(GroupId::A, 60.0), 30);
        assert_eq!(g.slots_before(GroupId::B, 60.0), 30);
        assert_eq!(g.slots_before(GroupId::A, 58.0), 29);
        assert_eq!(g.slots_before(GroupId::B, 1.0), 0);
    }
}
