//! K-nearest-neighbour prediction of right-turn containers.
//!
//! A vehicle's (day, hour, event) features are compared with unnormalised
//! Euclidean distance, so the hour axis dominates the vote. That is the
//! documented behaviour of the model, not something this module corrects.
//!
//! Neighbour ties are broken by insertion order (oldest instance first),
//! and a tied vote falls back to [`TurnClass::Straight`], so classification
//! is fully deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TurnError {
    #[error("day must be in 1..=5, got {value}")]
    InvalidDay { value: u8 },
    #[error("hour must be in 0..=23, got {value}")]
    InvalidHour { value: u8 },
    #[error("event flag must be 0 or 1, got {value}")]
    InvalidEvent { value: u8 },
    #[error("k must be odd and at least 1, got {k}")]
    InvalidK { k: usize },
    #[error("cannot classify with an empty training set")]
    EmptyTrainingSet,
    #[error("k ({k}) exceeds the training set size ({size})")]
    KExceedsTrainingSize { k: usize, size: usize },
}

/// The (day, hour, event) features of one arriving vehicle.
///
/// Day runs 1 (Monday) to 5 (Friday), hour is 24-hour format, and event is
/// 1 when something is happening in the area of the intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FeatureVector {
    day: u8,
    hour: u8,
    event: u8,
}

impl FeatureVector {
    pub fn new(day: u8, hour: u8, event: u8) -> Result<Self, TurnError> {
        if !(1..=5).contains(&day) {
            return Err(TurnError::InvalidDay { value: day });
        }
        if hour > 23 {
            return Err(TurnError::InvalidHour { value: hour });
        }
        if event > 1 {
            return Err(TurnError::InvalidEvent { value: event });
        }
        Ok(FeatureVector { day, hour, event })
    }

    pub fn day(&self) -> u8 {
        self.day
    }

    pub fn hour(&self) -> u8 {
        self.hour
    }

    pub fn event(&self) -> u8 {
        self.event
    }

    fn components(&self) -> [f64; 3] {
        [self.day as f64, self.hour as f64, self.event as f64]
    }
}

impl fmt::Display for FeatureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.day, self.hour, self.event)
    }
}

/// Predicted routing of a vehicle: a right-turn container or straight ahead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TurnClass {
    Right,
    Straight,
}

impl TurnClass {
    /// The `+` / `-` notation used in training tables and reports.
    pub fn symbol(self) -> char {
        match self {
            TurnClass::Right => '+',
            TurnClass::Straight => '-',
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "+" => Some(TurnClass::Right),
            "-" => Some(TurnClass::Straight),
            _ => None,
        }
    }

    pub fn is_right(self) -> bool {
        self == TurnClass::Right
    }
}

impl fmt::Display for TurnClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A labelled feature row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrainingInstance {
    pub features: FeatureVector,
    pub class: TurnClass,
}

impl TrainingInstance {
    pub fn new(features: FeatureVector, class: TurnClass) -> Self {
        TrainingInstance { features, class }
    }
}

/// Euclidean distance over (day, hour, event), unnormalised.
pub fn distance(a: &FeatureVector, b: &FeatureVector) -> f64 {
    squared_distance(a, b).sqrt()
}

fn squared_distance(a: &FeatureVector, b: &FeatureVector) -> f64 {
    a.components()
        .iter()
        .zip(b.components().iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum()
}

/// The bundled nine-row seed table used when an experiment does not supply
/// its own training data.
pub fn default_training_table() -> Vec<TrainingInstance> {
    const ROWS: [(u8, u8, u8, char); 9] = [
        (1, 9, 0, '+'),
        (3, 10, 0, '+'),
        (4, 8, 0, '+'),
        (3, 8, 0, '+'),
        (4, 10, 0, '+'),
        (2, 20, 1, '-'),
        (5, 19, 1, '-'),
        (1, 4, 1, '-'),
        (2, 7, 1, '-'),
    ];
    ROWS.iter()
        .map(|&(day, hour, event, class)| TrainingInstance {
            features: FeatureVector::new(day, hour, event).expect("seed rows are valid"),
            class: if class == '+' {
                TurnClass::Right
            } else {
                TurnClass::Straight
            },
        })
        .collect()
}

// Max-heap entry so the worst of the current k candidates sits on top.
struct Neighbor {
    squared: f64,
    index: usize,
    class: TurnClass,
}

impl PartialEq for Neighbor {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Neighbor {}

impl PartialOrd for Neighbor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Neighbor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.squared
            .total_cmp(&other.squared)
            .then(self.index.cmp(&other.index))
    }
}

/// An incremental KNN classifier: an insertion-ordered training set plus an
/// odd `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorState {
    instances: Vec<TrainingInstance>,
    k: usize,
}

impl PredictorState {
    /// Training set order is preserved; it is the neighbour tie-break.
    pub fn new(instances: Vec<TrainingInstance>, k: usize) -> Result<Self, TurnError> {
        if k == 0 || k.is_multiple_of(2) {
            return Err(TurnError::InvalidK { k });
        }
        Ok(PredictorState { instances, k })
    }

    /// A predictor seeded with [`default_training_table`].
    pub fn with_default_table(k: usize) -> Result<Self, TurnError> {
        Self::new(default_training_table(), k)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn instances(&self) -> &[TrainingInstance] {
        &self.instances
    }

    /// Majority class among the k nearest training rows.
    ///
    /// Neighbours are ordered by (distance, insertion index); a tied vote
    /// returns [`TurnClass::Straight`], the conservative routing.
    pub fn classify(&self, query: &FeatureVector) -> Result<TurnClass, TurnError> {
        if self.instances.is_empty() {
            return Err(TurnError::EmptyTrainingSet);
        }
        if self.k > self.instances.len() {
            return Err(TurnError::KExceedsTrainingSize {
                k: self.k,
                size: self.instances.len(),
            });
        }
        let mut heap = BinaryHeap::with_capacity(self.k + 1);
        for (index, instance) in self.instances.iter().enumerate() {
            heap.push(Neighbor {
                squared: squared_distance(&instance.features, query),
                index,
                class: instance.class,
            });
            if heap.len() > self.k {
                heap.pop();
            }
        }
        let right_votes = heap.iter().filter(|n| n.class.is_right()).count();
        Ok(if right_votes > self.k - right_votes {
            TurnClass::Right
        } else {
            TurnClass::Straight
        })
    }

    /// Append one labelled row; earlier rows keep their tie-break priority.
    pub fn observe(&mut self, instance: TrainingInstance) {
        self.instances.push(instance);
    }

    /// Classify each query in order, feeding every prediction back into the
    /// training set before the next query is answered.
    ///
    /// The predicted class is what gets observed: inside a simulation the
    /// prediction is the only label that exists.
    pub fn predict_sequence(
        &mut self,
        queries: &[FeatureVector],
    ) -> Result<Vec<TurnClass>, TurnError> {
        let mut out = Vec::with_capacity(queries.len());
        for query in queries {
            let class = self.classify(query)?;
            self.observe(TrainingInstance::new(*query, class));
            out.push(class);
        }
        Ok(out)
    }
}
