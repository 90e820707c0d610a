//! Arrival flows toward the intersection.
//!
//! A pattern is one bit per second of the run: 1 is a request, 0 is no
//! request. Three generators cover the experiments (a matched flow that
//! lines up with the gate openings, a constant worst-case flow, and seeded
//! Bernoulli flows) plus one fixed irregular flow kept as a named fixture.
//!
//! Random bits come from ChaCha8 seeded with a caller-provided `u64`, so a
//! `(length, probability, seed)` triple produces the same pattern on every
//! platform and every run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PatternError {
    #[error("request probability must lie in [0, 1], got {value}")]
    InvalidProbability { value: f64 },
}

/// Number of one-second request spots in the standard one-minute run.
pub const STANDARD_SPOT_COUNT: usize = 60;

/// One request bit per second of the run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestPattern {
    bits: Vec<bool>,
}

impl RequestPattern {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        RequestPattern { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of requests (set bits).
    pub fn request_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Arrival times in seconds: the indices of the set bits, ascending.
    pub fn arrivals(&self) -> Vec<f64> {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as f64)
            .collect()
    }
}

/// Alternating `1, 0, 1, 0, ...` starting with a request at second 0.
pub fn matched(length: usize) -> RequestPattern {
    matched_offset(length, 0)
}

/// A matched flow shifted to start at `offset` seconds, for lanes whose
/// gate opens mid-cycle: requests at `offset, offset + 2, ...`.
pub fn matched_offset(length: usize, offset: usize) -> RequestPattern {
    RequestPattern {
        bits: (0..length)
            .map(|i| i >= offset && (i - offset).is_multiple_of(2))
            .collect(),
    }
}

/// The constant worst case: a request at every second.
pub fn worst(length: usize) -> RequestPattern {
    RequestPattern {
        bits: vec![true; length],
    }
}

/// Independent Bernoulli(`probability`) bits from ChaCha8 seeded with
/// `seed`. Equal `(length, probability, seed)` triples produce identical
/// patterns.
pub fn random(length: usize, probability: f64, seed: u64) -> Result<RequestPattern, PatternError> {
    if !probability.is_finite() || !(0.0..=1.0).contains(&probability) {
        return Err(PatternError::InvalidProbability { value: probability });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(RequestPattern {
        bits: (0..length)
            .map(|_| rng.random::<f64>() < probability)
            .collect(),
    })
}

/// Arrival seconds of the recorded irregular flow (30 requests over a
/// one-minute run).
pub const RECORDED_RANDOM_ARRIVALS: [usize; 30] = [
    0, 1, 3, 4, 5, 9, 11, 13, 15, 17, 18, 21, 24, 26, 28, 30, 32, 33, 34, 36, 38, 41, 43, 48, 50,
    52, 53, 57, 58, 59,
];

/// A fixed 60-spot irregular flow kept under a stable name so runs can be
/// compared against the same unpredictable arrival list.
pub fn recorded_random() -> RequestPattern {
    let mut bits = vec![false; STANDARD_SPOT_COUNT];
    for &second in &RECORDED_RANDOM_ARRIVALS {
        bits[second] = true;
    }
    RequestPattern { bits }
}
