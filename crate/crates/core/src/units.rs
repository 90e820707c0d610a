//! Speed units, admission ranges, and corridor speed-ramp kinematics.
//!
//! Configuration values arrive in miles per hour and feet; every derived
//! quantity is computed in feet per second and seconds (double precision).

use std::fmt;

use thiserror::Error;

/// Feet per second in one mile per hour (5280 ft / 3600 s).
pub const FPS_PER_MPH: f64 = 5280.0 / 3600.0;

/// Errors for unit conversions and corridor kinematics.
#[derive(Debug, Error, PartialEq)]
pub enum UnitsError {
    #[error("speed must be finite and non-negative, got {value}")]
    InvalidSpeed { value: f64 },
    #[error("speed range requires 0 < min <= max, got min {min_mph} mph, max {max_mph} mph")]
    InvalidSpeedRange { min_mph: f64, max_mph: f64 },
    #[error("distance must be finite and non-negative, got {value} ft")]
    InvalidDistance { value: f64 },
    #[error("cannot reach a point at zero speed")]
    ZeroSpeed,
    #[error("transition zone length must be finite and non-negative, got {value} ft")]
    InvalidZoneLength { value: f64 },
    #[error("transition zone speeds must be strictly positive")]
    NonPositiveZoneSpeed,
    #[error("position {position} ft lies outside the {zone_length} ft transition zone")]
    PositionOutsideZone { position: f64, zone_length: f64 },
}

/// Unit tag carried by a [`Speed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeedUnit {
    MilesPerHour,
    FeetPerSecond,
}

impl fmt::Display for SpeedUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpeedUnit::MilesPerHour => write!(f, "mph"),
            SpeedUnit::FeetPerSecond => write!(f, "ft/s"),
        }
    }
}

/// A non-negative speed tagged with its unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Speed {
    value: f64,
    unit: SpeedUnit,
}

impl Speed {
    /// A speed in miles per hour. Rejects negative or non-finite values.
    pub fn mph(value: f64) -> Result<Self, UnitsError> {
        Self::new(value, SpeedUnit::MilesPerHour)
    }

    /// A speed in feet per second. Rejects negative or non-finite values.
    pub fn fps(value: f64) -> Result<Self, UnitsError> {
        Self::new(value, SpeedUnit::FeetPerSecond)
    }

    fn new(value: f64, unit: SpeedUnit) -> Result<Self, UnitsError> {
        if !value.is_finite() || value < 0.0 {
            return Err(UnitsError::InvalidSpeed { value });
        }
        Ok(Speed { value, unit })
    }

    pub fn value(self) -> f64 {
        self.value
    }

    pub fn unit(self) -> SpeedUnit {
        self.unit
    }

    /// Magnitude in miles per hour.
    pub fn as_mph(self) -> f64 {
        match self.unit {
            SpeedUnit::MilesPerHour => self.value,
            SpeedUnit::FeetPerSecond => self.value / FPS_PER_MPH,
        }
    }

    /// Magnitude in feet per second.
    pub fn as_fps(self) -> f64 {
        match self.unit {
            SpeedUnit::MilesPerHour => self.value * FPS_PER_MPH,
            SpeedUnit::FeetPerSecond => self.value,
        }
    }

    /// The same speed retagged in miles per hour.
    pub fn to_mph(self) -> Speed {
        Speed {
            value: self.as_mph(),
            unit: SpeedUnit::MilesPerHour,
        }
    }

    /// The same speed retagged in feet per second.
    pub fn to_fps(self) -> Speed {
        Speed {
            value: self.as_fps(),
            unit: SpeedUnit::FeetPerSecond,
        }
    }
}

impl fmt::Display for Speed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit)
    }
}

/// Seconds needed to cover `distance_ft` at a constant speed.
pub fn time_to_point(distance_ft: f64, speed: Speed) -> Result<f64, UnitsError> {
    if !distance_ft.is_finite() || distance_ft < 0.0 {
        return Err(UnitsError::InvalidDistance { value: distance_ft });
    }
    let fps = speed.as_fps();
    if fps == 0.0 {
        return Err(UnitsError::ZeroSpeed);
    }
    Ok(distance_ft / fps)
}

/// The admission band `[min, max]` of arrival speeds, in miles per hour.
///
/// Vehicles inside the band are admitted and snapped to the band midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedRange {
    min_mph: f64,
    max_mph: f64,
}

impl SpeedRange {
    pub fn new(min: Speed, max: Speed) -> Result<Self, UnitsError> {
        Self::from_mph(min.as_mph(), max.as_mph())
    }

    pub fn from_mph(min_mph: f64, max_mph: f64) -> Result<Self, UnitsError> {
        if !min_mph.is_finite() || !max_mph.is_finite() || min_mph <= 0.0 || min_mph > max_mph {
            return Err(UnitsError::InvalidSpeedRange { min_mph, max_mph });
        }
        Ok(SpeedRange { min_mph, max_mph })
    }

    pub fn min_mph(&self) -> f64 {
        self.min_mph
    }

    pub fn max_mph(&self) -> f64 {
        self.max_mph
    }

    /// Inclusive on both ends.
    pub fn contains(&self, speed: Speed) -> bool {
        let mph = speed.as_mph();
        self.min_mph <= mph && mph <= self.max_mph
    }

    /// The band midpoint `(min + max) / 2`, applied to every admitted vehicle.
    pub fn average(&self) -> Speed {
        Speed {
            value: (self.min_mph + self.max_mph) / 2.0,
            unit: SpeedUnit::MilesPerHour,
        }
    }
}

impl fmt::Display for SpeedRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] mph", self.min_mph, self.max_mph)
    }
}

/// The stretch between two chained intersections where speed ramps from the
/// upstream exit speed to the downstream entry speed.
///
/// The ramp is linear in distance: a vehicle at position `x` travels at
/// `exit + (target - exit) * x / zone_length`. A zero-length zone is the
/// degenerate step change and is only traversable when both speeds agree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorridorLink {
    exit_speed: Speed,
    target_speed: Speed,
    zone_length_ft: f64,
}

impl CorridorLink {
    pub fn new(
        exit_speed: Speed,
        target_speed: Speed,
        zone_length_ft: f64,
    ) -> Result<Self, UnitsError> {
        if !zone_length_ft.is_finite() || zone_length_ft < 0.0 {
            return Err(UnitsError::InvalidZoneLength {
                value: zone_length_ft,
            });
        }
        if exit_speed.as_fps() <= 0.0 || target_speed.as_fps() <= 0.0 {
            return Err(UnitsError::NonPositiveZoneSpeed);
        }
        Ok(CorridorLink {
            exit_speed,
            target_speed,
            zone_length_ft,
        })
    }

    pub fn exit_speed(&self) -> Speed {
        self.exit_speed
    }

    pub fn target_speed(&self) -> Speed {
        self.target_speed
    }

    pub fn zone_length_ft(&self) -> f64 {
        self.zone_length_ft
    }

    /// Speed of the ramp at `position_ft` from the zone entry, in mph.
    ///
    /// Equals the exit speed at position 0 and the target speed at the end
    /// of the zone. In a zero-length zone only position 0 is valid and the
    /// change is a step to the target speed.
    pub fn speed_at(&self, position_ft: f64) -> Result<Speed, UnitsError> {
        if !position_ft.is_finite() || position_ft < 0.0 || position_ft > self.zone_length_ft {
            return Err(UnitsError::PositionOutsideZone {
                position: position_ft,
                zone_length: self.zone_length_ft,
            });
        }
        if self.zone_length_ft == 0.0 {
            return Ok(self.target_speed.to_mph());
        }
        let e = self.exit_speed.as_mph();
        let t = self.target_speed.as_mph();
        Ok(Speed {
            value: e + (t - e) * position_ft / self.zone_length_ft,
            unit: SpeedUnit::MilesPerHour,
        })
    }

    /// Seconds to cross the zone under the linear-in-distance ramp.
    ///
    /// Closed form of `integral dx / v(x)`: `L * ln(v1/v0) / (v1 - v0)`,
    /// which collapses to `L / v` when the endpoint speeds agree.
    pub fn traversal_time_s(&self) -> f64 {
        if self.zone_length_ft == 0.0 {
            return 0.0;
        }
        let v0 = self.exit_speed.as_fps();
        let v1 = self.target_speed.as_fps();
        if (v1 - v0).abs() < 1e-12 * v0.max(v1) {
            return self.zone_length_ft / v0;
        }
        self.zone_length_ft * (v1 / v0).ln() / (v1 - v0)
    }
}
