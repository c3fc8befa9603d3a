//! Shared numeric parameters and rounding helpers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack parameter, validated to lie in `(0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Epsilon(f64);

impl Epsilon {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && value <= 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1], got {value}"
            )))
        }
    }

    /// Checks the lower end `epsilon > 1/n` for a graph on `n` vertices.
    pub fn for_graph(value: f64, n: usize) -> Result<Self> {
        let eps = Self::new(value)?;
        if n >= 2 && value * n as f64 <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "epsilon must exceed 1/n = {}, got {value}",
                1.0 / n as f64
            )));
        }
        Ok(eps)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `self / divisor`, still a valid epsilon.
    pub fn scaled(self, divisor: f64) -> Self {
        Self(self.0 / divisor)
    }
}

impl TryFrom<f64> for Epsilon {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<Epsilon> for f64 {
    fn from(eps: Epsilon) -> f64 {
        eps.0
    }
}

const ROUNDING_SLACK: f64 = 1e-9;

/// Ceiling that ignores floating-point noise just above an integer.
pub fn ceil_tol(x: f64) -> usize {
    (x - ROUNDING_SLACK).ceil().max(0.0) as usize
}

/// Floor that ignores floating-point noise just below an integer.
pub fn floor_tol(x: f64) -> usize {
    (x + ROUNDING_SLACK).floor().max(0.0) as usize
}

/// `ceil(log2 n)`, at least 1.
pub fn log2_ceil(n: usize) -> usize {
    if n <= 2 {
        1
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// `ceil(log_{1+eps} n)`, at least 1.
pub fn log_base_ceil(n: usize, eps: f64) -> usize {
    if n <= 1 {
        return 1;
    }
    ceil_tol((n as f64).ln() / (1.0 + eps).ln()).max(1)
}
