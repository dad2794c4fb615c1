//! Piecewise-smooth test functions and the max-error measure.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WenoError};

/// Where a test function jumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Discontinuity {
    None,
    /// A single point in 1-D.
    Point(f64),
    /// The line `x1 + x2 = 0` in 2-D.
    AntiDiagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestFunction {
    /// Degree-10 polynomials on either side of `x = 0`.
    F1,
    /// Cubic times Gaussian-like factor, jump at `x = 2/3`.
    F2,
    /// `1 / (x1^2 + x2^2 + 1)`, smooth.
    F3,
    /// `exp(x1 + x2) cos(x1 - x2)`, plus one above the anti-diagonal.
    F4,
    /// Oscillatory product, plus 0.1 above the anti-diagonal.
    F5,
}

impl TestFunction {
    pub const ALL: [TestFunction; 5] = [Self::F1, Self::F2, Self::F3, Self::F4, Self::F5];

    pub fn name(self) -> &'static str {
        match self {
            Self::F1 => "f1",
            Self::F2 => "f2",
            Self::F3 => "f3",
            Self::F4 => "f4",
            Self::F5 => "f5",
        }
    }

    pub fn dims(self) -> usize {
        match self {
            Self::F1 | Self::F2 => 1,
            _ => 2,
        }
    }

    /// Domain per axis.
    pub fn domain(self) -> Vec<(f64, f64)> {
        match self {
            Self::F1 => vec![(-PI / 6.0, 1.0 - PI / 6.0)],
            Self::F2 => vec![(0.0, 1.0)],
            _ => vec![(-1.0, 1.0); 2],
        }
    }

    pub fn discontinuity(self) -> Discontinuity {
        match self {
            Self::F1 => Discontinuity::Point(0.0),
            Self::F2 => Discontinuity::Point(2.0 / 3.0),
            Self::F3 => Discontinuity::None,
            Self::F4 | Self::F5 => Discontinuity::AntiDiagonal,
        }
    }

    /// Height of the jump (right or upper value minus left or lower value), zero if smooth.
    pub fn jump_size(self) -> f64 {
        match self {
            Self::F1 => f1_right(0.0) - f1_left(0.0),
            Self::F2 => {
                let x = 2.0 / 3.0;
                f2_right(x) - f2_left(x)
            }
            Self::F3 => 0.0,
            Self::F4 => 1.0,
            Self::F5 => 0.1,
        }
    }

    /// Evaluation without domain checks.
    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            Self::F1 => {
                if x[0] < 0.0 {
                    f1_left(x[0])
                } else {
                    f1_right(x[0])
                }
            }
            Self::F2 => {
                if x[0] < 2.0 / 3.0 {
                    f2_left(x[0])
                } else {
                    f2_right(x[0])
                }
            }
            Self::F3 => 1.0 / (x[0] * x[0] + x[1] * x[1] + 1.0),
            Self::F4 => {
                let smooth = (x[0] + x[1]).exp() * (x[0] - x[1]).cos();
                if x[0] + x[1] > 0.0 {
                    smooth + 1.0
                } else {
                    smooth
                }
            }
            Self::F5 => {
                let smooth = (x[0] + x[1]) / 16.0
                    * (16.0 * PI * x[0]).sin()
                    * (16.0 * PI * x[1]).sin();
                if x[0] + x[1] > 0.0 {
                    smooth + 0.1
                } else {
                    smooth
                }
            }
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestFunction {
    type Err = WenoError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|tf| tf.name() == s)
            .ok_or_else(|| WenoError::UnknownFunction(s.to_string()))
    }
}

fn f1_left(x: f64) -> f64 {
    horner(&[0.0, 3.0, 5.0, 1.0, 1.0, 1.0, 1.0, -4.0, 1.0, -1.0, 1.0], x)
}

fn f1_right(x: f64) -> f64 {
    1.0 - horner(
        &[0.0, 0.5, -5.0, -3.0, -2.0, 1.0, -2.0, -8.0, 3.0, -2.0, 1.0],
        x,
    )
}

fn f2_left(x: f64) -> f64 {
    5.0 * (x - 0.25).powi(3) * (x * x).exp()
}

fn f2_right(x: f64) -> f64 {
    1.5 - (x - 0.25).powi(3) * (x * x).exp()
}

/// `sum c[i] x^i`.
fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// Evaluates `tf` after checking the point's dimension and domain.
pub fn eval_test_function(tf: TestFunction, point: &[f64]) -> Result<f64> {
    if point.len() != tf.dims() {
        return Err(WenoError::DimensionMismatch {
            expected: tf.dims(),
            got: point.len(),
        });
    }
    for (axis, (&x, (lo, hi))) in point.iter().zip(tf.domain()).enumerate() {
        if !(x >= lo && x <= hi) {
            return Err(WenoError::OutOfDomain {
                axis,
                value: x,
                lo,
                hi,
            });
        }
    }
    Ok(tf.eval(point))
}

/// `max |true - approx|`.
pub fn measure_error(values_true: &[f64], values_approx: &[f64]) -> Result<f64> {
    if values_true.len() != values_approx.len() {
        return Err(WenoError::LengthMismatch {
            expected: values_true.len(),
            got: values_approx.len(),
        });
    }
    if values_true.is_empty() {
        return Err(WenoError::InvalidCount {
            what: "error samples",
            min: 1,
            got: 0,
        });
    }
    Ok(values_true
        .iter()
        .zip(values_approx)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
