//! Linear (optimal) weights.
//!
//! Each step of the Neville triangle writes the degree-`l+1` interpolant on
//! window nodes `j ..= j+l+1` as an affine combination of the degree-`l`
//! interpolants on `j ..= j+l` ("keep") and `j+1 ..= j+l+1` ("shift"). The
//! classical WENO optimal weights are the sums over all paths through that
//! triangle, accumulated top-down.

use std::ops::{Div, Sub};

use crate::error::{Result, WenoError};

/// Weights of one Neville step: `p^{l+1}_j = keep * p^l_j + shift * p^l_{j+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightPair {
    pub keep: f64,
    pub shift: f64,
}

impl WeightPair {
    pub fn get(&self, shifted: bool) -> f64 {
        if shifted {
            self.shift
        } else {
            self.keep
        }
    }
}

/// `(keep, shift)` for the step whose outer nodes are `left` and `right`.
///
/// Generic so the same expression can be checked in exact arithmetic.
pub fn neville_pair<T>(left: T, right: T, x: T) -> (T, T)
where
    T: Copy + Sub<Output = T> + Div<Output = T>,
{
    let span = left - right;
    ((x - right) / span, (left - x) / span)
}

fn check_level(r: usize, l: usize, j: usize) -> Result<()> {
    if r < 2 || l < r || l > 2 * r - 2 || j > 2 * r - 2 - l {
        return Err(WenoError::IndexOutOfRange(format!(
            "need r <= l <= 2r-2 and j <= 2r-2-l, got r={r}, l={l}, j={j}"
        )));
    }
    Ok(())
}

/// Neville step weights on an arbitrary window of `2r` nodes (local indices `0..2r`).
pub fn weight_pair_general(window: &[f64], l: usize, j: usize, x: f64) -> Result<WeightPair> {
    if !window.len().is_multiple_of(2) {
        return Err(WenoError::InvalidParameter(format!(
            "window must hold 2r nodes, got {}",
            window.len()
        )));
    }
    let r = window.len() / 2;
    check_level(r, l, j)?;
    Ok(pair_unchecked(window, l, j, x))
}

#[inline]
pub(crate) fn pair_unchecked(window: &[f64], l: usize, j: usize, x: f64) -> WeightPair {
    let keep = (x - window[j + l + 1]) / (window[j] - window[j + l + 1]);
    WeightPair {
        keep,
        shift: 1.0 - keep,
    }
}

/// Closed form of [`weight_pair_general`] for the midpoint of the central cell of a uniform grid.
pub fn midpoint_weight_pair(r: usize, l: usize, k: usize) -> Result<WeightPair> {
    check_level(r, l, k)?;
    let keep = (2 * (l + 1 + k - r) + 1) as f64 / (2 * (l + 1)) as f64;
    let shift = (2 * (r - k) - 1) as f64 / (2 * (l + 1)) as f64;
    Ok(WeightPair { keep, shift })
}

/// Optimal weights `C_k` over sub-stencils `k` (row-major over `{0..r-1}^n`).
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalWeights {
    pub r: usize,
    pub dims: usize,
    pub weights: Vec<f64>,
}

impl OptimalWeights {
    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Tensor product of per-axis weight vectors, row-major with axis 0 outermost.
    pub fn tensor(per_axis: &[Vec<f64>]) -> Self {
        let r = per_axis.first().map_or(0, Vec::len);
        let mut weights = vec![1.0];
        for axis in per_axis {
            weights = weights
                .iter()
                .flat_map(|&w| axis.iter().map(move |&c| w * c))
                .collect();
        }
        Self {
            r,
            dims: per_axis.len(),
            weights,
        }
    }
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Uniform-grid midpoint weights `binom(2r, 2k+1) / 2^(2r-1)`.
pub fn classical_optimal_midpoint(r: usize) -> OptimalWeights {
    let denom = 2f64.powi(2 * r as i32 - 1);
    let weights = (0..r)
        .map(|k| binomial(2 * r as u64, 2 * k as u64 + 1) / denom)
        .collect();
    OptimalWeights {
        r,
        dims: 1,
        weights,
    }
}

/// Optimal weights of the degree-`r` sub-stencils for an arbitrary window and query point.
///
/// Path products through the Neville triangle, accumulated level by level.
pub fn classical_optimal_general(window: &[f64], x: f64) -> Result<OptimalWeights> {
    if window.len() < 2 || !window.len().is_multiple_of(2) {
        return Err(WenoError::InvalidParameter(format!(
            "window must hold 2r nodes, got {}",
            window.len()
        )));
    }
    let r = window.len() / 2;
    Ok(OptimalWeights {
        r,
        dims: 1,
        weights: optimal_general_unchecked(window, x),
    })
}

pub(crate) fn optimal_general_unchecked(window: &[f64], x: f64) -> Vec<f64> {
    let r = window.len() / 2;
    let mut acc = vec![1.0];
    // level l+1 has 2r-1-l entries; walk from the top (l+1 = 2r-1) down to l = r
    for l in (r..=2 * r - 2).rev() {
        let mut next = vec![0.0; acc.len() + 1];
        for (j, &w) in acc.iter().enumerate() {
            let pair = pair_unchecked(window, l, j, x);
            next[j] += w * pair.keep;
            next[j + 1] += w * pair.shift;
        }
        acc = next;
    }
    acc
}

/// Product of per-axis scalar weights.
pub fn tensor_weight(per_axis: &[f64]) -> f64 {
    per_axis.iter().product()
}
