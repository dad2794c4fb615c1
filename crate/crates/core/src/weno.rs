//! Interpolation engines: progressive (Aitken–Neville) WENO-2r, classical WENO-2r
//! and plain Lagrange on the full `2r` window.
//!
//! All three work on one central cell at a time. A [`PreparedCell`] caches the
//! window, the smoothness table and `epsilon`, so a batch of queries in the same
//! cell only pays for the table once.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WenoError};
use crate::grid::{for_each_index, locate_cell, row_major_strides, CellIndex, GridFunction};
use crate::smoothness::{build_table, IndicatorParams, SmoothnessTable};
use crate::stencil::reduce_block;
use crate::weights::{optimal_general_unchecked, pair_unchecked};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Progressive,
    Classical,
    Linear,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Progressive => "progressive",
            Method::Classical => "classical",
            Method::Linear => "linear",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = WenoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "progressive" => Ok(Method::Progressive),
            "classical" => Ok(Method::Classical),
            "linear" => Ok(Method::Linear),
            other => Err(WenoError::Config(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum EpsilonRule {
    /// `h^2` with `h` the largest per-axis `h_max` of the grid.
    #[default]
    HSquared,
    Constant(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WenoParams {
    pub r: usize,
    pub method: Method,
    pub epsilon: EpsilonRule,
    pub t: f64,
    pub indicators: IndicatorParams,
    /// Keep the full Neville triangle and weights in the result.
    pub capture: bool,
}

impl WenoParams {
    /// Defaults: `epsilon = h^2`, `t = (r + 1) / 2`.
    pub fn new(r: usize, method: Method) -> Self {
        Self {
            r,
            method,
            epsilon: EpsilonRule::HSquared,
            t: 0.5 * (r as f64 + 1.0),
            indicators: IndicatorParams::default(),
            capture: false,
        }
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.epsilon = EpsilonRule::Constant(eps);
        self
    }

    pub fn capturing(mut self) -> Self {
        self.capture = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 2 {
            return Err(WenoError::InvalidParameter(format!(
                "r must be at least 2, got {}",
                self.r
            )));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(WenoError::InvalidParameter(format!(
                "t must be positive, got {}",
                self.t
            )));
        }
        if let EpsilonRule::Constant(e) = self.epsilon {
            if !(e > 0.0 && e.is_finite()) {
                return Err(WenoError::InvalidParameter(format!(
                    "epsilon must be positive, got {e}"
                )));
            }
        }
        Ok(())
    }

    fn epsilon_for(&self, gf: &GridFunction) -> Result<f64> {
        let eps = match self.epsilon {
            EpsilonRule::HSquared => gf.grid().h().powi(2),
            EpsilonRule::Constant(e) => e,
        };
        if eps > 0.0 && eps.is_finite() {
            Ok(eps)
        } else {
            Err(WenoError::InvalidParameter(format!(
                "epsilon evaluated to {eps}"
            )))
        }
    }
}

/// Normalized nonlinear weights `alpha_v / sum(alpha)` with `alpha_v = C_v / (eps + I_v)^t`.
///
/// The flag is set when the alphas underflow (or overflow) and the linear
/// weights are returned instead.
pub fn nonlinear_pair(linear: &[f64], indicators: &[f64], eps: f64, t: f64) -> (Vec<f64>, bool) {
    let mut out = vec![0.0; linear.len()];
    let fallback = nonlinear_into(linear, indicators, eps, t, &mut out);
    (out, fallback)
}

fn nonlinear_into(linear: &[f64], indicators: &[f64], eps: f64, t: f64, out: &mut [f64]) -> bool {
    let mut sum = 0.0;
    for ((o, &c), &i) in out.iter_mut().zip(linear).zip(indicators) {
        *o = c / (eps + i).powf(t);
        sum += *o;
    }
    if sum > 0.0 && sum.is_finite() {
        out.iter_mut().for_each(|o| *o /= sum);
        false
    } else {
        out.copy_from_slice(linear);
        true
    }
}

/// One value of the Neville triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleLevel {
    /// Polynomial degree `l` of the entries.
    pub level: usize,
    /// Entries per axis (`2r - l`).
    pub side: usize,
    /// Row-major over `{0..side-1}^n`.
    pub values: Vec<f64>,
}

/// Weights applied at one combination node.
#[derive(Debug, Clone, PartialEq)]
pub struct Combination {
    /// Degree of the children being combined.
    pub level: usize,
    pub index: Vec<usize>,
    /// Linear and nonlinear weights over the children, lexicographic in `v`
    /// (or over `k` for the classical method).
    pub linear: Vec<f64>,
    pub nonlinear: Vec<f64>,
    pub fallback: bool,
}

/// Intermediate values and weights of one evaluation.
///
/// The progressive method fills `levels` for `l = r ..= 2r-1` and one
/// combination per node. The classical method records only the base level and a
/// single combination over all `r^n` sub-stencils; the linear method records
/// the base level.
#[derive(Debug, Clone, PartialEq)]
pub struct NevilleState {
    pub r: usize,
    pub dims: usize,
    pub levels: Vec<TriangleLevel>,
    pub combinations: Vec<Combination>,
}

impl NevilleState {
    pub fn entry_count(&self) -> usize {
        self.levels.iter().map(|l| l.values.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpResult {
    pub value: f64,
    /// `p^r_k(x)` for every `k`, row-major.
    pub base_values: Vec<f64>,
    pub table: SmoothnessTable,
    /// Some combination fell back to linear weights.
    pub fallback: bool,
    pub diagnostics: Option<NevilleState>,
}

pub fn capture_diagnostics(result: &InterpResult) -> Result<&NevilleState> {
    result
        .diagnostics
        .as_ref()
        .ok_or(WenoError::DiagnosticsNotCaptured)
}

/// Window, indicator table and `epsilon` of one central cell.
#[derive(Debug, Clone)]
pub struct PreparedCell {
    params: WenoParams,
    cell: CellIndex,
    nodes: Vec<Vec<f64>>,
    values: Vec<f64>,
    table: SmoothnessTable,
    eps: f64,
}

impl PreparedCell {
    pub fn new(gf: &GridFunction, cell: &CellIndex, params: &WenoParams) -> Result<Self> {
        params.validate()?;
        gf.grid().check_window(cell, params.r)?;
        let table = match params.method {
            Method::Linear => SmoothnessTable::constant(params.r, gf.dims(), 0.0),
            _ => build_table(gf, cell, params.r, &params.indicators)?,
        };
        Self::assemble(gf, cell, params, table)
    }

    /// Uses `table` instead of computing indicators from the data.
    pub fn with_table(
        gf: &GridFunction,
        cell: &CellIndex,
        params: &WenoParams,
        table: SmoothnessTable,
    ) -> Result<Self> {
        params.validate()?;
        gf.grid().check_window(cell, params.r)?;
        if table.r() != params.r || table.dims() != gf.dims() {
            return Err(WenoError::DimensionMismatch {
                expected: params.r.pow(gf.dims() as u32),
                got: table.entries().len(),
            });
        }
        Self::assemble(gf, cell, params, table)
    }

    fn assemble(
        gf: &GridFunction,
        cell: &CellIndex,
        params: &WenoParams,
        table: SmoothnessTable,
    ) -> Result<Self> {
        let r = params.r;
        let start: Vec<usize> = cell.0.iter().map(|&i| i - r).collect();
        let nodes = (0..gf.dims())
            .map(|j| gf.grid().axis(j).nodes()[start[j]..start[j] + 2 * r].to_vec())
            .collect();
        let values = gf.block(&start, &vec![2 * r; gf.dims()]);
        Ok(Self {
            params: params.clone(),
            cell: cell.clone(),
            nodes,
            values,
            table,
            eps: params.epsilon_for(gf)?,
        })
    }

    pub fn cell(&self) -> &CellIndex {
        &self.cell
    }

    pub fn table(&self) -> &SmoothnessTable {
        &self.table
    }

    pub fn epsilon(&self) -> f64 {
        self.eps
    }

    pub fn params(&self) -> &WenoParams {
        &self.params
    }

    fn dims(&self) -> usize {
        self.nodes.len()
    }

    /// `p^r_k(x)` for all `k`, row-major over `{0..r-1}^n`.
    fn base_values(&self, x: &[f64]) -> Vec<f64> {
        let r = self.params.r;
        let n = self.dims();
        let strides = row_major_strides(&vec![2 * r; n]);
        let sub = vec![r + 1; n];
        let mut out = Vec::with_capacity(r.pow(n as u32));
        let mut block = Vec::with_capacity((r + 1).pow(n as u32));
        for_each_index(&vec![r; n], |k| {
            block.clear();
            for_each_index(&sub, |local| {
                let flat: usize = local
                    .iter()
                    .zip(k)
                    .zip(&strides)
                    .map(|((a, b), s)| (a + b) * s)
                    .sum();
                block.push(self.values[flat]);
            });
            let axis_nodes: Vec<&[f64]> = k
                .iter()
                .enumerate()
                .map(|(j, &kj)| &self.nodes[j][kj..kj + r + 1])
                .collect();
            out.push(reduce_block(&mut block, &axis_nodes, x));
        });
        out
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<InterpResult> {
        if x.len() != self.dims() {
            return Err(WenoError::DimensionMismatch {
                expected: self.dims(),
                got: x.len(),
            });
        }
        if let Some(axis) = x.iter().position(|v| !v.is_finite()) {
            return Err(WenoError::OutOfDomain {
                axis,
                value: x[axis],
                lo: self.nodes[axis][0],
                hi: *self.nodes[axis].last().unwrap(),
            });
        }
        let base = self.base_values(x);
        let (value, fallback, diagnostics) = match self.params.method {
            Method::Progressive => self.progressive(x, &base),
            Method::Classical => self.classical(x, &base),
            Method::Linear => {
                let mut block = self.values.clone();
                let axis_nodes: Vec<&[f64]> = self.nodes.iter().map(Vec::as_slice).collect();
                let v = reduce_block(&mut block, &axis_nodes, x);
                let diag = self.params.capture.then(|| NevilleState {
                    r: self.params.r,
                    dims: self.dims(),
                    levels: vec![self.base_level(&base)],
                    combinations: Vec::new(),
                });
                (v, false, diag)
            }
        };
        Ok(InterpResult {
            value,
            base_values: base,
            table: self.table.clone(),
            fallback,
            diagnostics,
        })
    }

    fn base_level(&self, base: &[f64]) -> TriangleLevel {
        TriangleLevel {
            level: self.params.r,
            side: self.params.r,
            values: base.to_vec(),
        }
    }

    fn classical(&self, x: &[f64], base: &[f64]) -> (f64, bool, Option<NevilleState>) {
        let per_axis: Vec<Vec<f64>> = self
            .nodes
            .iter()
            .zip(x)
            .map(|(w, &xj)| optimal_general_unchecked(w, xj))
            .collect();
        let mut linear = Vec::with_capacity(base.len());
        for_each_index(&vec![self.params.r; self.dims()], |k| {
            linear.push(k.iter().enumerate().map(|(j, &kj)| per_axis[j][kj]).product());
        });
        let mut omega = vec![0.0; linear.len()];
        let fallback = nonlinear_into(
            &linear,
            self.table.entries(),
            self.eps,
            self.params.t,
            &mut omega,
        );
        let value = omega.iter().zip(base).map(|(w, p)| w * p).sum();
        let diag = self.params.capture.then(|| NevilleState {
            r: self.params.r,
            dims: self.dims(),
            levels: vec![self.base_level(base)],
            combinations: vec![Combination {
                level: self.params.r,
                index: vec![0; self.dims()],
                linear,
                nonlinear: omega,
                fallback,
            }],
        });
        (value, fallback, diag)
    }

    fn progressive(&self, x: &[f64], base: &[f64]) -> (f64, bool, Option<NevilleState>) {
        let r = self.params.r;
        let n = self.dims();
        let children = 1usize << n;
        let capture = self.params.capture;
        let mut levels = Vec::new();
        let mut combinations = Vec::new();
        let mut fallback = false;

        let mut vals = base.to_vec();
        let mut side = r;
        if capture {
            levels.push(self.base_level(base));
        }
        // children offsets v in lexicographic order, as bit vectors (axis 0 most significant)
        let offsets: Vec<Vec<bool>> = (0..children)
            .map(|c| (0..n).map(|a| (c >> (n - 1 - a)) & 1 == 1).collect())
            .collect();
        let mut linear = vec![0.0; children];
        let mut indicators = vec![0.0; children];
        let mut omega = vec![0.0; children];
        let mut kidx = vec![0usize; n];
        for l in r..=2 * r - 2 {
            let jump = l + 1 - r;
            let new_side = side - 1;
            let strides = row_major_strides(&vec![side; n]);
            let mut next = Vec::with_capacity(new_side.pow(n as u32));
            // pairs[a][j] for axis a and index j
            let pairs: Vec<Vec<_>> = (0..n)
                .map(|a| {
                    (0..new_side)
                        .map(|j| pair_unchecked(&self.nodes[a], l, j, x[a]))
                        .collect()
                })
                .collect();
            for_each_index(&vec![new_side; n], |j| {
                let mut acc = 0.0;
                for (c, v) in offsets.iter().enumerate() {
                    let mut w = 1.0;
                    for a in 0..n {
                        w *= pairs[a][j[a]].get(v[a]);
                        kidx[a] = j[a] + if v[a] { jump } else { 0 };
                    }
                    linear[c] = w;
                    indicators[c] = self.table.get(&kidx);
                }
                let fb = nonlinear_into(&linear, &indicators, self.eps, self.params.t, &mut omega);
                fallback |= fb;
                for (c, v) in offsets.iter().enumerate() {
                    let flat: usize = j
                        .iter()
                        .zip(v)
                        .zip(&strides)
                        .map(|((&ja, &va), s)| (ja + va as usize) * s)
                        .sum();
                    acc += omega[c] * vals[flat];
                }
                next.push(acc);
                if capture {
                    combinations.push(Combination {
                        level: l,
                        index: j.to_vec(),
                        linear: linear.clone(),
                        nonlinear: omega.clone(),
                        fallback: fb,
                    });
                }
            });
            vals = next;
            side = new_side;
            if capture {
                levels.push(TriangleLevel {
                    level: l + 1,
                    side,
                    values: vals.clone(),
                });
            }
        }
        let diag = capture.then_some(NevilleState {
            r,
            dims: n,
            levels,
            combinations,
        });
        (vals[0], fallback, diag)
    }
}

pub fn interpolate_nd(gf: &GridFunction, x: &[f64], params: &WenoParams) -> Result<InterpResult> {
    params.validate()?;
    let cell = locate_cell(gf.grid(), x, params.r)?;
    PreparedCell::new(gf, &cell, params)?.evaluate(x)
}

pub fn interpolate_1d(gf: &GridFunction, x: f64, params: &WenoParams) -> Result<InterpResult> {
    if gf.dims() != 1 {
        return Err(WenoError::DimensionMismatch {
            expected: 1,
            got: gf.dims(),
        });
    }
    interpolate_nd(gf, &[x], params)
}

/// Evaluates many points, sharing the indicator table between points of the same cell.
///
/// Cells are processed in parallel; the output order matches `points` and does
/// not depend on the thread count.
pub fn interpolate_batch(
    gf: &GridFunction,
    points: &[Vec<f64>],
    params: &WenoParams,
) -> Result<Vec<InterpResult>> {
    params.validate()?;
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        let cell = locate_cell(gf.grid(), p, params.r)?;
        groups.entry(cell.0).or_default().push(i);
    }
    let groups: Vec<(Vec<usize>, Vec<usize>)> = groups.into_iter().collect();
    let evaluated: Vec<Vec<(usize, InterpResult)>> = groups
        .par_iter()
        .map(|(cell, members)| {
            let prepared = PreparedCell::new(gf, &CellIndex(cell.clone()), params)?;
            members
                .iter()
                .map(|&i| prepared.evaluate(&points[i]).map(|res| (i, res)))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<Option<InterpResult>> = vec![None; points.len()];
    for (i, res) in evaluated.into_iter().flatten() {
        out[i] = Some(res);
    }
    Ok(out.into_iter().map(|r| r.expect("every point evaluated")).collect())
}
