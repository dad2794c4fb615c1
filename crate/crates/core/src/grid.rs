//! One-dimensional and tensor-product grids, sampled grid functions and cell lookup.
//!
//! Cells are half-open: cell `i` on an axis is `(x[i-1], x[i]]`, and the left
//! domain endpoint belongs to cell 1. A stencil of order `r` around cell `i`
//! uses nodes `i-r ..= i+r-1`.
//!
//! Random grids draw from a `ChaCha8Rng` seeded with `seed_from_u64`. Interior
//! nodes are drawn in index order, so a given seed produces the same grid on
//! every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Result, WenoError};

/// Maximum number of re-draws for a single random node before giving up.
pub const MAX_REDRAWS: usize = 100;

/// Strictly increasing node coordinates along one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    nodes: Vec<f64>,
    h_max: f64,
}

impl Grid1D {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(WenoError::InvalidCount {
                what: "grid nodes",
                min: 2,
                got: nodes.len(),
            });
        }
        if let Some(index) = nodes.iter().position(|x| !x.is_finite()) {
            return Err(WenoError::NonFinite { index });
        }
        let mut h_max = 0.0_f64;
        for i in 1..nodes.len() {
            let gap = nodes[i] - nodes[i - 1];
            if gap <= 0.0 {
                return Err(WenoError::NotIncreasing { index: i });
            }
            h_max = h_max.max(gap);
        }
        Ok(Self { nodes, h_max })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Number of intervals, `J`.
    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest gap between consecutive nodes.
    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn first(&self) -> f64 {
        self.nodes[0]
    }

    pub fn last(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Index `i` of the cell `(x[i-1], x[i]]` containing `x`.
    pub fn locate(&self, x: f64) -> Result<usize> {
        self.locate_on_axis(x, 0)
    }

    fn locate_on_axis(&self, x: f64, axis: usize) -> Result<usize> {
        let (lo, hi) = (self.first(), self.last());
        if !(x >= lo && x <= hi) {
            return Err(WenoError::OutOfDomain {
                axis,
                value: x,
                lo,
                hi,
            });
        }
        let i = self.nodes.partition_point(|&node| node < x);
        Ok(i.max(1))
    }

    /// Checks that the `2r`-node window around cell `i` fits inside the grid.
    pub fn check_window(&self, cell: usize, r: usize) -> Result<()> {
        self.check_window_on_axis(cell, r, 0)
    }

    fn check_window_on_axis(&self, cell: usize, r: usize, axis: usize) -> Result<()> {
        let lo = cell as i64 - r as i64;
        let hi = cell as i64 + r as i64 - 1;
        if lo < 0 || hi > self.intervals() as i64 || cell == 0 {
            return Err(WenoError::InsufficientStencil {
                axis,
                cell,
                lo,
                hi,
                last: self.intervals(),
            });
        }
        Ok(())
    }

    /// The `2r` window nodes `x[i-r] ..= x[i+r-1]` around cell `i`.
    pub fn window(&self, cell: usize, r: usize) -> Result<&[f64]> {
        self.check_window(cell, r)?;
        Ok(&self.nodes[cell - r..cell + r])
    }
}

/// Uniform partition of `[a, b]` into `intervals` cells.
pub fn build_uniform_grid(a: f64, b: f64, intervals: usize) -> Result<Grid1D> {
    if !(a < b) {
        return Err(WenoError::InvalidRange { a, b });
    }
    if intervals < 1 {
        return Err(WenoError::InvalidCount {
            what: "intervals",
            min: 1,
            got: intervals,
        });
    }
    let width = b - a;
    let nodes = (0..=intervals)
        .map(|i| {
            if i == intervals {
                b
            } else {
                a + i as f64 * width / intervals as f64
            }
        })
        .collect();
    Grid1D::new(nodes)
}

/// Grid on `[a, b]` with fixed endpoints and `intervals - 1` sorted uniform interior draws.
pub fn build_random_grid(a: f64, b: f64, intervals: usize, seed: u64) -> Result<Grid1D> {
    if !(a < b) {
        return Err(WenoError::InvalidRange { a, b });
    }
    if intervals < 2 {
        return Err(WenoError::InvalidCount {
            what: "intervals",
            min: 2,
            got: intervals,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REDRAWS {
        let mut interior = Vec::with_capacity(intervals - 1);
        while interior.len() < intervals - 1 {
            let x = a + rng.gen::<f64>() * (b - a);
            if x > a && x < b {
                interior.push(x);
            }
        }
        interior.sort_by(f64::total_cmp);
        if interior.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let mut nodes = Vec::with_capacity(intervals + 1);
        nodes.push(a);
        nodes.extend(interior);
        nodes.push(b);
        return Grid1D::new(nodes);
    }
    Err(WenoError::DegenerateGrid {
        attempts: MAX_REDRAWS,
    })
}

/// Inserts the midpoint of every pair of consecutive nodes.
pub fn refine_dyadic(grid: &Grid1D) -> Grid1D {
    let old = grid.nodes();
    let mut nodes = Vec::with_capacity(2 * old.len() - 1);
    for pair in old.windows(2) {
        nodes.push(pair[0]);
        nodes.push(0.5 * (pair[0] + pair[1]));
    }
    nodes.push(old[old.len() - 1]);
    let h_max = nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    Grid1D { nodes, h_max }
}

/// Applies [`refine_dyadic`] `times` times.
pub fn refine_dyadic_n(grid: &Grid1D, times: usize) -> Grid1D {
    (0..times).fold(grid.clone(), |g, _| refine_dyadic(&g))
}

/// Perturbed uniform grid on `[-1, 1]` with spacing `h = 2^(1-level)`.
///
/// Node `i` is `-1 + i*h + e_i` with `e_i ~ U[-h/2, h/2]`; the two endpoints stay at `-1` and `1`.
pub fn build_perturbed_grid(level: u32, seed: u64) -> Result<Grid1D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    build_perturbed_grid_with(level, |half| rng.gen_range(-half..=half))
}

/// Same construction as [`build_perturbed_grid`] with a caller-supplied offset source.
///
/// `offset(h/2)` must return a value in `[-h/2, h/2]`. It is called once per
/// interior node in index order, and again for any node that would break
/// monotonicity (at most [`MAX_REDRAWS`] times per node).
pub fn build_perturbed_grid_with<F>(level: u32, mut offset: F) -> Result<Grid1D>
where
    F: FnMut(f64) -> f64,
{
    if !(1..=30).contains(&level) {
        return Err(WenoError::InvalidParameter(format!(
            "perturbed grid level must be in 1..=30, got {level}"
        )));
    }
    let intervals = 1usize << level;
    let h = 2.0 / intervals as f64;
    let mut nodes = Vec::with_capacity(intervals + 1);
    nodes.push(-1.0);
    for i in 1..intervals {
        let base = -1.0 + i as f64 * h;
        let prev = nodes[i - 1];
        let mut accepted = None;
        for _ in 0..MAX_REDRAWS {
            let e = offset(0.5 * h);
            if !(e.abs() <= 0.5 * h) {
                return Err(WenoError::Construction(format!(
                    "offset {e} outside [-h/2, h/2] at node {i}"
                )));
            }
            let x = base + e;
            if x > prev && x < 1.0 {
                accepted = Some(x);
                break;
            }
        }
        match accepted {
            Some(x) => nodes.push(x),
            None => {
                return Err(WenoError::Construction(format!(
                    "node {i} could not be placed monotonically after {MAX_REDRAWS} draws"
                )))
            }
        }
    }
    nodes.push(1.0);
    Grid1D::new(nodes)
}

/// Per-axis index of the central cell: the query lies in `prod (x[i_j - 1], x[i_j]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellIndex(pub Vec<usize>);

impl CellIndex {
    pub fn dims(&self) -> usize {
        self.0.len()
    }
}

/// Cartesian product of one-dimensional grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", into = "RawGrid")]
pub struct TensorGrid {
    axes: Vec<Grid1D>,
}

#[derive(Serialize, Deserialize)]
struct RawGrid {
    axes: Vec<Vec<f64>>,
}

impl TryFrom<RawGrid> for TensorGrid {
    type Error = WenoError;

    fn try_from(raw: RawGrid) -> Result<Self> {
        let axes = raw
            .axes
            .into_iter()
            .map(Grid1D::new)
            .collect::<Result<Vec<_>>>()?;
        TensorGrid::new(axes)
    }
}

impl From<TensorGrid> for RawGrid {
    fn from(grid: TensorGrid) -> Self {
        RawGrid {
            axes: grid.axes.into_iter().map(|g| g.nodes).collect(),
        }
    }
}

impl TensorGrid {
    pub fn new(axes: Vec<Grid1D>) -> Result<Self> {
        if axes.is_empty() {
            return Err(WenoError::InvalidCount {
                what: "axes",
                min: 1,
                got: 0,
            });
        }
        Ok(Self { axes })
    }

    pub fn from_axis(axis: Grid1D) -> Self {
        Self { axes: vec![axis] }
    }

    pub fn dims(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Grid1D] {
        &self.axes
    }

    pub fn axis(&self, j: usize) -> &Grid1D {
        &self.axes[j]
    }

    /// Global mesh width: the largest per-axis `h_max`.
    pub fn h(&self) -> f64 {
        self.axes.iter().map(Grid1D::h_max).fold(0.0, f64::max)
    }

    /// Node counts per axis.
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Grid1D::len).collect()
    }

    pub fn node_count(&self) -> usize {
        self.axes.iter().map(Grid1D::len).product()
    }

    /// Checks that a full `2r` window exists around `cell` on every axis.
    pub fn check_window(&self, cell: &CellIndex, r: usize) -> Result<()> {
        if cell.dims() != self.dims() {
            return Err(WenoError::DimensionMismatch {
                expected: self.dims(),
                got: cell.dims(),
            });
        }
        for (axis, (g, &i)) in self.axes.iter().zip(&cell.0).enumerate() {
            g.check_window_on_axis(i, r, axis)?;
        }
        Ok(())
    }

    /// Cell containing `x` without any stencil check.
    pub fn locate(&self, x: &[f64]) -> Result<CellIndex> {
        if x.len() != self.dims() {
            return Err(WenoError::DimensionMismatch {
                expected: self.dims(),
                got: x.len(),
            });
        }
        self.axes
            .iter()
            .zip(x)
            .enumerate()
            .map(|(axis, (g, &xj))| g.locate_on_axis(xj, axis))
            .collect::<Result<Vec<_>>>()
            .map(CellIndex)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("grid serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| WenoError::Config(e.to_string()))
    }
}

/// Locates the central cell of `x` and checks the `2r` window fits on every axis.
pub fn locate_cell(grid: &TensorGrid, x: &[f64], r: usize) -> Result<CellIndex> {
    let cell = grid.locate(x)?;
    grid.check_window(&cell, r)?;
    Ok(cell)
}

/// Samples on a tensor grid, stored row-major with axis 0 outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: TensorGrid,
    values: Vec<f64>,
    strides: Vec<usize>,
}

impl GridFunction {
    pub fn new(grid: TensorGrid, values: Vec<f64>) -> Result<Self> {
        let expected = grid.node_count();
        if values.len() != expected {
            return Err(WenoError::LengthMismatch {
                expected,
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(WenoError::NonFinite { index });
        }
        let strides = row_major_strides(&grid.shape());
        Ok(Self {
            grid,
            values,
            strides,
        })
    }

    /// Samples `f` at every node.
    pub fn from_fn<F>(grid: TensorGrid, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64,
    {
        let shape = grid.shape();
        let mut values = Vec::with_capacity(grid.node_count());
        let mut point = vec![0.0; grid.dims()];
        for_each_index(&shape, |idx| {
            for (j, &i) in idx.iter().enumerate() {
                point[j] = grid.axis(j).nodes()[i];
            }
            values.push(f(&point));
        });
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &TensorGrid {
        &self.grid
    }

    pub fn dims(&self) -> usize {
        self.grid.dims()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn at(&self, idx: &[usize]) -> f64 {
        let flat: usize = idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum();
        self.values[flat]
    }

    /// Copies the sub-block starting at `start` with `len` nodes per axis (row-major).
    pub fn block(&self, start: &[usize], len: &[usize]) -> Vec<f64> {
        let mut out = Vec::with_capacity(len.iter().product());
        let mut idx = vec![0usize; start.len()];
        for_each_index(len, |local| {
            for j in 0..local.len() {
                idx[j] = start[j] + local[j];
            }
            out.push(self.at(&idx));
        });
        out
    }

    pub fn to_json(&self) -> String {
        let axes: Vec<Value> = self
            .grid
            .axes()
            .iter()
            .map(|g| Value::from(g.nodes().to_vec()))
            .collect();
        let values = nest(&self.values, &self.grid.shape());
        serde_json::json!({ "axes": axes, "values": values }).to_string()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            axes: Vec<Vec<f64>>,
            values: Value,
        }
        let raw: Raw = serde_json::from_str(s).map_err(|e| WenoError::Config(e.to_string()))?;
        let grid = TensorGrid::try_from(RawGrid { axes: raw.axes })?;
        let mut flat = Vec::with_capacity(grid.node_count());
        flatten(&raw.values, &grid.shape(), &mut flat)?;
        Self::new(grid, flat)
    }
}

pub(crate) fn row_major_strides(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for j in (0..shape.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * shape[j + 1];
    }
    strides
}

/// Visits every multi-index of `shape` in row-major (lexicographic) order.
pub fn for_each_index<F: FnMut(&[usize])>(shape: &[usize], mut f: F) {
    if shape.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; shape.len()];
    loop {
        f(&idx);
        let mut j = shape.len();
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < shape[j] {
                break;
            }
            idx[j] = 0;
        }
    }
}

fn nest(values: &[f64], shape: &[usize]) -> Value {
    match shape {
        [] => Value::from(values[0]),
        [_] => Value::from(values.to_vec()),
        [n, rest @ ..] => {
            let chunk = values.len() / n;
            Value::Array(
                values
                    .chunks(chunk)
                    .map(|c| nest(c, rest))
                    .collect::<Vec<_>>(),
            )
        }
    }
}

fn flatten(value: &Value, shape: &[usize], out: &mut Vec<f64>) -> Result<()> {
    match shape {
        [] => {
            let v = value
                .as_f64()
                .ok_or_else(|| WenoError::Config("expected a number in values".into()))?;
            out.push(v);
            Ok(())
        }
        [n, rest @ ..] => {
            let arr = value
                .as_array()
                .ok_or_else(|| WenoError::Config("expected a nested array in values".into()))?;
            if arr.len() != *n {
                return Err(WenoError::LengthMismatch {
                    expected: *n,
                    got: arr.len(),
                });
            }
            arr.iter().try_for_each(|v| flatten(v, rest, out))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_nodes() {
        let g = build_uniform_grid(0.0, 1.0, 4).unwrap();
        assert_eq!(g.nodes(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g.h_max(), 0.25);
    }

    #[test]
    fn uniform_grid_shifted_interval() {
        let a = -std::f64::consts::PI / 6.0;
        let g = build_uniform_grid(a, 1.0 + a, 32).unwrap();
        assert_eq!(g.len(), 33);
        for w in g.nodes().windows(2) {
            assert!((w[1] - w[0] - 1.0 / 32.0).abs() < 1e-15);
        }
    }

    #[test]
    fn uniform_grid_errors() {
        assert!(matches!(
            build_uniform_grid(1.0, 0.0, 4),
            Err(WenoError::InvalidRange { .. })
        ));
        assert!(matches!(
            build_uniform_grid(0.0, 1.0, 0),
            Err(WenoError::InvalidCount { .. })
        ));
    }

    #[test]
    fn random_grid_is_deterministic_and_increasing() {
        let g1 = build_random_grid(0.0, 1.0, 32, 7).unwrap();
        let g2 = build_random_grid(0.0, 1.0, 32, 7).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(g1.len(), 33);
        assert_eq!(g1.first(), 0.0);
        assert_eq!(g1.last(), 1.0);
        assert!(g1.nodes().windows(2).all(|w| w[0] < w[1]));
        assert_ne!(g1, build_random_grid(0.0, 1.0, 32, 8).unwrap());
    }

    #[test]
    fn random_grid_needs_two_intervals() {
        assert!(matches!(
            build_random_grid(0.0, 1.0, 1, 1),
            Err(WenoError::InvalidCount { .. })
        ));
    }

    #[test]
    fn dyadic_refinement() {
        let g = Grid1D::new(vec![0.0, 0.4, 1.0]).unwrap();
        assert_eq!(refine_dyadic(&g).nodes(), &[0.0, 0.2, 0.4, 0.7, 1.0]);

        let unit = Grid1D::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(refine_dyadic_n(&unit, 2).nodes(), &[0.0, 0.25, 0.5, 0.75, 1.0]);

        let u = build_uniform_grid(0.0, 1.0, 8).unwrap();
        assert_eq!(refine_dyadic(&u), build_uniform_grid(0.0, 1.0, 16).unwrap());
    }

    #[test]
    fn perturbed_grid_stays_near_uniform_nodes() {
        let g = build_perturbed_grid(4, 3).unwrap();
        assert_eq!(g.len(), 17);
        let h = 2.0 / 16.0;
        for (i, &x) in g.nodes().iter().enumerate() {
            assert!((x - (-1.0 + i as f64 * h)).abs() <= h / 2.0);
        }
        assert_eq!(g, build_perturbed_grid(4, 3).unwrap());
    }

    #[test]
    fn zero_perturbation_gives_uniform_grid() {
        let g = build_perturbed_grid_with(4, |_| 0.0).unwrap();
        assert_eq!(g, build_uniform_grid(-1.0, 1.0, 16).unwrap());
    }

    #[test]
    fn perturbed_grid_redraws_violations() {
        // first draw for node 2 collides with node 1, the redraw succeeds
        let draws = [0.5, -0.5, 0.0];
        let mut k = 0;
        let g = build_perturbed_grid_with(2, |half| {
            let v = draws.get(k).copied().unwrap_or(0.0) * 2.0 * half;
            k += 1;
            v
        })
        .unwrap();
        assert_eq!(g.len(), 5);
        assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn locate_half_open_cells() {
        let g = TensorGrid::from_axis(Grid1D::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap());
        assert_eq!(g.locate(&[1.5]).unwrap(), CellIndex(vec![2]));
        assert_eq!(g.locate(&[1.0]).unwrap(), CellIndex(vec![1]));
        assert_eq!(g.locate(&[0.0]).unwrap(), CellIndex(vec![1]));
        assert_eq!(g.locate(&[3.0]).unwrap(), CellIndex(vec![3]));
        assert!(matches!(
            g.locate(&[3.5]),
            Err(WenoError::OutOfDomain { .. })
        ));
        assert!(matches!(
            locate_cell(&g, &[0.5], 2),
            Err(WenoError::InsufficientStencil { .. })
        ));
        assert_eq!(locate_cell(&g, &[1.5], 2).unwrap(), CellIndex(vec![2]));
    }

    #[test]
    fn grid_function_json_round_trip() {
        let grid = TensorGrid::new(vec![
            Grid1D::new(vec![0.0, 0.5, 1.0]).unwrap(),
            Grid1D::new(vec![-1.0, 1.0]).unwrap(),
        ])
        .unwrap();
        let gf = GridFunction::from_fn(grid.clone(), |x| x[0] + 10.0 * x[1]).unwrap();
        assert_eq!(gf.at(&[2, 0]), 1.0 - 10.0);
        let json = gf.to_json();
        assert!(json.contains("\"values\":[[-10.0,10.0],[-9.5,10.5],[-9.0,11.0]]"));
        assert_eq!(GridFunction::from_json(&json).unwrap(), gf);
        assert_eq!(TensorGrid::from_json(&grid.to_json()).unwrap(), grid);
    }

    #[test]
    fn grid_function_rejects_bad_values() {
        let grid = TensorGrid::from_axis(Grid1D::new(vec![0.0, 1.0]).unwrap());
        assert!(GridFunction::new(grid.clone(), vec![1.0]).is_err());
        assert!(GridFunction::new(grid, vec![1.0, f64::NAN]).is_err());
    }
}
