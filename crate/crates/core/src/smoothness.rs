//! Smoothness indicators of the degree-`r` sub-stencil interpolants.
//!
//! For a sub-stencil polynomial `p` and central cell `G = prod [x_{i_j-1}, x_{i_j}]`,
//!
//! ```text
//! I(p) = sum_{l in {0..r}^n \ {0}}  prod_j h_j^(2 l_j - 1)  *  integral_G (d^l p)^2
//! ```
//!
//! The integrals are evaluated with a tensor Gauss–Legendre rule, which is
//! exact once it has `r + 1` points per axis. The indicators are computed once
//! per cell at level `r`; every higher Neville level reads them back through
//! [`level_lookup`].
//!
//! The cost grows like `(r+1)^n` derivative terms per sub-stencil, so this is
//! meant for small `n`.

use crate::error::{Result, WenoError};
use crate::grid::{for_each_index, row_major_strides, CellIndex, GridFunction};
use crate::quadrature::gauss_legendre_on;
use crate::stencil::{basis_derivatives, Matrix, StencilND};

/// Which mesh width scales the derivative terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeshScale {
    /// Per-axis `h_max` of the whole grid.
    #[default]
    Global,
    /// Largest gap among the sub-stencil's own nodes.
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IndicatorParams {
    /// Gauss points per axis; `None` means `r + 1`.
    pub quad_points: Option<usize>,
    pub mesh_scale: MeshScale,
}

impl IndicatorParams {
    pub fn with_quad_points(q: usize) -> Self {
        Self {
            quad_points: Some(q),
            ..Self::default()
        }
    }

    fn points_for(&self, r: usize) -> Result<usize> {
        let q = self.quad_points.unwrap_or(r + 1);
        if q < r + 1 {
            return Err(WenoError::QuadratureTooSmall { min: r + 1, got: q });
        }
        Ok(q)
    }
}

/// Indicators `I^r_k` for every `k in {0..r-1}^n`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessTable {
    r: usize,
    dims: usize,
    entries: Vec<f64>,
    /// Central cell bounds `(lo, hi)` per axis, when built from data.
    central_cell: Option<Vec<(f64, f64)>>,
}

impl SmoothnessTable {
    /// Table from explicit entries (row-major over `{0..r-1}^dims`).
    pub fn from_entries(r: usize, dims: usize, entries: Vec<f64>) -> Result<Self> {
        let expected = r.pow(dims as u32);
        if entries.len() != expected {
            return Err(WenoError::LengthMismatch {
                expected,
                got: entries.len(),
            });
        }
        if let Some(index) = entries.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(WenoError::NonFinite { index });
        }
        Ok(Self {
            r,
            dims,
            entries,
            central_cell: None,
        })
    }

    /// Every entry equal to `value`; with equal indicators the nonlinear weights equal the linear ones.
    pub fn constant(r: usize, dims: usize, value: f64) -> Self {
        Self {
            r,
            dims,
            entries: vec![value; r.pow(dims as u32)],
            central_cell: None,
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn central_cell(&self) -> Option<&[(f64, f64)]> {
        self.central_cell.as_deref()
    }

    /// `I^r_k`.
    pub fn get(&self, k: &[usize]) -> f64 {
        self.entries[self.flat(k)]
    }

    #[inline]
    pub(crate) fn flat(&self, k: &[usize]) -> usize {
        k.iter().fold(0, |acc, &kj| acc * self.r + kj)
    }
}

/// Indicator of the tensor interpolant on `stencil` (width `r + 1` per axis) over the central cell.
pub fn smoothness_indicator(
    gf: &GridFunction,
    stencil: &StencilND,
    cell: &CellIndex,
    params: &IndicatorParams,
) -> Result<f64> {
    let r = stencil.degree();
    if r < 1 {
        return Err(WenoError::InvalidParameter(
            "indicator stencils need at least two points per axis".into(),
        ));
    }
    let q = params.points_for(r)?;
    if stencil.dims() != gf.dims() || cell.dims() != gf.dims() {
        return Err(WenoError::DimensionMismatch {
            expected: gf.dims(),
            got: stencil.dims(),
        });
    }
    let grid = gf.grid();
    for (axis, (&s, g)) in stencil.start.iter().zip(grid.axes()).enumerate() {
        let i = cell.0[axis];
        if s + stencil.points > g.len() || i == 0 || i >= g.len() {
            return Err(WenoError::InsufficientStencil {
                axis,
                cell: i,
                lo: s as i64,
                hi: (s + stencil.points - 1) as i64,
                last: g.intervals(),
            });
        }
    }
    let axes: Vec<AxisRule> = (0..gf.dims())
        .map(|j| {
            let g = grid.axis(j);
            let i = cell.0[j];
            let nodes = &g.nodes()[stencil.start[j]..stencil.start[j] + stencil.points];
            let scale = match params.mesh_scale {
                MeshScale::Global => g.h_max(),
                MeshScale::Local => nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max),
            };
            AxisRule::new(nodes, g.nodes()[i - 1], g.nodes()[i], q, r, scale)
        })
        .collect();
    let values = gf.block(&stencil.start, &vec![stencil.points; gf.dims()]);
    let refs: Vec<&AxisRule> = axes.iter().collect();
    Ok(indicator_from_block(&values, &refs, r))
}

/// Quadrature rule on one axis of the central cell plus the derivative matrices of the stencil basis.
struct AxisRule {
    weights: Vec<f64>,
    /// `derivs[o]`: `q x (r+1)` matrix of `o`-th derivatives at the quadrature points.
    derivs: Vec<Matrix>,
    scale: f64,
}

impl AxisRule {
    fn new(nodes: &[f64], lo: f64, hi: f64, q: usize, r: usize, scale: f64) -> Self {
        let (points, weights) = gauss_legendre_on(q, lo, hi);
        let derivs = (0..=r)
            .map(|o| basis_derivatives(nodes, o, &points))
            .collect();
        Self {
            weights,
            derivs,
            scale,
        }
    }
}

/// Applies `m` along `axis` of the row-major tensor `data` with shape `shape`.
fn mode_product(data: &[f64], shape: &[usize], axis: usize, m: &Matrix) -> (Vec<f64>, Vec<usize>) {
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    let n = shape[axis];
    let mut out = vec![0.0; outer * m.rows * inner];
    for o in 0..outer {
        for p in 0..m.rows {
            let row = m.row(p);
            let dst = &mut out[(o * m.rows + p) * inner..(o * m.rows + p + 1) * inner];
            for (c, &a) in row.iter().enumerate().take(n) {
                if a == 0.0 {
                    continue;
                }
                let src = &data[(o * n + c) * inner..(o * n + c + 1) * inner];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
    }
    let mut new_shape = shape.to_vec();
    new_shape[axis] = m.rows;
    (out, new_shape)
}

fn indicator_from_block(values: &[f64], axes: &[&AxisRule], r: usize) -> f64 {
    let dims = axes.len();
    let orders = vec![r + 1; dims];
    let mut total = 0.0;
    for_each_index(&orders, |l| {
        if l.iter().all(|&o| o == 0) {
            return;
        }
        let mut data = values.to_vec();
        let mut shape = vec![r + 1; dims];
        for (axis, rule) in axes.iter().enumerate() {
            let (d, s) = mode_product(&data, &shape, axis, &rule.derivs[l[axis]]);
            data = d;
            shape = s;
        }
        let strides = row_major_strides(&shape);
        let mut integral = 0.0;
        for_each_index(&shape, |qi| {
            let w: f64 = qi
                .iter()
                .zip(axes)
                .map(|(&qa, rule)| rule.weights[qa])
                .product();
            let flat: usize = qi.iter().zip(&strides).map(|(a, b)| a * b).sum();
            integral += w * data[flat] * data[flat];
        });
        let factor: f64 = l
            .iter()
            .zip(axes)
            .map(|(&o, rule)| rule.scale.powi(2 * o as i32 - 1))
            .product();
        total += factor * integral;
    });
    total
}

/// Indicators for all `r^n` base sub-stencils around `cell`.
pub fn build_table(
    gf: &GridFunction,
    cell: &CellIndex,
    r: usize,
    params: &IndicatorParams,
) -> Result<SmoothnessTable> {
    if r < 1 {
        return Err(WenoError::InvalidParameter("r must be at least 1".into()));
    }
    gf.grid().check_window(cell, r)?;
    let q = params.points_for(r)?;
    let dims = gf.dims();
    let grid = gf.grid();
    let window_len = vec![2 * r; dims];
    let start: Vec<usize> = cell.0.iter().map(|&i| i - r).collect();
    let window = gf.block(&start, &window_len);
    let window_nodes: Vec<&[f64]> = (0..dims)
        .map(|j| &grid.axis(j).nodes()[start[j]..start[j] + 2 * r])
        .collect();
    let central: Vec<(f64, f64)> = (0..dims)
        .map(|j| (window_nodes[j][r - 1], window_nodes[j][r]))
        .collect();

    // per axis, one rule per base offset k_j
    let rules: Vec<Vec<AxisRule>> = (0..dims)
        .map(|j| {
            (0..r)
                .map(|k| {
                    let nodes = &window_nodes[j][k..k + r + 1];
                    let scale = match params.mesh_scale {
                        MeshScale::Global => grid.axis(j).h_max(),
                        MeshScale::Local => {
                            nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
                        }
                    };
                    AxisRule::new(nodes, central[j].0, central[j].1, q, r, scale)
                })
                .collect()
        })
        .collect();

    let window_strides = row_major_strides(&window_len);
    let sub_shape = vec![r + 1; dims];
    let mut entries = Vec::with_capacity(r.pow(dims as u32));
    let mut block = Vec::with_capacity((r + 1).pow(dims as u32));
    for_each_index(&vec![r; dims], |k| {
        block.clear();
        for_each_index(&sub_shape, |local| {
            let flat: usize = local
                .iter()
                .zip(k)
                .zip(&window_strides)
                .map(|((a, b), s)| (a + b) * s)
                .sum();
            block.push(window[flat]);
        });
        let axes: Vec<&AxisRule> = k.iter().enumerate().map(|(j, &kj)| &rules[j][kj]).collect();
        entries.push(indicator_from_block(&block, &axes, r));
    });
    Ok(SmoothnessTable {
        r,
        dims,
        entries,
        central_cell: Some(central),
    })
}

/// Level-`l` indicator for the candidate `k + v`: `I^r_{k + (l - (r-1)) v}`.
pub fn level_lookup(table: &SmoothnessTable, l: usize, k: &[usize], v: &[bool]) -> Result<f64> {
    let r = table.r;
    if k.len() != table.dims || v.len() != table.dims {
        return Err(WenoError::DimensionMismatch {
            expected: table.dims,
            got: k.len(),
        });
    }
    if r < 2 || l < r || l > 2 * r - 2 || k.iter().any(|&kj| kj > 2 * r - 2 - l) {
        return Err(WenoError::IndexOutOfRange(format!(
            "level lookup needs r <= l <= 2r-2 and k_j <= 2r-2-l (r={r}, l={l}, k={k:?})"
        )));
    }
    let jump = l + 1 - r;
    let idx: Vec<usize> = k
        .iter()
        .zip(v)
        .map(|(&kj, &vj)| if vj { kj + jump } else { kj })
        .collect();
    Ok(table.get(&idx))
}
