//! Lagrange interpolants on sub-stencils: Neville evaluation in 1-D, axis-by-axis
//! tensor evaluation in n-D, and derivative matrices from the Newton form.

use crate::error::{Result, WenoError};
use crate::grid::{CellIndex, GridFunction};

/// A box of `points` nodes per axis starting at global node index `start[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StencilND {
    pub start: Vec<usize>,
    pub points: usize,
}

impl StencilND {
    /// Sub-stencil of polynomial degree `degree` at offset `k` inside the `2r` window of `cell`.
    ///
    /// Along axis `j` it covers nodes `i_j - r + k_j ..= i_j - r + k_j + degree`.
    pub fn substencil(cell: &CellIndex, r: usize, k: &[usize], degree: usize) -> Result<Self> {
        if k.len() != cell.dims() {
            return Err(WenoError::DimensionMismatch {
                expected: cell.dims(),
                got: k.len(),
            });
        }
        let mut start = Vec::with_capacity(k.len());
        for (axis, (&i, &kj)) in cell.0.iter().zip(k).enumerate() {
            if kj + degree > 2 * r - 1 {
                return Err(WenoError::IndexOutOfRange(format!(
                    "offset {kj} with degree {degree} leaves the 2r={} window on axis {axis}",
                    2 * r
                )));
            }
            if i < r {
                return Err(WenoError::InsufficientStencil {
                    axis,
                    cell: i,
                    lo: i as i64 - r as i64,
                    hi: i as i64 + r as i64 - 1,
                    last: 0,
                });
            }
            start.push(i - r + kj);
        }
        Ok(Self {
            start,
            points: degree + 1,
        })
    }

    /// The full `2r`-node window of `cell`.
    pub fn window(cell: &CellIndex, r: usize) -> Result<Self> {
        Self::substencil(cell, r, &vec![0; cell.dims()], 2 * r - 1)
    }

    pub fn dims(&self) -> usize {
        self.start.len()
    }

    pub fn degree(&self) -> usize {
        self.points - 1
    }

    fn check_within(&self, gf: &GridFunction) -> Result<()> {
        if self.dims() != gf.dims() {
            return Err(WenoError::DimensionMismatch {
                expected: gf.dims(),
                got: self.dims(),
            });
        }
        for (axis, (&s, g)) in self.start.iter().zip(gf.grid().axes()).enumerate() {
            if s + self.points > g.len() {
                return Err(WenoError::InsufficientStencil {
                    axis,
                    cell: s,
                    lo: s as i64,
                    hi: (s + self.points - 1) as i64,
                    last: g.intervals(),
                });
            }
        }
        Ok(())
    }
}

fn check_nodes(nodes: &[f64]) -> Result<()> {
    for i in 1..nodes.len() {
        if nodes[i] == nodes[i - 1] {
            return Err(WenoError::DuplicateNode { index: i });
        }
        if !(nodes[i] > nodes[i - 1]) {
            return Err(WenoError::NotIncreasing { index: i });
        }
    }
    Ok(())
}

/// Value at `x` of the polynomial interpolating `(nodes, values)`, by Neville's recurrence.
pub fn lagrange_eval_1d(nodes: &[f64], values: &[f64], x: f64) -> Result<f64> {
    if nodes.len() != values.len() {
        return Err(WenoError::LengthMismatch {
            expected: nodes.len(),
            got: values.len(),
        });
    }
    if nodes.is_empty() {
        return Err(WenoError::InvalidCount {
            what: "interpolation nodes",
            min: 1,
            got: 0,
        });
    }
    check_nodes(nodes)?;
    let mut work = values.to_vec();
    Ok(neville_in_place(nodes, &mut work, x))
}

/// Neville's recurrence on a scratch copy of the values; `work[0]` holds the result.
pub(crate) fn neville_in_place(nodes: &[f64], work: &mut [f64], x: f64) -> f64 {
    let n = nodes.len();
    for level in 1..n {
        for j in 0..n - level {
            let left = nodes[j];
            let right = nodes[j + level];
            work[j] = ((x - right) * work[j] + (left - x) * work[j + 1]) / (left - right);
        }
    }
    work[0]
}

/// Tensor-product Lagrange interpolant of `gf` on `stencil`, evaluated at `x`.
///
/// Interpolates along the last axis for every fiber, then recurses on the
/// remaining axes.
pub fn tensor_lagrange_eval(gf: &GridFunction, stencil: &StencilND, x: &[f64]) -> Result<f64> {
    stencil.check_within(gf)?;
    if x.len() != gf.dims() {
        return Err(WenoError::DimensionMismatch {
            expected: gf.dims(),
            got: x.len(),
        });
    }
    let len = vec![stencil.points; stencil.dims()];
    let mut block = gf.block(&stencil.start, &len);
    let axis_nodes: Vec<&[f64]> = (0..gf.dims())
        .map(|j| &gf.grid().axis(j).nodes()[stencil.start[j]..stencil.start[j] + stencil.points])
        .collect();
    Ok(reduce_block(&mut block, &axis_nodes, x))
}

/// Collapses a row-major `m^n` block of samples to the interpolated value at `x`.
pub(crate) fn reduce_block(block: &mut [f64], axis_nodes: &[&[f64]], x: &[f64]) -> f64 {
    let mut size = block.len();
    for axis in (0..axis_nodes.len()).rev() {
        let nodes = axis_nodes[axis];
        let m = nodes.len();
        let fibers = size / m;
        for f in 0..fibers {
            let v = neville_in_place(nodes, &mut block[f * m..(f + 1) * m], x[axis]);
            block[f] = v;
        }
        size = fibers;
    }
    block[0]
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    /// `self * v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// `D[q][j]` is the `order`-th derivative of the `j`-th Lagrange basis polynomial at `points[q]`.
pub fn derivative_matrix_1d(nodes: &[f64], order: usize, points: &[f64]) -> Result<Matrix> {
    if nodes.len() < 2 || order < 1 || order > nodes.len() - 1 {
        return Err(WenoError::OrderOutOfRange {
            order,
            max: nodes.len().saturating_sub(1),
        });
    }
    check_nodes(nodes)?;
    Ok(basis_derivatives(nodes, order, points))
}

/// Like [`derivative_matrix_1d`] but also accepts `order == 0` (basis values) and
/// orders above the degree (all zeros). Nodes are assumed distinct.
pub(crate) fn basis_derivatives(nodes: &[f64], order: usize, points: &[f64]) -> Matrix {
    let n = nodes.len();
    // coeffs[j * n + k]: k-th Newton coefficient of the j-th basis polynomial
    let mut coeffs = vec![0.0; n * n];
    for j in 0..n {
        let c = &mut coeffs[j * n..(j + 1) * n];
        c[j] = 1.0;
        for level in 1..n {
            for k in (level..n).rev() {
                c[k] = (c[k] - c[k - 1]) / (nodes[k] - nodes[k - level]);
            }
        }
    }
    let factorial: f64 = (1..=order).map(|v| v as f64).product();
    let mut data = Vec::with_capacity(points.len() * n);
    let mut taylor = vec![0.0; order + 1];
    for &x in points {
        for j in 0..n {
            let c = &coeffs[j * n..(j + 1) * n];
            taylor.iter_mut().for_each(|t| *t = 0.0);
            taylor[0] = c[n - 1];
            for k in (0..n - 1).rev() {
                let dx = x - nodes[k];
                for d in (1..=order).rev() {
                    taylor[d] = taylor[d] * dx + taylor[d - 1];
                }
                taylor[0] = taylor[0] * dx + c[k];
            }
            data.push(factorial * taylor[order]);
        }
    }
    Matrix {
        rows: points.len(),
        cols: n,
        data,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid1D, TensorGrid};

    #[test]
    fn neville_reproduces_low_degree() {
        let v = lagrange_eval_1d(&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0], 1.37).unwrap();
        assert!((v - 1.37).abs() < 1e-15);
        let v = lagrange_eval_1d(&[0.0, 1.0, 3.0], &[0.0, 1.0, 9.0], 2.0).unwrap();
        assert!((v - 4.0).abs() < 1e-14);
        // extrapolation is allowed
        let v = lagrange_eval_1d(&[0.0, 1.0], &[0.0, 1.0], 2.0).unwrap();
        assert_eq!(v, 2.0);
    }

    #[test]
    fn neville_rejects_bad_input() {
        assert!(matches!(
            lagrange_eval_1d(&[0.0, 1.0], &[0.0], 0.5),
            Err(WenoError::LengthMismatch { .. })
        ));
        assert!(matches!(
            lagrange_eval_1d(&[0.0, 1.0, 1.0], &[0.0, 1.0, 2.0], 0.5),
            Err(WenoError::DuplicateNode { .. })
        ));
        assert_eq!(lagrange_eval_1d(&[3.0], &[7.0], 100.0).unwrap(), 7.0);
    }

    fn grid2(nodes: &[f64]) -> TensorGrid {
        let g = Grid1D::new(nodes.to_vec()).unwrap();
        TensorGrid::new(vec![g.clone(), g]).unwrap()
    }

    #[test]
    fn tensor_bilinear_and_biquadratic() {
        let gf = GridFunction::from_fn(grid2(&[0.0, 1.0]), |x| x[0] + x[1]).unwrap();
        let s = StencilND {
            start: vec![0, 0],
            points: 2,
        };
        let v = tensor_lagrange_eval(&gf, &s, &[0.3, 0.7]).unwrap();
        assert!((v - 1.0).abs() < 1e-15);

        let gf = GridFunction::from_fn(grid2(&[0.0, 1.0, 2.0]), |x| x[0] * x[0] * x[1] * x[1]).unwrap();
        let s = StencilND {
            start: vec![0, 0],
            points: 3,
        };
        let v = tensor_lagrange_eval(&gf, &s, &[0.5, 0.5]).unwrap();
        // direct basis-sum oracle: sum_{a,b} f(a,b) L_a(0.5) L_b(0.5)
        let basis = |p: usize, t: f64| {
            let n = [0.0, 1.0, 2.0];
            (0..3)
                .filter(|&q| q != p)
                .map(|q| (t - n[q]) / (n[p] - n[q]))
                .product::<f64>()
        };
        let mut oracle = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                let (xa, xb) = (a as f64, b as f64);
                oracle += xa * xa * xb * xb * basis(a, 0.5) * basis(b, 0.5);
            }
        }
        assert!((oracle - 0.0625).abs() < 1e-15);
        assert!((v - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn tensor_rejects_stencil_outside_grid() {
        let gf = GridFunction::from_fn(grid2(&[0.0, 1.0, 2.0]), |x| x[0]).unwrap();
        let s = StencilND {
            start: vec![1, 0],
            points: 3,
        };
        assert!(matches!(
            tensor_lagrange_eval(&gf, &s, &[0.5, 0.5]),
            Err(WenoError::InsufficientStencil { .. })
        ));
    }

    #[test]
    fn derivative_matrices() {
        let d = derivative_matrix_1d(&[0.0, 1.0], 1, &[0.3, 5.0]).unwrap();
        for q in 0..2 {
            assert!((d.get(q, 0) + 1.0).abs() < 1e-15);
            assert!((d.get(q, 1) - 1.0).abs() < 1e-15);
        }
        let d = derivative_matrix_1d(&[0.0, 1.0, 2.0], 2, &[0.1, 1.7]).unwrap();
        for q in 0..2 {
            assert_eq!(d.row(q), &[1.0, -2.0, 1.0]);
        }
        assert!(matches!(
            derivative_matrix_1d(&[0.0, 1.0, 2.0], 3, &[0.0]),
            Err(WenoError::OrderOutOfRange { .. })
        ));
        assert!(derivative_matrix_1d(&[0.0, 1.0, 2.0], 0, &[0.0]).is_err());
    }

    #[test]
    fn derivative_of_monomial_is_factorial() {
        let nodes = [-0.3, 0.1, 0.45, 0.9, 1.2];
        for m in 1..nodes.len() {
            let vals: Vec<f64> = nodes.iter().map(|x: &f64| x.powi(m as i32)).collect();
            let d = derivative_matrix_1d(&nodes, m, &[-0.2, 0.5, 1.1]).unwrap();
            let fact: f64 = (1..=m).map(|v| v as f64).product();
            for got in d.apply(&vals) {
                assert!((got - fact).abs() <= 1e-10 * fact, "m={m}: {got}");
            }
        }
    }

    #[test]
    fn basis_values_match_neville() {
        let nodes = [0.0, 0.3, 1.0, 1.4];
        let vals = [1.0, -2.0, 0.5, 3.0];
        let b = basis_derivatives(&nodes, 0, &[0.7]);
        let via_basis: f64 = b.apply(&vals)[0];
        let via_neville = lagrange_eval_1d(&nodes, &vals, 0.7).unwrap();
        assert!((via_basis - via_neville).abs() < 1e-13);
        // derivative orders above the degree vanish
        let z = basis_derivatives(&nodes, 4, &[0.2]);
        assert!(z.data.iter().all(|&v| v.abs() < 1e-9));
    }
}
