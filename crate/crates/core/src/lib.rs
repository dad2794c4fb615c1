//! Progressive-order WENO-2r point-value interpolation.
//!
//! Data lives on a [`TensorGrid`] (one strictly increasing node vector per
//! axis, not necessarily uniform). A query point is located in a central cell,
//! a `2r`-node window is taken around it on every axis, and the value is built
//! from the `r^n` degree-`r` sub-stencil interpolants:
//!
//! - [`Method::Progressive`] climbs the Aitken–Neville triangle from degree `r`
//!   to `2r-1`, re-weighting each step with the same level-`r` indicators, so
//!   accuracy degrades gradually as a discontinuity approaches.
//! - [`Method::Classical`] takes one convex combination with optimal weights.
//! - [`Method::Linear`] is the plain Lagrange interpolant on the window.
//!
//! ```
//! use progressive_weno::{build_uniform_grid, interpolate_1d, GridFunction, Method, TensorGrid, WenoParams};
//!
//! let grid = TensorGrid::from_axis(build_uniform_grid(0.0, 1.0, 32).unwrap());
//! let gf = GridFunction::from_fn(grid, |x| x[0].sin()).unwrap();
//! let res = interpolate_1d(&gf, 0.4, &WenoParams::new(3, Method::Progressive)).unwrap();
//! assert!((res.value - 0.4f64.sin()).abs() < 1e-9);
//! ```
//!
//! The [`bench`] module holds the test functions and refinement studies used to
//! measure convergence orders.

pub mod bench;
pub mod error;
pub mod grid;
pub mod quadrature;
pub mod smoothness;
pub mod stencil;
pub mod weights;
pub mod weno;

pub use error::{Result, WenoError};
pub use grid::{
    build_perturbed_grid, build_perturbed_grid_with, build_random_grid, build_uniform_grid,
    locate_cell, refine_dyadic, refine_dyadic_n, CellIndex, Grid1D, GridFunction, TensorGrid,
};
pub use smoothness::{
    build_table, level_lookup, smoothness_indicator, IndicatorParams, MeshScale, SmoothnessTable,
};
pub use stencil::{derivative_matrix_1d, lagrange_eval_1d, tensor_lagrange_eval, StencilND};
pub use weights::{
    classical_optimal_general, classical_optimal_midpoint, midpoint_weight_pair, tensor_weight,
    weight_pair_general, OptimalWeights, WeightPair,
};
pub use weno::{
    capture_diagnostics, interpolate_1d, interpolate_batch, interpolate_nd, nonlinear_pair,
    EpsilonRule, InterpResult, Method, NevilleState, PreparedCell, WenoParams,
};
