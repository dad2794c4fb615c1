//! Test functions, refinement studies and report output.

pub mod functions;
pub mod refinement;
pub mod report;

pub use functions::{eval_test_function, measure_error, Discontinuity, TestFunction};
pub use refinement::{
    default_taus, grid_1d, grid_2d, reduced_taus, run_refinement_1d, run_refinement_1d_with,
    run_refinement_2d, window_points_1d, Refinement1D, Refinement2D,
};
pub use report::{
    emit_report, numerical_order, GridKind, RefinementReport, Region, ReportFormat, ReportRow,
    ERROR_FLOOR,
};
