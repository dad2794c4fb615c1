//! Smoothness indicator tables for smooth and discontinuous data.
//!
//! Smooth data gives indicators of size `h^2`; a sub-stencil that straddles a
//! jump keeps an indicator of order one however fine the grid.
//!
//! ```bash
//! cargo run -p progressive-weno --example smoothness
//! ```

use progressive_weno::{build_table, build_uniform_grid, GridFunction, IndicatorParams, TensorGrid};

fn fmt(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(" ")
}

fn main() -> progressive_weno::Result<()> {
    let r = 3;
    println!("{:>6} {:>36} {:>36}", "cells", "smooth sin(x) + x", "step at 0.51");
    for level in 5..=9 {
        let grid = TensorGrid::from_axis(build_uniform_grid(0.0, 1.0, 1 << level)?);
        let cell = grid.locate(&[0.5])?;
        let smooth = GridFunction::from_fn(grid.clone(), |x| x[0].sin() + x[0])?;
        // jump just right of the query cell: only the leftmost sub-stencil avoids it
        let step = GridFunction::from_fn(grid, |x| if x[0] > 0.501 { 1.0 } else { 0.0 })?;
        let a = build_table(&smooth, &cell, r, &IndicatorParams::default())?;
        let b = build_table(&step, &cell, r, &IndicatorParams::default())?;
        println!(
            "{:>6} {:>36} {:>36}",
            1 << level,
            fmt(a.entries()),
            fmt(b.entries())
        );
    }
    Ok(())
}
