//! Building grids, refining them and locating query points.
//!
//! ```bash
//! cargo run -p progressive-weno --example grids
//! ```

use progressive_weno::{
    build_perturbed_grid, build_random_grid, build_uniform_grid, locate_cell, refine_dyadic,
    GridFunction, TensorGrid,
};

fn main() -> progressive_weno::Result<()> {
    let uniform = build_uniform_grid(0.0, 1.0, 8)?;
    println!("uniform, 8 cells: {:?}", uniform.nodes());

    let random = build_random_grid(0.0, 1.0, 8, 42)?;
    println!("random (seed 42): {:.4?}", random.nodes());
    println!("  h_max = {:.4}", random.h_max());

    let finer = refine_dyadic(&random);
    println!("after one dyadic refinement: {} cells, h_max = {:.4}", finer.intervals(), finer.h_max());

    let perturbed = build_perturbed_grid(3, 7)?;
    println!("perturbed level 3 on [-1, 1]: {:.4?}", perturbed.nodes());

    // cells are half-open (x[i-1], x[i]]
    for x in [0.0, 0.125, 0.126, 1.0] {
        println!("x = {x:<6} lies in cell {}", uniform.locate(x)?);
    }

    let grid = TensorGrid::new(vec![build_uniform_grid(-1.0, 1.0, 16)?, perturbed])?;
    let cell = locate_cell(&grid, &[0.1, -0.2], 3)?;
    println!("2-D point (0.1, -0.2) -> cell {:?} with a full r = 3 window", cell.0);
    match locate_cell(&grid, &[-0.95, 0.0], 3) {
        Ok(_) => println!("unexpected: boundary cell has a window"),
        Err(e) => println!("near the boundary: {e}"),
    }

    let gf = GridFunction::from_fn(TensorGrid::from_axis(build_uniform_grid(0.0, 1.0, 4)?), |x| {
        x[0] * x[0]
    })?;
    println!("grid function JSON: {}", gf.to_json());
    Ok(())
}
