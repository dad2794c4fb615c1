//! Tensor-product interpolation of the 2-D test function with a jump along
//! `x1 + x2 = 0`, on a uniform and a perturbed grid, using the batch API.
//!
//! ```bash
//! cargo run -p progressive-weno --example interpolate_2d
//! ```

use progressive_weno::bench::{grid_2d, GridKind, TestFunction};
use progressive_weno::{interpolate_batch, GridFunction, Method, WenoParams};

fn main() -> progressive_weno::Result<()> {
    let f = TestFunction::F4;
    let points: Vec<Vec<f64>> = vec![
        vec![0.2, 0.3],
        vec![-0.31, -0.27],
        vec![0.05, -0.02],
        vec![0.013, -0.04],
    ];
    for kind in [GridKind::Uniform, GridKind::Perturbed] {
        let grid = grid_2d(kind, 6, 11)?;
        let gf = GridFunction::from_fn(grid, |x| f.eval(x))?;
        println!("{} grid, 64 x 64 cells", kind.name());
        for method in [Method::Progressive, Method::Classical, Method::Linear] {
            let res = interpolate_batch(&gf, &points, &WenoParams::new(3, method))?;
            let errs: Vec<String> = points
                .iter()
                .zip(&res)
                .map(|(p, r)| format!("{:.1e}", (r.value - f.eval(p)).abs()))
                .collect();
            println!("  {:<12} errors {}", method.name(), errs.join("  "));
        }
    }
    Ok(())
}
