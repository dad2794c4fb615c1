//! One-dimensional interpolation next to a jump with the three methods, and a
//! look at the Neville triangle kept in the diagnostics.
//!
//! ```bash
//! cargo run -p progressive-weno --example interpolate_1d
//! ```

use progressive_weno::bench::TestFunction;
use progressive_weno::{
    build_uniform_grid, capture_diagnostics, interpolate_1d, GridFunction, Method, TensorGrid,
    WenoParams,
};

fn sci(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" ")
}

fn main() -> progressive_weno::Result<()> {
    let f = TestFunction::F1;
    let (a, b) = f.domain()[0];
    let grid = TensorGrid::from_axis(build_uniform_grid(a, b, 128)?);
    let gf = GridFunction::from_fn(grid.clone(), |x| f.eval(x))?;
    let h = grid.h();

    println!("f1 on 128 uniform cells, jump at x = 0, r = 3");
    println!("{:>10} {:>14} {:>12} {:>12} {:>12}", "x", "exact", "progressive", "classical", "linear");
    // the jump cell is located at offset 0; walk a few cells either side
    let j0 = grid.axis(0).locate(0.0)? as i64;
    for s in -3..=3 {
        let i = (j0 + s) as usize;
        let x = grid.axis(0).nodes()[i - 1] + 0.37 * h;
        let exact = f.eval(&[x]);
        let mut line = format!("{x:>10.5} {exact:>14.10}");
        for m in [Method::Progressive, Method::Classical, Method::Linear] {
            let v = interpolate_1d(&gf, x, &WenoParams::new(3, m))?.value;
            line += &format!(" {:>12.2e}", (v - exact).abs());
        }
        println!("{line}   (cell offset {s})");
    }

    let x = grid.axis(0).nodes()[(j0 - 2) as usize] + 0.5 * h;
    let res = interpolate_1d(&gf, x, &WenoParams::new(3, Method::Progressive).capturing())?;
    let diag = capture_diagnostics(&res)?;
    println!("\nNeville triangle at x = {x:.5} (one cell left of the jump cell)");
    for level in &diag.levels {
        println!("  degree {}: {:.10?}", level.level, level.values);
    }
    for c in &diag.combinations {
        println!(
            "  combine degree {} at {:?}: linear {:.3?} -> nonlinear {}",
            c.level, c.index, c.linear, sci(&c.nonlinear)
        );
    }
    println!("indicators: {}", sci(res.table.entries()));
    Ok(())
}
