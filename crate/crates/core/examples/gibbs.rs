//! Overshoot near a jump: the linear interpolant rings, the WENO ones do not.
//!
//! Prints the largest excursion outside the range of the data on the query's
//! side of the jump, over a dense sweep of the cells whose window contains it.
//!
//! ```bash
//! cargo run --release -p progressive-weno --example gibbs
//! ```

use progressive_weno::bench::TestFunction;
use progressive_weno::{build_uniform_grid, interpolate_batch, GridFunction, Method, TensorGrid, WenoParams};

fn main() -> progressive_weno::Result<()> {
    let r = 3;
    for f in [TestFunction::F1, TestFunction::F2] {
        let jump = match f.discontinuity() {
            progressive_weno::bench::Discontinuity::Point(x) => x,
            _ => unreachable!(),
        };
        let (a, b) = f.domain()[0];
        let g = build_uniform_grid(a, b, 128)?;
        let nodes = g.nodes().to_vec();
        let j0 = g.locate(jump)?;
        let gf = GridFunction::from_fn(TensorGrid::from_axis(g), |x| f.eval(x))?;

        // cells j0-r+1 ..= j0+r-1 see the jump in their window; skip the jump cell itself
        let lo = nodes[j0 - r];
        let hi = nodes[j0 + r - 1];
        let points: Vec<Vec<f64>> = (0..4000)
            .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / 4000.0)
            .filter(|&x| !(x > nodes[j0 - 1] && x <= nodes[j0]))
            .map(|x| vec![x])
            .collect();

        println!("{f}: jump {:.3} at x = {jump:.4}", f.jump_size());
        for method in [Method::Linear, Method::Classical, Method::Progressive] {
            let res = interpolate_batch(&gf, &points, &WenoParams::new(r, method))?;
            let mut worst: f64 = 0.0;
            for (p, out) in points.iter().zip(&res) {
                let x = p[0];
                let cell = nodes.partition_point(|&n| n < x).max(1);
                let left = x < jump;
                let side: Vec<f64> = (cell - r..cell + r)
                    .filter(|&i| (nodes[i] < jump) == left)
                    .map(|i| f.eval(&[nodes[i]]))
                    .collect();
                let lo = side.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = side.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                worst = worst.max(lo - out.value).max(out.value - hi);
            }
            println!("  {:<12} max overshoot {:.3e}", method.name(), worst.max(0.0));
        }
    }
    Ok(())
}
