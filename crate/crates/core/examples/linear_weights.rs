//! Neville step weights and classical optimal weights, on uniform and
//! non-uniform windows.
//!
//! ```bash
//! cargo run -p progressive-weno --example linear_weights
//! ```

use progressive_weno::{
    build_random_grid, classical_optimal_general, classical_optimal_midpoint, midpoint_weight_pair,
    weight_pair_general,
};

fn main() -> progressive_weno::Result<()> {
    let r = 3;
    let window: Vec<f64> = (0..2 * r).map(|i| i as f64).collect();
    let mid = r as f64 - 0.5;

    println!("Neville pairs at the cell midpoint, r = {r}");
    for l in r..=2 * r - 2 {
        for j in 0..=2 * r - 2 - l {
            let general = weight_pair_general(&window, l, j, mid)?;
            let closed = midpoint_weight_pair(r, l, j)?;
            println!(
                "  l={l} j={j}: keep {:.4} shift {:.4} (closed form {:.4} / {:.4})",
                general.keep, general.shift, closed.keep, closed.shift
            );
        }
    }

    for r in 2..=5 {
        println!("classical midpoint weights r={r}: {:?}", classical_optimal_midpoint(r).weights);
    }

    // off-midpoint and on a random window the weights move, but still sum to one
    let g = build_random_grid(0.0, 1.0, 12, 3)?;
    let w = g.window(6, 3)?;
    for x in [w[2] + 0.1 * (w[3] - w[2]), 0.5 * (w[2] + w[3]), w[3]] {
        let c = classical_optimal_general(w, x)?;
        println!(
            "random window, x = {x:.4}: C = {:.4?}, sum = {:.15}",
            c.weights,
            c.sum()
        );
    }
    Ok(())
}
