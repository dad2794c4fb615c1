//! Orders per cell near the line `x1 + x2 = 0` for f4, level 7 against level 6.
//!
//! Rows are `s2` from top (4) to bottom (-4), columns `s1` from -5 to 5.
//!
//! ```bash
//! cargo run --release -p progressive-weno --example refinement_2d
//! ```

use progressive_weno::bench::{reduced_taus, run_refinement_2d, Refinement2D, Region, TestFunction};
use progressive_weno::Method;

fn main() -> progressive_weno::Result<()> {
    for method in [Method::Progressive, Method::Classical] {
        let mut config = Refinement2D::new(TestFunction::F4, 3, method);
        config.levels = 6..=7;
        config.taus = reduced_taus();
        let report = run_refinement_2d(&config)?;
        println!("\n{} WENO-6, f4, orders at level 7", method.name());
        for s2 in (-4..=4).rev() {
            print!("{s2:>3} |");
            for s1 in -5..=5 {
                let o = report.order(7, Region::Cell(s1, s2)).unwrap_or(f64::NAN);
                print!(" {o:>5.2}");
            }
            println!();
        }
    }

    let mut smooth = Refinement2D::new(TestFunction::F3, 3, Method::Progressive);
    smooth.taus = reduced_taus();
    let report = run_refinement_2d(&smooth)?;
    println!("\nsmooth f3, r = 3");
    for level in report.levels() {
        println!(
            "  level {level}: error {:.3e}, order {}",
            report.error(level, Region::Global).unwrap_or(f64::NAN),
            report
                .order(level, Region::Global)
                .map_or("-".to_string(), |o| format!("{o:.2}"))
        );
    }
    Ok(())
}
