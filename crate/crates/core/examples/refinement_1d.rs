//! Order-of-accuracy tables around the jump of f1 on uniform grids, progressive
//! against classical, for r = 3.
//!
//! ```bash
//! cargo run --release -p progressive-weno --example refinement_1d
//! ```

use progressive_weno::bench::{run_refinement_1d, Refinement1D, RefinementReport, TestFunction};
use progressive_weno::Method;

fn print_orders(report: &RefinementReport) {
    print!("{:>3}", "l");
    for region in report.regions() {
        print!(" {:>6}", format!("s={region}"));
    }
    println!();
    for level in report.levels() {
        print!("{level:>3}");
        for region in report.regions() {
            match report.order(level, region) {
                Some(o) => print!(" {o:>6.2}"),
                None => print!(" {:>6}", "-"),
            }
        }
        println!();
    }
}

fn main() -> progressive_weno::Result<()> {
    for method in [Method::Progressive, Method::Classical] {
        let mut config = Refinement1D::new(TestFunction::F1, 3, method);
        config.eval_points = 2000;
        let report = run_refinement_1d(&config)?;
        println!("\n{} WENO-6, f1, uniform grids", method.name());
        print_orders(&report);
    }
    Ok(())
}
