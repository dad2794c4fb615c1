//! Grid-refinement studies: errors per region on a sequence of grids and the
//! numerical orders `log2(E^{l-1} / E^l)` between consecutive levels.
//!
//! 1-D: level `l` has `2^l` cells. The jump cell `j0` is the cell containing
//! the jump point, and `N` equispaced points on `[x_{j0-5}, x_{j0+4}]` are
//! grouped by cell offset `s = cell - j0` in `-4..=4`.
//!
//! 2-D: the domain is `[-1, 1]^2` with `2^l` cells per axis. Each cell gets the
//! points `tau x_{i-1} + (1 - tau) x_i` per axis for every `tau` in the set.
//! Discontinuous functions are reported per cell offset `(s1, s2)` from the
//! node at the origin; smooth ones as a single region over the box
//! `[-5.5h, 5.5h]^2`.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::bench::functions::{Discontinuity, TestFunction};
use crate::bench::report::{GridKind, RefinementReport, Region};
use crate::error::{Result, WenoError};
use crate::grid::{
    build_perturbed_grid, build_random_grid, build_uniform_grid, refine_dyadic_n, CellIndex,
    Grid1D, GridFunction, TensorGrid,
};
use crate::weno::{Method, PreparedCell, WenoParams};

/// Level of the seed grid for random 1-D studies.
pub const RANDOM_BASE_LEVEL: u32 = 5;
/// Level of the seed grid for perturbed 2-D studies.
pub const PERTURBED_BASE_LEVEL: u32 = 4;

/// `tau(k) = 0.3 + 0.1 k` for `k = 0..=4`.
pub fn default_taus() -> Vec<f64> {
    (0..5).map(|k| 0.3 + 0.1 * k as f64).collect()
}

/// `k in {0, 2, 4}`: nine points per cell in 2-D.
pub fn reduced_taus() -> Vec<f64> {
    vec![0.3, 0.5, 0.7]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Refinement1D {
    pub function: TestFunction,
    pub r: usize,
    pub method: Method,
    pub grid: GridKind,
    pub seed: u64,
    pub levels: RangeInclusive<u32>,
    pub eval_points: usize,
    /// Overrides the default exponent `(r + 1) / 2`.
    pub t: Option<f64>,
}

impl Refinement1D {
    pub fn new(function: TestFunction, r: usize, method: Method) -> Self {
        Self {
            function,
            r,
            method,
            grid: GridKind::Uniform,
            seed: 0,
            levels: 5..=9,
            eval_points: 10_000,
            t: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Refinement2D {
    pub function: TestFunction,
    pub r: usize,
    pub method: Method,
    pub grid: GridKind,
    pub seed: u64,
    pub levels: RangeInclusive<u32>,
    pub taus: Vec<f64>,
    pub t: Option<f64>,
}

impl Refinement2D {
    pub fn new(function: TestFunction, r: usize, method: Method) -> Self {
        Self {
            function,
            r,
            method,
            grid: GridKind::Uniform,
            seed: 0,
            levels: 4..=7,
            taus: default_taus(),
            t: None,
        }
    }
}

fn params(r: usize, method: Method, t: Option<f64>) -> Result<WenoParams> {
    let mut p = WenoParams::new(r, method);
    if let Some(t) = t {
        p.t = t;
    }
    p.validate()?;
    Ok(p)
}

fn check_levels(levels: &RangeInclusive<u32>, min: u32) -> Result<()> {
    if levels.is_empty() || *levels.start() < min || *levels.end() > 24 {
        return Err(WenoError::Config(format!(
            "levels {}..{} must be non-empty within {min}..24",
            levels.start(),
            levels.end()
        )));
    }
    Ok(())
}

/// Grid on `[a, b]` at `level` for a 1-D study.
pub fn grid_1d(kind: GridKind, a: f64, b: f64, level: u32, seed: u64) -> Result<Grid1D> {
    match kind {
        GridKind::Uniform => build_uniform_grid(a, b, 1 << level),
        GridKind::Random => {
            if level < RANDOM_BASE_LEVEL {
                return Err(WenoError::Config(format!(
                    "random grids start at level {RANDOM_BASE_LEVEL}, got {level}"
                )));
            }
            let base = build_random_grid(a, b, 1 << RANDOM_BASE_LEVEL, seed)?;
            Ok(refine_dyadic_n(&base, (level - RANDOM_BASE_LEVEL) as usize))
        }
        GridKind::Perturbed => Err(WenoError::Config(
            "perturbed grids are only used by 2-D studies".into(),
        )),
    }
}

/// Tensor grid on `[-1, 1]^2` at `level` for a 2-D study.
pub fn grid_2d(kind: GridKind, level: u32, seed: u64) -> Result<TensorGrid> {
    let axes = match kind {
        GridKind::Uniform => {
            let g = build_uniform_grid(-1.0, 1.0, 1 << level)?;
            vec![g.clone(), g]
        }
        GridKind::Perturbed => {
            if level < PERTURBED_BASE_LEVEL {
                return Err(WenoError::Config(format!(
                    "perturbed grids start at level {PERTURBED_BASE_LEVEL}, got {level}"
                )));
            }
            (0..2u64)
                .map(|a| {
                    let base = build_perturbed_grid(PERTURBED_BASE_LEVEL, seed.wrapping_add(a))?;
                    Ok(refine_dyadic_n(&base, (level - PERTURBED_BASE_LEVEL) as usize))
                })
                .collect::<Result<Vec<_>>>()?
        }
        GridKind::Random => {
            return Err(WenoError::Config(
                "2-D studies use uniform or perturbed grids".into(),
            ))
        }
    };
    TensorGrid::new(axes)
}

/// Equispaced evaluation points of the 1-D window around the jump cell, with their offsets `s`.
pub fn window_points_1d(grid: &Grid1D, jump: f64, count: usize) -> Result<(usize, Vec<(i64, f64)>)> {
    if count < 2 {
        return Err(WenoError::Config("need at least two evaluation points".into()));
    }
    let j0 = grid.locate(jump)?;
    if j0 < 5 || j0 + 4 > grid.intervals() {
        return Err(WenoError::Config(format!(
            "jump cell {j0} is too close to the boundary for the evaluation window"
        )));
    }
    let a = grid.nodes()[j0 - 5];
    let b = grid.nodes()[j0 + 4];
    let step = (b - a) / (count - 1) as f64;
    let points = (0..count)
        .map(|i| {
            let x = if i == count - 1 { b } else { a + i as f64 * step };
            // x_{j0-5} itself sits in cell j0-5; fold it into the first interval
            let cell = grid.locate(x)?.max(j0 - 4);
            Ok((cell as i64 - j0 as i64, x))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((j0, points))
}

/// 1-D study of a built-in test function.
pub fn run_refinement_1d(config: &Refinement1D) -> Result<RefinementReport> {
    let tf = config.function;
    if tf.dims() != 1 {
        return Err(WenoError::Config(format!("{tf} is not a 1-D function")));
    }
    let jump = match tf.discontinuity() {
        Discontinuity::Point(x) => x,
        _ => unreachable!("1-D functions have a point jump"),
    };
    let (a, b) = tf.domain()[0];
    run_refinement_1d_with(config, tf.name(), |x| tf.eval(&[x]), (a, b), jump)
}

/// 1-D study of an arbitrary function on `[a, b]`, with the window centred on the cell containing `center`.
pub fn run_refinement_1d_with<F>(
    config: &Refinement1D,
    name: &str,
    f: F,
    domain: (f64, f64),
    center: f64,
) -> Result<RefinementReport>
where
    F: Fn(f64) -> f64 + Sync,
{
    let min = if config.grid == GridKind::Random {
        RANDOM_BASE_LEVEL
    } else {
        1
    };
    check_levels(&config.levels, min)?;
    let params = params(config.r, config.method, config.t)?;
    let regions: Vec<Region> = (-4..=4).map(Region::Interval).collect();
    let levels: Vec<u32> = config.levels.clone().collect();
    let mut errors = Vec::with_capacity(levels.len());
    let mut fallback = false;
    for &level in &levels {
        let grid = grid_1d(config.grid, domain.0, domain.1, level, config.seed)?;
        let (j0, points) = window_points_1d(&grid, center, config.eval_points)?;
        let gf = GridFunction::from_fn(TensorGrid::from_axis(grid), |x| f(x[0]))?;
        let per_region: Vec<(f64, bool)> = (-4i64..=4)
            .into_par_iter()
            .map(|s| {
                let cell = CellIndex(vec![(j0 as i64 + s) as usize]);
                let prepared = PreparedCell::new(&gf, &cell, &params)?;
                let mut err: f64 = 0.0;
                let mut fb = false;
                for &(_, x) in points.iter().filter(|(ps, _)| *ps == s) {
                    let res = prepared.evaluate(&[x])?;
                    fb |= res.fallback;
                    err = err.max((res.value - f(x)).abs());
                }
                Ok((err, fb))
            })
            .collect::<Result<_>>()?;
        fallback |= per_region.iter().any(|(_, fb)| *fb);
        errors.push(per_region.into_iter().map(|(e, _)| e).collect());
    }
    let meta = RefinementReport {
        function: name.to_string(),
        method: config.method,
        r: config.r,
        grid: config.grid,
        seed: config.seed,
        eval_points: config.eval_points,
        fallback,
        rows: Vec::new(),
    };
    Ok(RefinementReport::from_errors(meta, &levels, &regions, &errors))
}

/// Index of the node closest to zero (the lower one on ties).
fn origin_index(g: &Grid1D) -> usize {
    let mut best = 0;
    for (i, x) in g.nodes().iter().enumerate() {
        if x.abs() < g.nodes()[best].abs() {
            best = i;
        }
    }
    best
}

/// One cell of a 2-D study: its region and the points evaluated in it.
struct CellTask {
    region: usize,
    cell: CellIndex,
    points: Vec<[f64; 2]>,
}

fn cell_points(grid: &TensorGrid, cell: &CellIndex, taus: &[f64]) -> Vec<[f64; 2]> {
    let coords: Vec<Vec<f64>> = (0..2)
        .map(|a| {
            let n = grid.axis(a).nodes();
            let i = cell.0[a];
            taus.iter().map(|t| t * n[i - 1] + (1.0 - t) * n[i]).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(taus.len() * taus.len());
    for &x in &coords[0] {
        for &y in &coords[1] {
            out.push([x, y]);
        }
    }
    out
}

fn tasks_2d(
    tf: TestFunction,
    grid: &TensorGrid,
    level: u32,
    r: usize,
    taus: &[f64],
) -> Result<(Vec<Region>, Vec<CellTask>)> {
    let origin = [origin_index(grid.axis(0)), origin_index(grid.axis(1))];
    let fits = |a: usize, s: i64| -> Option<usize> {
        let i = origin[a] as i64 + s + 1;
        let last = grid.axis(a).intervals() as i64;
        (i - r as i64 >= 0 && i + r as i64 - 1 <= last).then_some(i as usize)
    };
    let mut tasks = Vec::new();
    if tf.discontinuity() == Discontinuity::None {
        let half = 5.5 * 2f64.powi(1 - level as i32);
        for s1 in -6..=5 {
            for s2 in -6..=5 {
                let (Some(i1), Some(i2)) = (fits(0, s1), fits(1, s2)) else {
                    continue;
                };
                let cell = CellIndex(vec![i1, i2]);
                let points: Vec<[f64; 2]> = cell_points(grid, &cell, taus)
                    .into_iter()
                    .filter(|p| p[0].abs() <= half && p[1].abs() <= half)
                    .collect();
                if !points.is_empty() {
                    tasks.push(CellTask {
                        region: 0,
                        cell,
                        points,
                    });
                }
            }
        }
        return Ok((vec![Region::Global], tasks));
    }
    let mut regions = Vec::new();
    for s1 in -5..=5 {
        for s2 in -4..=4 {
            let (Some(i1), Some(i2)) = (fits(0, s1), fits(1, s2)) else {
                return Err(WenoError::Config(format!(
                    "level {level} is too coarse for r={r} around cell ({s1}, {s2})"
                )));
            };
            let cell = CellIndex(vec![i1, i2]);
            tasks.push(CellTask {
                region: regions.len(),
                points: cell_points(grid, &cell, taus),
                cell,
            });
            regions.push(Region::Cell(s1, s2));
        }
    }
    Ok((regions, tasks))
}

/// 2-D study of a built-in test function.
pub fn run_refinement_2d(config: &Refinement2D) -> Result<RefinementReport> {
    let tf = config.function;
    if tf.dims() != 2 {
        return Err(WenoError::Config(format!("{tf} is not a 2-D function")));
    }
    if config.taus.is_empty() || config.taus.iter().any(|t| !(*t > 0.0 && *t < 1.0)) {
        return Err(WenoError::Config("tau values must lie in (0, 1)".into()));
    }
    let min = if config.grid == GridKind::Perturbed {
        PERTURBED_BASE_LEVEL
    } else {
        1
    };
    check_levels(&config.levels, min)?;
    let params = params(config.r, config.method, config.t)?;
    let levels: Vec<u32> = config.levels.clone().collect();
    let mut errors = Vec::with_capacity(levels.len());
    let mut regions = Vec::new();
    let mut fallback = false;
    for &level in &levels {
        let grid = grid_2d(config.grid, level, config.seed)?;
        let (regs, tasks) = tasks_2d(tf, &grid, level, config.r, &config.taus)?;
        let gf = GridFunction::from_fn(grid, |x| tf.eval(x))?;
        let per_task: Vec<(usize, f64, bool)> = tasks
            .par_iter()
            .map(|task| {
                let prepared = PreparedCell::new(&gf, &task.cell, &params)?;
                let mut err: f64 = 0.0;
                let mut fb = false;
                for p in &task.points {
                    let res = prepared.evaluate(p)?;
                    fb |= res.fallback;
                    err = err.max((res.value - tf.eval(p)).abs());
                }
                Ok((task.region, err, fb))
            })
            .collect::<Result<_>>()?;
        let mut level_errors = vec![0.0f64; regs.len()];
        for (region, err, fb) in per_task {
            level_errors[region] = level_errors[region].max(err);
            fallback |= fb;
        }
        errors.push(level_errors);
        regions = regs;
    }
    let meta = RefinementReport {
        function: tf.name().to_string(),
        method: config.method,
        r: config.r,
        grid: config.grid,
        seed: config.seed,
        eval_points: config.taus.len() * config.taus.len(),
        fallback,
        rows: Vec::new(),
    };
    Ok(RefinementReport::from_errors(meta, &levels, &regions, &errors))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_points_cover_nine_cells() {
        let g = build_uniform_grid(-1.0, 1.0, 64).unwrap();
        let (j0, pts) = window_points_1d(&g, 0.01, 901).unwrap();
        assert_eq!(j0, 33);
        assert_eq!(pts.first().unwrap().0, -4);
        assert_eq!(pts.last().unwrap().0, 4);
        for s in -4..=4 {
            assert!(pts.iter().any(|(ps, _)| *ps == s));
        }
    }

    #[test]
    fn polynomial_study_is_exact() {
        let mut cfg = Refinement1D::new(TestFunction::F1, 3, Method::Progressive);
        cfg.levels = 5..=7;
        cfg.eval_points = 200;
        let rep = run_refinement_1d_with(
            &cfg,
            "cubic",
            |x| 1.0 + x - 2.0 * x * x + 0.5 * x * x * x,
            (0.0, 1.0),
            0.4,
        )
        .unwrap();
        assert_eq!(rep.rows.len(), 27);
        for row in &rep.rows {
            assert!(row.error <= 1e-12, "{row:?}");
        }
    }

    #[test]
    fn f4_regions() {
        let mut cfg = Refinement2D::new(TestFunction::F4, 3, Method::Progressive);
        cfg.levels = 5..=6;
        cfg.taus = reduced_taus();
        let rep = run_refinement_2d(&cfg).unwrap();
        assert_eq!(rep.regions().len(), 99);
        assert_eq!(rep.eval_points, 9);
    }

    #[test]
    fn configuration_errors() {
        let mut cfg = Refinement1D::new(TestFunction::F1, 3, Method::Progressive);
        cfg.grid = GridKind::Random;
        cfg.levels = 3..=6;
        assert!(matches!(run_refinement_1d(&cfg), Err(WenoError::Config(_))));
        let cfg = Refinement1D::new(TestFunction::F3, 3, Method::Progressive);
        assert!(run_refinement_1d(&cfg).is_err());
    }
}
