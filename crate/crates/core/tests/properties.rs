use num_rational::Ratio;
use proptest::prelude::*;

use progressive_weno::bench::{measure_error, numerical_order, window_points_1d, Region};
use progressive_weno::quadrature::gauss_legendre_on;
use progressive_weno::weights::neville_pair;
use progressive_weno::{
    build_perturbed_grid, build_random_grid, build_table, build_uniform_grid, capture_diagnostics,
    classical_optimal_general, classical_optimal_midpoint, interpolate_batch, interpolate_nd,
    weight_pair_general, CellIndex, GridFunction, IndicatorParams, Method, TensorGrid, WenoParams,
};

const METHODS: [Method; 3] = [Method::Progressive, Method::Classical, Method::Linear];

/// Query coordinate inside the interior cells of `nodes` that have a full `2r` window.
fn interior(nodes: &[f64], r: usize, u: f64) -> f64 {
    let n = nodes.len() - 1;
    let lo = nodes[r];
    let hi = nodes[n - r];
    lo + u * (hi - lo)
}

fn random_axis(r: usize, seed: u64) -> Vec<f64> {
    build_random_grid(0.0, 1.0, 3 * r + 2, seed).unwrap().nodes().to_vec()
}

/// Perturbed uniform nodes on [-1, 1], 16 cells.
fn perturbed_axis(seed: u64) -> Vec<f64> {
    build_perturbed_grid(4, seed).unwrap().nodes().to_vec()
}

fn tensor(axes: Vec<Vec<f64>>) -> TensorGrid {
    TensorGrid::new(
        axes.into_iter()
            .map(|a| progressive_weno::Grid1D::new(a).unwrap())
            .collect(),
    )
    .unwrap()
}

/// Exact weights of the base interpolants in the full Neville combination, in rationals.
fn rational_optimal(window: &[Ratio<i64>], x: Ratio<i64>, r: usize) -> Vec<Ratio<i64>> {
    let mut coef = vec![Ratio::from_integer(1)];
    for l in (r..2 * r - 1).rev() {
        let mut next = vec![Ratio::from_integer(0); coef.len() + 1];
        for (j, c) in coef.iter().enumerate() {
            let (keep, shift) = neville_pair(window[j], window[j + l + 1], x);
            assert_eq!(keep + shift, Ratio::from_integer(1));
            next[j] += *c * keep;
            next[j + 1] += *c * shift;
        }
        coef = next;
    }
    coef
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn rational_midpoint_weights_match_binomials() {
    for r in 2..=5usize {
        let window: Vec<Ratio<i64>> = (0..2 * r as i64).map(Ratio::from_integer).collect();
        let mid = Ratio::new(2 * r as i64 - 1, 2);
        let exact = rational_optimal(&window, mid, r);
        let total: Ratio<i64> = exact.iter().copied().sum();
        assert_eq!(total, Ratio::from_integer(1));
        let float = classical_optimal_midpoint(r).weights;
        for k in 0..r {
            let expected = Ratio::new(
                binom(2 * r as u64, 2 * k as u64 + 1) as i64,
                1i64 << (2 * r - 1),
            );
            assert_eq!(exact[k], expected);
            assert_eq!(float[k], *expected.numer() as f64 / *expected.denom() as f64);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_weights_on_integer_windows(
        r in 2usize..=4,
        gaps in prop::collection::vec(1i64..6, 8),
        num in 0i64..=12,
    ) {
        let mut w = vec![Ratio::from_integer(0)];
        for g in gaps.iter().take(2 * r - 1) {
            let last = *w.last().unwrap();
            w.push(last + Ratio::from_integer(*g));
        }
        let x = w[r - 1] + (w[r] - w[r - 1]) * Ratio::new(num, 12);
        let exact = rational_optimal(&w, x, r);
        prop_assert_eq!(exact.iter().copied().sum::<Ratio<i64>>(), Ratio::from_integer(1));
        for c in &exact {
            prop_assert!(*c >= Ratio::from_integer(0));
        }
        let wf: Vec<f64> = w.iter().map(|v| *v.numer() as f64 / *v.denom() as f64).collect();
        let xf = *x.numer() as f64 / *x.denom() as f64;
        let float = classical_optimal_general(&wf, xf).unwrap();
        for (a, b) in float.weights.iter().zip(&exact) {
            let b = *b.numer() as f64 / *b.denom() as f64;
            prop_assert!((a - b).abs() <= 1e-14);
        }
    }

    #[test]
    fn neville_weights_are_positive_in_cell(
        r in 2usize..=5,
        seed in any::<u64>(),
        u in 0.0f64..=1.0,
    ) {
        let g = build_random_grid(0.0, 1.0, 2 * r + 1, seed).unwrap();
        let w = g.window(r + 1, r).unwrap();
        let x = w[r - 1] + u * (w[r] - w[r - 1]);
        for l in r..=2 * r - 2 {
            for j in 0..=2 * r - 2 - l {
                let p = weight_pair_general(w, l, j, x).unwrap();
                prop_assert!(p.keep >= 0.0 && p.shift >= 0.0);
                prop_assert!((p.keep + p.shift - 1.0).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn polynomial_reproduction(
        r in 2usize..=4,
        dims in 1usize..=2,
        seed in any::<u64>(),
        coeffs in prop::collection::vec(-1.0f64..1.0, 25),
        u in prop::collection::vec(0.0f64..=1.0, 2),
    ) {
        let axes: Vec<Vec<f64>> = (0..dims).map(|a| perturbed_axis(seed.wrapping_add(a as u64))).collect();
        let x: Vec<f64> = (0..dims).map(|a| interior(&axes[a], r, u[a])).collect();
        let grid = tensor(axes);
        let poly = |p: &[f64]| -> f64 {
            let mut s = 0.0;
            for i in 0..=r {
                if dims == 1 {
                    s += coeffs[i] * p[0].powi(i as i32);
                } else {
                    for j in 0..=r {
                        s += coeffs[i * (r + 1) + j] * p[0].powi(i as i32) * p[1].powi(j as i32);
                    }
                }
            }
            s
        };
        let gf = GridFunction::from_fn(grid, poly).unwrap();
        let exact = poly(&x);
        for m in METHODS {
            let v = interpolate_nd(&gf, &x, &WenoParams::new(r, m)).unwrap().value;
            prop_assert!((v - exact).abs() <= 1e-12 * exact.abs().max(1.0), "{m:?}: {v} vs {exact}");
        }
    }

    #[test]
    fn mirrored_data_gives_mirrored_values(
        r in 2usize..=4,
        seed in any::<u64>(),
        u in 0.01f64..0.99,
        jump in 0.2f64..0.8,
    ) {
        let nodes = random_axis(r, seed);
        let mirrored: Vec<f64> = nodes.iter().rev().map(|x| 1.0 - x).collect();
        let f = |x: f64| if x < jump { x.sin() } else { 2.0 + x * x };
        let g = |x: f64| f(1.0 - x);
        let a = GridFunction::from_fn(tensor(vec![nodes.clone()]), |p| f(p[0])).unwrap();
        let b = GridFunction::from_fn(tensor(vec![mirrored]), |p| g(p[0])).unwrap();
        let x = interior(&nodes, r, u);
        for m in METHODS {
            let p = WenoParams::new(r, m);
            let va = interpolate_nd(&a, &[x], &p).unwrap().value;
            let vb = interpolate_nd(&b, &[1.0 - x], &p).unwrap().value;
            prop_assert!((va - vb).abs() <= 1e-12 * va.abs().max(1.0), "{m:?}: {va} vs {vb}");
        }
    }

    #[test]
    fn swapped_axes_give_same_value(
        seed in any::<u64>(),
        u in prop::collection::vec(0.01f64..0.99, 2),
    ) {
        let r = 3;
        let ax = perturbed_axis(seed);
        let ay = perturbed_axis(seed ^ 0x5555);
        let f = |p: &[f64]| if p[0] + 2.0 * p[1] > 0.3 { 1.0 + p[0] } else { (p[0] * p[1]).cos() };
        let a = GridFunction::from_fn(tensor(vec![ax.clone(), ay.clone()]), f).unwrap();
        let b = GridFunction::from_fn(tensor(vec![ay.clone(), ax.clone()]), |p| f(&[p[1], p[0]])).unwrap();
        let x = interior(&ax, r, u[0]);
        let y = interior(&ay, r, u[1]);
        for m in METHODS {
            let p = WenoParams::new(r, m);
            let va = interpolate_nd(&a, &[x, y], &p).unwrap().value;
            let vb = interpolate_nd(&b, &[y, x], &p).unwrap().value;
            prop_assert!((va - vb).abs() <= 1e-12 * va.abs().max(1.0), "{m:?}: {va} vs {vb}");
        }
    }

    #[test]
    fn result_is_convex_combination_of_base_values(
        r in 2usize..=4,
        seed in any::<u64>(),
        u in 0.0f64..=1.0,
        jump in 0.1f64..0.9,
        height in -5.0f64..5.0,
    ) {
        let nodes = random_axis(r, seed);
        let gf = GridFunction::from_fn(tensor(vec![nodes.clone()]), |p| {
            if p[0] > jump { height + p[0].exp() } else { p[0].sin() }
        }).unwrap();
        let x = interior(&nodes, r, u);
        for m in [Method::Progressive, Method::Classical] {
            let res = interpolate_nd(&gf, &[x], &WenoParams::new(r, m).capturing()).unwrap();
            let lo = res.base_values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = res.base_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let slack = 1e-13 * lo.abs().max(hi.abs()).max(1.0);
            prop_assert!(res.value >= lo - slack && res.value <= hi + slack);
            let diag = capture_diagnostics(&res).unwrap();
            for c in &diag.combinations {
                prop_assert!(c.nonlinear.iter().all(|&w| w >= 0.0));
                prop_assert!((c.nonlinear.iter().sum::<f64>() - 1.0).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn indicators_are_quadratic_in_the_data(
        r in 2usize..=4,
        dims in 1usize..=2,
        seed in any::<u64>(),
        lambda in -20.0f64..20.0,
    ) {
        let axes: Vec<Vec<f64>> = (0..dims).map(|a| perturbed_axis(seed.wrapping_add(a as u64))).collect();
        let cell = CellIndex(vec![r + 1; dims]);
        let grid = tensor(axes);
        let f = |p: &[f64]| p.iter().map(|x| (3.0 * x).sin() + x * x).sum::<f64>();
        let a = GridFunction::from_fn(grid.clone(), f).unwrap();
        let b = GridFunction::from_fn(grid, |p| lambda * f(p)).unwrap();
        let ta = build_table(&a, &cell, r, &IndicatorParams::default()).unwrap();
        let tb = build_table(&b, &cell, r, &IndicatorParams::default()).unwrap();
        for (x, y) in ta.entries().iter().zip(tb.entries()) {
            let want = lambda * lambda * x;
            prop_assert!((y - want).abs() <= 1e-12 * want.abs().max(1e-300));
        }
    }

    #[test]
    fn doubling_quadrature_changes_nothing(
        r in 2usize..=4,
        dims in 1usize..=2,
        seed in any::<u64>(),
        jump in 0.1f64..0.9,
    ) {
        let axes: Vec<Vec<f64>> = (0..dims).map(|a| perturbed_axis(seed.wrapping_add(a as u64))).collect();
        let gf = GridFunction::from_fn(tensor(axes), |p| {
            if p[0] > jump { 1.0 + p.iter().sum::<f64>() } else { p.iter().map(|x| x.cos()).product() }
        }).unwrap();
        let cell = CellIndex(vec![r + 1; dims]);
        let base = build_table(&gf, &cell, r, &IndicatorParams::default()).unwrap();
        let fine = build_table(&gf, &cell, r, &IndicatorParams::with_quad_points(2 * (r + 1))).unwrap();
        for (a, b) in base.entries().iter().zip(fine.entries()) {
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300));
        }
    }

    #[test]
    fn batch_output_is_independent_of_partitioning(
        seed in any::<u64>(),
        us in prop::collection::vec(0.0f64..=1.0, 1..60),
        split in 0usize..60,
    ) {
        let r = 3;
        let nodes = build_random_grid(0.0, 1.0, 40, seed).unwrap().nodes().to_vec();
        let gf = GridFunction::from_fn(tensor(vec![nodes.clone()]), |p| {
            if p[0] > 0.47 { 1.0 } else { p[0].sin() }
        }).unwrap();
        let points: Vec<Vec<f64>> = us.iter().map(|&u| vec![interior(&nodes, r, u)]).collect();
        let p = WenoParams::new(r, Method::Progressive);
        let whole = interpolate_batch(&gf, &points, &p).unwrap();
        let cut = split.min(points.len());
        let mut parts = interpolate_batch(&gf, &points[..cut], &p).unwrap();
        parts.extend(interpolate_batch(&gf, &points[cut..], &p).unwrap());
        let reversed: Vec<Vec<f64>> = points.iter().rev().cloned().collect();
        let mut back = interpolate_batch(&gf, &reversed, &p).unwrap();
        back.reverse();
        for ((a, b), c) in whole.iter().zip(&parts).zip(&back) {
            prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
            prop_assert_eq!(a.value.to_bits(), c.value.to_bits());
        }
        for (pt, res) in points.iter().zip(&whole) {
            let single = interpolate_nd(&gf, pt, &p).unwrap();
            prop_assert_eq!(single.value.to_bits(), res.value.to_bits());
        }
    }

    #[test]
    fn max_error_matches_scan(
        pairs in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..100),
    ) {
        let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let mut worst = 0.0f64;
        for i in 0..a.len() {
            let d = (a[i] - b[i]).abs();
            if d > worst {
                worst = d;
            }
        }
        prop_assert_eq!(measure_error(&a, &b).unwrap(), worst);
    }

    #[test]
    fn window_points_fall_in_their_cells(
        seed in any::<u64>(),
        jump in 0.3f64..0.7,
        count in 2usize..400,
    ) {
        let g = build_random_grid(0.0, 1.0, 64, seed).unwrap();
        let Ok((j0, pts)) = window_points_1d(&g, jump, count) else {
            return Ok(());
        };
        let n = g.nodes();
        prop_assert_eq!(pts.len(), count);
        for (s, x) in pts {
            prop_assert!((-4..=4).contains(&s));
            let i = (j0 as i64 + s) as usize;
            let inside = x > n[i - 1] && x <= n[i];
            let left_end = s == -4 && x == n[j0 - 5];
            prop_assert!(inside || left_end, "x={x} assigned to s={s}");
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials(
        n in 1usize..12,
        a in -3.0f64..0.0,
        len in 0.1f64..4.0,
        coeffs in prop::collection::vec(-2.0f64..2.0, 24),
    ) {
        let b = a + len;
        let deg = 2 * n - 1;
        let (x, w) = gauss_legendre_on(n, a, b);
        let quad: f64 = x.iter().zip(&w).map(|(&xi, &wi)| {
            wi * (0..=deg).map(|k| coeffs[k] * xi.powi(k as i32)).sum::<f64>()
        }).sum();
        let exact: f64 = (0..=deg)
            .map(|k| coeffs[k] * (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k as f64 + 1.0))
            .sum();
        let scale: f64 = (0..=deg).map(|k| coeffs[k].abs() * a.abs().max(b.abs()).powi(k as i32 + 1)).sum();
        prop_assert!((quad - exact).abs() <= 1e-12 * scale.max(1.0));
    }
}

#[test]
fn reported_orders_are_log_ratios() {
    use progressive_weno::bench::{run_refinement_1d, Refinement1D, TestFunction};
    let mut cfg = Refinement1D::new(TestFunction::F2, 3, Method::Progressive);
    cfg.levels = 5..=7;
    cfg.eval_points = 500;
    let rep = run_refinement_1d(&cfg).unwrap();
    assert_eq!(rep.rows.len(), 27);
    for s in -4..=4 {
        let region = Region::Interval(s);
        assert_eq!(rep.order(5, region), None);
        for l in 6..=7 {
            let coarse = rep.error(l - 1, region).unwrap();
            let fine = rep.error(l, region).unwrap();
            match rep.order(l, region) {
                Some(o) => assert!((o - (coarse.ln() - fine.ln()) / 2f64.ln()).abs() <= 1e-12),
                None => assert!(coarse == 0.0 || fine == 0.0),
            }
            assert_eq!(rep.order(l, region), numerical_order(coarse, fine));
        }
    }
}

#[test]
fn uniform_indicator_for_linear_data() {
    for r in 2..=5 {
        let g = build_uniform_grid(0.0, 1.0, 32).unwrap();
        let h = 1.0 / 32.0;
        let gf = GridFunction::from_fn(TensorGrid::from_axis(g), |p| p[0]).unwrap();
        let t = build_table(&gf, &CellIndex(vec![10]), r, &IndicatorParams::default()).unwrap();
        for v in t.entries() {
            assert!((v - h * h).abs() <= 1e-14);
        }
    }
}
