use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use frechet_sweep::backend::{make_backend, offline_process, BackendKind, Lattice, WeightUpdate};
use frechet_sweep::curve::random_curve_with;
use frechet_sweep::freespace::{alt_godau_decide, build_skeleton, decide_skeleton, End};
use frechet_sweep::fsg::{build_fsg, fsg_reachable, VertexClass};
use frechet_sweep::geom::{circle_circle_intersections, free_interval, solve_quadratic};
use frechet_sweep::grid::{grid_from_skeleton, Axis, PlaceholderGrid};
use frechet_sweep::sweep::{enumerate_sweep_events, run_plan, EventPayload, SweepState, SweepStats};
use frechet_sweep::translation::{candidate_transformations, critical_curves_2d, Region};
use frechet_sweep::{frechet_value, BBox, Curve, Direction2, Point2, Segment2, Tolerance, Translation2};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn curves(seed: u64, n_pi: usize, n_sigma: usize) -> (Curve, Curve) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pi = random_curve_with(&mut rng, n_pi, BBox::unit()).unwrap();
    let sigma = random_curve_with(&mut rng, n_sigma, BBox::unit()).unwrap();
    (pi, sigma)
}

/// Weights up vertical boundary `i` across row strip `row`, corners included.
fn boundary_weights(grid: &PlaceholderGrid, i: usize, row: usize) -> Vec<u8> {
    let col = grid.col_of_boundary(i);
    (grid.row_of_boundary(row)..=grid.row_of_boundary(row + 1))
        .map(|r| grid.weight(col, r))
        .collect()
}

fn reachable(grid: &PlaceholderGrid) -> bool {
    let mut b = make_backend(BackendKind::Baseline);
    b.init(grid.lattice());
    b.query()
}

/// `k` points evenly spaced by arc length.
fn resample(c: &Curve, k: usize) -> Vec<Point2> {
    let total = c.total_length();
    let mut out = Vec::with_capacity(k);
    let (mut w, mut before) = (0, 0.0);
    for s in 0..k {
        let target = total * s as f64 / (k - 1) as f64;
        while w + 1 < c.edge_count() && before + c.edge(w).length() < target {
            before += c.edge(w).length();
            w += 1;
        }
        let e = c.edge(w);
        out.push(e.at(((target - before) / e.length()).clamp(0.0, 1.0)));
    }
    out
}

fn discrete_frechet(a: &[Point2], b: &[Point2]) -> f64 {
    let mut prev = vec![f64::INFINITY; b.len()];
    let mut cur = vec![0.0; b.len()];
    for (i, &p) in a.iter().enumerate() {
        for (j, &q) in b.iter().enumerate() {
            let d = p.dist(q);
            let best = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => cur[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(prev[j - 1]).min(cur[j - 1]),
            };
            cur[j] = best.max(d);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len() - 1]
}

fn point() -> impl Strategy<Value = Point2> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn quadratic_roots_have_small_residual(a in -10.0..10.0f64, b in -10.0..10.0f64, c in -10.0..10.0f64) {
        prop_assume!(a.abs() > 1e-3);
        for r in solve_quadratic(a, b, c, tol()).unwrap() {
            let x = r.value;
            let residual = (a * x * x + b * x + c).abs();
            let scale = (a * x * x).abs() + (b * x).abs() + c.abs();
            prop_assert!(residual <= 1e-6 * scale.max(1.0), "residual {} at {}", residual, x);
        }
    }

    #[test]
    fn free_interval_ends_lie_on_the_circle(center in point(), a in point(), b in point(), r in 0.0..15.0f64) {
        let Ok(s) = Segment2::new(a, b) else { return Ok(()) };
        if let Some(iv) = free_interval(center, r, &s, tol()) {
            for t in [iv.lo, iv.hi] {
                if t > 0.0 && t < 1.0 {
                    prop_assert!((s.at(t).dist(center) - r).abs() <= 1e-6 * r.max(1.0));
                }
            }
        }
    }

    #[test]
    fn free_interval_grows_with_radius(center in point(), a in point(), b in point(), r1 in 0.0..15.0f64, dr in 0.0..5.0f64) {
        let Ok(s) = Segment2::new(a, b) else { return Ok(()) };
        if let Some(small) = free_interval(center, r1, &s, tol()) {
            let big = free_interval(center, r1 + dr, &s, tol()).expect("larger radius keeps the interval");
            prop_assert!(big.lo <= small.lo + 1e-9 && small.hi <= big.hi + 1e-9);
        }
    }

    #[test]
    fn circle_pairs_mirror_across_center_line(c1 in point(), c2 in point(), r in 0.1..10.0f64) {
        prop_assume!(c1.dist(c2) > 1e-6);
        let pts = circle_circle_intersections(c1, c2, r, tol()).unwrap();
        if pts.len() == 2 {
            let axis = c2 - c1;
            let mid = (pts[0] + pts[1]) * 0.5;
            prop_assert!((mid - c1).cross(axis).abs() <= 1e-9 * axis.norm().max(1.0) * 10.0);
            prop_assert!((pts[0] - pts[1]).dot(axis).abs() <= 1e-9 * axis.norm().max(1.0) * 10.0);
        }
    }

    #[test]
    fn decision_is_monotone_and_symmetric(seed in any::<u64>(), n1 in 2usize..7, n2 in 2usize..7, d1 in 0.0..1.5f64, dd in 0.0..0.5f64) {
        let (pi, sigma) = curves(seed, n1, n2);
        if alt_godau_decide(&pi, &sigma, d1) {
            prop_assert!(alt_godau_decide(&pi, &sigma, d1 + dd));
        }
        prop_assert_eq!(alt_godau_decide(&pi, &sigma, d1), alt_godau_decide(&sigma, &pi, d1));
    }

    #[test]
    fn critical_point_counts_are_bounded(seed in any::<u64>(), n1 in 2usize..7, n2 in 2usize..7, delta in 0.0..1.0f64) {
        let (pi, sigma) = curves(seed, n1, n2);
        let sk = build_skeleton(&pi, &sigma, delta, tol());
        for row in 0..sk.rows() {
            prop_assert!(sk.m_row(row) <= 2 * pi.len());
        }
        for col in 0..sk.columns() {
            prop_assert!(sk.m_col(col) <= 2 * sigma.len());
        }
        let per_boundary = |pts: Vec<frechet_sweep::freespace::CriticalPoint>| {
            let mut seen = std::collections::HashMap::new();
            for p in pts {
                *seen.entry(p.boundary).or_insert(0usize) += 1;
            }
            seen.values().all(|&k| k <= 2)
        };
        for row in 0..sk.rows() {
            prop_assert!(per_boundary(sk.row_critical_points(row)));
        }
        for col in 0..sk.columns() {
            prop_assert!(per_boundary(sk.column_critical_points(col)));
        }
    }

    #[test]
    fn graph_weights_follow_class_rules(seed in any::<u64>(), n1 in 2usize..6, n2 in 2usize..6, delta in 0.05..1.0f64) {
        let (pi, sigma) = curves(seed, n1, n2);
        let g = build_fsg(&build_skeleton(&pi, &sigma, delta, tol()));
        let (nx, ny) = (g.vertical.len(), g.horizontal.len());
        for x in 0..nx {
            for y in 0..ny {
                if g.class(x, y) == VertexClass::Interior {
                    prop_assert_eq!(g.weight(x, y), 1);
                }
            }
        }
        // On a boundary line the free crossings of one strip are contiguous.
        for x in 0..nx {
            if g.class(x, 0) != VertexClass::Corner {
                continue;
            }
            let mut y = 0;
            while y < ny {
                let mut end = y + 1;
                while end < ny && g.class(x, end) != VertexClass::Corner {
                    end += 1;
                }
                let ones: Vec<usize> = (y + 1..end).filter(|&k| g.weight(x, k) == 1).collect();
                if let (Some(a), Some(b)) = (ones.first(), ones.last()) {
                    prop_assert_eq!(b - a + 1, ones.len());
                }
                y = end;
            }
        }
    }

    #[test]
    fn oracle_triangle(seed in any::<u64>(), n1 in 2usize..7, n2 in 2usize..7, factor in 0.9..1.1f64) {
        let (pi, sigma) = curves(seed, n1, n2);
        let delta = frechet_value(&pi, &sigma, 1e-9) * factor;
        let sk = build_skeleton(&pi, &sigma, delta, tol());
        let ag = decide_skeleton(&sk);
        prop_assert_eq!(fsg_reachable(&build_fsg(&sk)), ag);
        prop_assert_eq!(reachable(&grid_from_skeleton(&sk)), ag);
    }

    #[test]
    fn grid_stays_consistent_under_resync(seed in any::<u64>(), n1 in 2usize..6, n2 in 2usize..6, steps in prop::collection::vec((-0.3..0.3f64, -0.3..0.3f64, 0.1..0.8f64), 1..6)) {
        let (pi, sigma) = curves(seed, n1, n2);
        let mut sk = build_skeleton(&pi, &sigma, steps[0].2, tol());
        let mut grid = grid_from_skeleton(&sk);
        for (tx, ty, delta) in steps {
            sk = build_skeleton(&pi, &sigma.translate(Translation2::new(tx, ty)), delta, tol());
            for i in 0..pi.len() {
                for j in 0..sigma.len() {
                    grid.apply_corner_op(i, j, u8::from(sk.corner(i, j))).unwrap();
                }
            }
            for row in 0..sk.rows() {
                grid.sync_strip(Axis::Row, row, &sk).unwrap();
            }
            for col in 0..sk.columns() {
                grid.sync_strip(Axis::Col, col, &sk).unwrap();
            }
            for row in 0..sk.rows() {
                prop_assert_eq!(grid.lines(Axis::Row, row).len() + grid.placeholder_count(Axis::Row, row), 2 * pi.len());
            }
            for col in 0..sk.columns() {
                prop_assert_eq!(grid.lines(Axis::Col, col).len() + grid.placeholder_count(Axis::Col, col), 2 * sigma.len());
            }
            prop_assert!(grid.audit(&sk).is_ok(), "{:?}", grid.audit(&sk));
            prop_assert_eq!(reachable(&grid), decide_skeleton(&sk));
        }
    }

    #[test]
    fn single_operations_touch_few_vertices(seed in any::<u64>(), n1 in 2usize..6, n2 in 2usize..6, delta in 0.05..0.8f64, picks in prop::collection::vec((any::<u16>(), any::<u16>(), any::<bool>()), 1..20)) {
        let (pi, sigma) = curves(seed, n1, n2);
        let sk = build_skeleton(&pi, &sigma, delta, tol());
        let mut flipped = grid_from_skeleton(&sk);
        let mut grid = grid_from_skeleton(&sk);
        let (np, ns) = (pi.len(), sigma.len());
        for (a, b, flag) in picks {
            let (i, j) = (a as usize % np, b as usize % ns);
            let changes = flipped.apply_corner_op(i, j, u8::from(flag)).unwrap();
            prop_assert!(changes.len() <= 2 * (np + ns) + 1);

            let row = b as usize % (ns - 1);
            let len = grid.lines(Axis::Row, row).len();
            let rank = a as usize % (len + 1);
            let spawn = (0..np).map(|k| (i + k) % np).find(|&k| {
                let w = boundary_weights(&grid, k, row);
                !w.contains(&1) || w[rank] == 1 || w[rank + 1] == 1
            });
            if let (true, Some(i)) = (flag && len < 2 * np, spawn) {
                let boundary = frechet_sweep::freespace::BoundaryId::vertical(i, row);
                let line = grid.new_line(boundary, End::Lo, 0.5);
                let changes = grid.apply_row_insert(row, rank, line).unwrap();
                prop_assert!(changes.len() <= 3 * np, "insert made {} changes", changes.len());
            } else if len > 0 {
                let changes = grid.apply_row_delete(row, a as usize % len).unwrap();
                prop_assert!(changes.len() <= 3 * np, "delete made {} changes", changes.len());
            }
        }
    }

    #[test]
    fn discrete_oracle_bounds_the_decision(seed in any::<u64>(), n1 in 2usize..5, n2 in 2usize..5) {
        let (pi, sigma) = curves(seed, n1, n2);
        let k = 200;
        let d = discrete_frechet(&resample(&pi, k), &resample(&sigma, k));
        let margin = (pi.total_length() + sigma.total_length()) / (k - 1) as f64;
        prop_assert!(alt_godau_decide(&pi, &sigma, d + margin));
    }

    #[test]
    fn swapping_curves_negates_candidates(seed in any::<u64>(), n1 in 2usize..5, n2 in 2usize..5, delta in 0.1..0.6f64) {
        let (pi, sigma) = curves(seed, n1, n2);
        let a = candidate_transformations(
            &critical_curves_2d(&pi, &sigma, delta, tol()).unwrap(),
            Some(Region::for_curves(&pi, &sigma, delta)),
            pi.first() - sigma.first(),
            tol(),
        );
        let b = candidate_transformations(
            &critical_curves_2d(&sigma, &pi, delta, tol()).unwrap(),
            Some(Region::for_curves(&sigma, &pi, delta)),
            sigma.first() - pi.first(),
            tol(),
        );
        for c in &a.candidates {
            let neg = Point2::new(-c.t.x, -c.t.y);
            prop_assert!(b.candidates.iter().any(|d| d.t.dist(neg) <= 1e-6), "{:?} has no mirror", c.t);
        }
        for d in &b.candidates {
            let neg = Point2::new(-d.t.x, -d.t.y);
            prop_assert!(a.candidates.iter().any(|c| c.t.dist(neg) <= 1e-6), "{:?} has no mirror", d.t);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn event_counts_are_bounded(seed in any::<u64>(), n1 in 2usize..7, n2 in 2usize..7, angle in 0.0..6.3f64, delta in 0.05..0.8f64) {
        let (pi, sigma) = curves(seed, n1, n2);
        let v = Direction2::new(angle.cos(), angle.sin()).unwrap();
        let plan = enumerate_sweep_events(&pi, &sigma, v, (-3.0, 3.0), delta, tol());
        let (np, ns) = (pi.len(), sigma.len());
        let corners = plan.events.iter().filter(|e| matches!(e.payload, EventPayload::Corner { .. })).count();
        let tangencies = plan.events.iter().filter(|e| matches!(e.payload, EventPayload::Tangency { .. })).count();
        prop_assert!(corners <= 2 * np * ns);
        prop_assert!(tangencies <= 2 * (np * (ns - 1) + ns * (np - 1)));
        prop_assert!(plan.vve_count() <= 2 * (np * (np - 1) / 2 * (ns - 1) + ns * (ns - 1) / 2 * (np - 1)));
        prop_assert_eq!(plan.ve_count() + plan.vve_count(), plan.events.len());
    }

    #[test]
    fn sweeping_back_restores_reachability(seed in any::<u64>(), n1 in 2usize..6, n2 in 2usize..6, angle in 0.0..6.3f64, len in 0.1..2.0f64) {
        let (pi, sigma) = curves(seed, n1, n2);
        let delta = frechet_value(&pi, &sigma, 1e-9) * 1.05;
        let v = Direction2::new(angle.cos(), angle.sin()).unwrap();
        let mut state = SweepState::new(&pi, &sigma, delta, tol(), Point2::default(), BackendKind::Baseline);
        let before = state.query();
        let mut stats = SweepStats::default();
        let plan = enumerate_sweep_events(&pi, &sigma, v, (0.0, len), delta, tol());
        run_plan(&mut state, Point2::default(), &plan, false, &mut stats).unwrap();
        let here = state.translation();
        let back = -here;
        let dist = back.norm();
        if dist > 0.0 {
            let d = Direction2::new(back.x, back.y).unwrap();
            let shifted = sigma.translate(Translation2::from_vector(here));
            let plan = enumerate_sweep_events(&pi, &shifted, d, (0.0, dist), delta, tol());
            let samples = run_plan(&mut state, here, &plan, false, &mut stats).unwrap();
            prop_assert_eq!(samples.last().unwrap().decision, before);
        }
        let rebuilt = grid_from_skeleton(state.skeleton());
        prop_assert_eq!(reachable(&rebuilt), reachable(state.grid()));
    }

    #[test]
    fn generic_sweeps_keep_rebuild_weights(seed in any::<u64>(), n1 in 2usize..6, n2 in 2usize..6, angle in 0.0..6.3f64, lo in -2.0..0.0f64, len in 0.1..3.0f64) {
        let (pi, sigma) = curves(seed, n1, n2);
        let delta = frechet_value(&pi, &sigma, 1e-9) * 1.05;
        let v = Direction2::new(angle.cos(), angle.sin()).unwrap();
        let start = v.as_vector() * lo;
        let mut state = SweepState::new(&pi, &sigma, delta, tol(), start, BackendKind::Blocked);
        let shifted = sigma.translate(Translation2::from_vector(start));
        let plan = enumerate_sweep_events(&pi, &shifted, v, (0.0, len), delta, tol());
        let samples = run_plan(&mut state, start, &plan, false, &mut SweepStats::default()).unwrap();
        prop_assert!(state.rebuild_agrees());
        if !samples.last().unwrap().is_tick() {
            prop_assert!(state.matches_rebuild());
        }
    }

    #[test]
    fn backends_agree_on_random_updates(seed in any::<u64>(), w in 1usize..24, h in 1usize..24, density in 0.6..0.95f64) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut lattice = Lattice::new(w, h, 1);
        for x in 0..w {
            for y in 0..h {
                lattice.set(x, y, u8::from(rng.random_bool(density)));
            }
        }
        let updates: Vec<WeightUpdate> = (0..200)
            .map(|_| WeightUpdate { x: rng.random_range(0..w), y: rng.random_range(0..h), w: u8::from(rng.random_bool(density)) })
            .collect();
        let a = offline_process(make_backend(BackendKind::Baseline).as_mut(), &lattice, &updates);
        let b = offline_process(make_backend(BackendKind::Blocked).as_mut(), &lattice, &updates);
        prop_assert_eq!(a, b);
    }
}
