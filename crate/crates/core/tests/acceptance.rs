//! Acceptance checks; prints one PASS/FAIL line per criterion and exits
//! non-zero when any fails.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use pursuit_core::corner_game::*;
use pursuit_core::geometry::*;
use pursuit_core::partitions::*;
use pursuit_core::pursuit_field::*;
use pursuit_core::scenes;
use pursuit_core::sim_engine::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:.0?}"))
}

fn class1_correctness() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut solved = 0;
    let mut tried = 0;
    while solved < 100 {
        tried += 1;
        let cfg = common::random_config(&mut rng);
        let Some(sol) = solve_class1(&cfg) else { continue };
        solved += 1;
        let (collinear, rate_gap) = sol.terminal_residuals(&cfg);
        ensure(collinear.abs() < 1e-9, || format!("collinearity {collinear:e}"))?;
        // terminal inequality: l_t outruns the pursuer's tangential speed
        let line = cfg.tangent_line();
        let eq6 = line.rate(sol.t_f) - cfg.v_p_max / sol.terminal_point.norm();
        ensure(eq6 > 0.0 && rate_gap > 0.0, || format!("terminal inequality {eq6:e}"))?;
        let p0 = cfg.pursuer_start();
        for k in 0..=1000 {
            let t = sol.t_f * k as f64 / 1000.0;
            let p = p0.lerp(sol.terminal_point, k as f64 / 1000.0);
            let s = constraint_s(&CornerState::at(&cfg, t, p));
            ensure(s >= -1e-9, || format!("S({t}) = {s:e}"))?;
        }
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("100 solved of {tried} drawn in {:.2?}", start.elapsed()))
}

fn oracle_dominance() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let (mut c1, mut c2) = (Vec::new(), Vec::new());
    while c1.len() < 20 || c2.len() < 20 {
        let cfg = if rng.random_bool(0.5) { common::random_config(&mut rng) } else { common::random_tight_config(&mut rng) };
        let out = solve_corner_game(&cfg).map_err(|e| e.to_string())?;
        if out.tracking_time.is_infinite() {
            continue;
        }
        match out.strategy {
            StrategyClass::Class1 if c1.len() < 20 => c1.push((cfg, out.tracking_time.as_f64())),
            StrategyClass::Class2 if c2.len() < 20 => c2.push((cfg, out.tracking_time.as_f64())),
            _ => {}
        }
    }
    let worst = |set: &[(CornerGameConfig, f64)]| -> Result<(f64, f64), String> {
        let rows: Vec<(f64, f64)> = set
            .par_iter()
            .map(|(cfg, t)| {
                let dt = 1e-4 * cfg.escape_time();
                let (oracle, _) = common::heading_oracle(cfg, 1e-3, dt);
                ((oracle - t).abs(), oracle - t)
            })
            .collect();
        let gap = rows.iter().map(|r| r.0).fold(0.0, f64::max);
        let excess = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
        ensure(gap < 1e-2, || format!("oracle gap {gap:e}"))?;
        ensure(excess <= 1e-3, || format!("oracle beats solver by {excess:e}"))?;
        Ok((gap, excess))
    };
    let (g1, _) = worst(&c1)?;
    let (g2, _) = worst(&c2)?;
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!("20+20 configs, max gap {g1:.1e} / {g2:.1e} in {:.2?}", start.elapsed()))
}

fn class2_samples(n: usize, seed: u64) -> Vec<(CornerGameConfig, Class2Solution)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let cfg = common::random_tight_config(&mut rng);
        if let Ok(Some(sol)) = solve_class2(&cfg) {
            if sol.t2 > 1e-3 {
                out.push((cfg, sol));
            }
        }
    }
    out
}

fn class2_junction() -> Check {
    let mut worst = 0.0f64;
    for (cfg, sol) in class2_samples(25, 5) {
        let gap = sol.junction_rate_gap(&cfg).abs();
        ensure(gap < 1e-6, || format!("junction rate gap {gap:e}"))?;
        let u1 = sol.junction_controls(&cfg).u1;
        ensure((0.0..FRAC_PI_2).contains(&u1), || format!("u1 = {u1}"))?;
        let line = cfg.tangent_line();
        for k in 0..=200 {
            let t = sol.t1 + sol.t2 * k as f64 / 200.0;
            let x3 = sol.stage2.position(t).angle();
            let d = normalize_angle(x3 - (line.angle(t) - PI)).abs();
            ensure(d < 1e-6, || format!("off the line by {d:e} at {t}"))?;
        }
        let end = sol.stage2.terminal_speed_gap(cfg.v_p_max).abs();
        ensure(end < 1e-6, || format!("terminal speed gap {end:e}"))?;
        worst = worst.max(gap).max(end);
    }
    Ok(format!("25 configs, worst residual {worst:.1e}"))
}

/// Class 2 solutions that the full solver also picks as the best play.
fn optimal_class2_samples(n: usize, seed: u64) -> Vec<(CornerGameConfig, Class2Solution)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let cfg = common::random_tight_config(&mut rng);
        let Ok(best) = solve_corner_game(&cfg) else { continue };
        if let Some(sol) = best.class2 {
            let t = best.tracking_time.as_f64();
            if best.strategy == StrategyClass::Class2 && (t - sol.total_time()).abs() < 1e-12 && sol.t2 > 1e-3 {
                out.push((cfg, sol));
            }
        }
    }
    out
}

fn local_optimality() -> Check {
    let rows: Vec<Result<f64, String>> = optimal_class2_samples(10, 9)
        .par_iter()
        .map(|(cfg, sol)| {
            let dt = 1e-5 * cfg.escape_time();
            // the nominal run grazes the line at the junction, which the
            // sampled follower cannot resolve; compare with the exact total
            let nominal = sol.total_time();
            let mut margin = f64::INFINITY;
            for d in [-0.01, 0.01] {
                let t = common::straight_then_follow(cfg, sol.stage1_heading + d, dt);
                ensure(t < nominal, || format!("heading {d:+} gives {t} ≥ {nominal}"))?;
                margin = margin.min(nominal - t);
            }
            Ok(margin)
        })
        .collect();
    let mut m = f64::INFINITY;
    for r in rows {
        m = m.min(r?);
    }
    Ok(format!("10 configs, smallest loss {m:.1e}"))
}

fn partition_reproduction() -> Check {
    let scene = scenes::wedge();
    let vertex = VertexId::new(0, 2);
    let speeds = Speeds::new(1.0, 0.5);
    let grid = GridSpec::new(Vec2::new(-5.0, -5.0), 0.05, 200, 200).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let sweep = evader_sweep(&scene.env, vertex, scene.evader, speeds, grid).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60))?;
    let classes = sweep.partition(PartitionKind::StrategyClass);
    let mut seen = [0usize; 6];
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            if let Some(c) = classes.class_at(i, j) {
                seen[c.code() as usize - 1] += 1;
            }
        }
    }
    ensure(seen.iter().all(|&n| n > 0), || format!("class counts {seen:?}"))?;

    // star cells are infinite; any other infinite cell is a run into the star
    let times = sweep.partition(PartitionKind::TrackingTime);
    let in_star = |c: Vec2| c.x >= 0.0 && c.y >= 0.0;
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            let c = grid.center(i, j);
            let t = times.value(i, j);
            if in_star(c) {
                ensure(t == f64::INFINITY, || format!("star cell {c} has time {t}"))?;
            } else if t == f64::INFINITY {
                let s = sweep.cell(i, j).strategy;
                ensure(s == StrategyClass::ShortestPathToStar, || format!("infinite {s:?} cell at {c}"))?;
            }
        }
    }
    // with the evader hugging the corner no other cell can reach the star
    let near = evader_sweep(&scene.env, vertex, Vec2::new(-0.004, 0.006), speeds, grid).map_err(|e| e.to_string())?;
    let near_times = near.partition(PartitionKind::TrackingTime);
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            let c = grid.center(i, j);
            let inf = near_times.value(i, j) == f64::INFINITY;
            ensure(inf == in_star(c), || format!("cell {c}: infinite = {inf}"))?;
        }
    }

    // mirroring the scene about x = 0 mirrors the partition
    let bounds = Rect::new(Vec2::new(-5.0, -5.0), Vec2::new(5.0, 5.0)).map_err(|e| e.to_string())?;
    let square = |x0: f64| {
        Polygon::new(vec![Vec2::new(x0, -4.0), Vec2::new(x0 + 4.0, -4.0), Vec2::new(x0 + 4.0, 0.0), Vec2::new(x0, 0.0)])
            .map_err(|e| e.to_string())
    };
    let left = Environment::new(vec![square(-4.0)?], bounds).map_err(|e| e.to_string())?;
    let right = Environment::new(vec![square(0.0)?], bounds).map_err(|e| e.to_string())?;
    let small = GridSpec::new(Vec2::new(-5.0, -5.0), 0.1, 100, 100).map_err(|e| e.to_string())?;
    let part = |env: &Environment, id: usize, e: Vec2| {
        evader_partition(env, VertexId::new(0, id), e, speeds, small, PartitionKind::StrategyClass).map_err(|e| e.to_string())
    };
    let sym = part(&left, 2, Vec2::new(-0.7, 1.5))?;
    let mirror = part(&right, 3, Vec2::new(0.7, 1.5))?.mirrored_x();
    let mut mismatched = 0;
    for i in 0..small.nx {
        for j in 0..small.ny {
            let v = sym.value(i, j);
            let close = (-1i64..=1).any(|di| {
                (-1i64..=1).any(|dj| {
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    a >= 0
                        && b >= 0
                        && (a as usize) < small.nx
                        && (b as usize) < small.ny
                        && mirror.value(a as usize, b as usize).to_bits() == v.to_bits()
                })
            });
            if !close {
                mismatched += 1;
            }
        }
    }
    ensure(mismatched == 0, || format!("{mismatched} cells break mirror symmetry"))?;
    Ok(format!("class counts {seen:?}, 200×200 in {elapsed:.2?}"))
}

fn field_reductions() -> Check {
    let speeds = Speeds::new(1.0, 0.5);
    let square = Polygon::new(vec![
        Vec2::new(-1.0, -1.0),
        Vec2::new(1.0, -1.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(-1.0, 1.0),
    ])
    .map_err(|e| e.to_string())?;
    let bounds = Rect::new(Vec2::new(-10.0, -10.0), Vec2::new(10.0, 10.0)).map_err(|e| e.to_string())?;
    let env = Environment::new(vec![square], bounds).map_err(|e| e.to_string())?;
    // only (1, 1) is visible to both, and the evader is close enough to it
    // to escape in finite time
    let (p, e) = (Vec2::new(8.0, -0.9), Vec2::new(0.9, 1.3));
    let cands = candidate_corners(&env, p, e).map_err(|e| e.to_string())?;
    ensure(cands.len() == 1, || format!("{} candidates", cands.len()))?;
    let corner = Corner::from_env(&env, cands[0].corner).map_err(|e| e.to_string())?;
    let local = solve_in_world(&corner, p, e, speeds).map_err(|e| e.to_string())?;
    ensure(!local.tracking_time().is_infinite(), || "corner game is a pursuer win".into())?;
    let direct = local.direction();
    for scheme in [WeightScheme::DistanceArgmin, WeightScheme::InverseTime] {
        let cfg = FieldConfig { scheme, augmentation_weight: 0.0, ..FieldConfig::default() };
        let v = pursuit_vector(&env, p, e, speeds, &cfg).map_err(|e| e.to_string())?;
        ensure(Some(v.direction) == direct, || format!("{scheme:?}: {} vs {direct:?}", v.direction))?;
    }

    let frame = cands[0].frame;
    let opposed = |id: usize, v: Vec2| CornerCandidate {
        corner: VertexId::new(0, id),
        frame,
        local_vector: Some(v),
        local_time: Some(TrackingTime::finite(3.0)),
    };
    let pair = [opposed(0, Vec2::new(0.6, 0.8)), opposed(1, Vec2::new(-0.6, -0.8))];
    let (p, e) = (Vec2::new(2.0, 3.0), Vec2::new(5.0, 7.0));
    let v = combine(&pair, p, e, &FieldConfig::with_scheme(WeightScheme::InverseTime)).map_err(|e| e.to_string())?;
    ensure(v.direction == Vec2::new(0.6, 0.8), || format!("cancelled sum gives {}", v.direction))?;

    let scene = scenes::two_obstacle();
    let scaled_env = |k: f64| -> Result<Environment, String> {
        let obstacles = scene
            .env
            .obstacles()
            .iter()
            .map(|o| Polygon::new(o.vertices().iter().map(|&v| v * k).collect()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let b = scene.env.bounds();
        Environment::new(obstacles, Rect::new(b.min * k, b.max * k).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut compared = 0;
    let cfg = FieldConfig::default();
    while compared < 50 {
        let p = Vec2::new(rng.random_range(-7.0..7.0), rng.random_range(-7.0..7.0));
        let e = Vec2::new(rng.random_range(-7.0..7.0), rng.random_range(-7.0..7.0));
        if !scene.env.is_free(p) || !scene.env.is_free(e) || !segment_clear(p, e, &scene.env).unwrap_or(false) {
            continue;
        }
        let base = pursuit_vector(&scene.env, p, e, speeds, &cfg).map_err(|e| e.to_string())?;
        for k in [0.25, 4.0] {
            let env_k = scaled_env(k)?;
            let v = pursuit_vector(&env_k, p * k, e * k, speeds, &cfg).map_err(|e| e.to_string())?;
            let pattern = |v: &PursuitVector| v.contributors.iter().map(|c| (c.corner, c.weight)).collect::<Vec<_>>();
            ensure(pattern(&v) == pattern(&base), || format!("weights change under scaling by {k} at p={p}, e={e}"))?;
        }
        compared += 1;
    }
    Ok("single corner, cancellation and 50 scaled scenes".into())
}

fn simulation_reproduction() -> Check {
    let scene = scenes::two_obstacle();
    let play = |scheme: WeightScheme, dt: f64| {
        run(
            &scene.env,
            AgentState::new(scene.pursuer, scene.pursuer_speed),
            AgentState::new(scene.evader, scene.evader_speed),
            PursuerPolicy::field(scheme),
            EvaderPolicy::ScriptedWaypoints { waypoints: scene.waypoints.clone() },
            dt,
            120.0,
        )
        .map_err(|e| e.to_string())
    };
    let mut summary = Vec::new();
    let mut traces = Vec::new();
    for scheme in [WeightScheme::DistanceArgmin, WeightScheme::InverseTime] {
        let log = play(scheme, DEFAULT_DT)?;
        ensure(log.outcome == SimOutcome::EvaderPathDone, || format!("{scheme:?} ended with {:?}", log.outcome))?;
        ensure(log.steps.iter().all(|s| s.los), || format!("{scheme:?} lost sight"))?;
        let again = play(scheme, DEFAULT_DT)?;
        ensure(format!("{log:?}") == format!("{again:?}"), || format!("{scheme:?} log not reproducible"))?;
        let fine = play(scheme, DEFAULT_DT / 2.0)?;
        ensure(fine.outcome == log.outcome, || format!("{scheme:?} at dt/2 ended with {:?}", fine.outcome))?;
        let shift = (fine.end_time() - log.end_time()).abs();
        ensure(shift < 2.0 * DEFAULT_DT, || format!("{scheme:?} event moved by {shift}"))?;
        summary.push(format!("{scheme:?} {:.3} s", log.end_time()));
        traces.push(log.steps.iter().map(|s| s.pursuer).collect::<Vec<_>>());
    }
    ensure(traces[0] != traces[1], || "both schemes produced the same pursuer trace".into())?;
    Ok(summary.join(", "))
}

fn inside(poly: &[Vec2], q: Vec2) -> bool {
    let mut c = false;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        if (a.y > q.y) != (b.y > q.y) && q.x < a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y) {
            c = !c;
        }
    }
    c
}

fn random_scene(rng: &mut ChaCha8Rng) -> Environment {
    // one random convex polygon per occupied quadrant cell, so they never touch
    let n = rng.random_range(1..=4);
    let cells = [(-5.0, -5.0), (0.5, -5.0), (-5.0, 0.5), (0.5, 0.5)];
    let mut obstacles = Vec::new();
    for &(x0, y0) in cells.iter().take(n) {
        let c = Vec2::new(x0 + 2.25, y0 + 2.25);
        let k = rng.random_range(3..=7);
        let mut angles: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() < 0.2);
        if angles.len() < 3 {
            angles = vec![0.0, 2.1, 4.2];
        }
        let r = rng.random_range(0.8..2.0);
        let pts = angles.iter().map(|&a| c + Vec2::from_angle(a) * r).collect();
        obstacles.push(Polygon::new(pts).expect("convex polygon"));
    }
    let bounds = Rect::new(Vec2::new(-6.0, -6.0), Vec2::new(6.0, 6.0)).expect("bounds");
    Environment::new(obstacles, bounds).expect("disjoint obstacles")
}

/// Segments passing this close to a vertex other than their endpoints are
/// beyond the resolution of the sampling oracle.
fn grazes(env: &Environment, a: Vec2, b: Vec2) -> bool {
    env.obstacles().iter().flat_map(|o| o.vertices()).any(|&v| {
        v.distance(a) > 1e-9 && v.distance(b) > 1e-9 && point_segment_distance(v, a, b) < 1e-3
    })
}

fn brute_clear(env: &Environment, a: Vec2, b: Vec2) -> bool {
    (1..4000).all(|k| {
        let q = a.lerp(b, k as f64 / 4000.0);
        !env.obstacles().iter().any(|o| inside(o.vertices(), q))
    })
}

fn geometry_oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut queries = 0;
    let mut env = random_scene(&mut rng);
    while queries < 1000 {
        if queries % 50 == 0 {
            env = random_scene(&mut rng);
        }
        let free_point = |rng: &mut ChaCha8Rng| loop {
            let q = Vec2::new(rng.random_range(-6.0..6.0), rng.random_range(-6.0..6.0));
            if !env.obstacles().iter().any(|o| inside(o.vertices(), q)) {
                return q;
            }
        };
        let (a, b) = (free_point(&mut rng), free_point(&mut rng));
        if grazes(&env, a, b) || env.vertex_ids().any(|id| grazes(&env, a, env.vertex(id).unwrap_or(a))) {
            continue;
        }
        let fast = segment_clear(a, b, &env).map_err(|e| e.to_string())?;
        ensure(fast == brute_clear(&env, a, b), || format!("segment_clear({a}, {b}) = {fast}"))?;
        let seen = visible_vertices(a, &env).map_err(|e| e.to_string())?;
        for id in env.vertex_ids() {
            let v = env.vertex(id).map_err(|e| e.to_string())?;
            let brute = brute_clear(&env, a, v);
            ensure(seen.contains(&id) == brute, || format!("vertex {id} {v} from {a}: brute force says {brute}"))?;
        }
        queries += 1;
    }
    Ok("1000 segment and visibility queries".into())
}

fn main() {
    let checks: [(&str, fn() -> Check); 8] = [
        ("class 1 correctness", class1_correctness),
        ("oracle dominance", oracle_dominance),
        ("class 2 junction and termination", class2_junction),
        ("local optimality", local_optimality),
        ("partition reproduction", partition_reproduction),
        ("pursuit field reductions", field_reductions),
        ("simulation reproduction", simulation_reproduction),
        ("geometry oracles", geometry_oracles),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
