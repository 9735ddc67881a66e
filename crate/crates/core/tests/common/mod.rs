//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use pursuit_core::corner_game::{CornerGameConfig, Speeds};
use pursuit_core::geometry::{PolarPoint, Vec2};
use rand::Rng;

fn in_star(p: Vec2, w: f64) -> bool {
    let a = p.angle();
    p.norm() < 1e-12 || (a >= 0.0 && a <= w)
}

fn in_wedge(p: Vec2, w: f64) -> bool {
    p.norm() > 1e-12 && p.angle() <= w - PI
}

/// Rides the tangent line toward the corner from `(t, r)` until the line
/// outruns the pursuer.
pub fn follow_line(cfg: &CornerGameConfig, mut t: f64, mut r: f64, dt: f64) -> f64 {
    let line = cfg.tangent_line();
    let te = line.escape_time();
    let v = cfg.v_p_max;
    let rad = |t: f64, r: f64| v * v - (r * line.rate(t)).powi(2);
    let f = |t: f64, r: f64| -rad(t, r).max(0.0).sqrt();
    loop {
        if r <= 0.0 || line.angle(t) - PI >= 0.0 {
            return f64::INFINITY;
        }
        if rad(t, r) <= 0.0 {
            return t;
        }
        if t >= te {
            return te;
        }
        let h = dt.min(0.5 * (te - t)).max(1e-13);
        let k1 = f(t, r);
        let k2 = f(t + 0.5 * h, r + 0.5 * h * k1);
        let k3 = f(t + 0.5 * h, r + 0.5 * h * k2);
        let k4 = f(t + h, r + h * k3);
        let rn = r + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if rad(t + h, rn) <= 0.0 {
            // linear interpolation of the radicand inside the step
            let (g0, g1) = (rad(t, r), rad(t + h, rn));
            return t + h * g0 / (g0 - g1);
        }
        t += h;
        r = rn;
        if te - t < 1e-12 {
            return te;
        }
    }
}

/// Tracking time of a straight run along `heading`, switching to the line
/// follower when the run meets the tangent line slowly enough to ride it.
/// Runs into the obstacle wedge score zero.
pub fn straight_then_follow(cfg: &CornerGameConfig, heading: f64, dt: f64) -> f64 {
    let line = cfg.tangent_line();
    let te = line.escape_time();
    let w = cfg.wedge_angle;
    let v = Vec2::from_angle(heading) * cfg.v_p_max;
    let margin = |t: f64, p: Vec2| PI - line.angle(t) + p.angle();
    let mut p = cfg.pursuer_start();
    let mut t = 0.0;
    let mut s = margin(0.0, p);
    loop {
        if in_star(p, w) {
            return f64::INFINITY;
        }
        if t >= te {
            return te;
        }
        let tn = (t + dt).min(te);
        let pn = p + v * (tn - t);
        if in_wedge(pn, w) {
            return 0.0;
        }
        let sn = if in_star(pn, w) { 1.0 } else { margin(tn, pn) };
        if sn < 0.0 {
            let tc = t + (tn - t) * s / (s - sn);
            let pc = p + v * (tc - t);
            if pc.norm() * line.rate(tc) < cfg.v_p_max {
                return follow_line(cfg, tc, pc.norm(), dt);
            }
            return tc;
        }
        t = tn;
        p = pn;
        s = sn;
    }
}

/// Best straight-then-follow time over headings at `resolution` rad. A
/// coarse pass picks the promising headings, the fine pass re-scans them at
/// full resolution.
pub fn heading_oracle(cfg: &CornerGameConfig, resolution: f64, dt: f64) -> (f64, f64) {
    let coarse_res = resolution * 20.0;
    let n = (2.0 * PI / coarse_res).ceil() as usize;
    let mut coarse: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let h = -PI + i as f64 * coarse_res;
            (straight_then_follow(cfg, h, dt * 10.0), h)
        })
        .collect();
    coarse.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = (f64::NEG_INFINITY, 0.0);
    for &(_, h0) in coarse.iter().take(4) {
        let k = (coarse_res / resolution).round() as i64;
        for j in -k..=k {
            let h = h0 + j as f64 * resolution;
            let t = straight_then_follow(cfg, h, dt);
            if t > best.0 {
                best = (t, h);
            }
        }
    }
    best
}

/// Random canonical game over a right-angle wedge with the pursuer in its
/// shadow and the whole disc initially visible.
pub fn random_config(rng: &mut impl Rng) -> CornerGameConfig {
    let w = PI / 2.0;
    loop {
        let a = rng.random_range(0.2..0.9);
        let r_e = rng.random_range(0.5..5.0);
        let r_p = rng.random_range(0.5..5.0);
        let phi_e = rng.random_range(w - PI..PI);
        let phi_p = rng.random_range(w - PI + 0.01..-0.01);
        if PI - phi_e + phi_p < 0.0 {
            continue;
        }
        return CornerGameConfig::new(
            Speeds::new(1.0, a),
            PolarPoint::new(phi_e, r_e),
            PolarPoint::new(phi_p, r_p),
            w,
        )
        .unwrap();
    }
}

/// Random game with the pursuer close behind the initial tangent ray, the
/// band where two-stage solutions live.
pub fn random_tight_config(rng: &mut impl Rng) -> CornerGameConfig {
    let w = PI / 2.0;
    let a = rng.random_range(0.4..0.9);
    let phi_p = rng.random_range(w - PI + 0.02..-1.0);
    let slack = rng.random_range(0.0..0.06);
    let r_p = rng.random_range(0.5..5.0);
    let r_e = r_p * rng.random_range(0.5..0.95);
    CornerGameConfig::new(
        Speeds::new(1.0, a),
        PolarPoint::new(phi_p + PI - slack, r_e),
        PolarPoint::new(phi_p, r_p),
        w,
    )
    .unwrap()
}
