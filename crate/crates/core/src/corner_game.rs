//! Optimal pursuer strategy for tracking an evader around a single convex
//! corner.
//!
//! Everything here works in the canonical frame of [`CornerFrame`]: the
//! vertex is the origin, the obstacle fills the angles `[π, π + w]`, the
//! star region is `[0, w]` and the worst-case tangent line `l_t` of the
//! evader's reachable disc sweeps counter-clockwise. The pursuer keeps the
//! whole disc in view while `S = π − x1 + x3 ≥ 0`.
//!
//! The dispatcher tries, in order: star-region membership, initial
//! visibility, a one-stage straight run perpendicular to the terminal line
//! (Class 1), a straight run onto `l_t` followed by riding `l_t` toward the
//! corner (Class 2), and finally the race between the evader reaching the
//! corner and the pursuer reaching the star region.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{normalize_angle, Corner, CornerFrame, PolarPoint, Vec2};

/// Grid resolution of the bracketing scan, as a fraction of the domain.
pub const ROOT_SCAN_STEPS: usize = 1000;
/// Absolute bisection tolerance on times.
pub const ROOT_TOL: f64 = 1e-12;
/// Samples of `S(t)` checked along every candidate straight segment.
pub const VISIBILITY_SAMPLES: usize = 1000;
/// Most negative `S` accepted by the visibility sweep.
pub const VISIBILITY_SLACK: f64 = -1e-9;
/// Stage-2 step as a fraction of the escape time `R_e / v_e`.
pub const STAGE2_STEP_FRACTION: f64 = 1e-4;

const ANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CornerGameError {
    #[error("invalid corner game: {0}")]
    InvalidConfig(&'static str),
    #[error("reachable disc contains corner")]
    DiscContainsCorner,
    #[error("stage-2 termination not found")]
    StageTwoTerminationNotFound,
    #[error("no strategy from invisible start")]
    InvisibleStart,
}

/// Maximum speeds of both players.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Speeds {
    pub pursuer: f64,
    pub evader: f64,
}

impl Speeds {
    pub fn new(pursuer: f64, evader: f64) -> Self {
        Self { pursuer, evader }
    }

    pub fn ratio(&self) -> f64 {
        self.evader / self.pursuer
    }
}

/// Tracking time in seconds; `+∞` means the pursuer tracks forever.
///
/// Ordered with infinity above every finite time. Serialized as a JSON
/// number, or the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrackingTime(f64);

impl TrackingTime {
    pub const INFINITE: TrackingTime = TrackingTime(f64::INFINITY);
    pub const ZERO: TrackingTime = TrackingTime(0.0);

    /// Panics on negative or NaN input.
    pub fn finite(t: f64) -> Self {
        assert!(t >= 0.0 && t.is_finite(), "tracking time must be finite and nonnegative, got {t}");
        TrackingTime(t)
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn as_f64(self) -> f64 {
        self.0
    }
}

impl Eq for TrackingTime {}

impl PartialOrd for TrackingTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TrackingTime {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for TrackingTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl std::str::FromStr for TrackingTime {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(Self::INFINITE);
        }
        let t: f64 = s.parse().map_err(|_| format!("invalid tracking time {s:?}"))?;
        if t >= 0.0 && t.is_finite() {
            Ok(TrackingTime(t))
        } else {
            Err(format!("invalid tracking time {s:?}"))
        }
    }
}

impl Serialize for TrackingTime {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for TrackingTime {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(t) if t >= 0.0 && t.is_finite() => Ok(TrackingTime(t)),
            Raw::Num(t) => Err(serde::de::Error::custom(format!("invalid tracking time {t}"))),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Pursuer strategy categories, numbered as in the strategy partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StrategyClass {
    /// Inside the star region: any strategy that stays there.
    StarAny,
    /// Race to the star region before the evader reaches the corner.
    ShortestPathToStar,
    Class1,
    Class2,
    NotVisible,
    Obstacle,
}

impl StrategyClass {
    pub const ALL: [StrategyClass; 6] = [
        StrategyClass::StarAny,
        StrategyClass::ShortestPathToStar,
        StrategyClass::Class1,
        StrategyClass::Class2,
        StrategyClass::NotVisible,
        StrategyClass::Obstacle,
    ];

    pub fn code(self) -> u8 {
        match self {
            StrategyClass::StarAny => 1,
            StrategyClass::ShortestPathToStar => 2,
            StrategyClass::Class1 => 3,
            StrategyClass::Class2 => 4,
            StrategyClass::NotVisible => 5,
            StrategyClass::Obstacle => 6,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(usize::from(code).checked_sub(1)?).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            StrategyClass::StarAny => "StarAny",
            StrategyClass::ShortestPathToStar => "ShortestPathToStar",
            StrategyClass::Class1 => "Class1",
            StrategyClass::Class2 => "Class2",
            StrategyClass::NotVisible => "NotVisible",
            StrategyClass::Obstacle => "Obstacle",
        }
    }
}

impl fmt::Display for StrategyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Worst-case tangent line `l_t` from the corner to the evader's reachable
/// disc, `x1(t) = φ_e(0) + asin(v_e t / R_e)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentLine {
    pub phi_e: f64,
    pub r_e: f64,
    pub v_e: f64,
}

impl TangentLine {
    /// Time at which the disc reaches the corner.
    pub fn escape_time(&self) -> f64 {
        self.r_e / self.v_e
    }

    /// `x1(t)`, clamped at `t ≥ R_e / v_e`.
    pub fn angle(&self, t: f64) -> f64 {
        self.phi_e + (self.v_e * t / self.r_e).clamp(-1.0, 1.0).asin()
    }

    /// `ẋ1(t)`; infinite once the disc reaches the corner.
    pub fn rate(&self, t: f64) -> f64 {
        let rad = self.r_e * self.r_e - (self.v_e * t).powi(2);
        if rad <= 0.0 {
            f64::INFINITY
        } else {
            self.v_e / rad.sqrt()
        }
    }
}

/// One instance of the corner game in canonical coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CornerGameConfig {
    pub v_p_max: f64,
    pub v_e_max: f64,
    /// `v_e_max / v_p_max`.
    pub speed_ratio_a: f64,
    pub evader0: PolarPoint,
    pub pursuer0: PolarPoint,
    /// Interior angle `w` of the obstacle wedge; the canonical edges point
    /// along `π` and `π + w`.
    pub wedge_angle: f64,
}

impl CornerGameConfig {
    pub fn new(
        speeds: Speeds,
        evader0: PolarPoint,
        pursuer0: PolarPoint,
        wedge_angle: f64,
    ) -> Result<Self, CornerGameError> {
        let finite = |x: f64| x.is_finite();
        if !(finite(speeds.pursuer) && speeds.pursuer > 0.0 && finite(speeds.evader) && speeds.evader > 0.0) {
            return Err(CornerGameError::InvalidConfig("speeds must be positive"));
        }
        if !(finite(evader0.radius) && evader0.radius > 0.0 && finite(evader0.angle)) {
            return Err(CornerGameError::InvalidConfig("evader radius must be positive"));
        }
        if !(finite(pursuer0.radius) && pursuer0.radius > 0.0 && finite(pursuer0.angle)) {
            return Err(CornerGameError::InvalidConfig("pursuer radius must be positive"));
        }
        if !(wedge_angle > 0.0 && wedge_angle <= PI) {
            return Err(CornerGameError::InvalidConfig("wedge angle must lie in (0, π]"));
        }
        Ok(Self {
            v_p_max: speeds.pursuer,
            v_e_max: speeds.evader,
            speed_ratio_a: speeds.evader / speeds.pursuer,
            evader0: PolarPoint::new(evader0.angle, evader0.radius),
            pursuer0: PolarPoint::new(pursuer0.angle, pursuer0.radius),
            wedge_angle,
        })
    }

    pub fn speeds(&self) -> Speeds {
        Speeds::new(self.v_p_max, self.v_e_max)
    }

    pub fn tangent_line(&self) -> TangentLine {
        TangentLine { phi_e: self.evader0.angle, r_e: self.evader0.radius, v_e: self.v_e_max }
    }

    /// `R_e / v_e`, the earliest time the evader can reach the corner.
    pub fn escape_time(&self) -> f64 {
        self.evader0.radius / self.v_e_max
    }

    /// `Δφ0 = φ_e(0) − φ_p(0)`.
    pub fn delta_phi0(&self) -> f64 {
        self.evader0.angle - self.pursuer0.angle
    }

    pub fn pursuer_start(&self) -> Vec2 {
        self.pursuer0.to_cartesian()
    }

    pub fn initial_state(&self) -> CornerState {
        CornerState { t: 0.0, x1: self.evader0.angle, x2: self.pursuer0.radius, x3: self.pursuer0.angle }
    }

    /// Same game with every length multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let mut out = *self;
        out.evader0.radius *= lambda;
        out.pursuer0.radius *= lambda;
        out
    }

    /// True when the pursuer starts in the closed star region `[0, w]`.
    pub fn pursuer_in_star(&self) -> bool {
        in_star(self.pursuer0.angle, self.wedge_angle)
    }
}

fn in_star(angle: f64, wedge: f64) -> bool {
    angle >= -ANGLE_TOL && angle <= wedge + ANGLE_TOL
}

/// Game state: tangent-line angle, pursuer radius and pursuer angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CornerState {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl CornerState {
    pub fn at(cfg: &CornerGameConfig, t: f64, pursuer: Vec2) -> Self {
        let p = PolarPoint::from_cartesian(pursuer);
        CornerState { t, x1: cfg.tangent_line().angle(t), x2: p.radius, x3: p.angle }
    }
}

/// Pursuer controls: heading relative to the tangential direction (positive
/// toward the corner) and speed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Controls {
    pub u1: f64,
    pub u2: f64,
}

impl Controls {
    /// Controls that move a pursuer at `position` with `velocity`.
    pub fn from_motion(position: Vec2, velocity: Vec2) -> Self {
        let radial = position.normalized().unwrap_or(Vec2::new(1.0, 0.0));
        let v_r = velocity.dot(radial);
        let v_t = velocity.dot(radial.perp());
        Controls { u1: (-v_r).atan2(v_t), u2: velocity.norm() }
    }
}

/// `x1(t)`; defined until the disc reaches the corner.
pub fn tangent_angle(cfg: &CornerGameConfig, t: f64) -> Result<f64, CornerGameError> {
    if !(t >= 0.0) {
        return Err(CornerGameError::InvalidConfig("time must be nonnegative"));
    }
    if t >= cfg.escape_time() {
        return Err(CornerGameError::DiscContainsCorner);
    }
    Ok(cfg.tangent_line().angle(t))
}

/// Visibility margin `S = π − x1 + x3`; the disc is fully visible iff `S ≥ 0`.
pub fn constraint_s(state: &CornerState) -> f64 {
    PI - state.x1 + state.x3
}

fn margin_at(line: &TangentLine, t: f64, pursuer: Vec2) -> f64 {
    PI - line.angle(t) + pursuer.angle()
}

/// Smallest `S` over `samples` uniform times of a straight run.
fn min_margin_straight(cfg: &CornerGameConfig, end: Vec2, duration: f64) -> f64 {
    let line = cfg.tangent_line();
    let start = cfg.pursuer_start();
    let n = VISIBILITY_SAMPLES;
    (0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            margin_at(&line, duration * f, start.lerp(end, f))
        })
        .fold(f64::INFINITY, f64::min)
}

/// Scans `(lo, hi]` on a uniform grid and bisects every sign change where
/// the function is defined on both ends. Roots come back in increasing order.
fn scan_roots(f: impl Fn(f64) -> Option<f64>, lo: f64, hi: f64) -> Vec<f64> {
    let n = ROOT_SCAN_STEPS;
    let grid: Vec<(f64, Option<f64>)> = (1..=n)
        .map(|k| {
            let t = lo + (hi - lo) * k as f64 / n as f64;
            (t, f(t))
        })
        .collect();
    let mut roots = Vec::new();
    for w in grid.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        let (Some(fa), Some(fb)) = (fa, fb) else { continue };
        if fa == 0.0 {
            roots.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            if let Some(r) = bisect(&f, a, b, fa) {
                roots.push(r);
            }
        }
    }
    if let Some(&(t, Some(v))) = grid.last() {
        if v == 0.0 {
            roots.push(t);
        }
    }
    roots
}

fn bisect(f: &impl Fn(f64) -> Option<f64>, mut a: f64, mut b: f64, mut fa: f64) -> Option<f64> {
    for _ in 0..200 {
        if b - a <= ROOT_TOL {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// One-stage solution: a straight run meeting the terminal line at right
/// angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Class1Solution {
    pub t_f: f64,
    /// Canonical direction of the run.
    pub heading: f64,
    pub terminal_point: Vec2,
}

impl Class1Solution {
    /// Collinearity `x1 − x3 − π` and the terminal rate gap `ẋ1 − ẋ3` at
    /// `t_f`.
    pub fn terminal_residuals(&self, cfg: &CornerGameConfig) -> (f64, f64) {
        let line = cfg.tangent_line();
        let q = self.terminal_point;
        let velocity = Vec2::from_angle(self.heading) * cfg.v_p_max;
        let x3_rate = q.cross(velocity) / q.norm_squared();
        (line.angle(self.t_f) - q.angle() - PI, line.rate(self.t_f) - x3_rate)
    }
}

enum Search<T> {
    Found(T),
    /// The candidate along this heading enters the star region first.
    ReachesStar(f64),
    None,
}

/// Class 1: among the times `t` at which a run perpendicular to the tangent
/// ray `x1(t) − π` reaches it exactly at `t`, the largest one whose run
/// keeps the disc in view and ends with `l_t` rotating faster than the
/// pursuer.
pub fn solve_class1(cfg: &CornerGameConfig) -> Option<Class1Solution> {
    match search_class1(cfg) {
        Search::Found(s) => Some(s),
        _ => None,
    }
}

fn search_class1(cfg: &CornerGameConfig) -> Search<Class1Solution> {
    let line = cfg.tangent_line();
    let (phi_p, r_p) = (cfg.pursuer0.angle, cfg.pursuer0.radius);
    let v_p = cfg.v_p_max;
    // Angle swept by the terminal ray past the pursuer's start.
    let sweep = |t: f64| line.angle(t) - PI - phi_p;
    let gap = |t: f64| {
        let d = sweep(t);
        (0.0..=FRAC_PI_2).contains(&d).then(|| r_p * d.sin() - v_p * t)
    };
    let roots = scan_roots(gap, 0.0, line.escape_time());
    for &t_f in roots.iter().rev() {
        if t_f <= 0.0 {
            continue;
        }
        let theta_f = line.angle(t_f) - PI;
        let r_f = r_p * sweep(t_f).cos();
        if r_f <= 0.0 {
            continue;
        }
        // Strict terminal inequality: l_t outruns the tangential pursuer.
        if line.rate(t_f) - v_p / r_f <= 0.0 {
            continue;
        }
        let heading = normalize_angle(theta_f + FRAC_PI_2);
        if theta_f >= -ANGLE_TOL {
            return Search::ReachesStar(heading);
        }
        let terminal_point = Vec2::from_angle(theta_f) * r_f;
        if min_margin_straight(cfg, terminal_point, t_f) < VISIBILITY_SLACK {
            continue;
        }
        return Search::Found(Class1Solution { t_f, heading, terminal_point });
    }
    Search::None
}

/// Triangle `O, p0, p_T` closing the first stage of a Class 2 run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage1Geometry {
    pub t: f64,
    pub alpha_t: f64,
    pub beta_t: f64,
    /// Angle at `p_T`, taken on the obtuse branch (the run arrives moving
    /// toward the corner).
    pub gamma_t: f64,
    pub delta_phi0: f64,
    pub terminal_radius: f64,
}

impl Stage1Geometry {
    /// Solves the triangle for a candidate junction time `t`, or `None`
    /// when it cannot close with an obtuse angle at the junction.
    pub fn at(cfg: &CornerGameConfig, t: f64) -> Option<Self> {
        if !(t > 0.0 && t < cfg.escape_time()) {
            return None;
        }
        let alpha_t = (cfg.v_e_max * t / cfg.evader0.radius).asin();
        let delta_phi0 = cfg.delta_phi0();
        let beta_t = alpha_t - PI + delta_phi0;
        if !(beta_t > 0.0 && beta_t < FRAC_PI_2) {
            return None;
        }
        let run = cfg.v_p_max * t;
        let sin_gamma = cfg.pursuer0.radius * beta_t.sin() / run;
        if !(sin_gamma > 0.0 && sin_gamma <= 1.0) {
            return None;
        }
        let gamma_t = PI - sin_gamma.asin();
        let terminal_radius = run * (beta_t + gamma_t).sin() / beta_t.sin();
        if !(terminal_radius > 0.0) {
            return None;
        }
        Some(Self { t, alpha_t, beta_t, gamma_t, delta_phi0, terminal_radius })
    }

    /// Largest relative mismatch among the three law-of-sines ratios.
    pub fn law_of_sines_residual(&self, cfg: &CornerGameConfig) -> f64 {
        let a = self.terminal_radius / (PI - self.beta_t - self.gamma_t).sin();
        let b = cfg.v_p_max * self.t / self.beta_t.sin();
        let c = cfg.pursuer0.radius / self.gamma_t.sin();
        ((a - b).abs() / b).max((b - c).abs() / b)
    }

    /// Pursuer angular rate at the junction minus the tangent-line rate.
    pub fn rate_mismatch(&self, cfg: &CornerGameConfig) -> f64 {
        cfg.v_p_max * (PI - self.gamma_t).sin() / self.terminal_radius - cfg.tangent_line().rate(self.t)
    }

    pub fn junction(&self, cfg: &CornerGameConfig) -> Vec2 {
        Vec2::from_angle(cfg.tangent_line().angle(self.t) - PI) * self.terminal_radius
    }
}

/// Second stage of a Class 2 run: the pursuer rides `l_t` toward the corner
/// at full speed, `ṙ = −sqrt(v_p² − r² ẋ1²)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage2Path {
    pub line: TangentLine,
    pub t_start: f64,
    pub t_end: f64,
    /// Integration nodes `(t, r)`.
    pub nodes: Vec<(f64, f64)>,
}

impl Stage2Path {
    /// Pursuer radius at `t`, interpolated between integration nodes.
    pub fn radius(&self, t: f64) -> f64 {
        let t = t.clamp(self.t_start, self.t_end);
        let i = self.nodes.partition_point(|&(tn, _)| tn <= t);
        if i == 0 {
            return self.nodes[0].1;
        }
        if i >= self.nodes.len() {
            return self.nodes[self.nodes.len() - 1].1;
        }
        let (t0, r0) = self.nodes[i - 1];
        let (t1, r1) = self.nodes[i];
        if t1 <= t0 {
            return r1;
        }
        r0 + (r1 - r0) * (t - t0) / (t1 - t0)
    }

    pub fn position(&self, t: f64) -> Vec2 {
        let t = t.clamp(self.t_start, self.t_end);
        Vec2::from_angle(self.line.angle(t) - PI) * self.radius(t)
    }

    /// Tangential speed gap `v_p − r ẋ1` at the end of the stage.
    pub fn terminal_speed_gap(&self, v_p: f64) -> f64 {
        let r = self.nodes[self.nodes.len() - 1].1;
        v_p - r * self.line.rate(self.t_end)
    }
}

/// Two-stage solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Class2Solution {
    pub t1: f64,
    pub t2: f64,
    /// Canonical direction of the first, straight stage.
    pub stage1_heading: f64,
    pub junction: Vec2,
    pub stage1: Stage1Geometry,
    pub stage2: Stage2Path,
}

impl Class2Solution {
    pub fn total_time(&self) -> f64 {
        self.t1 + self.t2
    }

    /// Pursuer controls at the end of stage 1.
    pub fn junction_controls(&self, cfg: &CornerGameConfig) -> Controls {
        Controls::from_motion(self.junction, Vec2::from_angle(self.stage1_heading) * cfg.v_p_max)
    }

    /// `ẋ1 − ẋ3` at the junction, computed from the actual segment.
    pub fn junction_rate_gap(&self, cfg: &CornerGameConfig) -> f64 {
        let v = Vec2::from_angle(self.stage1_heading) * cfg.v_p_max;
        cfg.tangent_line().rate(self.t1) - self.junction.cross(v) / self.junction.norm_squared()
    }

    pub fn stage2_radius(&self, t: f64) -> f64 {
        self.stage2.radius(t)
    }
}

/// Class 2: a straight first stage ending on `l_t` with matched angular
/// speed (largest admissible junction time), then riding `l_t` until the
/// pursuer can no longer keep up.
pub fn solve_class2(cfg: &CornerGameConfig) -> Result<Option<Class2Solution>, CornerGameError> {
    match search_class2(cfg)? {
        Search::Found(s) => Ok(Some(s)),
        _ => Ok(None),
    }
}

fn search_class2(cfg: &CornerGameConfig) -> Result<Search<Class2Solution>, CornerGameError> {
    let line = cfg.tangent_line();
    let mismatch = |t: f64| Stage1Geometry::at(cfg, t).map(|g| g.rate_mismatch(cfg));
    let roots = scan_roots(mismatch, 0.0, line.escape_time());
    let start = cfg.pursuer_start();
    for &t1 in roots.iter().rev() {
        let Some(stage1) = Stage1Geometry::at(cfg, t1) else { continue };
        let junction = stage1.junction(cfg);
        let heading = (junction - start).angle();
        if junction.angle() >= -ANGLE_TOL {
            return Ok(Search::ReachesStar(heading));
        }
        if min_margin_straight(cfg, junction, t1) < VISIBILITY_SLACK {
            continue;
        }
        let candidate_controls = Controls::from_motion(junction, Vec2::from_angle(heading) * cfg.v_p_max);
        if !(candidate_controls.u1 >= -1e-9 && candidate_controls.u1 < FRAC_PI_2) {
            continue;
        }
        let stage2 = match integrate_stage2(cfg, t1, stage1.terminal_radius, STAGE2_STEP_FRACTION) {
            Stage2End::Terminated(path) => path,
            Stage2End::ReachesStar(_) => return Ok(Search::ReachesStar(heading)),
            Stage2End::Escaped(_) => return Err(CornerGameError::StageTwoTerminationNotFound),
        };
        return Ok(Search::Found(Class2Solution {
            t1,
            t2: stage2.t_end - t1,
            stage1_heading: heading,
            junction,
            stage1,
            stage2,
        }));
    }
    Ok(Search::None)
}

enum Stage2End {
    Terminated(Stage2Path),
    /// The pursuer reaches the vertex or the star boundary while riding.
    ReachesStar(Stage2Path),
    /// Still riding when the disc reaches the corner.
    Escaped(Stage2Path),
}

fn integrate_stage2(cfg: &CornerGameConfig, t1: f64, r1: f64, step_fraction: f64) -> Stage2End {
    let line = cfg.tangent_line();
    let v_p = cfg.v_p_max;
    let t_e = line.escape_time();
    let radicand = |t: f64, r: f64| v_p * v_p - (r * line.rate(t)).powi(2);
    let rhs = |t: f64, r: f64| -radicand(t, r).max(0.0).sqrt();
    let rk4 = |t: f64, r: f64, h: f64| {
        let k1 = rhs(t, r);
        let k2 = rhs(t + 0.5 * h, r + 0.5 * h * k1);
        let k3 = rhs(t + 0.5 * h, r + 0.5 * h * k2);
        let k4 = rhs(t + h, r + h * k3);
        r + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    };
    let refine_below = 1e-8 * v_p * v_p;
    let mut h = step_fraction * t_e;
    let (mut t, mut r) = (t1, r1);
    let mut nodes = vec![(t, r)];
    let path = |nodes: Vec<(f64, f64)>, t_end: f64| Stage2Path { line, t_start: t1, t_end, nodes };
    if radicand(t, r) <= 0.0 {
        return Stage2End::Terminated(path(nodes, t));
    }
    loop {
        if t >= t_e - 1e-9 * t_e.max(1.0) || h < 1e-15 * t_e {
            return Stage2End::Escaped(path(nodes, t));
        }
        // Never step onto the singular instant t_e.
        let step = h.min(0.5 * (t_e - t));
        let t_next = t + step;
        let r_next = rk4(t, r, step);
        if r_next <= 0.0 || line.angle(t_next) - PI >= -ANGLE_TOL {
            nodes.push((t_next, r_next.max(0.0)));
            return Stage2End::ReachesStar(path(nodes, t_next));
        }
        let g = radicand(t_next, r_next);
        if g <= 0.0 {
            // Bisect the sub-step that lands on the radicand's zero.
            let (mut lo, mut hi) = (0.0, step);
            for _ in 0..200 {
                if hi - lo <= ROOT_TOL * 1e-3 {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if radicand(t + mid, rk4(t, r, mid)) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t_end = t + hi;
            nodes.push((t_end, rk4(t, r, hi)));
            return Stage2End::Terminated(path(nodes, t_end));
        }
        t = t_next;
        r = r_next;
        nodes.push((t, r));
        if g < refine_below {
            h *= 0.5;
        }
    }
}

/// Canonical pursuer motion for a solved game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Trajectory {
    Hold { at: Vec2 },
    /// Straight run at `speed`, stopping at `end`.
    Straight { start: Vec2, end: Vec2, speed: f64 },
    TwoStage { start: Vec2, junction: Vec2, speed: f64, t1: f64, stage2: Stage2Path },
}

impl Trajectory {
    pub fn position(&self, t: f64) -> Vec2 {
        match self {
            Trajectory::Hold { at } => *at,
            Trajectory::Straight { start, end, speed } => straight_at(*start, *end, *speed, t),
            Trajectory::TwoStage { start, junction, speed, t1, stage2 } => {
                if t <= *t1 {
                    straight_at(*start, *junction, *speed, t)
                } else {
                    stage2.position(t)
                }
            }
        }
    }

    /// Unit direction of the initial motion, if the pursuer moves.
    pub fn initial_direction(&self) -> Option<Vec2> {
        match self {
            Trajectory::Hold { .. } => None,
            Trajectory::Straight { start, end, .. } => (*end - *start).normalized(),
            Trajectory::TwoStage { start, junction, .. } => (*junction - *start).normalized(),
        }
    }
}

fn straight_at(start: Vec2, end: Vec2, speed: f64, t: f64) -> Vec2 {
    let len = start.distance(end);
    if len == 0.0 {
        return start;
    }
    let s = (speed * t.max(0.0)).min(len);
    start.lerp(end, s / len)
}

/// Solved corner game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackingOutcome {
    pub strategy: StrategyClass,
    pub tracking_time: TrackingTime,
    pub trajectory: Trajectory,
    /// `T1` for Class 2 outcomes.
    pub junction_time: Option<f64>,
    pub class1: Option<Class1Solution>,
    pub class2: Option<Class2Solution>,
    pub line: TangentLine,
}

impl TrackingOutcome {
    /// Canonical pursuer position and worst-case tangent angle at `t`. The
    /// tangent angle is `None` once the disc has reached the corner.
    pub fn sample(&self, t: f64) -> (Vec2, Option<f64>) {
        let x1 = (t < self.line.escape_time()).then(|| self.line.angle(t));
        (self.trajectory.position(t), x1)
    }

    fn new(strategy: StrategyClass, tracking_time: TrackingTime, trajectory: Trajectory, line: TangentLine) -> Self {
        Self { strategy, tracking_time, trajectory, junction_time: None, class1: None, class2: None, line }
    }
}

/// Nearest point of the star cone `[0, w]` to `p`.
fn nearest_star_point(p: Vec2, wedge: f64) -> Vec2 {
    if in_star(p.angle(), wedge) {
        return p;
    }
    [0.0, wedge]
        .iter()
        .map(|&a| {
            let dir = Vec2::from_angle(a);
            dir * p.dot(dir).max(0.0)
        })
        .min_by(|a, b| a.distance(p).total_cmp(&b.distance(p)))
        .unwrap_or(Vec2::ZERO)
}

/// Geodesic distance from the pursuer to the star region.
pub fn distance_to_star(cfg: &CornerGameConfig) -> f64 {
    let p = cfg.pursuer_start();
    p.distance(nearest_star_point(p, cfg.wedge_angle))
}

/// True when the straight run to the nearest star point keeps `S ≥ 0`.
fn star_run_keeps_view(cfg: &CornerGameConfig) -> bool {
    let start = cfg.pursuer_start();
    let target = nearest_star_point(start, cfg.wedge_angle);
    let duration = start.distance(target) / cfg.v_p_max;
    duration == 0.0 || min_margin_straight(cfg, target, duration) >= VISIBILITY_SLACK
}

/// The evader runs for the corner while the pursuer runs for the star
/// region; whoever arrives first decides the outcome.
pub fn race_to_origin(cfg: &CornerGameConfig) -> TrackingOutcome {
    let start = cfg.pursuer_start();
    let target = nearest_star_point(start, cfg.wedge_angle);
    let t_p = start.distance(target) / cfg.v_p_max;
    let t_e = cfg.escape_time();
    let time = if t_p <= t_e { TrackingTime::INFINITE } else { TrackingTime::finite(t_e) };
    TrackingOutcome::new(
        StrategyClass::ShortestPathToStar,
        time,
        Trajectory::Straight { start, end: target, speed: cfg.v_p_max },
        cfg.tangent_line(),
    )
}

/// How a heading run ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunEnd {
    /// `S` goes negative: tracking is lost.
    Lost,
    /// The pursuer enters the star region with the disc in view.
    ReachedStar,
    /// The disc reaches the corner while the pursuer still sees it.
    Escaped,
}

/// A straight run along a fixed heading that switches to riding `l_t`
/// when it meets the line slowly enough to keep pace with it.
#[derive(Clone, Debug, PartialEq)]
pub struct HeadingRun {
    pub heading: f64,
    pub time: TrackingTime,
    pub end: RunEnd,
    /// Time at which the run meets `l_t` and starts riding it.
    pub contact: Option<f64>,
    pub trajectory: Trajectory,
}

/// Heading runs sampled by the coarse pass of the strategy search.
pub const SEARCH_HEADINGS: usize = 64;
const SEARCH_STEP_FRACTION: f64 = 2e-3;
const RUN_SAMPLES: usize = 200;

/// Evaluates the run along `heading` with exact event detection.
pub fn run_heading(cfg: &CornerGameConfig, heading: f64) -> HeadingRun {
    run_heading_with(cfg, heading, STAGE2_STEP_FRACTION)
}

/// First `t > 0` at which `p0 + v t` crosses the ray at `angle`.
fn ray_crossing(p0: Vec2, v: Vec2, angle: f64) -> Option<f64> {
    let d = Vec2::from_angle(angle);
    let denom = d.cross(v);
    if denom == 0.0 {
        return None;
    }
    let t = -d.cross(p0) / denom;
    (t > 0.0 && d.dot(p0 + v * t) >= 0.0).then_some(t)
}

fn bisect_sign(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..100 {
        if b - a <= ROOT_TOL * b.abs().max(1.0) {
            break;
        }
        let m = 0.5 * (a + b);
        if g(m) < 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    b
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn golden_min(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..iters {
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - GOLDEN * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + GOLDEN * (b - a);
            gd = g(d);
        }
    }
    if gc < gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

/// First time `g` turns negative on `(0, horizon]`, checking sampled local
/// minima for dips that fall between samples.
fn first_violation(g: impl Fn(f64) -> f64, horizon: f64) -> Option<f64> {
    let n = RUN_SAMPLES;
    let mut prev2: Option<(f64, f64)> = None;
    let mut prev = (0.0, g(0.0));
    for k in 1..=n {
        let t = horizon * k as f64 / n as f64;
        let v = g(t);
        if v < 0.0 {
            return Some(bisect_sign(&g, prev.0, t));
        }
        if let Some(p2) = prev2 {
            let slope = (p2.1 - prev.1).abs().max((v - prev.1).abs());
            if prev.1 <= p2.1 && prev.1 <= v && prev.1 < 2.0 * slope {
                let (tm, vm) = golden_min(&g, p2.0, t, 60);
                if vm < 0.0 {
                    return Some(bisect_sign(&g, p2.0, tm));
                }
            }
        }
        prev2 = Some(prev);
        prev = (t, v);
    }
    None
}

fn run_heading_with(cfg: &CornerGameConfig, heading: f64, step_fraction: f64) -> HeadingRun {
    let line = cfg.tangent_line();
    let t_e = line.escape_time();
    let w = cfg.wedge_angle;
    let start = cfg.pursuer_start();
    let v = Vec2::from_angle(heading) * cfg.v_p_max;
    let earliest = |angles: [f64; 2]| {
        angles
            .iter()
            .filter_map(|&a| ray_crossing(start, v, a))
            .fold(f64::INFINITY, f64::min)
    };
    let t_star = earliest([0.0, w]);
    let t_wall = earliest([PI, w - PI]);
    let horizon = t_e.min(t_star).min(t_wall);
    let at = |t: f64| start + v * t;
    let straight = |t: f64| Trajectory::Straight { start, end: at(t), speed: cfg.v_p_max };
    let done = |time, end, contact, trajectory| HeadingRun { heading, time, end, contact, trajectory };
    let Some(tc) = first_violation(|t| margin_at(&line, t, at(t)), horizon) else {
        return if t_star <= t_e && t_star <= t_wall {
            done(TrackingTime::INFINITE, RunEnd::ReachedStar, None, straight(t_star))
        } else if t_wall < t_e {
            // Running into the obstacle ends the run.
            done(TrackingTime::finite(t_wall), RunEnd::Lost, None, straight(t_wall))
        } else {
            done(TrackingTime::finite(t_e), RunEnd::Escaped, None, straight(t_e))
        };
    };
    let pc = at(tc);
    if tc >= t_e || pc.norm() * line.rate(tc) >= cfg.v_p_max {
        return done(TrackingTime::finite(tc.min(t_e)), RunEnd::Lost, None, straight(tc));
    }
    let ride = |stage2: Stage2Path| Trajectory::TwoStage { start, junction: pc, speed: cfg.v_p_max, t1: tc, stage2 };
    match integrate_stage2(cfg, tc, pc.norm(), step_fraction) {
        Stage2End::Terminated(path) => {
            done(TrackingTime::finite(path.t_end), RunEnd::Lost, Some(tc), ride(path))
        }
        Stage2End::ReachesStar(path) => done(TrackingTime::INFINITE, RunEnd::ReachedStar, Some(tc), ride(path)),
        Stage2End::Escaped(path) => done(TrackingTime::finite(t_e), RunEnd::Escaped, Some(tc), ride(path)),
    }
}

/// Heading toward the point of the star boundary that is reached in time
/// with the largest sampled visibility margin, if that margin is
/// nonnegative.
fn star_reach_heading(cfg: &CornerGameConfig) -> Option<f64> {
    let start = cfg.pursuer_start();
    let line = cfg.tangent_line();
    let reach = cfg.v_p_max * cfg.escape_time();
    let margin_to = |q: Vec2| {
        let len = start.distance(q);
        if len > reach {
            return f64::NEG_INFINITY;
        }
        let dur = len / cfg.v_p_max;
        (0..=RUN_SAMPLES)
            .map(|k| {
                let f = k as f64 / RUN_SAMPLES as f64;
                margin_at(&line, dur * f, start.lerp(q, f))
            })
            .fold(f64::INFINITY, f64::min)
    };
    let mut best: Option<(f64, Vec2)> = None;
    for ray in [0.0, cfg.wedge_angle] {
        let d = Vec2::from_angle(ray);
        // Star-boundary points within reach: |start − s d| ≤ reach.
        let b = start.dot(d);
        let disc = b * b - (start.norm_squared() - reach * reach);
        if disc < 0.0 {
            continue;
        }
        let (lo, hi) = ((b - disc.sqrt()).max(0.0), b + disc.sqrt());
        if hi < lo {
            continue;
        }
        let f = |s: f64| -margin_to(d * s);
        let n = 32;
        let mut top = (f64::INFINITY, lo);
        for k in 0..=n {
            let s = lo + (hi - lo) * k as f64 / n as f64;
            let v = f(s);
            if v < top.0 {
                top = (v, s);
            }
        }
        let ds = (hi - lo) / n as f64;
        let (s, v) = golden_min(&f, (top.1 - ds).max(lo), (top.1 + ds).min(hi), 40);
        let (s, v) = if v <= top.0 { (s, v) } else { (top.1, top.0) };
        if best.is_none_or(|(bv, _)| -v > bv) {
            best = Some((-v, d * s));
        }
    }
    let (m, q) = best?;
    (m >= VISIBILITY_SLACK && q != start).then(|| (q - start).angle())
}

/// Best heading run: a coarse sweep over all headings, golden refinement
/// around the best peaks and the seed headings, then a full-accuracy
/// re-evaluation of the leaders.
fn best_run(cfg: &CornerGameConfig, seeds: &[f64]) -> HeadingRun {
    let eval = |h: f64| run_heading_with(cfg, normalize_angle(h), SEARCH_STEP_FRACTION);
    let value = |h: f64| eval(h).time.as_f64();
    let n = SEARCH_HEADINGS;
    let dh = 2.0 * PI / n as f64;
    let grid: Vec<HeadingRun> = (0..n).map(|i| eval(-PI + dh * i as f64)).collect();
    let mut candidates: Vec<HeadingRun> = Vec::new();
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&i| grid[i].time >= grid[(i + n - 1) % n].time && grid[i].time >= grid[(i + 1) % n].time)
        .collect();
    peaks.sort_by(|&a, &b| grid[b].time.cmp(&grid[a].time));
    let neg = |h: f64| -value(h);
    for &i in peaks.iter().take(3) {
        candidates.push(grid[i].clone());
        if !grid[i].time.is_infinite() {
            let h = grid[i].heading;
            candidates.push(eval(golden_min(&neg, h - dh, h + dh, 40).0));
        }
    }
    for &h in seeds {
        candidates.push(eval(h));
        candidates.push(eval(golden_min(&neg, h - 0.125 * dh, h + 0.125 * dh, 30).0));
    }
    candidates.sort_by(|a, b| b.time.cmp(&a.time));
    candidates.dedup_by(|a, b| (a.heading - b.heading).abs() < 1e-12);
    candidates
        .iter()
        .take(3)
        .map(|c| run_heading(cfg, c.heading))
        .max_by(|a, b| a.time.cmp(&b.time))
        .expect("at least one candidate heading")
}

fn outcome_from_run(run: HeadingRun, line: TangentLine) -> TrackingOutcome {
    let strategy = match (run.end, run.contact) {
        (RunEnd::ReachedStar | RunEnd::Escaped, _) => StrategyClass::ShortestPathToStar,
        (RunEnd::Lost, Some(_)) => StrategyClass::Class2,
        (RunEnd::Lost, None) => StrategyClass::Class1,
    };
    let mut out = TrackingOutcome::new(strategy, run.time, run.trajectory, line);
    if strategy == StrategyClass::Class2 {
        out.junction_time = run.contact;
    }
    out
}

/// Dispatches over the solution classes.
///
/// The closed-form classes are compared against a search over straight
/// headings (with line riding on contact) and the better strategy wins;
/// ties go to the closed forms. Search results are classified by shape:
/// reaching the star region or outlasting the disc is a race win, a single
/// straight stage is Class 1 and a straight stage followed by riding `l_t`
/// is Class 2.
pub fn solve_corner_game(cfg: &CornerGameConfig) -> Result<TrackingOutcome, CornerGameError> {
    let start = cfg.pursuer_start();
    let line = cfg.tangent_line();
    if cfg.pursuer_in_star() {
        return Ok(TrackingOutcome::new(
            StrategyClass::StarAny,
            TrackingTime::INFINITE,
            Trajectory::Straight { start, end: Vec2::ZERO, speed: cfg.v_p_max },
            line,
        ));
    }
    if constraint_s(&cfg.initial_state()) < -ANGLE_TOL {
        return Ok(TrackingOutcome::new(
            StrategyClass::NotVisible,
            TrackingTime::ZERO,
            Trajectory::Hold { at: start },
            line,
        ));
    }
    let race = race_to_origin(cfg);
    if race.tracking_time.is_infinite() && star_run_keeps_view(cfg) {
        return Ok(race);
    }
    let mut seeds: Vec<f64> = race.trajectory.initial_direction().map(|d| d.angle()).into_iter().collect();
    if let Some(h) = star_reach_heading(cfg) {
        let run = run_heading(cfg, h);
        if run.time.is_infinite() {
            return Ok(outcome_from_run(run, line));
        }
        seeds.push(h);
    }
    let mut closed_form: Option<TrackingOutcome> = None;
    match search_class1(cfg) {
        Search::Found(c1) => {
            seeds.push(c1.heading);
            let mut out = TrackingOutcome::new(
                StrategyClass::Class1,
                TrackingTime::finite(c1.t_f),
                Trajectory::Straight { start, end: c1.terminal_point, speed: cfg.v_p_max },
                line,
            );
            out.class1 = Some(c1);
            closed_form = Some(out);
        }
        Search::ReachesStar(h) => seeds.push(h),
        Search::None => {}
    }
    match search_class2(cfg)? {
        Search::Found(c2) => {
            seeds.push(c2.stage1_heading);
            if closed_form.as_ref().is_none_or(|p| p.tracking_time.as_f64() < c2.total_time()) {
                let mut out = TrackingOutcome::new(
                    StrategyClass::Class2,
                    TrackingTime::finite(c2.total_time()),
                    Trajectory::TwoStage {
                        start,
                        junction: c2.junction,
                        speed: cfg.v_p_max,
                        t1: c2.t1,
                        stage2: c2.stage2.clone(),
                    },
                    line,
                );
                out.junction_time = Some(c2.t1);
                out.class2 = Some(c2);
                closed_form = Some(out);
            }
        }
        Search::ReachesStar(h) => seeds.push(h),
        Search::None => {}
    }
    let run = best_run(cfg, &seeds);
    match closed_form {
        Some(p) if p.tracking_time.as_f64() >= run.time.as_f64() - 1e-9 => Ok(p),
        _ => Ok(outcome_from_run(run, line)),
    }
}

/// Initial canonical direction of an outcome; star-region pursuers head for
/// the vertex, or along the star bisector when already on it.
fn canonical_direction(outcome: &TrackingOutcome, wedge: f64) -> Vec2 {
    outcome
        .trajectory
        .initial_direction()
        .unwrap_or_else(|| Vec2::from_angle(0.5 * wedge))
}

/// World-frame unit velocity at the start of the optimal strategy, with
/// the tracking time it secures.
pub fn strategy_vector(cfg: &CornerGameConfig, frame: &CornerFrame) -> Result<(Vec2, TrackingTime), CornerGameError> {
    let outcome = solve_corner_game(cfg)?;
    if outcome.strategy == StrategyClass::NotVisible {
        return Err(CornerGameError::InvisibleStart);
    }
    let dir = canonical_direction(&outcome, cfg.wedge_angle);
    Ok((frame.dir_to_world(dir), outcome.tracking_time))
}

/// A corner game solved directly from world positions.
#[derive(Clone, Debug, PartialEq)]
pub struct CornerSolution {
    pub frame: CornerFrame,
    /// `None` when a player sits on the vertex and no game is needed.
    pub config: Option<CornerGameConfig>,
    pub outcome: TrackingOutcome,
}

impl CornerSolution {
    pub fn strategy(&self) -> StrategyClass {
        self.outcome.strategy
    }

    pub fn tracking_time(&self) -> TrackingTime {
        self.outcome.tracking_time
    }

    /// World-frame unit direction, `None` for invisible starts.
    pub fn direction(&self) -> Option<Vec2> {
        if self.outcome.strategy == StrategyClass::NotVisible {
            return None;
        }
        let w = self.frame.interior_angle();
        Some(self.frame.dir_to_world(canonical_direction(&self.outcome, w)))
    }

    /// World-frame pursuer position at `t`.
    pub fn pursuer_at(&self, t: f64) -> Vec2 {
        self.frame.to_world(self.outcome.trajectory.position(t))
    }
}

/// Solves the game around `corner` for a pursuer at `p` and an evader at
/// `e`, both in world coordinates.
pub fn solve_in_world(corner: &Corner, p: Vec2, e: Vec2, speeds: Speeds) -> Result<CornerSolution, CornerGameError> {
    let frame = CornerFrame::orient(corner, p, e);
    let pp = frame.polar(p);
    let ep = frame.polar(e);
    let w = corner.interior_angle();
    let scale = corner.vertex.norm().max(1.0) * 1e-12;
    let line = TangentLine { phi_e: ep.angle, r_e: ep.radius.max(scale), v_e: speeds.evader };
    if pp.radius <= scale || in_star(pp.angle, w) {
        let start = pp.to_cartesian();
        let traj = if pp.radius <= scale {
            Trajectory::Hold { at: start }
        } else {
            Trajectory::Straight { start, end: Vec2::ZERO, speed: speeds.pursuer }
        };
        return Ok(CornerSolution {
            frame,
            config: None,
            outcome: TrackingOutcome::new(StrategyClass::StarAny, TrackingTime::INFINITE, traj, line),
        });
    }
    if ep.radius <= scale {
        // Evader on the vertex: it slips behind the corner at once.
        let start = pp.to_cartesian();
        return Ok(CornerSolution {
            frame,
            config: None,
            outcome: TrackingOutcome::new(
                StrategyClass::ShortestPathToStar,
                TrackingTime::ZERO,
                Trajectory::Straight { start, end: nearest_star_point(start, w), speed: speeds.pursuer },
                line,
            ),
        });
    }
    let cfg = CornerGameConfig::new(speeds, ep, pp, w)?;
    let outcome = solve_corner_game(&cfg)?;
    Ok(CornerSolution { frame, config: Some(cfg), outcome })
}
