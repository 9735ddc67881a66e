//! Fixed-step tracking games in polygonal scenes.
//!
//! Both players read the state at the start of a tick, then move together.
//! Motion that would enter an obstacle stops at the boundary and slides
//! along it. A run ends as soon as the line of sight breaks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corner_game::{solve_in_world, Speeds, StrategyClass};
use crate::geometry::{point_segment_distance, segment_clear, Corner, Environment, GeometryError, Vec2, VertexId};
use crate::pursuit_field::{
    candidate_corners, corner_local_solution, pursuit_vector, Contributor, FieldConfig, NormalizationOrder,
    WeightScheme,
};

pub const DEFAULT_DT: f64 = 1.0 / 120.0;

/// Sliding passes per step; each pass either finishes the move or consumes
/// a contact.
const SLIDE_PASSES: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("game starts lost")]
    StartsLost,
    #[error("time step must be positive and finite")]
    InvalidStep,
    #[error("max time must be non-negative and finite")]
    InvalidMaxTime,
    #[error("scripted path must contain at least one waypoint")]
    EmptyScript,
    #[error("waypoint {0} is not in free space")]
    WaypointBlocked(usize),
    #[error("speed must be non-negative and finite")]
    InvalidSpeed,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub position: Vec2,
    pub speed_max: f64,
    pub last_velocity: Vec2,
}

impl AgentState {
    pub fn new(position: Vec2, speed_max: f64) -> Self {
        Self { position, speed_max, last_velocity: Vec2::ZERO }
    }
}

/// A velocity command taking effect at `tick` and held until the next one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaderCommand {
    pub tick: u64,
    pub velocity: Vec2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EvaderPolicy {
    /// Full speed toward each waypoint in turn.
    ScriptedWaypoints { waypoints: Vec<Vec2> },
    /// Externally fed commands with zero-order hold. Pre-recorded commands
    /// replay a session; more can be pushed while the game runs.
    External { commands: Vec<EvaderCommand> },
    GreedyNearestCorner,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PursuerPolicy {
    PursuitField {
        scheme: WeightScheme,
        augmentation: f64,
        #[serde(default)]
        order: NormalizationOrder,
    },
    /// Plays the single-corner optimum around one fixed corner.
    FixedCornerOptimal { corner: VertexId },
}

impl PursuerPolicy {
    pub fn field(scheme: WeightScheme) -> Self {
        Self::PursuitField { scheme, augmentation: 1.0, order: NormalizationOrder::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimOutcome {
    LosBroken { t: f64 },
    MaxTimeReached,
    EvaderPathDone,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogStep {
    pub t: f64,
    pub pursuer: Vec2,
    pub evader: Vec2,
    pub los: bool,
    pub active_corner: Option<VertexId>,
    /// Field contributors used for the move that leaves this state.
    pub weights: Vec<Contributor>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryLog {
    pub dt: f64,
    pub steps: Vec<LogStep>,
    pub outcome: SimOutcome,
}

impl TrajectoryLog {
    /// Time of the last logged state.
    pub fn end_time(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.t)
    }
}

/// Per-run evader bookkeeping: waypoint progress and the held command.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvaderCursor {
    next_waypoint: usize,
    next_command: usize,
    held: Vec2,
}

impl EvaderCursor {
    pub fn path_done(&self, policy: &EvaderPolicy) -> bool {
        matches!(policy, EvaderPolicy::ScriptedWaypoints { waypoints } if self.next_waypoint >= waypoints.len())
    }
}

fn clamp_speed(v: Vec2, max: f64) -> Vec2 {
    let n = v.norm();
    if !v.is_finite() {
        Vec2::ZERO
    } else if n > max {
        v * (max / n)
    } else {
        v
    }
}

/// Moves from `from` by `disp`, stopping at obstacle boundaries and
/// keeping the tangential part of the remaining motion.
pub fn slide(env: &Environment, from: Vec2, disp: Vec2) -> Vec2 {
    let blocked = |a: Vec2, b: Vec2| env.obstacles().iter().any(|o| o.segment_enters_interior(a, b));
    let mut pos = from;
    let mut d = disp;
    for _ in 0..SLIDE_PASSES {
        if d == Vec2::ZERO {
            break;
        }
        let target = pos + d;
        if !blocked(pos, target) && env.is_free(target) {
            return target;
        }
        // longest clear prefix; blocking is monotone in the prefix length
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if blocked(pos, pos + d * mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let contact = pos + d * lo;
        let mut best: Option<(f64, Vec2, Vec2)> = None;
        for o in env.obstacles() {
            for (a, b) in o.edges() {
                let dist = point_segment_distance(contact, a, b);
                if best.is_none_or(|(bd, _, _)| dist < bd) {
                    best = Some((dist, a, b));
                }
            }
        }
        let rest = d * (1.0 - lo);
        let Some((_, a, b)) = best else { return contact };
        let Some(t) = (b - a).normalized() else { return contact };
        // snap onto the edge so the slide runs along the boundary, not
        // just inside it
        let snapped = a + t * (contact - a).dot(t).clamp(0.0, a.distance(b));
        pos = if env.is_free(snapped) { snapped } else { contact };
        d = t * rest.dot(t);
    }
    pos
}

fn field_direction(
    env: &Environment,
    p: Vec2,
    e: Vec2,
    speeds: Speeds,
    cfg: &FieldConfig,
) -> (Vec2, Option<VertexId>, Vec<Contributor>) {
    match pursuit_vector(env, p, e, speeds, cfg) {
        Ok(v) => (v.direction, v.active_corner(), v.contributors),
        // degenerate points (pursuer on the evader, cancelled sums) hold still
        Err(_) => (Vec2::ZERO, None, Vec::new()),
    }
}

/// Pursuer velocity for the current state, plus the field snapshot.
pub fn pursuer_velocity(
    env: &Environment,
    pursuer: &AgentState,
    evader: &AgentState,
    policy: &PursuerPolicy,
) -> (Vec2, Option<VertexId>, Vec<Contributor>) {
    let speeds = Speeds::new(pursuer.speed_max, evader.speed_max);
    let (p, e) = (pursuer.position, evader.position);
    let (dir, active, weights) = match *policy {
        PursuerPolicy::PursuitField { scheme, augmentation, order } => {
            let cfg = FieldConfig { scheme, augmentation_weight: augmentation, order };
            field_direction(env, p, e, speeds, &cfg)
        }
        PursuerPolicy::FixedCornerOptimal { corner } => {
            let dir = Corner::from_env(env, corner)
                .ok()
                .and_then(|c| solve_in_world(&c, p, e, speeds).ok())
                .and_then(|s| if s.strategy() == StrategyClass::NotVisible { None } else { s.direction() })
                .or_else(|| (e - p).normalized())
                .unwrap_or(Vec2::ZERO);
            (dir, Some(corner), Vec::new())
        }
    };
    (clamp_speed(dir * pursuer.speed_max, pursuer.speed_max), active, weights)
}

/// Baseline adversary: heads for the corner where its own tracking time
/// is shortest; without a finite-time corner, for the nearest convex corner
/// it can see; without any, straight away from the pursuer.
pub fn greedy_evader_velocity(env: &Environment, evader: &AgentState, pursuer: &AgentState) -> Vec2 {
    let (p, e) = (pursuer.position, evader.position);
    let speeds = Speeds::new(pursuer.speed_max, evader.speed_max);
    let away = || (e - p).normalized().unwrap_or(Vec2::new(1.0, 0.0));
    let toward = |v: Vec2| (v - e).normalized();
    let mut best: Option<(f64, Vec2)> = None;
    if let Ok(cands) = candidate_corners(env, p, e) {
        for c in &cands {
            let Ok(s) = corner_local_solution(c, p, e, speeds) else { continue };
            let Some(t) = s.local_time.filter(|t| !t.is_infinite()) else { continue };
            if best.is_none_or(|(bt, _)| t.as_f64() < bt) {
                best = Some((t.as_f64(), c.frame.vertex));
            }
        }
    }
    let target = best.map(|(_, v)| v).or_else(|| {
        env.vertex_ids()
            .filter(|id| !env.obstacles()[id.obstacle].is_reflex(id.vertex))
            .filter_map(|id| env.vertex(id).ok())
            .filter(|&v| v.distance(e) > 1e-12 && segment_clear(e, v, env).unwrap_or(false))
            .min_by(|a, b| a.distance(e).total_cmp(&b.distance(e)))
    });
    target.and_then(toward).unwrap_or_else(away) * evader.speed_max
}

/// Evader velocity for the current tick; advances the cursor.
pub fn evader_velocity(
    env: &Environment,
    evader: &AgentState,
    pursuer: &AgentState,
    policy: &EvaderPolicy,
    cursor: &mut EvaderCursor,
    tick: u64,
    dt: f64,
) -> Vec2 {
    let v = match policy {
        EvaderPolicy::ScriptedWaypoints { waypoints } => {
            let e = evader.position;
            // skip waypoints already reached
            while cursor.next_waypoint < waypoints.len() && waypoints[cursor.next_waypoint].distance(e) <= 1e-12 {
                cursor.next_waypoint += 1;
            }
            match waypoints.get(cursor.next_waypoint) {
                None => Vec2::ZERO,
                Some(&w) => {
                    let gap = w - e;
                    let reach = evader.speed_max * dt;
                    if gap.norm() <= reach {
                        gap / dt
                    } else {
                        gap * (evader.speed_max / gap.norm())
                    }
                }
            }
        }
        EvaderPolicy::External { commands } => {
            while cursor.next_command < commands.len() && commands[cursor.next_command].tick <= tick {
                cursor.held = commands[cursor.next_command].velocity;
                cursor.next_command += 1;
            }
            cursor.held
        }
        EvaderPolicy::GreedyNearestCorner => greedy_evader_velocity(env, evader, pursuer),
    };
    clamp_speed(v, evader.speed_max)
}

/// Advances both agents by one simultaneous move with the given
/// velocities. Returns the new states and the line of sight between them.
pub fn step(
    env: &Environment,
    pursuer: &AgentState,
    evader: &AgentState,
    v_p: Vec2,
    v_e: Vec2,
    dt: f64,
) -> (AgentState, AgentState, bool) {
    let advance = |a: &AgentState, v: Vec2| {
        let v = clamp_speed(v, a.speed_max);
        let position = slide(env, a.position, v * dt);
        AgentState { position, speed_max: a.speed_max, last_velocity: (position - a.position) / dt }
    };
    let (p, e) = (advance(pursuer, v_p), advance(evader, v_e));
    let los = segment_clear(p.position, e.position, env).unwrap_or(false);
    (p, e, los)
}

/// A game in progress. [`run`] drives it to completion; the arena steps it
/// tick by tick and feeds external evader commands.
#[derive(Clone, Debug)]
pub struct Simulation {
    env: Environment,
    pursuer: AgentState,
    evader: AgentState,
    p_policy: PursuerPolicy,
    e_policy: EvaderPolicy,
    cursor: EvaderCursor,
    dt: f64,
    max_ticks: u64,
    tick: u64,
    pending: Option<(Vec2, Option<VertexId>, Vec<Contributor>)>,
    steps: Vec<LogStep>,
    outcome: Option<SimOutcome>,
}

impl Simulation {
    pub fn new(
        env: Environment,
        pursuer: AgentState,
        evader: AgentState,
        p_policy: PursuerPolicy,
        e_policy: EvaderPolicy,
        dt: f64,
        max_time: f64,
    ) -> Result<Self, SimError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(SimError::InvalidStep);
        }
        if !(max_time >= 0.0 && max_time.is_finite()) {
            return Err(SimError::InvalidMaxTime);
        }
        for a in [&pursuer, &evader] {
            if !(a.speed_max >= 0.0 && a.speed_max.is_finite()) {
                return Err(SimError::InvalidSpeed);
            }
            if !a.position.is_finite() {
                return Err(GeometryError::NonFinite.into());
            }
            if !env.is_free(a.position) {
                return Err(GeometryError::NotInFreeSpace.into());
            }
        }
        if let EvaderPolicy::ScriptedWaypoints { waypoints } = &e_policy {
            if waypoints.is_empty() {
                return Err(SimError::EmptyScript);
            }
            if let Some(i) = waypoints.iter().position(|&w| !w.is_finite() || !env.is_free(w)) {
                return Err(SimError::WaypointBlocked(i));
            }
        }
        if !segment_clear(pursuer.position, evader.position, &env)? {
            return Err(SimError::StartsLost);
        }
        let mut sim = Self {
            env,
            pursuer,
            evader,
            p_policy,
            e_policy,
            cursor: EvaderCursor::default(),
            dt,
            max_ticks: (max_time / dt + 1e-9).floor() as u64,
            tick: 0,
            pending: None,
            steps: Vec::new(),
            outcome: None,
        };
        sim.log_current(true);
        if sim.max_ticks == 0 {
            sim.outcome = Some(SimOutcome::MaxTimeReached);
        }
        Ok(sim)
    }

    fn log_current(&mut self, los: bool) {
        let (active, weights) = if los {
            let d = pursuer_velocity(&self.env, &self.pursuer, &self.evader, &self.p_policy);
            let snapshot = (d.1, d.2.clone());
            self.pending = Some(d);
            snapshot
        } else {
            self.pending = None;
            (None, Vec::new())
        };
        self.steps.push(LogStep {
            t: self.tick as f64 * self.dt,
            pursuer: self.pursuer.position,
            evader: self.evader.position,
            los,
            active_corner: active,
            weights,
        });
    }

    /// Queues an evader command effective from the next tick.
    pub fn push_command(&mut self, velocity: Vec2) {
        if let EvaderPolicy::External { commands } = &mut self.e_policy {
            commands.push(EvaderCommand { tick: self.tick, velocity });
        }
    }

    /// Runs one tick; returns the new log entry, or `None` once finished.
    pub fn advance(&mut self) -> Option<&LogStep> {
        if self.outcome.is_some() {
            return None;
        }
        let v_p = match self.pending.take() {
            Some((v, _, _)) => v,
            None => pursuer_velocity(&self.env, &self.pursuer, &self.evader, &self.p_policy).0,
        };
        let v_e = evader_velocity(
            &self.env,
            &self.evader,
            &self.pursuer,
            &self.e_policy,
            &mut self.cursor,
            self.tick,
            self.dt,
        );
        let (p, e, los) = step(&self.env, &self.pursuer, &self.evader, v_p, v_e, self.dt);
        self.pursuer = p;
        self.evader = e;
        self.tick += 1;
        let t = self.tick as f64 * self.dt;
        let done = self.cursor.path_done(&self.e_policy) || self.script_finished();
        let finished = self.tick >= self.max_ticks;
        self.log_current(los && !done && !finished);
        if let Some(last) = self.steps.last_mut() {
            last.los = los;
        }
        self.outcome = if !los {
            Some(SimOutcome::LosBroken { t })
        } else if done {
            Some(SimOutcome::EvaderPathDone)
        } else if finished {
            Some(SimOutcome::MaxTimeReached)
        } else {
            None
        };
        self.steps.last()
    }

    fn script_finished(&mut self) -> bool {
        if let EvaderPolicy::ScriptedWaypoints { waypoints } = &self.e_policy {
            while self.cursor.next_waypoint < waypoints.len()
                && waypoints[self.cursor.next_waypoint].distance(self.evader.position) <= 1e-12
            {
                self.cursor.next_waypoint += 1;
            }
        }
        self.cursor.path_done(&self.e_policy)
    }

    pub fn outcome(&self) -> Option<SimOutcome> {
        self.outcome
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn env(&self) -> &Environment {
        &self.env
    }

    pub fn pursuer(&self) -> &AgentState {
        &self.pursuer
    }

    pub fn evader(&self) -> &AgentState {
        &self.evader
    }

    /// The evader policy, including every command pushed so far.
    pub fn evader_policy(&self) -> &EvaderPolicy {
        &self.e_policy
    }

    pub fn pursuer_policy(&self) -> &PursuerPolicy {
        &self.p_policy
    }

    pub fn steps(&self) -> &[LogStep] {
        &self.steps
    }

    /// Finished log; running games report `MaxTimeReached` so far.
    pub fn into_log(self) -> TrajectoryLog {
        TrajectoryLog {
            dt: self.dt,
            steps: self.steps,
            outcome: self.outcome.unwrap_or(SimOutcome::MaxTimeReached),
        }
    }
}

/// Plays the game until the line of sight breaks, the script ends or
/// `max_time` elapses.
pub fn run(
    env: &Environment,
    pursuer: AgentState,
    evader: AgentState,
    p_policy: PursuerPolicy,
    e_policy: EvaderPolicy,
    dt: f64,
    max_time: f64,
) -> Result<TrajectoryLog, SimError> {
    let mut sim = Simulation::new(env.clone(), pursuer, evader, p_policy, e_policy, dt, max_time)?;
    while sim.advance().is_some() {}
    Ok(sim.into_log())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Polygon, Rect};

    fn bounds() -> Rect {
        Rect::new(Vec2::new(-10.0, -10.0), Vec2::new(10.0, 10.0)).unwrap()
    }

    fn unit_square_env() -> Environment {
        let sq = Polygon::new(vec![
            Vec2::new(-1.0, -1.0),
            Vec2::new(1.0, -1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, 1.0),
        ])
        .unwrap();
        Environment::new(vec![sq], bounds()).unwrap()
    }

    #[test]
    fn zero_velocities_leave_states_alone() {
        let env = unit_square_env();
        let p = AgentState::new(Vec2::new(3.0, 0.0), 1.0);
        let e = AgentState::new(Vec2::new(3.0, 2.0), 0.5);
        let (p2, e2, los) = step(&env, &p, &e, Vec2::ZERO, Vec2::ZERO, DEFAULT_DT);
        assert_eq!((p2.position, e2.position, los), (p.position, e.position, true));
    }

    #[test]
    fn velocities_are_clamped() {
        let env = Environment::empty(bounds());
        let p = AgentState::new(Vec2::ZERO, 1.0);
        let e = AgentState::new(Vec2::new(1.0, 0.0), 0.5);
        let (p2, e2, los) = step(&env, &p, &e, Vec2::new(10.0, 0.0), Vec2::new(0.0, 3.0), 0.1);
        assert!((p2.position - Vec2::new(0.1, 0.0)).norm() < 1e-15);
        assert!((e2.position - Vec2::new(1.0, 0.05)).norm() < 1e-15);
        assert!(los);
    }

    #[test]
    fn sliding_keeps_tangential_motion() {
        let env = unit_square_env();
        // heading into the top face at 45°: stop on the face, then slide
        let end = slide(&env, Vec2::new(0.0, 1.1), Vec2::new(0.3, -0.3));
        assert!((end.y - 1.0).abs() < 1e-9, "{end}");
        assert!((end.x - 0.3).abs() < 1e-9, "{end}");
        assert!(env.is_free(end));
        // straight into a face: stop at it
        let end = slide(&env, Vec2::new(0.0, 1.5), Vec2::new(0.0, -1.0));
        assert!((end - Vec2::new(0.0, 1.0)).norm() < 1e-9);
        // along a face: unchanged
        let end = slide(&env, Vec2::new(-0.5, 1.0), Vec2::new(0.4, 0.0));
        assert_eq!(end, Vec2::new(-0.5, 1.0) + Vec2::new(0.4, 0.0));
    }

    #[test]
    fn stepping_behind_a_corner_breaks_sight_on_time() {
        let env = unit_square_env();
        // pursuer still at (3, 1.5); evader walks down x = −1.5 from y = 3.
        // The sight line first clips the far vertex (−1, 1): the line
        // through it and the pursuer has slope 1/8 and meets x = −1.5 at
        // y = 0.9375
        let dt = 0.01;
        let speed = 0.5;
        let t_cross = (3.0 - 0.9375) / speed;
        let log = run(
            &env,
            AgentState::new(Vec2::new(3.0, 1.5), 0.0),
            AgentState::new(Vec2::new(-1.5, 3.0), speed),
            PursuerPolicy::field(WeightScheme::DistanceArgmin),
            EvaderPolicy::ScriptedWaypoints { waypoints: vec![Vec2::new(-1.5, -3.0)] },
            dt,
            20.0,
        )
        .unwrap();
        let SimOutcome::LosBroken { t } = log.outcome else { panic!("{:?}", log.outcome) };
        let k = (t / dt).round() as i64;
        let predicted = (t_cross / dt).ceil() as i64;
        assert!((k - predicted).abs() <= 1, "{k} vs {predicted}");
    }

    #[test]
    fn game_cannot_start_lost() {
        let env = unit_square_env();
        let err = run(
            &env,
            AgentState::new(Vec2::new(3.0, 0.0), 1.0),
            AgentState::new(Vec2::new(-3.0, 0.0), 0.5),
            PursuerPolicy::field(WeightScheme::InverseTime),
            EvaderPolicy::GreedyNearestCorner,
            DEFAULT_DT,
            1.0,
        );
        assert_eq!(err.unwrap_err(), SimError::StartsLost);
    }

    #[test]
    fn stationary_evader_is_held() {
        let env = unit_square_env();
        let log = run(
            &env,
            AgentState::new(Vec2::new(4.0, -3.0), 1.0),
            AgentState::new(Vec2::new(2.0, 2.0), 0.5),
            PursuerPolicy::field(WeightScheme::InverseTime),
            EvaderPolicy::External { commands: vec![] },
            DEFAULT_DT,
            2.0,
        )
        .unwrap();
        assert_eq!(log.outcome, SimOutcome::MaxTimeReached);
        assert_eq!(log.steps.len(), 241);
        assert!(log.steps.iter().all(|s| s.los));
        for w in log.steps.windows(2) {
            assert!((w[1].t - w[0].t - DEFAULT_DT).abs() < 1e-12);
        }
    }

    #[test]
    fn greedy_evader_fallbacks() {
        let empty = Environment::empty(bounds());
        let v = greedy_evader_velocity(&empty, &AgentState::new(Vec2::new(1.0, 1.0), 0.5), &AgentState::new(Vec2::ZERO, 1.0));
        assert!((v - Vec2::new(1.0, 1.0).normalized().unwrap() * 0.5).norm() < 1e-15);
        // single square: head for a corner of it
        let env = unit_square_env();
        let e = AgentState::new(Vec2::new(3.0, 2.5), 0.5);
        let v = greedy_evader_velocity(&env, &e, &AgentState::new(Vec2::new(3.0, -2.5), 1.0));
        assert!((v.norm() - 0.5).abs() < 1e-12);
        let corners = [Vec2::new(1.0, 1.0), Vec2::new(1.0, -1.0), Vec2::new(-1.0, 1.0)];
        assert!(corners.iter().any(|&c| ((c - e.position).normalized().unwrap() * 0.5 - v).norm() < 1e-12));
    }

    #[test]
    fn external_commands_hold_until_replaced() {
        let env = Environment::empty(bounds());
        let commands = vec![
            EvaderCommand { tick: 0, velocity: Vec2::new(0.5, 0.0) },
            EvaderCommand { tick: 2, velocity: Vec2::new(0.0, 5.0) },
        ];
        let log = run(
            &env,
            AgentState::new(Vec2::new(-5.0, 0.0), 0.0),
            AgentState::new(Vec2::ZERO, 0.5),
            PursuerPolicy::field(WeightScheme::DistanceArgmin),
            EvaderPolicy::External { commands },
            0.1,
            0.4,
        )
        .unwrap();
        let ys: Vec<f64> = log.steps.iter().map(|s| s.evader.y).collect();
        let xs: Vec<f64> = log.steps.iter().map(|s| s.evader.x).collect();
        assert!((xs[2] - 0.1).abs() < 1e-12 && ys[2] == 0.0);
        assert!((ys[4] - 0.1).abs() < 1e-12);
    }
}
