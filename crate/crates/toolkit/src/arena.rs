//! Live games over WebSocket: a human evader against the scenario's pursuer.
//!
//! `POST /session` takes a scenario and answers `{"id", "ws"}`; the socket
//! at `/session/<id>/ws` streams `state`, `field` and `end` frames and
//! accepts `start` and `cmd` messages; `/session/<id>/log` returns the
//! trajectory as JSON-lines. The clock starts on the first command or an
//! explicit start, then ticks every `dt` of wall time whether or not the
//! client keeps up.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use futures::{SinkExt, StreamExt};
use pursuit_core::corner_game::{solve_in_world, StrategyClass};
use pursuit_core::geometry::{Corner, Vec2};
use pursuit_core::pursuit_field::{pursuit_vector, FieldConfig};
use pursuit_core::sim_engine::{self, EvaderPolicy, LogStep, PursuerPolicy, SimError, SimOutcome, Simulation};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tokio::sync::{broadcast, Notify};

use crate::export::write_trajectory_jsonl;
use crate::scenario::{parse_scenario, Scenario};

/// Field overlays go out on every tenth tick.
pub const OVERLAY_EVERY: u64 = 10;
const FRAME_BUFFER: usize = 8192;

#[derive(Debug, Error, PartialEq)]
pub enum ArenaError {
    #[error("{0}")]
    Scenario(String),
    #[error("game starts lost")]
    StartsLost,
    #[error("session over")]
    SessionOver,
    #[error("command must be finite")]
    BadCommand,
    #[error("no such session")]
    UnknownSession,
}

/// A steering command from the human player.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvaderCommand {
    /// Need not be unit; zero means stop.
    pub direction: Vec2,
    /// Clamped to `[0, 1]`.
    pub throttle: f64,
}

impl EvaderCommand {
    pub fn velocity(&self, v_max: f64) -> Result<Vec2, ArenaError> {
        if !(self.direction.is_finite() && self.throttle.is_finite()) {
            return Err(ArenaError::BadCommand);
        }
        Ok(match self.direction.normalized() {
            Some(d) => d * (self.throttle.clamp(0.0, 1.0) * v_max),
            None => Vec2::ZERO,
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClientMessage {
    Start,
    Cmd { dx: f64, dy: f64, throttle: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndReason {
    LosBroken,
    MaxTime,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    State { t: f64, px: f64, py: f64, ex: f64, ey: f64, los: bool, score: f64 },
    Field { samples: Vec<[f64; 4]> },
    End { reason: EndReason, score: f64 },
}

impl ServerMessage {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("frame serializes")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub tick: u64,
    pub t: f64,
    pub pursuer: Vec2,
    pub evader: Vec2,
    pub los: bool,
    /// Elapsed tracking time.
    pub score: f64,
    pub ended: Option<EndReason>,
    pub field: Option<Vec<[f64; 4]>>,
}

impl Snapshot {
    /// Frames announcing this snapshot, in send order.
    pub fn frames(&self) -> Vec<ServerMessage> {
        let mut out = vec![ServerMessage::State {
            t: self.t,
            px: self.pursuer.x,
            py: self.pursuer.y,
            ex: self.evader.x,
            ey: self.evader.y,
            los: self.los,
            score: self.score,
        }];
        if let Some(samples) = &self.field {
            out.push(ServerMessage::Field { samples: samples.clone() });
        }
        if let Some(reason) = self.ended {
            out.push(ServerMessage::End { reason, score: self.score });
        }
        out
    }
}

/// Authoritative game state of one session; single writer.
#[derive(Debug)]
pub struct GameSession {
    scenario: Scenario,
    sim: Simulation,
}

impl GameSession {
    pub fn new(scenario: Scenario) -> Result<Self, ArenaError> {
        let sim = Simulation::new(
            scenario.env().clone(),
            scenario.pursuer.state(),
            scenario.evader.state(),
            scenario.pursuer_policy,
            EvaderPolicy::External { commands: Vec::new() },
            scenario.dt,
            scenario.max_time,
        )
        .map_err(|e| match e {
            SimError::StartsLost => ArenaError::StartsLost,
            other => ArenaError::Scenario(other.to_string()),
        })?;
        Ok(Self { scenario, sim })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn ended(&self) -> Option<EndReason> {
        match self.sim.outcome()? {
            SimOutcome::LosBroken { .. } => Some(EndReason::LosBroken),
            _ => Some(EndReason::MaxTime),
        }
    }

    pub fn snapshot(&self) -> Snapshot {
        let t = self.sim.tick() as f64 * self.sim.dt();
        let los = self.sim.steps().last().is_none_or(|s| s.los);
        Snapshot {
            tick: self.sim.tick(),
            t,
            pursuer: self.sim.pursuer().position,
            evader: self.sim.evader().position,
            los,
            score: t,
            ended: self.ended(),
            field: None,
        }
    }

    /// Advances one tick, applying `velocity` (already scaled) from this
    /// tick on. Finished sessions return their final snapshot unchanged.
    pub fn tick(&mut self, velocity: Option<Vec2>) -> Snapshot {
        if self.ended().is_some() {
            return self.snapshot();
        }
        if let Some(v) = velocity {
            self.sim.push_command(v);
        }
        self.sim.advance();
        let mut snap = self.snapshot();
        if snap.ended.is_none() && snap.tick.is_multiple_of(OVERLAY_EVERY) {
            snap.field = Some(self.overlay());
        }
        snap
    }

    /// Pursuer directions on a coarse grid against the current evader.
    pub fn overlay(&self) -> Vec<[f64; 4]> {
        let env = self.sim.env();
        let b = env.bounds();
        let n = self.scenario.output.overlay_samples;
        let e = self.sim.evader().position;
        let speeds = self.scenario.speeds();
        let mut out = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let q = Vec2::new(
                    b.min.x + (i as f64 + 0.5) * b.width() / n as f64,
                    b.min.y + (j as f64 + 0.5) * b.height() / n as f64,
                );
                let dir = match self.scenario.pursuer_policy {
                    PursuerPolicy::PursuitField { scheme, augmentation, order } => {
                        let cfg = FieldConfig { scheme, augmentation_weight: augmentation, order };
                        pursuit_vector(env, q, e, speeds, &cfg).ok().map(|v| v.direction)
                    }
                    PursuerPolicy::FixedCornerOptimal { corner } => Corner::from_env(env, corner)
                        .ok()
                        .and_then(|c| solve_in_world(&c, q, e, speeds).ok())
                        .filter(|s| s.strategy() != StrategyClass::NotVisible)
                        .and_then(|s| s.direction()),
                };
                if let Some(d) = dir {
                    out.push([q.x, q.y, d.x, d.y]);
                }
            }
        }
        out
    }

    /// Commands as recorded by the simulation; replaying them offline
    /// reproduces the session.
    pub fn transcript(&self) -> Vec<sim_engine::EvaderCommand> {
        match self.sim.evader_policy() {
            EvaderPolicy::External { commands } => commands.clone(),
            _ => Vec::new(),
        }
    }

    pub fn log(&self) -> &[LogStep] {
        self.sim.steps()
    }
}

/// Single-slot command inbox shared by the socket reader and the tick
/// driver.
#[derive(Debug, Default)]
pub struct Mailbox {
    slot: Mutex<MailboxSlot>,
}

#[derive(Debug, Default)]
struct MailboxSlot {
    pending: Option<Vec2>,
    /// Ticks already taken by the driver.
    taken: u64,
    closed: bool,
}

impl Mailbox {
    /// Stores the velocity, replacing any unread one. Returns the 1-based
    /// index of the first tick that will use it.
    pub fn put(&self, velocity: Vec2) -> Result<u64, ArenaError> {
        let mut s = self.slot.lock().expect("mailbox lock");
        if s.closed {
            return Err(ArenaError::SessionOver);
        }
        s.pending = Some(velocity);
        Ok(s.taken + 1)
    }

    /// Driver side: the command for the tick about to run.
    pub fn take(&self) -> Option<Vec2> {
        let mut s = self.slot.lock().expect("mailbox lock");
        s.taken += 1;
        s.pending.take()
    }

    pub fn close(&self) {
        self.slot.lock().expect("mailbox lock").closed = true;
    }
}

struct LiveSession {
    game: Mutex<GameSession>,
    mailbox: Mailbox,
    frames: broadcast::Sender<String>,
    start: Notify,
    started: AtomicBool,
    /// Final frames for clients that connect after the end.
    last: Mutex<Vec<String>>,
}

impl LiveSession {
    fn begin(&self) {
        if !self.started.swap(true, Ordering::SeqCst) {
            self.start.notify_one();
        }
    }

    fn apply(&self, cmd: EvaderCommand) -> Result<u64, ArenaError> {
        let v_max = self.game.lock().expect("session lock").scenario().evader.speed;
        let v = cmd.velocity(v_max)?;
        let ack = self.mailbox.put(v)?;
        self.begin();
        Ok(ack)
    }
}

#[derive(Default)]
pub struct ArenaState {
    sessions: Mutex<HashMap<String, Arc<LiveSession>>>,
}

impl ArenaState {
    fn get(&self, id: &str) -> Option<Arc<LiveSession>> {
        self.sessions.lock().expect("sessions lock").get(id).cloned()
    }
}

async fn drive(live: Arc<LiveSession>, dt: f64) {
    live.start.notified().await;
    let mut clock = tokio::time::interval(Duration::from_secs_f64(dt));
    clock.set_missed_tick_behavior(tokio::time::MissedTickBehavior::Burst);
    loop {
        clock.tick().await;
        let snap = {
            let mut game = live.game.lock().expect("session lock");
            let v = live.mailbox.take();
            game.tick(v)
        };
        let frames: Vec<String> = snap.frames().iter().map(ServerMessage::to_json).collect();
        if snap.ended.is_some() {
            live.mailbox.close();
            *live.last.lock().expect("frame lock") = frames.clone();
        }
        for f in frames {
            let _ = live.frames.send(f);
        }
        if snap.ended.is_some() {
            log::info!("session ended at t = {}", snap.t);
            break;
        }
    }
}

#[derive(Serialize)]
struct Created {
    id: String,
    ws: String,
}

fn reject(status: StatusCode, msg: impl ToString) -> Response {
    (status, Json(serde_json::json!({ "error": msg.to_string() }))).into_response()
}

/// Validates the scenario, registers a session and starts its driver.
pub fn create_session(state: &ArenaState, body: &str) -> Result<String, ArenaError> {
    let scenario = parse_scenario(body).map_err(|e| ArenaError::Scenario(e.to_string()))?;
    let dt = scenario.dt;
    let game = GameSession::new(scenario)?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    let (frames, _) = broadcast::channel(FRAME_BUFFER);
    let live = Arc::new(LiveSession {
        game: Mutex::new(game),
        mailbox: Mailbox::default(),
        frames,
        start: Notify::new(),
        started: AtomicBool::new(false),
        last: Mutex::new(Vec::new()),
    });
    state.sessions.lock().expect("sessions lock").insert(id.clone(), live.clone());
    tokio::spawn(drive(live, dt));
    log::info!("session {id} created");
    Ok(id)
}

async fn post_session(State(state): State<Arc<ArenaState>>, body: String) -> Response {
    match create_session(&state, &body) {
        Ok(id) => Json(Created { ws: format!("/session/{id}/ws"), id }).into_response(),
        Err(e) => reject(StatusCode::BAD_REQUEST, e),
    }
}

async fn get_log(State(state): State<Arc<ArenaState>>, Path(id): Path<String>) -> Response {
    let Some(live) = state.get(&id) else { return reject(StatusCode::NOT_FOUND, ArenaError::UnknownSession) };
    let mut buf = Vec::new();
    {
        let game = live.game.lock().expect("session lock");
        if let Err(e) = write_trajectory_jsonl(game.log(), &mut buf) {
            return reject(StatusCode::INTERNAL_SERVER_ERROR, e);
        }
    }
    ([(header::CONTENT_TYPE, "application/x-ndjson")], buf).into_response()
}

async fn get_ws(State(state): State<Arc<ArenaState>>, Path(id): Path<String>, ws: WebSocketUpgrade) -> Response {
    let Some(live) = state.get(&id) else { return reject(StatusCode::NOT_FOUND, ArenaError::UnknownSession) };
    ws.on_upgrade(move |socket| play(socket, live))
}

async fn play(socket: WebSocket, live: Arc<LiveSession>) {
    let mut rx = live.frames.subscribe();
    let (mut tx, mut inbound) = socket.split();
    let opening: Vec<String> = {
        let game = live.game.lock().expect("session lock");
        let done = live.last.lock().expect("frame lock").clone();
        if done.is_empty() {
            game.snapshot().frames().iter().map(ServerMessage::to_json).collect()
        } else {
            done
        }
    };
    let finished = opening.iter().any(|f| f.contains(r#""type":"end""#));
    for f in opening {
        if tx.send(Message::Text(f.into())).await.is_err() {
            return;
        }
    }
    if finished {
        let _ = tx.close().await;
        return;
    }
    loop {
        tokio::select! {
            frame = rx.recv() => match frame {
                Ok(f) => {
                    let end = f.contains(r#""type":"end""#);
                    if tx.send(Message::Text(f.into())).await.is_err() || end {
                        break;
                    }
                }
                Err(broadcast::error::RecvError::Lagged(n)) => log::warn!("client lagged {n} frames"),
                Err(broadcast::error::RecvError::Closed) => break,
            },
            msg = inbound.next() => match msg {
                Some(Ok(Message::Text(text))) => match serde_json::from_str::<ClientMessage>(&text) {
                    Ok(ClientMessage::Start) => live.begin(),
                    Ok(ClientMessage::Cmd { dx, dy, throttle }) => {
                        if let Err(e) = live.apply(EvaderCommand { direction: Vec2::new(dx, dy), throttle }) {
                            log::debug!("command dropped: {e}");
                        }
                    }
                    Err(e) => log::debug!("ignored message: {e}"),
                },
                Some(Ok(Message::Close(_))) | None | Some(Err(_)) => break,
                Some(Ok(_)) => {}
            },
        }
    }
    let _ = tx.close().await;
}

pub fn router(state: Arc<ArenaState>) -> Router {
    Router::new()
        .route("/session", post(post_session))
        .route("/session/{id}/ws", get(get_ws))
        .route("/session/{id}/log", get(get_log))
        .with_state(state)
}

/// Binds `addr` and serves until the process ends. Returns the bound
/// address through `ready` once listening.
pub async fn serve(addr: SocketAddr, ready: Option<tokio::sync::oneshot::Sender<SocketAddr>>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    log::info!("arena listening on {local}");
    if let Some(r) = ready {
        let _ = r.send(local);
    }
    axum::serve(listener, router(Arc::new(ArenaState::default()))).await
}
