//! Scenario files: JSON text, `"version": "1"`.
//!
//! Everything except `version`, `bounds`, `pursuer` and `evader` is
//! optional; [`Scenario`] is the validated form with every default filled
//! in, and serializes back to a file that loads to the same value.

use std::path::Path;

use pursuit_core::corner_game::Speeds;
use pursuit_core::geometry::{Environment, Polygon, Rect, Vec2, VertexId};
use pursuit_core::partitions::GridSpec;
use pursuit_core::pursuit_field::WeightScheme;
use pursuit_core::scenes::Scene;
use pursuit_core::sim_engine::{AgentState, EvaderPolicy, PursuerPolicy, DEFAULT_DT};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCENARIO_VERSION: &str = "1";
pub const DEFAULT_MAX_TIME: f64 = 60.0;
/// Cells along the longer side of the default grid.
pub const DEFAULT_GRID_CELLS: usize = 200;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl ToString) -> ScenarioError {
    ScenarioError::Invalid { field: field.into(), message: message.to_string() }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub position: Vec2,
    pub speed: f64,
}

impl AgentSpec {
    pub fn state(&self) -> AgentState {
        AgentState::new(self.position, self.speed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputOptions {
    /// SVG pixels per metre.
    pub svg_scale: f64,
    /// Samples per axis of field overlays.
    pub overlay_samples: usize,
}

impl Default for OutputOptions {
    fn default() -> Self {
        Self { svg_scale: 40.0, overlay_samples: 12 }
    }
}

/// On-disk layout; optional fields are `None` until validated.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    version: String,
    bounds: Rect,
    #[serde(default)]
    obstacles: Vec<Vec<Vec2>>,
    pursuer: AgentSpec,
    evader: AgentSpec,
    pursuer_policy: Option<PursuerPolicy>,
    evader_policy: Option<EvaderPolicy>,
    corner: Option<VertexId>,
    grid: Option<GridSpec>,
    dt: Option<f64>,
    max_time: Option<f64>,
    seed: Option<u64>,
    output: Option<OutputOptions>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub version: String,
    pub bounds: Rect,
    pub obstacles: Vec<Polygon>,
    pub pursuer: AgentSpec,
    pub evader: AgentSpec,
    pub pursuer_policy: PursuerPolicy,
    pub evader_policy: EvaderPolicy,
    /// Corner studied by `solve-corner`, `partition` and corner fields.
    pub corner: Option<VertexId>,
    pub grid: GridSpec,
    pub dt: f64,
    pub max_time: f64,
    pub seed: u64,
    pub output: OutputOptions,
    #[serde(skip)]
    env: Environment,
}

impl Scenario {
    pub fn env(&self) -> &Environment {
        &self.env
    }

    pub fn speeds(&self) -> Speeds {
        Speeds::new(self.pursuer.speed, self.evader.speed)
    }

    /// The corner to study, or a validation error naming the missing field.
    pub fn require_corner(&self) -> Result<VertexId, ScenarioError> {
        self.corner.ok_or_else(|| invalid("corner", "required by this command"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Builds a scenario around a bundled scene with a scripted evader.
    pub fn from_scene(scene: &Scene, corner: Option<VertexId>) -> Result<Self, ScenarioError> {
        let file = ScenarioFile {
            version: SCENARIO_VERSION.into(),
            bounds: scene.env.bounds(),
            obstacles: scene.env.obstacles().iter().map(|o| o.vertices().to_vec()).collect(),
            pursuer: AgentSpec { position: scene.pursuer, speed: scene.pursuer_speed },
            evader: AgentSpec { position: scene.evader, speed: scene.evader_speed },
            pursuer_policy: None,
            evader_policy: Some(EvaderPolicy::ScriptedWaypoints { waypoints: scene.waypoints.clone() }),
            corner,
            grid: None,
            dt: None,
            max_time: None,
            seed: None,
            output: None,
        };
        validate(file)
    }
}

fn default_grid(bounds: Rect) -> GridSpec {
    let cell = bounds.width().max(bounds.height()) / DEFAULT_GRID_CELLS as f64;
    let n = |len: f64| ((len / cell).round() as usize).max(1);
    GridSpec { origin: bounds.min, cell_size: cell, nx: n(bounds.width()), ny: n(bounds.height()) }
}

fn check_free(env: &Environment, field: &str, who: &str, p: Vec2) -> Result<(), ScenarioError> {
    if !p.is_finite() {
        return Err(invalid(field, "coordinates must be finite"));
    }
    if !env.is_free(p) || !env.bounds().contains(p) {
        return Err(invalid(field, format!("{who} not in free space")));
    }
    Ok(())
}

fn check_corner(env: &Environment, field: &str, id: VertexId) -> Result<(), ScenarioError> {
    env.vertex(id).map_err(|e| invalid(field, e))?;
    if env.obstacles()[id.obstacle].is_reflex(id.vertex) {
        return Err(invalid(field, format!("vertex {id} is reflex")));
    }
    Ok(())
}

fn validate(f: ScenarioFile) -> Result<Scenario, ScenarioError> {
    if f.version != SCENARIO_VERSION {
        return Err(invalid("version", format!("unsupported version {:?}, expected {SCENARIO_VERSION:?}", f.version)));
    }
    let bounds = Rect::new(f.bounds.min, f.bounds.max).map_err(|e| invalid("bounds", e))?;
    let obstacles = f
        .obstacles
        .into_iter()
        .enumerate()
        .map(|(i, v)| Polygon::new_any_orientation(v).map_err(|e| invalid(format!("obstacles[{i}]"), e)))
        .collect::<Result<Vec<_>, _>>()?;
    let env = Environment::new(obstacles.clone(), bounds).map_err(|e| invalid("obstacles", e))?;

    for (field, spec) in [("pursuer.speed", f.pursuer), ("evader.speed", f.evader)] {
        if !(spec.speed.is_finite() && spec.speed >= 0.0) {
            return Err(invalid(field, "speed must be finite and non-negative"));
        }
    }
    if f.pursuer.speed == 0.0 {
        return Err(invalid("pursuer.speed", "pursuer speed must be positive"));
    }
    check_free(&env, "pursuer.position", "pursuer", f.pursuer.position)?;
    check_free(&env, "evader.position", "evader", f.evader.position)?;

    if let Some(id) = f.corner {
        check_corner(&env, "corner", id)?;
    }
    let pursuer_policy = f.pursuer_policy.unwrap_or(PursuerPolicy::field(WeightScheme::InverseTime));
    match pursuer_policy {
        PursuerPolicy::PursuitField { augmentation, .. } => {
            if !(augmentation.is_finite() && augmentation >= 0.0) {
                return Err(invalid("pursuer_policy.augmentation", "must be finite and non-negative"));
            }
        }
        PursuerPolicy::FixedCornerOptimal { corner } => check_corner(&env, "pursuer_policy.corner", corner)?,
    }
    let evader_policy = f.evader_policy.unwrap_or(EvaderPolicy::External { commands: Vec::new() });
    match &evader_policy {
        EvaderPolicy::ScriptedWaypoints { waypoints } => {
            if waypoints.is_empty() {
                return Err(invalid("evader_policy.waypoints", "must not be empty"));
            }
            for (i, &w) in waypoints.iter().enumerate() {
                check_free(&env, &format!("evader_policy.waypoints[{i}]"), "waypoint", w)?;
            }
        }
        EvaderPolicy::External { commands } => {
            if commands.windows(2).any(|c| c[1].tick < c[0].tick) {
                return Err(invalid("evader_policy.commands", "ticks must be non-decreasing"));
            }
            if let Some(i) = commands.iter().position(|c| !c.velocity.is_finite()) {
                return Err(invalid(format!("evader_policy.commands[{i}].velocity"), "must be finite"));
            }
        }
        EvaderPolicy::GreedyNearestCorner => {}
    }

    let grid = f.grid.unwrap_or_else(|| default_grid(bounds));
    grid.validate().map_err(|e| invalid("grid", e))?;
    let dt = f.dt.unwrap_or(DEFAULT_DT);
    if !(dt.is_finite() && dt > 0.0) {
        return Err(invalid("dt", "must be positive"));
    }
    let max_time = f.max_time.unwrap_or(DEFAULT_MAX_TIME);
    if !(max_time.is_finite() && max_time >= 0.0) {
        return Err(invalid("max_time", "must be finite and non-negative"));
    }
    let output = f.output.unwrap_or_default();
    if !(output.svg_scale.is_finite() && output.svg_scale > 0.0) {
        return Err(invalid("output.svg_scale", "must be positive"));
    }
    if output.overlay_samples == 0 {
        return Err(invalid("output.overlay_samples", "must be positive"));
    }
    Ok(Scenario {
        version: f.version,
        bounds,
        obstacles: env.obstacles().to_vec(),
        pursuer: f.pursuer,
        evader: f.evader,
        pursuer_policy,
        evader_policy,
        corner: f.corner,
        grid,
        dt,
        max_time,
        seed: f.seed.unwrap_or(0),
        output,
        env,
    })
}

/// Parses and validates scenario JSON.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    validate(file)
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })?;
    parse_scenario(&text)
}
