//! Grid sweeps of the corner game: evader-based and pursuer-based
//! partitions of the workspace, and per-corner strategy fields.
//!
//! Every cell is evaluated at its center, independently of its neighbours,
//! so sweeps run in parallel with rayon.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corner_game::{solve_in_world, CornerGameError, CornerSolution, Speeds, StrategyClass, TrackingTime};
use crate::geometry::{segment_clear, Corner, Environment, GeometryError, Vec2, VertexId};

/// Upper bound on `nx * ny`.
pub const MAX_CELLS: usize = 100_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PartitionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Game(#[from] CornerGameError),
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("evader inside obstacle")]
    EvaderInObstacle,
    #[error("pursuer inside obstacle")]
    PursuerInObstacle,
    #[error("corner not visible from the fixed player")]
    CornerHidden,
}

/// Uniform grid of square cells; cell `(i, j)` has its lower-left corner at
/// `origin + cell_size * (i, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: Vec2,
    pub cell_size: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(origin: Vec2, cell_size: f64, nx: usize, ny: usize) -> Result<Self, PartitionError> {
        let spec = Self { origin, cell_size, nx, ny };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), PartitionError> {
        if !(self.cell_size > 0.0 && self.cell_size.is_finite()) {
            return Err(PartitionError::InvalidGrid("cell size must be positive"));
        }
        if !self.origin.is_finite() {
            return Err(PartitionError::InvalidGrid("origin must be finite"));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(PartitionError::InvalidGrid("grid must have at least one cell"));
        }
        match self.nx.checked_mul(self.ny) {
            Some(n) if n <= MAX_CELLS => Ok(()),
            _ => Err(PartitionError::InvalidGrid("too many cells")),
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major index; rows run along x.
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn cell_of(&self, index: usize) -> (usize, usize) {
        (index % self.nx, index / self.nx)
    }

    pub fn center(&self, i: usize, j: usize) -> Vec2 {
        self.origin + Vec2::new((i as f64 + 0.5) * self.cell_size, (j as f64 + 0.5) * self.cell_size)
    }

    /// Same window at twice the resolution.
    pub fn refined(&self) -> Self {
        Self { origin: self.origin, cell_size: 0.5 * self.cell_size, nx: 2 * self.nx, ny: 2 * self.ny }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionKind {
    TrackingTime,
    StrategyClass,
}

/// Outcome of one cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellOutcome {
    pub strategy: StrategyClass,
    /// `None` inside obstacles.
    pub time: Option<TrackingTime>,
    /// World-frame unit direction for the moving pursuer, where defined.
    pub direction: Option<Vec2>,
}

impl CellOutcome {
    const OBSTACLE: CellOutcome = CellOutcome { strategy: StrategyClass::Obstacle, time: None, direction: None };
    const NOT_VISIBLE: CellOutcome =
        CellOutcome { strategy: StrategyClass::NotVisible, time: Some(TrackingTime::ZERO), direction: None };

    fn from_solution(sol: &CornerSolution) -> Self {
        CellOutcome { strategy: sol.strategy(), time: Some(sol.tracking_time()), direction: sol.direction() }
    }
}

/// All cell outcomes of one sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub spec: GridSpec,
    pub cells: Vec<CellOutcome>,
}

impl Sweep {
    pub fn cell(&self, i: usize, j: usize) -> &CellOutcome {
        &self.cells[self.spec.index(i, j)]
    }

    pub fn partition(&self, kind: PartitionKind) -> GridPartition {
        let values = self
            .cells
            .iter()
            .map(|c| match kind {
                PartitionKind::TrackingTime => c.time.map_or(f64::NAN, TrackingTime::as_f64),
                PartitionKind::StrategyClass => f64::from(c.strategy.code()),
            })
            .collect();
        GridPartition { spec: self.spec, kind, values }
    }

    pub fn vector_field(&self) -> VectorField {
        VectorField {
            spec: self.spec,
            vectors: self.cells.iter().map(|c| c.direction).collect(),
            times: self.cells.iter().map(|c| c.time.map_or(f64::NAN, TrackingTime::as_f64)).collect(),
        }
    }
}

/// Row-major cell values: times in seconds (`inf` for unbounded tracking,
/// NaN inside obstacles) or strategy codes 1–6.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPartition {
    pub spec: GridSpec,
    pub kind: PartitionKind,
    pub values: Vec<f64>,
}

impl GridPartition {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.spec.index(i, j)]
    }

    pub fn class_at(&self, i: usize, j: usize) -> Option<StrategyClass> {
        match self.kind {
            PartitionKind::StrategyClass => StrategyClass::from_code(self.value(i, j) as u8),
            PartitionKind::TrackingTime => None,
        }
    }

    /// Mirror image across the vertical line `x = x0`, resampled on this
    /// grid (cells map to cells when the grid is symmetric about `x0`).
    pub fn mirrored_x(&self) -> GridPartition {
        let spec = self.spec;
        let mut values = self.values.clone();
        for j in 0..spec.ny {
            for i in 0..spec.nx {
                values[spec.index(i, j)] = self.values[spec.index(spec.nx - 1 - i, j)];
            }
        }
        GridPartition { spec, kind: self.kind, values }
    }
}

/// Per-cell strategy directions and tracking times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorField {
    pub spec: GridSpec,
    pub vectors: Vec<Option<Vec2>>,
    pub times: Vec<f64>,
}

fn sweep(spec: GridSpec, f: impl Fn(Vec2) -> Result<CellOutcome, PartitionError> + Sync) -> Result<Sweep, PartitionError> {
    spec.validate()?;
    let cells = (0..spec.len())
        .into_par_iter()
        .map(|k| {
            let (i, j) = spec.cell_of(k);
            f(spec.center(i, j))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Sweep { spec, cells })
}

fn check_corner_visible(env: &Environment, corner: &Corner, from: Vec2) -> Result<(), PartitionError> {
    if segment_clear(from, corner.vertex, env)? {
        Ok(())
    } else {
        Err(PartitionError::CornerHidden)
    }
}

/// Sweeps pursuer start positions against a fixed evader.
pub fn evader_sweep(
    env: &Environment,
    corner: VertexId,
    evader: Vec2,
    speeds: Speeds,
    grid: GridSpec,
) -> Result<Sweep, PartitionError> {
    if !evader.is_finite() {
        return Err(GeometryError::NonFinite.into());
    }
    if !env.is_free(evader) {
        return Err(PartitionError::EvaderInObstacle);
    }
    let corner = Corner::from_env(env, corner)?;
    check_corner_visible(env, &corner, evader)?;
    sweep(grid, |c| {
        if !env.is_free(c) {
            return Ok(CellOutcome::OBSTACLE);
        }
        if !segment_clear(c, evader, env)? {
            return Ok(CellOutcome::NOT_VISIBLE);
        }
        Ok(CellOutcome::from_solution(&solve_in_world(&corner, c, evader, speeds)?))
    })
}

/// Sweeps evader start positions against a fixed pursuer.
pub fn pursuer_sweep(
    env: &Environment,
    corner: VertexId,
    pursuer: Vec2,
    speeds: Speeds,
    grid: GridSpec,
) -> Result<Sweep, PartitionError> {
    if !pursuer.is_finite() {
        return Err(GeometryError::NonFinite.into());
    }
    if !env.is_free(pursuer) {
        return Err(PartitionError::PursuerInObstacle);
    }
    let corner = Corner::from_env(env, corner)?;
    sweep(grid, |c| {
        if !env.is_free(c) {
            return Ok(CellOutcome::OBSTACLE);
        }
        if !segment_clear(c, pursuer, env)? {
            return Ok(CellOutcome::NOT_VISIBLE);
        }
        Ok(CellOutcome::from_solution(&solve_in_world(&corner, pursuer, c, speeds)?))
    })
}

/// Tracking times or strategy classes over pursuer start positions.
pub fn evader_partition(
    env: &Environment,
    corner: VertexId,
    evader: Vec2,
    speeds: Speeds,
    grid: GridSpec,
    kind: PartitionKind,
) -> Result<GridPartition, PartitionError> {
    Ok(evader_sweep(env, corner, evader, speeds, grid)?.partition(kind))
}

/// Tracking times or strategy classes over evader start positions.
pub fn pursuer_partition(
    env: &Environment,
    corner: VertexId,
    pursuer: Vec2,
    speeds: Speeds,
    grid: GridSpec,
    kind: PartitionKind,
) -> Result<GridPartition, PartitionError> {
    Ok(pursuer_sweep(env, corner, pursuer, speeds, grid)?.partition(kind))
}

/// Optimal initial pursuer directions over the grid, for a fixed evader.
pub fn corner_vector_field(
    env: &Environment,
    corner: VertexId,
    evader: Vec2,
    speeds: Speeds,
    grid: GridSpec,
) -> Result<VectorField, PartitionError> {
    Ok(evader_sweep(env, corner, evader, speeds, grid)?.vector_field())
}
