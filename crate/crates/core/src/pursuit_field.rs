//! Pursuit fields for general polygonal scenes: every convex corner seen by
//! both players contributes its single-corner optimal direction, weighted
//! either by total detour distance or by tracking time, and the sum is
//! nudged toward the evader.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corner_game::{solve_in_world, CornerGameError, Speeds, StrategyClass, TrackingTime};
use crate::geometry::{segment_clear, Corner, CornerFrame, Environment, GeometryError, Vec2, VertexId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Game(#[from] CornerGameError),
    #[error("degenerate field point")]
    Degenerate,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightScheme {
    /// All weight on the corner with the shortest `|p − v| + |e − v|`.
    #[default]
    DistanceArgmin,
    /// `w_i = 1 / T_i`; corners the pursuer wins forever weigh nothing.
    InverseTime,
}

/// Where the evader-pointing vector enters the sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationOrder {
    /// `normalize(normalize(v_sum) + k·ê)`.
    #[default]
    NormalizeThenAugment,
    /// `normalize(v_sum + k·ê)`.
    AugmentThenNormalize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FieldConfig {
    pub scheme: WeightScheme,
    /// Weight `k` of the unit vector toward the evader; 0 disables it.
    pub augmentation_weight: f64,
    pub order: NormalizationOrder,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self { scheme: WeightScheme::DistanceArgmin, augmentation_weight: 1.0, order: NormalizationOrder::default() }
    }
}

impl FieldConfig {
    pub fn with_scheme(scheme: WeightScheme) -> Self {
        Self { scheme, ..Self::default() }
    }
}

/// A corner seen by both players, optionally with its local solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CornerCandidate {
    pub corner: VertexId,
    pub frame: CornerFrame,
    pub local_vector: Option<Vec2>,
    pub local_time: Option<TrackingTime>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contributor {
    pub corner: VertexId,
    pub weight: f64,
    pub time: TrackingTime,
    /// `|p − v| + |e − v|`.
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PursuitVector {
    pub direction: Vec2,
    pub contributors: Vec<Contributor>,
}

impl PursuitVector {
    /// Contributor with the largest weight (lowest id on ties), if any
    /// weight is positive.
    pub fn active_corner(&self) -> Option<VertexId> {
        self.contributors
            .iter()
            .filter(|c| c.weight > 0.0)
            .max_by(|a, b| a.weight.total_cmp(&b.weight).then(b.corner.cmp(&a.corner)))
            .map(|c| c.corner)
    }
}

/// Convex corners visible from both `p` and `e`, in vertex order.
pub fn candidate_corners(env: &Environment, p: Vec2, e: Vec2) -> Result<Vec<CornerCandidate>, FieldError> {
    for q in [p, e] {
        if !q.is_finite() {
            return Err(GeometryError::NonFinite.into());
        }
        if !env.is_free(q) {
            return Err(GeometryError::NotInFreeSpace.into());
        }
    }
    let mut out = Vec::new();
    for id in env.vertex_ids() {
        if env.obstacles()[id.obstacle].is_reflex(id.vertex) {
            continue;
        }
        let v = env.vertex(id)?;
        if segment_clear(p, v, env)? && segment_clear(e, v, env)? {
            let corner = Corner::from_env(env, id)?;
            out.push(CornerCandidate {
                corner: id,
                frame: CornerFrame::orient(&corner, p, e),
                local_vector: None,
                local_time: None,
            });
        }
    }
    Ok(out)
}

/// Fills in the candidate's world-frame strategy direction and tracking
/// time. Corners whose wedge hides the evader from the pursuer (possible
/// when the obstacle is finite) are left unfilled and ignored by
/// [`combine`].
pub fn corner_local_solution(
    cand: &CornerCandidate,
    p: Vec2,
    e: Vec2,
    speeds: Speeds,
) -> Result<CornerCandidate, FieldError> {
    let sol = solve_in_world(&cand.frame.corner(), p, e, speeds)?;
    let mut out = cand.clone();
    out.frame = sol.frame;
    if sol.strategy() != StrategyClass::NotVisible {
        out.local_vector = sol.direction();
        out.local_time = Some(sol.tracking_time());
    }
    Ok(out)
}

/// Divides by the norm unless the vector is already unit to within one ulp.
fn unit(v: Vec2) -> Option<Vec2> {
    let n = v.norm();
    if !(n > 1e-12) || !n.is_finite() {
        None
    } else if (n - 1.0).abs() <= f64::EPSILON {
        Some(v)
    } else {
        Some(v / n)
    }
}

/// Weighted sum of the filled candidates, augmented toward the evader and
/// normalized.
pub fn combine(cands: &[CornerCandidate], p: Vec2, e: Vec2, cfg: &FieldConfig) -> Result<PursuitVector, FieldError> {
    let filled: Vec<(&CornerCandidate, Vec2, TrackingTime)> = cands
        .iter()
        .filter_map(|c| Some((c, c.local_vector?, c.local_time?)))
        .collect();
    let to_evader = unit(e - p);
    if filled.is_empty() {
        let direction = to_evader.ok_or(FieldError::Degenerate)?;
        return Ok(PursuitVector { direction, contributors: Vec::new() });
    }
    let distance = |c: &CornerCandidate| {
        let v = c.frame.vertex;
        p.distance(v) + e.distance(v)
    };
    let mut contributors: Vec<Contributor> = filled
        .iter()
        .map(|(c, _, t)| Contributor { corner: c.corner, weight: 0.0, time: *t, distance: distance(c) })
        .collect();
    match cfg.scheme {
        WeightScheme::DistanceArgmin => {
            let best = (0..contributors.len())
                .min_by(|&a, &b| {
                    let (ca, cb) = (&contributors[a], &contributors[b]);
                    ca.distance.total_cmp(&cb.distance).then(ca.corner.cmp(&cb.corner))
                })
                .expect("non-empty");
            contributors[best].weight = 1.0;
        }
        WeightScheme::InverseTime => {
            for c in &mut contributors {
                c.weight = if c.time.is_infinite() { 0.0 } else { 1.0 / c.time.as_f64() };
            }
        }
    }
    let active: Vec<(Vec2, f64)> =
        filled.iter().zip(&contributors).filter(|(_, c)| c.weight != 0.0).map(|((_, v, _), c)| (*v, c.weight)).collect();
    // a lone contributor passes through unscaled so its direction is exact
    let v_sum = match active.as_slice() {
        [(v, _)] => *v,
        _ => active.iter().fold(Vec2::ZERO, |acc, &(v, w)| acc + v * w),
    };
    let aug = match (to_evader, cfg.augmentation_weight) {
        (_, k) if k == 0.0 => Vec2::ZERO,
        (Some(u), k) => u * k,
        (None, _) => Vec2::ZERO,
    };
    let total = match cfg.order {
        NormalizationOrder::NormalizeThenAugment => unit(v_sum).unwrap_or(Vec2::ZERO) + aug,
        NormalizationOrder::AugmentThenNormalize => v_sum + aug,
    };
    let direction = unit(total).ok_or(FieldError::Degenerate)?;
    Ok(PursuitVector { direction, contributors })
}

/// Full field query: candidates, local solutions, weighted combination.
pub fn pursuit_vector(
    env: &Environment,
    p: Vec2,
    e: Vec2,
    speeds: Speeds,
    cfg: &FieldConfig,
) -> Result<PursuitVector, FieldError> {
    let cands = candidate_corners(env, p, e)?
        .iter()
        .map(|c| corner_local_solution(c, p, e, speeds))
        .collect::<Result<Vec<_>, _>>()?;
    combine(&cands, p, e, cfg)
}
