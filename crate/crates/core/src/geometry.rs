//! Planar primitives, polygonal environments and line-of-sight queries.
//!
//! Obstacles are closed, counter-clockwise simple polygons. A line-of-sight
//! segment is blocked only when it enters an obstacle interior: touching a
//! vertex or sliding along an edge is visible. All predicates break ties
//! toward "clear" so that grid sweeps classify boundary cells consistently.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Base tolerance for geometric predicates, applied to coordinates
/// normalized by the scene scale.
pub const EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("point not in free space")]
    NotInFreeSpace,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon has duplicate consecutive vertices at index {0}")]
    DuplicateVertex(usize),
    #[error("polygon is not simple")]
    NotSimple,
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("polygon must be counter-clockwise")]
    Clockwise,
    #[error("obstacles {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("obstacle {0} lies outside the bounds")]
    OutOfBounds(usize),
    #[error("invalid bounds")]
    InvalidBounds,
    #[error("no vertex {vertex} on obstacle {obstacle}")]
    NoSuchVertex { obstacle: usize, vertex: usize },
    #[error("reflex corner has no escape game")]
    ReflexCorner,
    #[error("corner not mutually visible")]
    NotMutuallyVisible,
}

/// Cartesian point or displacement in meters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn try_new(x: f64, y: f64) -> Result<Self, GeometryError> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(GeometryError::NonFinite)
        }
    }

    /// Unit vector at `angle` radians from the positive x-axis.
    #[inline]
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { x: c, y: s }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn distance(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Unit vector in the same direction, or `None` for a zero vector.
    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    #[inline]
    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Counter-clockwise perpendicular.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    #[inline]
    pub fn lerp(self, o: Vec2, t: f64) -> Vec2 {
        self + (o - self) * t
    }
}

impl TryFrom<[f64; 2]> for Vec2 {
    type Error = GeometryError;
    fn try_from(v: [f64; 2]) -> Result<Self, Self::Error> {
        Vec2::try_new(v[0], v[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, k: f64) -> Vec2 {
        Vec2::new(self.x / k, self.y / k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Wrap an angle into (−π, π].
pub fn normalize_angle(angle: f64) -> f64 {
    let mut a = angle % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Polar coordinates about a corner vertex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    pub angle: f64,
    pub radius: f64,
}

impl PolarPoint {
    /// Builds a polar point, normalizing the angle. Negative radii are
    /// folded onto the opposite angle.
    pub fn new(angle: f64, radius: f64) -> Self {
        if radius < 0.0 {
            Self { angle: normalize_angle(angle + PI), radius: -radius }
        } else {
            Self { angle: normalize_angle(angle), radius }
        }
    }

    pub fn from_cartesian(p: Vec2) -> Self {
        Self { angle: if p == Vec2::ZERO { 0.0 } else { p.angle() }, radius: p.norm() }
    }

    pub fn to_cartesian(self) -> Vec2 {
        Vec2::from_angle(self.angle) * self.radius
    }
}

/// Orientation of `c` relative to the directed line `a → b`: `1` for left,
/// `-1` for right, `0` when collinear within tolerance.
pub fn orient(a: Vec2, b: Vec2, c: Vec2) -> i8 {
    let ab = b - a;
    let ac = c - a;
    let det = ab.cross(ac);
    // Relative bound on the two products; well above their rounding error.
    let bound = EPS * ((ab.x * ac.y).abs() + (ab.y * ac.x).abs());
    if det > bound {
        1
    } else if det < -bound {
        -1
    } else {
        0
    }
}

/// Axis-aligned rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Vec2,
    pub max: Vec2,
}

impl Rect {
    pub fn new(min: Vec2, max: Vec2) -> Result<Self, GeometryError> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if min.x >= max.x || min.y >= max.y {
            return Err(GeometryError::InvalidBounds);
        }
        Ok(Self { min, max })
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

/// Identifies one vertex of one obstacle. Ordered lexicographically, which
/// is the deterministic tie-break used throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId {
    pub obstacle: usize,
    pub vertex: usize,
}

impl VertexId {
    pub const fn new(obstacle: usize, vertex: usize) -> Self {
        Self { obstacle, vertex }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.obstacle, self.vertex)
    }
}

/// Simple counter-clockwise polygon.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Polygon {
    vertices: Vec<Vec2>,
    #[serde(skip)]
    bbox: (Vec2, Vec2),
    #[serde(skip)]
    tol: f64,
}

impl<'de> Deserialize<'de> for Polygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let vertices = Vec::<Vec2>::deserialize(d)?;
        Polygon::new(vertices).map_err(serde::de::Error::custom)
    }
}

impl Polygon {
    /// Validates and stores a counter-clockwise simple polygon.
    pub fn new(vertices: Vec<Vec2>) -> Result<Self, GeometryError> {
        let poly = Self::build(vertices)?;
        if poly.signed_area() < 0.0 {
            return Err(GeometryError::Clockwise);
        }
        Ok(poly)
    }

    /// Like [`Polygon::new`] but reverses clockwise input.
    pub fn new_any_orientation(mut vertices: Vec<Vec2>) -> Result<Self, GeometryError> {
        if shoelace(&vertices) < 0.0 {
            vertices.reverse();
        }
        Self::new(vertices)
    }

    fn build(vertices: Vec<Vec2>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let mut lo = vertices[0];
        let mut hi = vertices[0];
        for v in &vertices {
            lo = Vec2::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Vec2::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        let scale = lo.x.abs().max(lo.y.abs()).max(hi.x.abs()).max(hi.y.abs()).max(1.0);
        let tol = EPS * scale;
        for i in 0..n {
            if vertices[i].distance(vertices[(i + 1) % n]) <= EPS {
                return Err(GeometryError::DuplicateVertex(i));
            }
        }
        let poly = Self { vertices, bbox: (lo, hi), tol };
        if poly.signed_area().abs() <= tol * tol {
            return Err(GeometryError::ZeroArea);
        }
        if !poly.is_simple() {
            return Err(GeometryError::NotSimple);
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Vec2 {
        self.vertices[i]
    }

    pub fn prev(&self, i: usize) -> Vec2 {
        self.vertices[(i + self.len() - 1) % self.len()]
    }

    pub fn next(&self, i: usize) -> Vec2 {
        self.vertices[(i + 1) % self.len()]
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn bbox(&self) -> (Vec2, Vec2) {
        self.bbox
    }

    pub fn signed_area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    /// Interior angle at vertex `i`, measured inside the obstacle, in (0, 2π).
    pub fn interior_angle(&self, i: usize) -> f64 {
        let v = self.vertices[i];
        let to_next = (self.next(i) - v).angle();
        let to_prev = (self.prev(i) - v).angle();
        // Counter-clockwise sweep from the outgoing edge to the incoming edge.
        let mut a = to_prev - to_next;
        if a <= 0.0 {
            a += 2.0 * PI;
        }
        a
    }

    pub fn is_reflex(&self, i: usize) -> bool {
        let v = self.vertices[i];
        (v - self.prev(i)).cross(self.next(i) - v) < 0.0
    }

    fn is_simple(&self) -> bool {
        let n = self.len();
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            for j in (i + 1)..n {
                let (c, d) = (self.vertices[j], self.vertices[(j + 1) % n]);
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    // Shared endpoint only: reject folding back onto the edge.
                    let shared = if j == i + 1 { b } else { a };
                    let (u, w) = if j == i + 1 { (a, d) } else { (b, c) };
                    if orient(shared, u, w) == 0 && (u - shared).dot(w - shared) > 0.0 {
                        return false;
                    }
                } else if segments_touch(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    /// Distance from `p` to the polygon boundary.
    pub fn boundary_distance(&self, p: Vec2) -> f64 {
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// True when `p` lies strictly inside, farther than the tolerance from
    /// the boundary.
    pub fn contains_strict(&self, p: Vec2) -> bool {
        let (lo, hi) = self.bbox;
        if p.x <= lo.x || p.x >= hi.x || p.y <= lo.y || p.y >= hi.y {
            return false;
        }
        if !self.crossing_inside(p) {
            return false;
        }
        self.boundary_distance(p) > self.tol
    }

    /// True when `p` lies inside or on the boundary.
    pub fn contains_closed(&self, p: Vec2) -> bool {
        self.crossing_inside(p) || self.boundary_distance(p) <= self.tol
    }

    fn crossing_inside(&self, p: Vec2) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// A point strictly inside the polygon.
    pub fn interior_point(&self) -> Vec2 {
        // The lowest-leftmost vertex is always convex; step inward along its
        // angle bisector until strictly inside.
        let i = (0..self.len())
            .min_by(|&a, &b| {
                let (va, vb) = (self.vertices[a], self.vertices[b]);
                va.y.total_cmp(&vb.y).then(va.x.total_cmp(&vb.x))
            })
            .unwrap_or(0);
        let v = self.vertices[i];
        let d1 = (self.next(i) - v).normalized().unwrap_or(Vec2::new(1.0, 0.0));
        let d2 = (self.prev(i) - v).normalized().unwrap_or(Vec2::new(0.0, 1.0));
        let bis = (d1 + d2).normalized().unwrap_or(d1.perp());
        let mut step = self.next(i).distance(v).min(self.prev(i).distance(v)) * 0.5;
        for _ in 0..200 {
            let q = v + bis * step;
            if self.contains_strict(q) {
                return q;
            }
            step *= 0.5;
        }
        v
    }

    /// True when the open segment `a → b` passes through the interior.
    pub fn segment_enters_interior(&self, a: Vec2, b: Vec2) -> bool {
        let (lo, hi) = self.bbox;
        if a.x.max(b.x) <= lo.x || a.x.min(b.x) >= hi.x || a.y.max(b.y) <= lo.y || a.y.min(b.y) >= hi.y {
            return false;
        }
        let r = b - a;
        let len2 = r.norm_squared();
        if len2 == 0.0 {
            return false;
        }
        let mut params: Vec<f64> = vec![0.0, 1.0];
        for (c, d) in self.edges() {
            let s = d - c;
            let denom = r.cross(s);
            let ca = c - a;
            let scale = r.norm() * s.norm();
            if denom.abs() > EPS * scale {
                let t = ca.cross(s) / denom;
                let u = ca.cross(r) / denom;
                if (-EPS..=1.0 + EPS).contains(&u) && t > 0.0 && t < 1.0 {
                    params.push(t);
                }
            } else if ca.cross(r).abs() <= self.tol * r.norm().max(1.0) {
                for q in [c, d] {
                    let t = (q - a).dot(r) / len2;
                    if t > 0.0 && t < 1.0 {
                        params.push(t);
                    }
                }
            }
        }
        params.sort_by(f64::total_cmp);
        params.dedup();
        params.windows(2).any(|w| {
            let mid = a + r * (0.5 * (w[0] + w[1]));
            self.contains_strict(mid)
        })
    }
}

fn shoelace(v: &[Vec2]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>()
}

pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// Closed segments `ab` and `cd` share at least one point.
fn segments_touch(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    let on = |p: Vec2, q: Vec2, r: Vec2| {
        orient(p, q, r) == 0
            && r.x >= p.x.min(q.x) - EPS
            && r.x <= p.x.max(q.x) + EPS
            && r.y >= p.y.min(q.y) - EPS
            && r.y <= p.y.max(q.y) + EPS
    };
    on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b)
}

/// Obstacles inside a rectangular workspace window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Environment {
    obstacles: Vec<Polygon>,
    bounds: Rect,
}

impl Environment {
    pub fn new(obstacles: Vec<Polygon>, bounds: Rect) -> Result<Self, GeometryError> {
        for (i, o) in obstacles.iter().enumerate() {
            if !o.vertices().iter().all(|&v| bounds.contains(v)) {
                return Err(GeometryError::OutOfBounds(i));
            }
        }
        for i in 0..obstacles.len() {
            for j in (i + 1)..obstacles.len() {
                if polygons_overlap(&obstacles[i], &obstacles[j]) {
                    return Err(GeometryError::Overlap(i, j));
                }
            }
        }
        Ok(Self { obstacles, bounds })
    }

    /// An obstacle-free window.
    pub fn empty(bounds: Rect) -> Self {
        Self { obstacles: Vec::new(), bounds }
    }

    pub fn obstacles(&self) -> &[Polygon] {
        &self.obstacles
    }

    pub fn bounds(&self) -> Rect {
        self.bounds
    }

    pub fn vertex(&self, id: VertexId) -> Result<Vec2, GeometryError> {
        self.obstacles
            .get(id.obstacle)
            .filter(|o| id.vertex < o.len())
            .map(|o| o.vertex(id.vertex))
            .ok_or(GeometryError::NoSuchVertex { obstacle: id.obstacle, vertex: id.vertex })
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.obstacles
            .iter()
            .enumerate()
            .flat_map(|(i, o)| (0..o.len()).map(move |j| VertexId::new(i, j)))
    }

    /// Not inside any obstacle interior (boundaries are free).
    pub fn is_free(&self, p: Vec2) -> bool {
        !self.obstacles.iter().any(|o| o.contains_strict(p))
    }

    fn check_free(&self, p: Vec2) -> Result<(), GeometryError> {
        if !p.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if self.is_free(p) {
            Ok(())
        } else {
            Err(GeometryError::NotInFreeSpace)
        }
    }
}

impl<'de> Deserialize<'de> for Environment {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            obstacles: Vec<Polygon>,
            bounds: Rect,
        }
        let raw = Raw::deserialize(d)?;
        Environment::new(raw.obstacles, raw.bounds).map_err(serde::de::Error::custom)
    }
}

fn polygons_overlap(a: &Polygon, b: &Polygon) -> bool {
    let edge_enters = |p: &Polygon, q: &Polygon| p.edges().any(|(u, v)| q.segment_enters_interior(u, v));
    edge_enters(a, b)
        || edge_enters(b, a)
        || b.contains_strict(a.interior_point())
        || a.contains_strict(b.interior_point())
}

/// True iff the open segment `(a, b)` avoids every obstacle interior.
pub fn segment_clear(a: Vec2, b: Vec2, env: &Environment) -> Result<bool, GeometryError> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    Ok(!env.obstacles.iter().any(|o| o.segment_enters_interior(a, b)))
}

/// Obstacle vertices visible from `p`.
pub fn visible_vertices(p: Vec2, env: &Environment) -> Result<Vec<VertexId>, GeometryError> {
    env.check_free(p)?;
    let mut out = Vec::new();
    for id in env.vertex_ids() {
        let v = env.vertex(id)?;
        if segment_clear(p, v, env)? {
            out.push(id);
        }
    }
    Ok(out)
}

/// Vertices whose interior angle exceeds π.
pub fn reflex_vertices(env: &Environment) -> Vec<VertexId> {
    env.vertex_ids()
        .filter(|id| env.obstacles[id.obstacle].is_reflex(id.vertex))
        .collect()
}

/// A convex obstacle corner viewed as a semi-infinite wedge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corner {
    pub vertex: Vec2,
    /// World directions of the outgoing and incoming incident edges; the
    /// obstacle occupies the counter-clockwise sweep from the first to the
    /// second.
    pub edge_dirs: [f64; 2],
}

impl Corner {
    pub fn from_env(env: &Environment, id: VertexId) -> Result<Self, GeometryError> {
        let v = env.vertex(id)?;
        let poly = &env.obstacles[id.obstacle];
        if poly.is_reflex(id.vertex) {
            return Err(GeometryError::ReflexCorner);
        }
        Ok(Self {
            vertex: v,
            edge_dirs: [(poly.next(id.vertex) - v).angle(), (poly.prev(id.vertex) - v).angle()],
        })
    }

    /// Interior (obstacle) angle of the wedge, in (0, π].
    pub fn interior_angle(&self) -> f64 {
        let mut a = self.edge_dirs[1] - self.edge_dirs[0];
        if a <= 0.0 {
            a += 2.0 * PI;
        }
        a
    }

    /// True when `p` lies strictly inside the wedge.
    pub fn contains_strict(&self, p: Vec2) -> bool {
        let d = p - self.vertex;
        if d.norm() <= EPS * self.vertex.norm().max(1.0) {
            return false;
        }
        let mut rel = d.angle() - self.edge_dirs[0];
        if rel < 0.0 {
            rel += 2.0 * PI;
        }
        let w = self.interior_angle();
        let slack = EPS * 10.0;
        rel > slack && rel < w - slack
    }
}

/// Rigid map between the world frame and the canonical frame of one corner.
///
/// In the canonical frame the vertex sits at the origin, the occluding edge
/// points along angle π and the obstacle fills the angles `[π, π + w]`.
/// The star region is then `[0, w]`, free space is `(w − π, π)` and the
/// worst-case tangent line sweeps counter-clockwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CornerFrame {
    pub vertex: Vec2,
    pub rotation: f64,
    pub mirrored: bool,
    pub edge_dirs: [f64; 2],
}

impl CornerFrame {
    /// Picks the orientation whose occluding edge borders the pursuer's
    /// shadow. Pursuers in the star region fall back to the evader's side.
    pub fn orient(corner: &Corner, p: Vec2, e: Vec2) -> Self {
        let unmirrored = Self::with_mirror(corner, false);
        let w = corner.interior_angle();
        let side = |q: Vec2| -> Option<bool> {
            let c = unmirrored.to_canonical(q);
            if c.norm() <= EPS * corner.vertex.norm().max(1.0) {
                return None;
            }
            let a = c.angle();
            if a < 0.0 && a > w - PI {
                Some(false)
            } else if a > w {
                Some(true)
            } else {
                None
            }
        };
        let mirrored = match side(p) {
            Some(m) => m,
            None => {
                let c = unmirrored.to_canonical(e);
                let a = if c == Vec2::ZERO { 0.0 } else { c.angle() };
                a < w * 0.5 && a > w - PI
            }
        };
        Self::with_mirror(corner, mirrored)
    }

    pub fn with_mirror(corner: &Corner, mirrored: bool) -> Self {
        let rotation = if mirrored {
            normalize_angle(-corner.edge_dirs[1] - PI)
        } else {
            normalize_angle(corner.edge_dirs[0] - PI)
        };
        Self { vertex: corner.vertex, rotation, mirrored, edge_dirs: corner.edge_dirs }
    }

    pub fn corner(&self) -> Corner {
        Corner { vertex: self.vertex, edge_dirs: self.edge_dirs }
    }

    pub fn interior_angle(&self) -> f64 {
        self.corner().interior_angle()
    }

    pub fn to_canonical(&self, p: Vec2) -> Vec2 {
        self.dir_to_canonical(p - self.vertex)
    }

    pub fn to_world(&self, c: Vec2) -> Vec2 {
        self.dir_to_world(c) + self.vertex
    }

    pub fn dir_to_canonical(&self, d: Vec2) -> Vec2 {
        let d = if self.mirrored { Vec2::new(d.x, -d.y) } else { d };
        d.rotated(-self.rotation)
    }

    pub fn dir_to_world(&self, c: Vec2) -> Vec2 {
        let d = c.rotated(self.rotation);
        if self.mirrored {
            Vec2::new(d.x, -d.y)
        } else {
            d
        }
    }

    pub fn polar(&self, p: Vec2) -> PolarPoint {
        PolarPoint::from_cartesian(self.to_canonical(p))
    }
}

/// Canonicalizes the corner `id` for a pursuer at `p` and an evader at `e`.
pub fn corner_frame(
    env: &Environment,
    id: VertexId,
    p: Vec2,
    e: Vec2,
) -> Result<(CornerFrame, PolarPoint, PolarPoint), GeometryError> {
    if !(p.is_finite() && e.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    let corner = Corner::from_env(env, id)?;
    if !segment_clear(p, corner.vertex, env)? || !segment_clear(e, corner.vertex, env)? {
        return Err(GeometryError::NotMutuallyVisible);
    }
    let frame = CornerFrame::orient(&corner, p, e);
    Ok((frame, frame.polar(p), frame.polar(e)))
}
