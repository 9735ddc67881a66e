//! Stable file formats: partition CSV, SVG renderings, trajectory JSON-lines.
//!
//! Numbers are written in shortest round-trip form; `inf` is the only
//! non-numeric literal.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use std::path::Path;

use pursuit_core::corner_game::StrategyClass;
use pursuit_core::geometry::{Environment, Vec2, VertexId};
use pursuit_core::partitions::{GridPartition, GridSpec, PartitionKind, VectorField};
use pursuit_core::pursuit_field::Contributor;
use pursuit_core::sim_engine::LogStep;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const PARTITION_HEADER: &str = "# kind,nx,ny,ox,oy,cell";

/// Obstacle cells of time partitions are written as this value.
pub const OBSTACLE_TIME: f64 = -1.0;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
    Jsonl,
}

fn kind_name(kind: PartitionKind) -> &'static str {
    match kind {
        PartitionKind::TrackingTime => "time",
        PartitionKind::StrategyClass => "strategy",
    }
}

fn num(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x}")
    }
}

pub fn write_partition_csv(p: &GridPartition, out: &mut impl Write) -> io::Result<()> {
    let s = &p.spec;
    writeln!(out, "{PARTITION_HEADER}")?;
    writeln!(out, "# {},{},{},{},{},{}", kind_name(p.kind), s.nx, s.ny, s.origin.x, s.origin.y, s.cell_size)?;
    for &v in &p.values {
        match p.kind {
            PartitionKind::StrategyClass => writeln!(out, "{}", v as u8)?,
            PartitionKind::TrackingTime if v.is_nan() => writeln!(out, "{}", num(OBSTACLE_TIME))?,
            PartitionKind::TrackingTime => writeln!(out, "{}", num(v))?,
        }
    }
    Ok(())
}

pub fn read_partition_csv(input: impl BufRead) -> Result<GridPartition, ExportError> {
    let bad = |line: usize, message: &str| ExportError::Format { line, message: message.into() };
    let mut lines = input.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != PARTITION_HEADER {
        return Err(bad(1, "missing partition header"));
    }
    let meta = lines.next().transpose()?.unwrap_or_default();
    let fields: Vec<&str> = meta.trim().trim_start_matches('#').trim().split(',').collect();
    if fields.len() != 6 {
        return Err(bad(2, "expected kind,nx,ny,ox,oy,cell"));
    }
    let kind = match fields[0] {
        "time" => PartitionKind::TrackingTime,
        "strategy" => PartitionKind::StrategyClass,
        _ => return Err(bad(2, "unknown partition kind")),
    };
    let int = |s: &str| s.parse::<usize>().map_err(|_| bad(2, "bad grid size"));
    let float = |s: &str| s.parse::<f64>().map_err(|_| bad(2, "bad grid origin or cell size"));
    let spec = GridSpec {
        origin: Vec2::new(float(fields[3])?, float(fields[4])?),
        cell_size: float(fields[5])?,
        nx: int(fields[1])?,
        ny: int(fields[2])?,
    };
    spec.validate().map_err(|e| bad(2, &e.to_string()))?;
    let mut values = Vec::with_capacity(spec.len());
    for (k, line) in lines.enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let v = match text {
            "inf" => f64::INFINITY,
            _ => text.parse::<f64>().map_err(|_| bad(k + 3, "bad value"))?,
        };
        let v = match kind {
            PartitionKind::StrategyClass if StrategyClass::from_code(v as u8).is_none() || v.fract() != 0.0 => {
                return Err(bad(k + 3, "strategy code outside 1-6"));
            }
            PartitionKind::TrackingTime if v < 0.0 => f64::NAN,
            _ => v,
        };
        values.push(v);
    }
    if values.len() != spec.len() {
        return Err(bad(0, "value count does not match the grid"));
    }
    Ok(GridPartition { spec, kind, values })
}

/// Per-point field samples: `# x,y,vx,vy,t`, blank direction for cells
/// without one.
pub fn write_field_csv(field: &VectorField, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "# x,y,vx,vy,t")?;
    let s = &field.spec;
    for j in 0..s.ny {
        for i in 0..s.nx {
            let k = s.index(i, j);
            let c = s.center(i, j);
            match field.vectors[k] {
                Some(v) => writeln!(out, "{},{},{},{},{}", c.x, c.y, v.x, v.y, num(field.times[k]))?,
                None => writeln!(out, "{},{},,,{}", c.x, c.y, num(field.times[k]))?,
            }
        }
    }
    Ok(())
}

/// One arrow sample: position, unit direction and (optional) time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arrow {
    pub at: Vec2,
    pub direction: Vec2,
}

pub fn write_samples_csv(samples: &[Arrow], out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "# x,y,vx,vy")?;
    for a in samples {
        writeln!(out, "{},{},{},{}", a.at.x, a.at.y, a.direction.x, a.direction.y)?;
    }
    Ok(())
}

/// Trajectory record, one JSON object per line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: f64,
    pub px: f64,
    pub py: f64,
    pub ex: f64,
    pub ey: f64,
    pub los: bool,
    pub corner: Option<VertexId>,
    pub weights: Vec<Contributor>,
}

impl From<&LogStep> for StepRecord {
    fn from(s: &LogStep) -> Self {
        Self {
            t: s.t,
            px: s.pursuer.x,
            py: s.pursuer.y,
            ex: s.evader.x,
            ey: s.evader.y,
            los: s.los,
            corner: s.active_corner,
            weights: s.weights.clone(),
        }
    }
}

impl From<StepRecord> for LogStep {
    fn from(r: StepRecord) -> Self {
        Self {
            t: r.t,
            pursuer: Vec2::new(r.px, r.py),
            evader: Vec2::new(r.ex, r.ey),
            los: r.los,
            active_corner: r.corner,
            weights: r.weights,
        }
    }
}

pub fn write_trajectory_jsonl(steps: &[LogStep], out: &mut impl Write) -> io::Result<()> {
    for s in steps {
        let line = serde_json::to_string(&StepRecord::from(s)).map_err(io::Error::other)?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn read_trajectory_jsonl(input: impl BufRead) -> Result<Vec<LogStep>, ExportError> {
    let mut steps = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let r: StepRecord =
            serde_json::from_str(&line).map_err(|e| ExportError::Format { line: k + 1, message: e.to_string() })?;
        steps.push(r.into());
    }
    Ok(steps)
}

/// Writes through a buffer to `path`, naming the path on failure.
pub fn write_file(path: &Path, f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> Result<(), ExportError> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    std::fs::write(path, buf).map_err(|source| ExportError::Write { path: path.display().to_string(), source })
}

pub fn export_partition(p: &GridPartition, path: &Path, format: Format, markers: &[Marker]) -> Result<(), ExportError> {
    match format {
        Format::Svg => write_file(path, |b| b.write_all(partition_svg(p, markers).as_bytes())),
        _ => write_file(path, |b| write_partition_csv(p, b)),
    }
}

// ---- SVG ---------------------------------------------------------------

const OBSTACLE_FILL: &str = "#808080";
const EVADER_FILL: &str = "#d62728";
const PURSUER_FILL: &str = "#1f4fd6";
const INF_FILL: &str = "#ffffff";

/// Strategy colours, indexed by code − 1.
const STRATEGY_FILLS: [&str; 6] = ["#2ca02c", "#98df8a", "#ff7f0e", "#9467bd", "#dddddd", OBSTACLE_FILL];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Pursuer,
    Evader,
}

/// A player drawn on top of a rendering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Marker {
    pub role: Role,
    pub at: Vec2,
}

impl Role {
    fn fill(self) -> &'static str {
        match self {
            Role::Pursuer => PURSUER_FILL,
            Role::Evader => EVADER_FILL,
        }
    }
}

/// World → SVG pixels, y up.
struct View {
    min: Vec2,
    height: f64,
    scale: f64,
}

impl View {
    fn x(&self, x: f64) -> f64 {
        round3((x - self.min.x) * self.scale)
    }

    fn y(&self, y: f64) -> f64 {
        round3(self.height - (y - self.min.y) * self.scale)
    }
}

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

/// Linear blue → yellow ramp for finite times.
fn ramp(u: f64) -> String {
    let u = u.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * u).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(48.0, 253.0), lerp(18.0, 231.0), lerp(120.0, 37.0))
}

fn markers_svg(out: &mut String, view: &View, markers: &[Marker], radius: f64) {
    for m in markers {
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{radius}" fill="{}"/>"#,
            view.x(m.at.x),
            view.y(m.at.y),
            m.role.fill()
        );
    }
}

const CELL_PX: f64 = 3.0;
const LEGEND_W: f64 = 170.0;

/// Heat map of a partition with a legend on the right.
pub fn partition_svg(p: &GridPartition, markers: &[Marker]) -> String {
    let s = &p.spec;
    let (w, h) = (s.nx as f64 * CELL_PX, s.ny as f64 * CELL_PX);
    let view = View { min: s.origin, height: h, scale: CELL_PX / s.cell_size };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{h}" viewBox="0 0 {} {h}">"#,
        w + LEGEND_W,
        w + LEGEND_W
    );
    let finite: Vec<f64> = p.values.iter().copied().filter(|v| v.is_finite()).collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    for j in 0..s.ny {
        for i in 0..s.nx {
            let v = p.value(i, j);
            let fill = match p.kind {
                PartitionKind::StrategyClass => STRATEGY_FILLS[(v as usize).clamp(1, 6) - 1].to_string(),
                PartitionKind::TrackingTime if v.is_nan() => OBSTACLE_FILL.into(),
                PartitionKind::TrackingTime if v.is_infinite() => INF_FILL.into(),
                PartitionKind::TrackingTime => ramp((v - lo) / span),
            };
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{CELL_PX}" height="{CELL_PX}" fill="{fill}"/>"#,
                i as f64 * CELL_PX,
                h - (j + 1) as f64 * CELL_PX
            );
        }
    }
    markers_svg(&mut out, &view, markers, 4.0);
    let entry = |out: &mut String, k: usize, fill: &str, label: &str| {
        let y = 20.0 + 22.0 * k as f64;
        let _ = writeln!(out, r##"<rect x="{}" y="{y}" width="14" height="14" fill="{fill}" stroke="#000"/>"##, w + 10.0);
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12" font-family="sans-serif">{label}</text>"#, w + 30.0, y + 11.0);
    };
    match p.kind {
        PartitionKind::StrategyClass => {
            for c in StrategyClass::ALL {
                entry(&mut out, c.code() as usize - 1, STRATEGY_FILLS[c.code() as usize - 1], c.name());
            }
        }
        PartitionKind::TrackingTime => {
            if finite.is_empty() {
                entry(&mut out, 0, &ramp(0.0), "no finite times");
            } else {
                entry(&mut out, 0, &ramp(0.0), &format!("{lo:.3} s"));
                entry(&mut out, 1, &ramp(0.5), &format!("{:.3} s", lo + 0.5 * span));
                entry(&mut out, 2, &ramp(1.0), &format!("{hi:.3} s"));
            }
            entry(&mut out, 3, INF_FILL, "infinite");
            entry(&mut out, 4, OBSTACLE_FILL, "obstacle");
        }
    }
    out.push_str("</svg>\n");
    out
}

fn scene_open(env: &Environment, scale: f64) -> (String, View) {
    let b = env.bounds();
    let (w, h) = (round3(b.width() * scale), round3(b.height() * scale));
    let view = View { min: b.min, height: h, scale };
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff" stroke="#000"/>"##);
    for o in env.obstacles() {
        let pts: Vec<String> = o.vertices().iter().map(|v| format!("{},{}", view.x(v.x), view.y(v.y))).collect();
        let _ = writeln!(out, r#"<polygon points="{}" fill="{OBSTACLE_FILL}"/>"#, pts.join(" "));
    }
    (out, view)
}

fn polyline(out: &mut String, view: &View, pts: impl Iterator<Item = Vec2>, stroke: &str) {
    let pts: Vec<String> = pts.map(|p| format!("{},{}", view.x(p.x), view.y(p.y))).collect();
    let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="1.5"/>"#, pts.join(" "));
}

/// Scene with both trajectories; dots mark the final positions.
pub fn trajectory_svg(env: &Environment, steps: &[LogStep], scale: f64) -> String {
    let (mut out, view) = scene_open(env, scale);
    polyline(&mut out, &view, steps.iter().map(|s| s.pursuer), PURSUER_FILL);
    polyline(&mut out, &view, steps.iter().map(|s| s.evader), EVADER_FILL);
    if let Some(last) = steps.last() {
        if !last.los {
            let _ = writeln!(
                out,
                r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#000" stroke-dasharray="4 3"/>"##,
                view.x(last.pursuer.x),
                view.y(last.pursuer.y),
                view.x(last.evader.x),
                view.y(last.evader.y)
            );
        }
        let markers = [Marker { role: Role::Pursuer, at: last.pursuer }, Marker { role: Role::Evader, at: last.evader }];
        markers_svg(&mut out, &view, &markers, 5.0);
    }
    out.push_str("</svg>\n");
    out
}

/// Scene with unit arrows scaled to `arrow` metres.
pub fn field_svg(env: &Environment, arrows: &[Arrow], arrow: f64, markers: &[Marker], scale: f64) -> String {
    let (mut out, view) = scene_open(env, scale);
    for a in arrows {
        let tip = a.at + a.direction * arrow;
        let back = a.direction * (-0.3 * arrow);
        let (l, r) = (tip + back + back.perp() * 0.5, tip + back - back.perp() * 0.5);
        let _ = writeln!(
            out,
            r##"<path d="M{},{} L{},{} M{},{} L{},{} L{},{}" fill="none" stroke="#333" stroke-width="1"/>"##,
            view.x(a.at.x),
            view.y(a.at.y),
            view.x(tip.x),
            view.y(tip.y),
            view.x(l.x),
            view.y(l.y),
            view.x(tip.x),
            view.y(tip.y),
            view.x(r.x),
            view.y(r.y)
        );
    }
    markers_svg(&mut out, &view, markers, 5.0);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two(kind: PartitionKind, values: Vec<f64>) -> GridPartition {
        GridPartition { spec: GridSpec { origin: Vec2::new(0.0, 0.0), cell_size: 1.0, nx: 2, ny: 2 }, kind, values }
    }

    #[test]
    fn time_csv_layout() {
        let p = two_by_two(PartitionKind::TrackingTime, vec![0.5, f64::INFINITY, 1.25, 0.1 + 0.2]);
        let mut buf = Vec::new();
        write_partition_csv(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "# kind,nx,ny,ox,oy,cell\n# time,2,2,0,0,1\n0.5\ninf\n1.25\n0.30000000000000004\n");
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data.len(), 4);
        assert_eq!(data.iter().filter(|&&l| l == "inf").count(), 1);
        let back = read_partition_csv(text.as_bytes()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn obstacle_times_round_trip() {
        let p = two_by_two(PartitionKind::TrackingTime, vec![f64::NAN, 0.0, 2.0, 3.0]);
        let mut buf = Vec::new();
        write_partition_csv(&p, &mut buf).unwrap();
        let back = read_partition_csv(buf.as_slice()).unwrap();
        assert!(back.values[0].is_nan());
        assert_eq!(&back.values[1..], &p.values[1..]);
    }

    #[test]
    fn strategy_csv_holds_codes() {
        let p = two_by_two(PartitionKind::StrategyClass, vec![1.0, 3.0, 4.0, 6.0]);
        let mut buf = Vec::new();
        write_partition_csv(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        for l in text.lines().skip(2) {
            let c: u8 = l.parse().unwrap();
            assert!((1..=6).contains(&c));
        }
        assert_eq!(read_partition_csv(text.as_bytes()).unwrap(), p);
        let broken = text.replace("\n6\n", "\n7\n");
        assert!(read_partition_csv(broken.as_bytes()).is_err());
    }

    #[test]
    fn svg_is_deterministic() {
        let p = two_by_two(PartitionKind::TrackingTime, vec![0.5, f64::INFINITY, f64::NAN, 2.0]);
        let m = [Marker { role: Role::Evader, at: Vec2::new(1.0, 1.0) }];
        let a = partition_svg(&p, &m);
        assert_eq!(a, partition_svg(&p, &m));
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
        assert!(a.contains(EVADER_FILL) && a.contains(INF_FILL) && a.contains(OBSTACLE_FILL));
    }

    #[test]
    fn trajectory_lines_round_trip() {
        let steps = vec![
            LogStep {
                t: 0.0,
                pursuer: Vec2::new(0.1, -2.0),
                evader: Vec2::new(1.0 / 3.0, 4.0),
                los: true,
                active_corner: Some(VertexId::new(1, 2)),
                weights: vec![Contributor {
                    corner: VertexId::new(1, 2),
                    weight: 0.7,
                    time: pursuit_core::corner_game::TrackingTime::INFINITE,
                    distance: 2.5,
                }],
            },
            LogStep {
                t: 1.0 / 120.0,
                pursuer: Vec2::new(0.2, -2.0),
                evader: Vec2::new(0.3, 4.0),
                los: false,
                active_corner: None,
                weights: vec![],
            },
        ];
        let mut buf = Vec::new();
        write_trajectory_jsonl(&steps, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        for key in ["t", "px", "py", "ex", "ey", "los", "corner", "weights"] {
            assert!(first.get(key).is_some(), "{key}");
        }
        assert_eq!(read_trajectory_jsonl(buf.as_slice()).unwrap(), steps);
    }
}
