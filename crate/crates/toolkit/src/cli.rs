//! The `pursuit` command line.
//!
//! Exit codes: 0 success, 1 usage/validation/I-O error, 2 solver error.

use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use pursuit_core::corner_game::{solve_in_world, CornerSolution, StrategyClass};
use pursuit_core::geometry::{Corner, Vec2};
use pursuit_core::partitions::{corner_vector_field, evader_partition, pursuer_partition, PartitionKind};
use pursuit_core::pursuit_field::{pursuit_vector, FieldConfig, WeightScheme};
use pursuit_core::sim_engine::{run, PursuerPolicy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::export::{
    export_partition, field_svg, partition_svg, trajectory_svg, write_field_csv, write_file, write_partition_csv,
    write_samples_csv, write_trajectory_jsonl, Arrow, ExportError, Format, Marker, Role,
};
use crate::scenario::{load_scenario, Scenario, ScenarioError};

#[derive(Debug, Parser)]
#[command(name = "pursuit", version, about = "Corner tracking games: solve, sweep, simulate, serve")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the game around the scenario's corner and print it as JSON.
    SolveCorner {
        #[arg(long)]
        config: PathBuf,
    },
    /// Tracking-time or strategy grid around the scenario's corner.
    Partition {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Strategy)]
        kind: KindArg,
        /// Which player stays fixed: `evader` sweeps pursuer starts.
        #[arg(long, value_enum, default_value_t = PlayerArg::Evader)]
        player: PlayerArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Corner vector field, or pursuit-field samples with `--samples`.
    Field {
        #[arg(long)]
        config: PathBuf,
        /// Random pursuer positions for the general pursuit field.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum)]
        policy: Option<PolicyArg>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the scenario and write the trajectory.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        policy: Option<PolicyArg>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        max_time: Option<f64>,
        #[arg(long, value_enum, default_value_t = FormatArg::Jsonl)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Start the live arena server.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
    },
    /// Load a scenario and print it with every default filled in.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Time,
    Strategy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlayerArg {
    Evader,
    Pursuer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Svg,
    Jsonl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Distance,
    InverseTime,
}

impl From<PolicyArg> for WeightScheme {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Distance => WeightScheme::DistanceArgmin,
            PolicyArg::InverseTime => WeightScheme::InverseTime,
        }
    }
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Svg => Format::Svg,
            FormatArg::Jsonl => Format::Jsonl,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error("{0}")]
    Usage(String),
    #[error("solver error: {0}")]
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(_) => 2,
            _ => 1,
        }
    }
}

fn solver(e: impl ToString) -> CliError {
    CliError::Solver(e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, f)?,
        None => {
            let mut buf = Vec::new();
            f(&mut buf).map_err(ExportError::from)?;
            out.write_all(&buf).map_err(ExportError::from)?;
        }
    }
    Ok(())
}

fn markers(s: &Scenario) -> [Marker; 2] {
    [Marker { role: Role::Pursuer, at: s.pursuer.position }, Marker { role: Role::Evader, at: s.evader.position }]
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::SolveCorner { config } => {
            let s = load_scenario(&config)?;
            let corner = Corner::from_env(s.env(), s.require_corner()?).map_err(solver)?;
            let sol = solve_in_world(&corner, s.pursuer.position, s.evader.position, s.speeds()).map_err(solver)?;
            let text = serde_json::to_string(&solution_json(&sol)).expect("json");
            writeln!(out, "{text}").map_err(ExportError::from)?;
        }
        Command::Partition { config, kind, player, format, out: path } => {
            let s = load_scenario(&config)?;
            let corner = s.require_corner()?;
            let kind = match kind {
                KindArg::Time => PartitionKind::TrackingTime,
                KindArg::Strategy => PartitionKind::StrategyClass,
            };
            let p = match player {
                PlayerArg::Evader => evader_partition(s.env(), corner, s.evader.position, s.speeds(), s.grid, kind),
                PlayerArg::Pursuer => pursuer_partition(s.env(), corner, s.pursuer.position, s.speeds(), s.grid, kind),
            }
            .map_err(solver)?;
            let fixed = match player {
                PlayerArg::Evader => [markers(&s)[1]],
                PlayerArg::Pursuer => [markers(&s)[0]],
            };
            match (format, path) {
                (FormatArg::Jsonl, _) => return Err(CliError::Usage("partitions export as csv or svg".into())),
                (f, Some(path)) => export_partition(&p, &path, f.into(), &fixed)?,
                (FormatArg::Svg, None) => emit(out, None, |b| b.write_all(partition_svg(&p, &fixed).as_bytes()))?,
                (FormatArg::Csv, None) => emit(out, None, |b| write_partition_csv(&p, b))?,
            }
        }
        Command::Field { config, samples, policy, seed, format, out: path } => {
            let s = load_scenario(&config)?;
            if format == FormatArg::Jsonl {
                return Err(CliError::Usage("fields export as csv or svg".into()));
            }
            let scale = s.output.svg_scale;
            match (samples, s.corner) {
                (None, Some(corner)) => {
                    let field = corner_vector_field(s.env(), corner, s.evader.position, s.speeds(), s.grid)
                        .map_err(solver)?;
                    if format == FormatArg::Svg {
                        let spec = field.spec;
                        let arrows: Vec<Arrow> = (0..spec.len())
                            .filter_map(|k| {
                                let (i, j) = spec.cell_of(k);
                                field.vectors[k].map(|d| Arrow { at: spec.center(i, j), direction: d })
                            })
                            .collect();
                        let len = 0.8 * spec.cell_size;
                        let svg = field_svg(s.env(), &arrows, len, &markers(&s)[1..], scale);
                        emit(out, path.as_deref(), |b| b.write_all(svg.as_bytes()))?;
                    } else {
                        emit(out, path.as_deref(), |b| write_field_csv(&field, b))?;
                    }
                }
                (n, _) => {
                    let scheme = policy.map(WeightScheme::from);
                    let arrows = sample_field(&s, n.unwrap_or(200), seed.unwrap_or(s.seed), scheme)?;
                    if format == FormatArg::Svg {
                        let len = 0.03 * s.bounds.width().max(s.bounds.height());
                        let svg = field_svg(s.env(), &arrows, len, &markers(&s)[1..], scale);
                        emit(out, path.as_deref(), |b| b.write_all(svg.as_bytes()))?;
                    } else {
                        emit(out, path.as_deref(), |b| write_samples_csv(&arrows, b))?;
                    }
                }
            }
        }
        Command::Simulate { config, policy, dt, max_time, format, out: path } => {
            let s = load_scenario(&config)?;
            let pp = match (policy, s.pursuer_policy) {
                (None, pp) => pp,
                (Some(p), PursuerPolicy::PursuitField { augmentation, order, .. }) => {
                    PursuerPolicy::PursuitField { scheme: p.into(), augmentation, order }
                }
                (Some(p), PursuerPolicy::FixedCornerOptimal { .. }) => PursuerPolicy::field(p.into()),
            };
            let log = run(
                s.env(),
                s.pursuer.state(),
                s.evader.state(),
                pp,
                s.evader_policy.clone(),
                dt.unwrap_or(s.dt),
                max_time.unwrap_or(s.max_time),
            )
            .map_err(solver)?;
            log::info!("simulation ended: {:?} after {} steps", log.outcome, log.steps.len());
            match format {
                FormatArg::Svg => {
                    let svg = trajectory_svg(s.env(), &log.steps, s.output.svg_scale);
                    emit(out, path.as_deref(), |b| b.write_all(svg.as_bytes()))?;
                }
                FormatArg::Jsonl => emit(out, path.as_deref(), |b| write_trajectory_jsonl(&log.steps, b))?,
                FormatArg::Csv => return Err(CliError::Usage("trajectories export as jsonl or svg".into())),
            }
        }
        Command::Serve { addr } => {
            let rt = tokio::runtime::Runtime::new().map_err(ExportError::from)?;
            rt.block_on(crate::arena::serve(addr, None)).map_err(ExportError::from)?;
        }
        Command::Validate { config } => {
            let s = load_scenario(&config)?;
            writeln!(out, "{}", s.to_json()).map_err(ExportError::from)?;
        }
    }
    Ok(())
}

/// Pursuit-field directions at `n` random free pursuer positions visible
/// to the evader. Points where the field is undefined are skipped.
pub fn sample_field(s: &Scenario, n: usize, seed: u64, scheme: Option<WeightScheme>) -> Result<Vec<Arrow>, CliError> {
    let cfg = match (scheme, s.pursuer_policy) {
        (Some(sc), PursuerPolicy::PursuitField { augmentation, order, .. }) => {
            FieldConfig { scheme: sc, augmentation_weight: augmentation, order }
        }
        (Some(sc), _) => FieldConfig::with_scheme(sc),
        (None, PursuerPolicy::PursuitField { scheme, augmentation, order }) => {
            FieldConfig { scheme, augmentation_weight: augmentation, order }
        }
        (None, _) => FieldConfig::default(),
    };
    let env = s.env();
    let b = s.bounds;
    let e = s.evader.position;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arrows = Vec::with_capacity(n);
    let mut tries = 0usize;
    while arrows.len() < n && tries < n.saturating_mul(50).max(1000) {
        tries += 1;
        let q = Vec2::new(rng.random_range(b.min.x..b.max.x), rng.random_range(b.min.y..b.max.y));
        if !env.is_free(q) || q == e {
            continue;
        }
        match pursuit_vector(env, q, e, s.speeds(), &cfg) {
            Ok(v) => arrows.push(Arrow { at: q, direction: v.direction }),
            Err(err) => log::debug!("no field at {q:?}: {err}"),
        }
    }
    Ok(arrows)
}

fn time_json(t: f64) -> Value {
    if t.is_infinite() {
        json!("inf")
    } else {
        json!(t)
    }
}

/// Everything `solve-corner` prints. Times in seconds, angles in radians
/// in the corner's canonical frame, `direction` in world coordinates.
pub fn solution_json(sol: &CornerSolution) -> Value {
    let o = &sol.outcome;
    let mut v = json!({
        "class": o.strategy.name(),
        "code": o.strategy.code(),
        "tracking_time": time_json(o.tracking_time.as_f64()),
        "direction": sol.direction().map(|d| [d.x, d.y]),
    });
    let m = v.as_object_mut().expect("object");
    let cfg = sol.config.as_ref();
    match (o.strategy, cfg) {
        (StrategyClass::Class1, Some(cfg)) => {
            if let Some(c1) = &o.class1 {
                let (collinear, rate) = c1.terminal_residuals(cfg);
                m.insert("t_f".into(), json!(c1.t_f));
                m.insert("heading".into(), json!(c1.heading));
                m.insert("residuals".into(), json!({ "collinearity": collinear, "rate_gap": rate }));
            }
        }
        (StrategyClass::Class2, Some(cfg)) => {
            if let Some(c2) = &o.class2 {
                m.insert("t1".into(), json!(c2.t1));
                m.insert("t2".into(), json!(c2.t2));
                m.insert("t_f".into(), json!(c2.total_time()));
                m.insert("heading".into(), json!(c2.stage1_heading));
                m.insert(
                    "residuals".into(),
                    json!({
                        "law_of_sines": c2.stage1.law_of_sines_residual(cfg),
                        "junction_rate": c2.junction_rate_gap(cfg),
                        "terminal_speed": c2.stage2.terminal_speed_gap(cfg.v_p_max),
                    }),
                );
            }
        }
        _ => {
            if let Some(d) = o.trajectory.initial_direction() {
                m.insert("heading".into(), json!(d.angle()));
            }
        }
    }
    v
}
