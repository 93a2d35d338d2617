//! Command-line interface.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rbswipt_core::search::Sense;
use rbswipt_core::sweep::{reduce_max, Axis, Optimum, Spacing, SweepResult, SweepSpec};
use rbswipt_core::{OperatingPoint, Parameter, Quantity};
use thiserror::Error;

use crate::config::{self, Config, ConfigError};
use crate::curve::{Cell, Column, CurveError, CurveFile};
use crate::figures::{self, FigureId};
use crate::presets;
use crate::runner::{find_optimum_parallel, run_sweep_parallel};
use crate::units::{self, format_number, format_quantity};

/// Environment variable overriding the output directory.
pub const OUT_DIR_ENV: &str = "RBSWIPT_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "rbswipt-out";

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitStatus {
    Success = 0,
    Io = 1,
    Usage = 2,
    Config = 3,
    Unstable = 4,
    OptimizationFailed = 5,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{source_name}: {error}")]
    Config { source_name: String, error: ConfigError },
    #[error("{0}")]
    Unstable(rbswipt_core::Error),
    #[error("{0}")]
    Model(rbswipt_core::Error),
    #[error("optimization failed: no evaluable point in the search grid")]
    OptimizationFailed,
    #[error("{path}: {error}")]
    Io { path: PathBuf, error: io::Error },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Usage(_) => ExitStatus::Usage,
            CliError::Config { .. } | CliError::Model(_) => ExitStatus::Config,
            CliError::Unstable(_) => ExitStatus::Unstable,
            CliError::OptimizationFailed => ExitStatus::OptimizationFailed,
            CliError::Io { .. } | CliError::Curve(_) => ExitStatus::Io,
        }
    }
}

impl From<rbswipt_core::Error> for CliError {
    fn from(e: rbswipt_core::Error) -> Self {
        match e {
            e if e.is_unstable() => CliError::Unstable(e),
            rbswipt_core::Error::OptimizationFailed => CliError::OptimizationFailed,
            e => CliError::Model(e),
        }
    }
}

impl From<figures::FigureError> for CliError {
    fn from(e: figures::FigureError) -> Self {
        match e {
            figures::FigureError::Config(error) => CliError::Config {
                source_name: "scenario".into(),
                error,
            },
            figures::FigureError::Model(e) => e.into(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rbswipt", version, about = "Resonant-beam SWIPT link model: evaluate, sweep, optimize, reproduce figures")]
pub struct Cli {
    /// Output directory for reports and curve files.
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = DEFAULT_OUT_DIR)]
    pub out: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the link at one operating point.
    Evaluate {
        #[command(flatten)]
        model: ModelArgs,
        /// Electrical input power, e.g. `150W`.
        #[arg(long)]
        p_in: Option<String>,
        /// Report file name (without extension).
        #[arg(long, default_value = "operating-point")]
        name: String,
    },
    /// Sweep one or two parameters over a grid.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Quantities to write (default: all).
        #[arg(long = "quantity", short = 'q')]
        quantities: Vec<String>,
        /// Reduce to the maximum of this quantity over the `--over` axis.
        #[arg(long, requires = "over")]
        reduce_max: Option<String>,
        /// Axis parameter to maximise over.
        #[arg(long, requires = "reduce_max")]
        over: Option<String>,
        /// Output file name (without extension).
        #[arg(long, default_value = "sweep")]
        name: String,
    },
    /// Grid search then golden-section refinement for an optimum.
    Optimize {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Quantity to optimise.
        #[arg(long)]
        objective: String,
        /// Minimise instead of maximise.
        #[arg(long)]
        minimize: bool,
        /// Report file name (without extension).
        #[arg(long, default_value = "optimum")]
        name: String,
    },
    /// Regenerate the curve data of a figure (5a, 5b, 6, 7, 8, 9, 10 or all).
    ReproduceFigure {
        figure: String,
        /// Parameter overrides on top of the figure's scenario, `key=value`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long)]
        workers: Option<usize>,
        /// Grid points per axis.
        #[arg(long)]
        points: Option<usize>,
    },
    /// List built-in presets, or print one.
    Presets { name: Option<String> },
    /// Check configuration files (default: every built-in preset).
    Validate { files: Vec<PathBuf> },
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Built-in preset to start from.
    #[arg(long, conflicts_with = "config")]
    pub preset: Option<String>,
    /// Configuration file to start from.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Parameter override, `key=value` with unit, e.g. `--set l=0.1um`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Worker threads for sweeps (0 = one per CPU).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Sweep axis `PARAM=LO:HI[:COUNT][:log]`, e.g. `d3=2m:10m:121`.
    #[arg(long = "axis", required = true, value_name = "SPEC")]
    pub axes: Vec<String>,
}

fn split_assignment(text: &str) -> Result<(String, String), CliError> {
    text.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| CliError::Usage(format!("`{text}`: expected KEY=VALUE")))
}

fn config_error(source_name: impl Into<String>) -> impl FnOnce(ConfigError) -> CliError {
    let source_name = source_name.into();
    move |error| CliError::Config { source_name, error }
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |error| CliError::Io {
        path: path.to_path_buf(),
        error,
    }
}

fn with_overrides(base: Config, set: &[String], workers: Option<usize>, points: Option<usize>) -> Result<Config, CliError> {
    let mut pairs = set.iter().map(|s| split_assignment(s)).collect::<Result<Vec<_>, _>>()?;
    if let Some(w) = workers {
        pairs.push(("workers".into(), w.to_string()));
    }
    if let Some(p) = points {
        pairs.push(("points".into(), p.to_string()));
    }
    config::apply_overrides(base, &pairs).map_err(config_error("command line"))
}

impl ModelArgs {
    fn load(&self, extra: &[(String, String)]) -> Result<Config, CliError> {
        let base = match (&self.config, &self.preset) {
            (Some(path), _) => {
                let text = fs::read_to_string(path).map_err(io_error(path))?;
                config::parse_config(&text).map_err(config_error(path.display().to_string()))?
            }
            (None, Some(name)) => config::load_preset(name).map_err(config_error("preset"))?,
            (None, None) => config::load_preset(config::DEFAULT_PRESET).map_err(config_error("preset"))?,
        };
        let mut set = self.set.clone();
        set.extend(extra.iter().map(|(k, v)| format!("{k}={v}")));
        with_overrides(base, &set, self.workers, None)
    }
}

/// Parses `PARAM=LO:HI[:COUNT][:log]`.
pub fn parse_axis(text: &str, default_points: usize) -> Result<Axis, CliError> {
    let (key, range) = split_assignment(text)?;
    let parameter: Parameter = key
        .parse()
        .map_err(|_| CliError::Usage(format!("`{key}` is not a model parameter")))?;
    let dim = config::dimension(parameter);
    let parts: Vec<&str> = range.split(':').map(str::trim).collect();
    if !(2..=4).contains(&parts.len()) {
        return Err(CliError::Usage(format!("axis `{text}`: expected PARAM=LO:HI[:COUNT][:log]")));
    }
    let bound = |s: &str| {
        units::parse_quantity(s, dim).map_err(|e| CliError::Usage(format!("axis `{text}`: {e}")))
    };
    let (lo, hi) = (bound(parts[0])?, bound(parts[1])?);
    let mut count = default_points;
    let mut spacing = Spacing::Linear;
    for extra in &parts[2..] {
        match *extra {
            "log" => spacing = Spacing::Log,
            "lin" | "linear" => spacing = Spacing::Linear,
            n => {
                count = n
                    .parse()
                    .map_err(|_| CliError::Usage(format!("axis `{text}`: `{n}` is not a point count")))?
            }
        }
    }
    Axis::new(parameter, lo, hi, count, spacing).map_err(|e| CliError::Usage(format!("axis `{text}`: {e}")))
}

fn parse_quantity_name(name: &str) -> Result<Quantity, CliError> {
    name.parse()
        .map_err(|_| CliError::Usage(format!("`{name}` is not a model quantity")))
}

fn build_spec(name: &str, grid: &GridArgs, config: &Config) -> Result<SweepSpec, CliError> {
    if grid.axes.len() > 2 {
        return Err(CliError::Usage("at most two --axis options".into()));
    }
    let axes = grid
        .axes
        .iter()
        .map(|a| parse_axis(a, config.sweep.points))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepSpec::new(name, axes)?)
}

fn write_file(dir: &Path, file: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(io_error(dir))?;
    let path = dir.join(file);
    fs::write(&path, contents).map_err(io_error(&path))?;
    Ok(path)
}

fn embed_config(out: &mut String, config: &Config) {
    let _ = writeln!(out, "# config:");
    for line in config.serialize_model().lines() {
        let _ = writeln!(out, "# | {line}");
    }
}

fn quantity_line(q: Quantity, value: f64) -> String {
    match q.unit() {
        "1" => format!("{} = {}", q.name(), format_number(value)),
        unit => format!("{} = {} {unit}", q.name(), format_number(value)),
    }
}

/// Human- and machine-readable report of one operating point.
pub fn operating_point_report(config: &Config, point: &OperatingPoint, status: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# rbswipt operating point");
    let _ = writeln!(out, "# scenario: {}", config.preset);
    let _ = writeln!(out, "# config-digest: {}", config.digest());
    let _ = writeln!(out, "status = {status}");
    let _ = writeln!(out, "p_in = {}", format_quantity(point.p_in, units::Dimension::Power));
    for q in Quantity::ALL {
        let _ = writeln!(out, "{}", quantity_line(*q, point.get(*q)));
    }
    embed_config(&mut out, config);
    out
}

fn status_of(point: &OperatingPoint) -> &'static str {
    if point.degenerate_mode {
        "degenerate"
    } else if point.is_sub_threshold() {
        "sub-threshold"
    } else {
        "ok"
    }
}

fn evaluate(out_dir: &Path, model: &ModelArgs, p_in: Option<&str>, name: &str) -> Result<(), CliError> {
    let extra: Vec<(String, String)> = p_in.map(|p| ("p_in".to_string(), p.to_string())).into_iter().collect();
    let config = model.load(&extra)?;
    let point = config.model.evaluate()?;
    let report = operating_point_report(&config, &point, status_of(&point));
    print!("{report}");
    let path = write_file(out_dir, &format!("{name}.txt"), &report)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn parameter_unit(p: Parameter) -> &'static str {
    match config::dimension(p).si_symbol() {
        "" => "1",
        s => s,
    }
}

fn sweep_curve(config: &Config, sweep: &SweepResult, quantities: &[Quantity]) -> CurveFile {
    let mut columns: Vec<Column> = sweep
        .axes
        .iter()
        .map(|a| Column::new(a.parameter.key(), parameter_unit(a.parameter)))
        .collect();
    columns.extend(quantities.iter().map(|q| Column::new(q.name(), q.unit())));
    columns.push(Column::text("status"));
    let rows = sweep
        .points
        .iter()
        .map(|p| {
            let mut row: Vec<Cell> = p.coords.iter().map(|c| Cell::Number(*c)).collect();
            row.extend(quantities.iter().map(|q| Cell::from(p.value(*q))));
            row.push(Cell::Text(p.status.as_str().into()));
            row
        })
        .collect();
    CurveFile {
        scenario: config.preset.clone(),
        config_digest: config.digest(),
        metadata: sweep_metadata(sweep),
        config: config.serialize_model(),
        columns,
        rows,
    }
}

fn sweep_metadata(sweep: &SweepResult) -> Vec<(String, String)> {
    sweep
        .axes
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let spacing = match a.spacing {
                Spacing::Linear => "linear",
                Spacing::Log => "log",
            };
            (
                format!("axis{i}"),
                format!(
                    "{} = {}:{}:{} {spacing} [{}]",
                    a.parameter.path(),
                    format_number(a.lo),
                    format_number(a.hi),
                    a.count,
                    parameter_unit(a.parameter)
                ),
            )
        })
        .collect()
}

fn reduced_curve(config: &Config, sweep: &SweepResult, q: Quantity, over: usize) -> Result<CurveFile, CliError> {
    let curve = reduce_max(sweep, q, over)?;
    let reduced = sweep.axes[over].parameter;
    let mut columns = Vec::new();
    let remaining = (sweep.axes.len() == 2).then(|| sweep.axes[1 - over].parameter);
    if let Some(p) = remaining {
        columns.push(Column::new(p.key(), parameter_unit(p)));
    }
    columns.push(Column::new(format!("{}_max", q.name()), q.unit()));
    columns.push(Column::new(format!("{}_at_max", reduced.key()), parameter_unit(reduced)));
    columns.push(Column::text("status"));
    let rows = (0..curve.y.len())
        .map(|j| {
            let mut row = Vec::new();
            if remaining.is_some() {
                row.push(Cell::Number(curve.x[j]));
            }
            row.push(Cell::from(curve.y[j]));
            row.push(Cell::from(curve.argmax[j]));
            row.push(Cell::Text(if curve.y[j].is_some() { "ok" } else { "unstable" }.into()));
            row
        })
        .collect();
    let mut metadata = sweep_metadata(sweep);
    metadata.push(("reduction".into(), format!("maximum of {} over {}", q.name(), reduced.path())));
    Ok(CurveFile {
        scenario: config.preset.clone(),
        config_digest: config.digest(),
        metadata,
        config: config.serialize_model(),
        columns,
        rows,
    })
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    out_dir: &Path,
    model: &ModelArgs,
    grid: &GridArgs,
    quantities: &[String],
    reduce: Option<&str>,
    over: Option<&str>,
    name: &str,
) -> Result<(), CliError> {
    let config = model.load(&[])?;
    let spec = build_spec(name, grid, &config)?;
    config.model.validate()?;
    let quantities = if quantities.is_empty() {
        Quantity::ALL.to_vec()
    } else {
        quantities.iter().map(|q| parse_quantity_name(q)).collect::<Result<_, _>>()?
    };
    let result = run_sweep_parallel(&config.model, &spec, config.sweep.workers)?;
    if result.all_unstable() {
        eprintln!("warning: every grid point is unstable");
    }
    let curve = match (reduce, over) {
        (Some(q), Some(axis)) => {
            let q = parse_quantity_name(q)?;
            let p: Parameter = axis
                .parse()
                .map_err(|_| CliError::Usage(format!("`{axis}` is not a model parameter")))?;
            let over = spec
                .axes
                .iter()
                .position(|a| a.parameter == p)
                .ok_or_else(|| CliError::Usage(format!("`{axis}` is not a sweep axis")))?;
            reduced_curve(&config, &result, q, over)?
        }
        _ => sweep_curve(&config, &result, &quantities),
    };
    let path = write_file(out_dir, &format!("{name}.csv"), &curve.to_csv_string()?)?;
    println!(
        "{} points ({} evaluable) -> {}",
        result.points.len(),
        result.stable_count(),
        path.display()
    );
    Ok(())
}

/// Report of an optimisation result.
pub fn optimum_report(config: &Config, objective: Quantity, sense: Sense, optimum: &Optimum) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# rbswipt optimum");
    let _ = writeln!(out, "# scenario: {}", config.preset);
    let _ = writeln!(out, "# config-digest: {}", config.digest());
    let goal = match sense {
        Sense::Maximize => "maximize",
        Sense::Minimize => "minimize",
    };
    let _ = writeln!(out, "objective = {goal} {}", objective.name());
    let _ = writeln!(out, "refined = {}", optimum.refined);
    for (p, v) in &optimum.parameters {
        let _ = writeln!(out, "{} = {}", p.path(), format_quantity(*v, config::dimension(*p)));
    }
    let _ = writeln!(out, "{}", quantity_line(objective, optimum.value));
    let _ = writeln!(out, "status = {}", status_of(&optimum.point));
    for q in Quantity::ALL {
        let _ = writeln!(out, "{}", quantity_line(*q, optimum.point.get(*q)));
    }
    embed_config(&mut out, config);
    out
}

fn optimize(
    out_dir: &Path,
    model: &ModelArgs,
    grid: &GridArgs,
    objective: &str,
    minimize: bool,
    name: &str,
) -> Result<(), CliError> {
    let config = model.load(&[])?;
    let spec = build_spec(name, grid, &config)?;
    config.model.validate()?;
    let objective = parse_quantity_name(objective)?;
    let sense = if minimize { Sense::Minimize } else { Sense::Maximize };
    let optimum = find_optimum_parallel(&config.model, &spec, objective, sense, config.sweep.workers)?;
    let report = optimum_report(&config, objective, sense, &optimum);
    print!("{report}");
    let path = write_file(out_dir, &format!("{name}.txt"), &report)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn reproduce(
    out_dir: &Path,
    figure: &str,
    set: &[String],
    workers: Option<usize>,
    points: Option<usize>,
) -> Result<(), CliError> {
    let ids: Vec<FigureId> = if figure.eq_ignore_ascii_case("all") {
        FigureId::ALL.to_vec()
    } else {
        vec![figure.parse().map_err(|e: figures::UnknownFigure| CliError::Usage(e.to_string()))?]
    };
    for id in ids {
        let base = config::load_preset(&id.preset()).map_err(config_error(id.preset()))?;
        let config = with_overrides(base, set, workers, points)?;
        let fig = figures::reproduce_figure_with(id, &config)?;
        let stem = id.file_stem();
        let csv = write_file(out_dir, &format!("{stem}.csv"), &fig.curve.to_csv_string()?)?;
        let plot = write_file(out_dir, &format!("{stem}.plot.json"), &fig.plot_json())?;
        println!("figure {id}: {} and {}", csv.display(), plot.display());
    }
    Ok(())
}

fn list_presets(name: Option<&str>) -> Result<(), CliError> {
    match name {
        Some(name) => {
            let text = presets::source(name).ok_or_else(|| CliError::Config {
                source_name: "preset".into(),
                error: config::load_preset(name).expect_err("unknown preset"),
            })?;
            print!("{text}");
        }
        None => {
            for (name, text) in presets::BUILTIN {
                println!("{name:<12} {}", presets::summary(text));
            }
        }
    }
    Ok(())
}

fn validate(files: &[PathBuf]) -> Result<(), CliError> {
    let mut first_error = None;
    let mut check = |label: String, result: Result<Config, CliError>| match result {
        Ok(c) => println!("ok      {label}  {}", c.digest()),
        Err(e) => {
            println!("invalid {label}: {e}");
            first_error.get_or_insert(e);
        }
    };
    if files.is_empty() {
        for name in presets::names() {
            check(format!("preset {name}"), config::load_preset(name).map_err(config_error(name)));
        }
    }
    for path in files {
        let result = fs::read_to_string(path)
            .map_err(io_error(path))
            .and_then(|text| config::parse_config(&text).map_err(config_error(path.display().to_string())));
        check(path.display().to_string(), result);
    }
    first_error.map_or(Ok(()), Err)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let out = cli.out.as_path();
    match &cli.command {
        Command::Evaluate { model, p_in, name } => evaluate(out, model, p_in.as_deref(), name),
        Command::Sweep {
            model,
            grid,
            quantities,
            reduce_max,
            over,
            name,
        } => sweep(out, model, grid, quantities, reduce_max.as_deref(), over.as_deref(), name),
        Command::Optimize {
            model,
            grid,
            objective,
            minimize,
            name,
        } => optimize(out, model, grid, objective, *minimize, name),
        Command::ReproduceFigure {
            figure,
            set,
            workers,
            points,
        } => reproduce(out, figure, set, *workers, *points),
        Command::Presets { name } => list_presets(name.as_deref()),
        Command::Validate { files } => validate(files),
    }
}

/// Parses `argv`, runs the command and returns the process exit status.
pub fn run_cli<I, T>(argv: I) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitStatus::Usage } else { ExitStatus::Success };
        }
    };
    match run(cli) {
        Ok(()) => ExitStatus::Success,
        Err(e) => {
            eprintln!("error: {e}");
            e.status()
        }
    }
}
