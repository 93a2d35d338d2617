//! Figure reproduction: each figure is a scenario preset plus a sweep plan,
//! emitted as a curve file and a declarative plot description.

use std::fmt;
use std::str::FromStr;

use rbswipt_core::sweep::{reduce_max, Axis, Spacing, SweepResult, SweepSpec};
use rbswipt_core::{Parameter, Quantity};
use serde::{Deserialize, Serialize};

use crate::config::{self, Config};
use crate::curve::{Cell, Column, CurveFile};
use crate::runner::run_sweep_parallel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig5a,
    Fig5b,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::Fig5a,
        FigureId::Fig5b,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig9,
        FigureId::Fig10,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig5a => "5a",
            FigureId::Fig5b => "5b",
            FigureId::Fig6 => "6",
            FigureId::Fig7 => "7",
            FigureId::Fig8 => "8",
            FigureId::Fig9 => "9",
            FigureId::Fig10 => "10",
        }
    }

    /// Scenario preset holding the figure's fixed parameters.
    pub fn preset(self) -> String {
        format!("fig{}", self.as_str())
    }

    /// Base name of the emitted files.
    pub fn file_stem(self) -> String {
        self.preset()
    }

    fn plan(self) -> Plan {
        use Parameter as P;
        use Quantity as Q;
        let d3_range = Reduce {
            over: P::D3,
            lo: 2.0,
            hi: 10.0,
        };
        let p_in_family = Some(Family {
            parameter: P::PIn,
            values: &[50.0, 100.0, 150.0],
            assumed: false,
        });
        match self {
            FigureId::Fig5a => Plan {
                title: "Maximum beam radius on the gain versus TIM compression",
                x: (P::Compression, 1.0, 14.0),
                family: Some(Family {
                    parameter: P::Fr2,
                    values: &[12.0, 15.0, 20.0],
                    assumed: true,
                }),
                reduce: Some(d3_range),
                quantities: &[Q::SpotRadius],
            },
            FigureId::Fig5b => Plan {
                title: "Beam radius on the gain versus transmission distance",
                x: (P::D3, 2.0, 10.0),
                family: Some(Family {
                    parameter: P::Compression,
                    values: &[1.0, 5.0, 10.0, 12.0],
                    assumed: false,
                }),
                reduce: None,
                quantities: &[Q::SpotRadius],
            },
            FigureId::Fig6 => Plan {
                title: "Maximum beam radius on the gain versus M2 curvature factor",
                x: (P::Fr2, 10.5, 30.0),
                family: Some(Family {
                    parameter: P::Compression,
                    values: &[1.0, 5.0, 10.0],
                    assumed: false,
                }),
                reduce: Some(d3_range),
                quantities: &[Q::SpotRadius],
            },
            FigureId::Fig7 => Plan {
                title: "Beam power and transmission efficiency versus gain thickness",
                x: (P::L, 0.05e-6, 3e-6),
                family: p_in_family,
                reduce: None,
                quantities: &[Q::PBeam, Q::EtaB],
            },
            FigureId::Fig8 => Plan {
                title: "Beam power and transmission efficiency versus output coupler reflectivity",
                x: (P::R2, 0.8, 0.999),
                family: p_in_family,
                reduce: None,
                quantities: &[Q::PBeam, Q::EtaB],
            },
            FigureId::Fig9 => Plan {
                title: "Spectral efficiency, electrical output and efficiency versus beam split ratio",
                x: (P::Mu, 0.0, 1.0),
                family: None,
                reduce: None,
                quantities: &[Q::CTilde, Q::PEOut, Q::EtaE, Q::PEOutRaw],
            },
            FigureId::Fig10 => Plan {
                title: "Spectral efficiency, electrical output and efficiency versus input power",
                x: (P::PIn, 10.0, 150.0),
                family: None,
                reduce: None,
                quantities: &[Q::CTilde, Q::PEOut, Q::EtaE, Q::PEOutRaw],
            },
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown figure `{0}` (expected one of 5a, 5b, 6, 7, 8, 9, 10)")]
pub struct UnknownFigure(pub String);

impl FromStr for FigureId {
    type Err = UnknownFigure;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        let key = key.strip_prefix("fig").unwrap_or(&key);
        FigureId::ALL
            .into_iter()
            .find(|id| id.as_str() == key)
            .ok_or_else(|| UnknownFigure(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy)]
struct Family {
    parameter: Parameter,
    values: &'static [f64],
    /// Family values are assumed rather than measured.
    assumed: bool,
}

/// Maximise over an inner axis for every plotted point.
#[derive(Debug, Clone, Copy)]
struct Reduce {
    over: Parameter,
    lo: f64,
    hi: f64,
}

#[derive(Debug, Clone, Copy)]
struct Plan {
    title: &'static str,
    x: (Parameter, f64, f64),
    family: Option<Family>,
    reduce: Option<Reduce>,
    quantities: &'static [Quantity],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisDescription {
    pub column: String,
    pub label: String,
    pub unit: String,
    pub scale: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesDescription {
    pub column: String,
    pub label: String,
    pub unit: String,
    pub values: Vec<f64>,
    pub assumed: bool,
}

/// Declarative plot: which columns go where, with labels and units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotDescription {
    pub figure: String,
    pub title: String,
    pub data: String,
    pub scenario: String,
    pub config_digest: String,
    pub x: AxisDescription,
    /// Column that separates the curves, if more than one.
    pub series: Option<SeriesDescription>,
    pub y: Vec<AxisDescription>,
    /// Only rows whose status is listed here carry plotted values.
    pub plotted_statuses: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub id: FigureId,
    pub config: Config,
    pub curve: CurveFile,
    pub plot: PlotDescription,
    /// One sweep per curve of the family.
    pub sweeps: Vec<SweepResult>,
}

#[derive(Debug, thiserror::Error)]
pub enum FigureError {
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Model(#[from] rbswipt_core::Error),
}

pub fn parameter_label(p: Parameter) -> &'static str {
    use Parameter as P;
    match p {
        P::Compression => "TIM compression M",
        P::D3 => "Transmission distance d3",
        P::Fr2 => "M2 curvature factor fr2",
        P::L => "Gain thickness l",
        P::R2 => "Output coupler reflectivity R2",
        P::PIn => "Input power P_in",
        P::Mu => "Beam split ratio mu",
        _ => p.key(),
    }
}

pub fn quantity_label(q: Quantity) -> &'static str {
    use Quantity as Q;
    match q {
        Q::SpotRadius => "Beam radius on the gain",
        Q::PBeam => "Beam power",
        Q::EtaB => "Transmission efficiency",
        Q::CTilde => "Spectral efficiency",
        Q::PEOut => "Electrical output power",
        Q::PEOutRaw => "Electrical output power (linear fit)",
        Q::EtaE => "End-to-end efficiency",
        _ => q.name(),
    }
}

fn parameter_unit(p: Parameter) -> &'static str {
    match config::dimension(p).si_symbol() {
        "" => "1",
        s => s,
    }
}

/// Reproduces a figure from its scenario preset.
pub fn reproduce_figure(id: FigureId) -> Result<Figure, FigureError> {
    let config = config::load_preset(&id.preset())?;
    reproduce_figure_with(id, &config)
}

/// Reproduces a figure on top of an explicit configuration (the scenario
/// preset with user overrides applied).
pub fn reproduce_figure_with(id: FigureId, config: &Config) -> Result<Figure, FigureError> {
    let plan = id.plan();
    let points = config.sweep.points;
    let (x_param, x_lo, x_hi) = plan.x;
    let x_axis = Axis::new(x_param, x_lo, x_hi, points, Spacing::Linear)?;
    let mut axes = vec![x_axis];
    if let Some(r) = plan.reduce {
        axes.push(Axis::new(r.over, r.lo, r.hi, points, Spacing::Linear)?);
    }

    let family_values: Vec<Option<f64>> = match plan.family {
        Some(f) => f.values.iter().copied().map(Some).collect(),
        None => vec![None],
    };

    let mut columns = Vec::new();
    if let Some(f) = plan.family {
        columns.push(Column::new(f.parameter.key(), parameter_unit(f.parameter)));
    }
    columns.push(Column::new(x_param.key(), parameter_unit(x_param)));
    let mut y_axes = Vec::new();
    for q in plan.quantities {
        let name = match plan.reduce {
            Some(_) => format!("{}_max", q.name()),
            None => q.name().to_string(),
        };
        columns.push(Column::new(&name, q.unit()));
        y_axes.push(AxisDescription {
            column: name,
            label: match plan.reduce {
                Some(r) => format!("{} (max over {})", quantity_label(*q), r.over.key()),
                None => quantity_label(*q).to_string(),
            },
            unit: q.unit().to_string(),
            scale: "linear".into(),
        });
    }
    if let Some(r) = plan.reduce {
        columns.push(Column::new(format!("{}_at_max", r.over.key()), parameter_unit(r.over)));
    }
    columns.push(Column::text("status"));

    let mut rows = Vec::new();
    let mut sweeps = Vec::new();
    for family_value in &family_values {
        let mut spec = SweepSpec::new(id.preset(), axes.clone())?;
        if let (Some(f), Some(v)) = (plan.family, family_value) {
            spec = spec.with_override(f.parameter, *v);
        }
        let sweep = run_sweep_parallel(&config.model, &spec, config.sweep.workers)?;
        let lead = |x: f64| {
            let mut row = Vec::new();
            if let Some(v) = family_value {
                row.push(Cell::Number(*v));
            }
            row.push(Cell::Number(x));
            row
        };
        match plan.reduce {
            Some(_) => {
                let curves = plan
                    .quantities
                    .iter()
                    .map(|q| reduce_max(&sweep, *q, 1))
                    .collect::<Result<Vec<_>, _>>()?;
                for (j, x) in curves[0].x.iter().enumerate() {
                    let mut row = lead(*x);
                    row.extend(curves.iter().map(|c| Cell::from(c.y[j])));
                    row.push(Cell::from(curves[0].argmax[j]));
                    let status = if curves[0].y[j].is_some() { "ok" } else { "unstable" };
                    row.push(Cell::Text(status.into()));
                    rows.push(row);
                }
            }
            None => {
                for point in &sweep.points {
                    let mut row = lead(point.coords[0]);
                    row.extend(plan.quantities.iter().map(|q| Cell::from(point.value(*q))));
                    row.push(Cell::Text(point.status.as_str().into()));
                    rows.push(row);
                }
            }
        }
        sweeps.push(sweep);
    }

    let stem = id.file_stem();
    let mut metadata = vec![
        ("figure".to_string(), id.as_str().to_string()),
        ("title".to_string(), plan.title.to_string()),
        ("points-per-axis".to_string(), points.to_string()),
    ];
    if let Some(f) = plan.family {
        let values: Vec<String> = f.values.iter().map(|v| crate::units::format_number(*v)).collect();
        let assumed = if f.assumed { " (assumed)" } else { "" };
        metadata.push((
            "family".to_string(),
            format!("{} = {} {}{assumed}", f.parameter.key(), values.join(", "), parameter_unit(f.parameter)),
        ));
    }
    if let Some(r) = plan.reduce {
        metadata.push((
            "reduction".to_string(),
            format!(
                "maximum over {} in [{}, {}] {}",
                r.over.key(),
                crate::units::format_number(r.lo),
                crate::units::format_number(r.hi),
                parameter_unit(r.over)
            ),
        ));
    }

    let curve = CurveFile {
        scenario: config.preset.clone(),
        config_digest: config.digest(),
        metadata,
        config: config.serialize_model(),
        columns,
        rows,
    };
    let plot = PlotDescription {
        figure: id.as_str().to_string(),
        title: plan.title.to_string(),
        data: format!("{stem}.csv"),
        scenario: config.preset.clone(),
        config_digest: curve.config_digest.clone(),
        x: AxisDescription {
            column: x_param.key().to_string(),
            label: parameter_label(x_param).to_string(),
            unit: parameter_unit(x_param).to_string(),
            scale: "linear".into(),
        },
        series: plan.family.map(|f| SeriesDescription {
            column: f.parameter.key().to_string(),
            label: parameter_label(f.parameter).to_string(),
            unit: parameter_unit(f.parameter).to_string(),
            values: f.values.to_vec(),
            assumed: f.assumed,
        }),
        y: y_axes,
        plotted_statuses: ["ok", "sub-threshold", "degenerate"].map(String::from).to_vec(),
    };
    Ok(Figure {
        id,
        config: config.clone(),
        curve,
        plot,
        sweeps,
    })
}

impl Figure {
    pub fn plot_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.plot).expect("plot description serializes");
        text.push('\n');
        text
    }
}
