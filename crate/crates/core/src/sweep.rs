//! Grid sweeps, reductions and grid-then-golden-section design search over
//! the composed link model.
//!
//! Grid points are independent; [`SweepSpec::grid`] enumerates them and
//! [`evaluate_point`] evaluates one, so callers may farm points out to worker
//! threads and reassemble with [`SweepResult::from_points`]. Ordering is
//! always by grid index.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::link::{LinkModel, OperatingPoint, Quantity};
use crate::math::{exp, ln};
use crate::params::Parameter;
use crate::search::{golden_section, Sense};
use crate::{Error, Result};

/// Number of grid points per axis when none is given.
pub const DEFAULT_POINTS: usize = 121;

/// Width below which golden-section refinement stops.
pub const REFINE_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub parameter: Parameter,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Axis {
    pub fn new(parameter: Parameter, lo: f64, hi: f64, count: usize, spacing: Spacing) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::invalid("axis range", hi - lo, "need finite lo < hi"));
        }
        if count < 2 {
            return Err(Error::invalid("axis count", count as f64, "need at least 2 points"));
        }
        if spacing == Spacing::Log && lo <= 0.0 {
            return Err(Error::invalid("axis lo", lo, "log spacing needs lo > 0"));
        }
        Ok(Self {
            parameter,
            lo,
            hi,
            count,
            spacing,
        })
    }

    pub fn linear(parameter: Parameter, lo: f64, hi: f64, count: usize) -> Result<Self> {
        Self::new(parameter, lo, hi, count, Spacing::Linear)
    }

    /// Value at grid index `i`; the end points are hit exactly.
    pub fn value(&self, i: usize) -> f64 {
        if i == 0 {
            return self.lo;
        }
        if i + 1 >= self.count {
            return self.hi;
        }
        let t = i as f64 / (self.count - 1) as f64;
        match self.spacing {
            Spacing::Linear => self.lo + t * (self.hi - self.lo),
            Spacing::Log => exp(ln(self.lo) + t * (ln(self.hi) - ln(self.lo))),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reduction {
    None,
    /// Maximum of `quantity` over axis `axis` (0 or 1).
    Max { quantity: Quantity, axis: usize },
    /// Location of that maximum along the reduced axis.
    Argmax { quantity: Quantity, axis: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub scenario: String,
    /// Zero, one or two axes; zero evaluates the base model once.
    pub axes: Vec<Axis>,
    pub overrides: Vec<(Parameter, f64)>,
    pub reduction: Reduction,
}

impl SweepSpec {
    pub fn new(scenario: impl Into<String>, axes: Vec<Axis>) -> Result<Self> {
        if axes.len() > 2 {
            return Err(Error::invalid("axes", axes.len() as f64, "at most two sweep axes"));
        }
        Ok(Self {
            scenario: scenario.into(),
            axes,
            overrides: Vec::new(),
            reduction: Reduction::None,
        })
    }

    pub fn with_override(mut self, p: Parameter, value: f64) -> Self {
        self.overrides.push((p, value));
        self
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The base model with every fixed override applied.
    pub fn resolve(&self, base: &LinkModel) -> Result<LinkModel> {
        let mut model = *base;
        for (p, v) in &self.overrides {
            model.set(*p, *v)?;
        }
        Ok(model)
    }

    /// Grid points in index order; axis 0 is the outer (slow) axis.
    pub fn grid(&self) -> Vec<GridPoint> {
        let n = self.len();
        (0..n)
            .map(|index| {
                let mut coords = Vec::with_capacity(self.axes.len());
                let mut stride = n;
                let mut rem = index;
                for axis in &self.axes {
                    stride /= axis.count;
                    coords.push(axis.value(rem / stride));
                    rem %= stride;
                }
                GridPoint { index, coords }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub coords: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The cavity supports no Gaussian mode at this point.
    Unstable,
    /// The input power does not reach threshold; the point is still valid.
    SubThreshold,
    /// Zero-size mode from the closed form (`B·D = 0`).
    Degenerate,
    /// Parameters outside the model's domain.
    Invalid,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Unstable => "unstable",
            Status::SubThreshold => "sub-threshold",
            Status::Degenerate => "degenerate",
            Status::Invalid => "invalid",
        }
    }

    /// Whether the point carries evaluated quantities.
    pub fn has_values(self) -> bool {
        matches!(self, Status::Ok | Status::SubThreshold | Status::Degenerate)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub coords: Vec<f64>,
    pub status: Status,
    pub point: Option<OperatingPoint>,
}

impl SweepPoint {
    pub fn value(&self, q: Quantity) -> Option<f64> {
        self.point.filter(|_| self.status.has_values()).map(|p| p.get(q))
    }
}

/// Anything that maps a fully specified [`LinkModel`] to an operating point.
/// The physical model is [`PhysicalModel`]; tests inject stubs.
pub trait Evaluator {
    fn evaluate(&self, model: &LinkModel) -> Result<OperatingPoint>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PhysicalModel;

impl Evaluator for PhysicalModel {
    fn evaluate(&self, model: &LinkModel) -> Result<OperatingPoint> {
        model.evaluate()
    }
}

impl<F> Evaluator for F
where
    F: Fn(&LinkModel) -> Result<OperatingPoint>,
{
    fn evaluate(&self, model: &LinkModel) -> Result<OperatingPoint> {
        self(model)
    }
}

fn classify(outcome: Result<OperatingPoint>) -> (Status, Option<OperatingPoint>) {
    match outcome {
        Ok(p) if p.degenerate_mode => (Status::Degenerate, Some(p)),
        Ok(p) if p.is_sub_threshold() => (Status::SubThreshold, Some(p)),
        Ok(p) => (Status::Ok, Some(p)),
        Err(e) if e.is_unstable() => (Status::Unstable, None),
        Err(_) => (Status::Invalid, None),
    }
}

/// Evaluates a single grid point against the resolved model.
pub fn evaluate_point<E: Evaluator + ?Sized>(
    resolved: &LinkModel,
    axes: &[Axis],
    gp: &GridPoint,
    evaluator: &E,
) -> SweepPoint {
    let mut model = *resolved;
    let mut outcome = Ok(());
    for (axis, v) in axes.iter().zip(&gp.coords) {
        outcome = outcome.and_then(|_| model.set(axis.parameter, *v));
    }
    let (status, point) = classify(outcome.and_then(|_| evaluator.evaluate(&model)));
    SweepPoint {
        index: gp.index,
        coords: gp.coords.clone(),
        status,
        point,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub scenario: String,
    /// Model after overrides; with the axes this re-creates every point.
    pub resolved: LinkModel,
    pub axes: Vec<Axis>,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    /// Assembles points evaluated in any order into grid order.
    pub fn from_points(spec: &SweepSpec, resolved: LinkModel, mut points: Vec<SweepPoint>) -> Self {
        points.sort_by_key(|p| p.index);
        Self {
            scenario: spec.scenario.clone(),
            resolved,
            axes: spec.axes.clone(),
            points,
        }
    }

    pub fn stable_count(&self) -> usize {
        self.points.iter().filter(|p| p.status.has_values()).count()
    }

    pub fn all_unstable(&self) -> bool {
        !self.points.is_empty() && self.points.iter().all(|p| p.status == Status::Unstable)
    }

    /// Point at per-axis indices `idx`.
    pub fn at(&self, idx: &[usize]) -> Option<&SweepPoint> {
        if idx.len() != self.axes.len() {
            return None;
        }
        let mut flat = 0;
        for (axis, &i) in self.axes.iter().zip(idx) {
            if i >= axis.count {
                return None;
            }
            flat = flat * axis.count + i;
        }
        self.points.get(flat)
    }
}

pub fn run_sweep(base: &LinkModel, spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_with(base, spec, &PhysicalModel)
}

/// Serial sweep. All-unstable grids are returned, not treated as errors.
pub fn run_sweep_with<E: Evaluator + ?Sized>(
    base: &LinkModel,
    spec: &SweepSpec,
    evaluator: &E,
) -> Result<SweepResult> {
    let resolved = spec.resolve(base)?;
    let points = spec
        .grid()
        .iter()
        .map(|gp| evaluate_point(&resolved, &spec.axes, gp, evaluator))
        .collect();
    Ok(SweepResult::from_points(spec, resolved, points))
}

/// A reduced curve: one entry per value of the remaining axis, `None` where
/// the reduced slice had no evaluable point. Reducing a one-axis sweep gives
/// a single entry and an empty `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub x: Vec<f64>,
    pub y: Vec<Option<f64>>,
    /// Position of the maximum along the reduced axis.
    pub argmax: Vec<Option<f64>>,
}

/// Maximum of `quantity` over axis `over_axis` among evaluable points.
/// Ties resolve to the lower reduced-axis value.
pub fn reduce_max(result: &SweepResult, quantity: Quantity, over_axis: usize) -> Result<Curve> {
    let dims = result.axes.len();
    if over_axis >= dims {
        return Err(Error::invalid("over_axis", over_axis as f64, "no such sweep axis"));
    }
    let reduced = &result.axes[over_axis];
    let remaining = if dims == 2 { Some(result.axes[1 - over_axis]) } else { None };
    let outer = remaining.map_or(1, |a| a.count);

    let mut curve = Curve {
        x: remaining.map(|a| a.values()).unwrap_or_default(),
        y: Vec::with_capacity(outer),
        argmax: Vec::with_capacity(outer),
    };
    for j in 0..outer {
        let mut best: Option<(f64, f64)> = None;
        for i in 0..reduced.count {
            let idx: Vec<usize> = match (dims, over_axis) {
                (1, _) => alloc::vec![i],
                (_, 0) => alloc::vec![i, j],
                _ => alloc::vec![j, i],
            };
            let Some(point) = result.at(&idx) else { continue };
            let Some(v) = point.value(quantity) else { continue };
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, point.coords[over_axis]));
            }
        }
        curve.y.push(best.map(|b| b.0));
        curve.argmax.push(best.map(|b| b.1));
    }
    Ok(curve)
}

/// Result of [`find_optimum`].
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub parameters: Vec<(Parameter, f64)>,
    pub value: f64,
    pub point: OperatingPoint,
    /// Whether golden-section refinement improved on the best grid point.
    pub refined: bool,
}

pub fn find_optimum(base: &LinkModel, spec: &SweepSpec, objective: Quantity, sense: Sense) -> Result<Optimum> {
    find_optimum_with(base, spec, objective, sense, &PhysicalModel)
}

/// Grid search over `spec`, then golden-section refinement inside the
/// winning bracket when the sweep is one-dimensional. Ties go to the lower
/// parameter value (the first grid point in index order).
pub fn find_optimum_with<E: Evaluator + ?Sized>(
    base: &LinkModel,
    spec: &SweepSpec,
    objective: Quantity,
    sense: Sense,
    evaluator: &E,
) -> Result<Optimum> {
    let sweep = run_sweep_with(base, spec, evaluator)?;
    optimum_from_sweep(&sweep, objective, sense, evaluator)
}

/// Optimum search over an already evaluated grid, e.g. one produced by a
/// parallel runner. `evaluator` is used only for the refinement step.
pub fn optimum_from_sweep<E: Evaluator + ?Sized>(
    sweep: &SweepResult,
    objective: Quantity,
    sense: Sense,
    evaluator: &E,
) -> Result<Optimum> {
    let mut best: Option<(usize, f64)> = None;
    for (k, p) in sweep.points.iter().enumerate() {
        let Some(v) = p.value(objective) else { continue };
        if v.is_nan() {
            continue;
        }
        if best.is_none_or(|(_, b)| sense.improves(v, b)) {
            best = Some((k, v));
        }
    }
    let (k, value) = best.ok_or(Error::OptimizationFailed)?;
    let winner = &sweep.points[k];
    let mut optimum = Optimum {
        parameters: sweep
            .axes
            .iter()
            .zip(&winner.coords)
            .map(|(a, v)| (a.parameter, *v))
            .collect(),
        value,
        point: winner.point.ok_or(Error::OptimizationFailed)?,
        refined: false,
    };

    if let [axis] = sweep.axes.as_slice() {
        let i = (0..axis.count)
            .find(|&i| axis.value(i) == winner.coords[0])
            .unwrap_or(0);
        let lo = axis.value(i.saturating_sub(1));
        let hi = axis.value((i + 1).min(axis.count - 1));
        let score = |x: f64| -> Option<(f64, OperatingPoint)> {
            let mut m = sweep.resolved;
            m.set(axis.parameter, x).ok()?;
            let (status, point) = classify(evaluator.evaluate(&m));
            let point = point.filter(|_| status.has_values())?;
            Some((point.get(objective), point))
        };
        let (x, v) = golden_section(|x| score(x).map(|s| s.0), lo, hi, REFINE_TOLERANCE, sense);
        if sense.improves(v, optimum.value) {
            if let Some((v, point)) = score(x) {
                optimum.parameters[0].1 = x;
                optimum.value = v;
                optimum.point = point;
                optimum.refined = true;
            }
        }
    }
    Ok(optimum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn axis(p: Parameter, lo: f64, hi: f64, n: usize) -> Axis {
        Axis::linear(p, lo, hi, n).unwrap()
    }

    #[test]
    fn axis_validation_and_values() {
        assert!(Axis::linear(Parameter::R2, 0.9, 0.8, 10).is_err());
        assert!(Axis::linear(Parameter::R2, 0.8, 0.9, 1).is_err());
        assert!(Axis::new(Parameter::L, 0.0, 1.0, 5, Spacing::Log).is_err());
        let a = axis(Parameter::R2, 0.8, 0.9, 3);
        assert_eq!(a.values(), vec![0.8, 0.8500000000000001, 0.9]);
        let l = Axis::new(Parameter::L, 1e-8, 1e-6, 3, Spacing::Log).unwrap();
        assert!((l.value(1) - 1e-7).abs() < 1e-20);
        assert_eq!(l.value(2), 1e-6);
    }

    #[test]
    fn grid_order_is_row_major() {
        let spec = SweepSpec::new(
            "t",
            vec![axis(Parameter::R2, 0.0, 1.0, 2), axis(Parameter::PIn, 10.0, 30.0, 3)],
        )
        .unwrap();
        let coords: Vec<_> = spec.grid().into_iter().map(|g| g.coords).collect();
        assert_eq!(
            coords,
            vec![
                vec![0.0, 10.0],
                vec![0.0, 20.0],
                vec![0.0, 30.0],
                vec![1.0, 10.0],
                vec![1.0, 20.0],
                vec![1.0, 30.0]
            ]
        );
    }

    #[test]
    fn single_point_sweep_equals_direct_evaluation() {
        let base = LinkModel::paper_2022();
        let spec = SweepSpec::new("single", vec![]).unwrap();
        let r = run_sweep(&base, &spec).unwrap();
        assert_eq!(r.points.len(), 1);
        assert_eq!(r.points[0].point.unwrap(), base.evaluate().unwrap());
        assert_eq!(r.points[0].status, Status::Ok);
    }

    #[test]
    fn statuses_are_recorded() {
        let base = LinkModel::paper_2022();
        let spec = SweepSpec::new("s", vec![axis(Parameter::PIn, 0.5, 150.0, 5)])
            .unwrap()
            .with_override(Parameter::L, 1e-6);
        let r = run_sweep(&base, &spec).unwrap();
        assert_eq!(r.points[0].status, Status::SubThreshold);
        assert_eq!(r.points[4].status, Status::Ok);

        let spec = SweepSpec::new("u", vec![axis(Parameter::Fr2, 2.0, 4.0, 3)]).unwrap();
        let r = run_sweep(&base, &spec).unwrap();
        assert!(r.all_unstable());

        let spec = SweepSpec::new("i", vec![axis(Parameter::R2, 1.1, 1.2, 2)]).unwrap();
        let r = run_sweep(&base, &spec).unwrap();
        assert!(r.points.iter().all(|p| p.status == Status::Invalid));
    }

    fn stub(x_of: fn(&LinkModel) -> f64) -> impl Fn(&LinkModel) -> Result<OperatingPoint> {
        move |m: &LinkModel| {
            let mut op = OperatingPoint { p_in: 1.0, ..Default::default() };
            op.power.p_beam = x_of(m);
            Ok(op)
        }
    }

    #[test]
    fn reduce_max_cases() {
        let base = LinkModel::paper_2022();
        let spec = SweepSpec::new(
            "r",
            vec![axis(Parameter::R2, 0.0, 1.0, 2), axis(Parameter::PIn, 1.0, 3.0, 3)],
        )
        .unwrap();
        let r = run_sweep_with(&base, &spec, &stub(|_| 4.0)).unwrap();
        let c = reduce_max(&r, Quantity::PBeam, 0).unwrap();
        assert_eq!(c.y, vec![Some(4.0); 3]);
        assert_eq!(c.argmax, vec![Some(0.0); 3]);

        let f = stub(|m| if m.geometry.r2 > 0.5 { m.p_in } else { 4.0 - m.p_in });
        let r = run_sweep_with(&base, &spec, &f).unwrap();
        let c = reduce_max(&r, Quantity::PBeam, 0).unwrap();
        assert_eq!(c.x, vec![1.0, 2.0, 3.0]);
        assert_eq!(c.y, vec![Some(3.0), Some(2.0), Some(3.0)]);
        assert_eq!(c.argmax, vec![Some(0.0), Some(0.0), Some(1.0)]);
        let c = reduce_max(&r, Quantity::PBeam, 1).unwrap();
        assert_eq!(c.y, vec![Some(3.0), Some(3.0)]);
        assert!(reduce_max(&r, Quantity::PBeam, 2).is_err());
    }

    #[test]
    fn reduce_max_leaves_gaps_for_unstable_slices() {
        let base = LinkModel::paper_2022();
        let spec = SweepSpec::new(
            "g",
            vec![axis(Parameter::Fr2, 1.0, 2.0, 2), axis(Parameter::D3, 2.0, 3.0, 2)],
        )
        .unwrap();
        let r = run_sweep(&base, &spec).unwrap();
        let c = reduce_max(&r, Quantity::SpotRadius, 1).unwrap();
        assert_eq!(c.y, vec![None, None]);
    }

    #[test]
    fn optimum_of_stub_quadratic() {
        let base = LinkModel::paper_2022();
        let spec = SweepSpec::new("q", vec![axis(Parameter::R2, 0.0, 1.0, 11)]).unwrap();
        let f = stub(|m| 5.0 - (m.geometry.r2 - 0.4321) * (m.geometry.r2 - 0.4321));
        let opt = find_optimum_with(&base, &spec, Quantity::PBeam, Sense::Maximize, &f).unwrap();
        assert!((opt.parameters[0].1 - 0.4321).abs() < 1e-6);
        assert!(opt.refined);
        let f = stub(|m| (m.geometry.r2 - 0.777).abs());
        let opt = find_optimum_with(&base, &spec, Quantity::PBeam, Sense::Minimize, &f).unwrap();
        assert!((opt.parameters[0].1 - 0.777).abs() < 1e-6);
    }

    #[test]
    fn optimum_ties_prefer_lower_parameter() {
        let base = LinkModel::paper_2022();
        let spec = SweepSpec::new("t", vec![axis(Parameter::R2, 0.0, 1.0, 5)]).unwrap();
        let opt = find_optimum_with(&base, &spec, Quantity::PBeam, Sense::Maximize, &stub(|_| 1.0)).unwrap();
        assert_eq!(opt.parameters[0].1, 0.0);
    }

    #[test]
    fn optimum_fails_without_stable_points() {
        let base = LinkModel::paper_2022();
        let spec = SweepSpec::new("f", vec![axis(Parameter::Fr2, 2.0, 4.0, 3)]).unwrap();
        assert_eq!(
            find_optimum(&base, &spec, Quantity::PBeam, Sense::Maximize),
            Err(Error::OptimizationFailed)
        );
    }
}
