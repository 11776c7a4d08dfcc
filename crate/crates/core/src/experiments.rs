//! Named models and the experiments behind the command-line front end:
//! plain integration, forward-backward round trip, delayed-value comparison
//! and convergence under step halving.

use std::path::Path;
use std::str::FromStr;

use nalgebra::Vector3;

use crate::csv::{format_f64, Table};
use crate::driver::{integrate, integrate_logged, DelayedQuery, IntegratorConfig, Retrieval};
use crate::error::{Error, Result};
use crate::history::{SampleKind, Trajectory};
use crate::models::lunar::body_rotation;
use crate::models::{KeyValues, LunarModel, LunarParams, ManufacturedDde};
use crate::system::{DdeSystem, DelayedValue, InitialValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// `x' = 0` in three components, with one unused delay.
    Zero,
    /// `x' = -x`.
    Decay,
    Manufactured,
    Lunar,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [ModelKind::Zero, ModelKind::Decay, ModelKind::Manufactured, ModelKind::Lunar];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Zero => "zero",
            ModelKind::Decay => "decay",
            ModelKind::Manufactured => "manufactured",
            ModelKind::Lunar => "lunar",
        }
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown model `{s}` (zero, decay, manufactured, lunar)")))
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

struct Zero {
    delays: [f64; 1],
}

impl DdeSystem for Zero {
    fn dim(&self) -> usize {
        3
    }

    fn delays(&self) -> &[f64] {
        &self.delays
    }

    fn rhs(&self, _t: f64, x: &[f64], _delayed: &[DelayedValue]) -> Result<Vec<f64>> {
        Ok(vec![0.0; x.len()])
    }
}

struct Decay;

impl DdeSystem for Decay {
    fn dim(&self) -> usize {
        1
    }

    fn delays(&self) -> &[f64] {
        &[]
    }

    fn rhs(&self, _t: f64, x: &[f64], _delayed: &[DelayedValue]) -> Result<Vec<f64>> {
        Ok(x.iter().map(|v| -v).collect())
    }
}

enum Inner {
    Zero(Zero),
    Decay(Decay),
    Manufactured(ManufacturedDde),
    Lunar(LunarModel),
}

/// A model selected by name, with its initial value and, where known, its
/// exact solution.
pub struct Model {
    kind: ModelKind,
    inner: Inner,
}

impl Model {
    /// Builds `kind` with default parameters, overridden by a `key = value`
    /// file if given.
    pub fn load(kind: ModelKind, params: Option<&Path>) -> Result<Self> {
        let kv = params.map(KeyValues::from_file).transpose()?;
        let inner = match kind {
            ModelKind::Zero | ModelKind::Decay if kv.is_some() => {
                return Err(Error::InvalidConfig(format!("model `{kind}` takes no parameters")));
            }
            ModelKind::Zero => Inner::Zero(Zero { delays: [1.0] }),
            ModelKind::Decay => Inner::Decay(Decay),
            ModelKind::Manufactured => Inner::Manufactured(manufactured_from(kv.as_ref())?),
            ModelKind::Lunar => {
                let p = kv.as_ref().map(LunarParams::from_key_values).transpose()?.unwrap_or_default();
                Inner::Lunar(LunarModel::new(p)?)
            }
        };
        Ok(Self { kind, inner })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn system(&self) -> &(dyn DdeSystem + Send + Sync) {
        match &self.inner {
            Inner::Zero(m) => m,
            Inner::Decay(m) => m,
            Inner::Manufactured(m) => m,
            Inner::Lunar(m) => m,
        }
    }

    pub fn initial_value(&self, t0: f64) -> Result<InitialValue> {
        Ok(match &self.inner {
            Inner::Zero(_) => InitialValue::new(t0, vec![1.0, 2.0, 3.0]),
            Inner::Decay(_) => InitialValue::new(t0, vec![1.0]),
            Inner::Manufactured(m) => m.initial_value(t0),
            Inner::Lunar(m) => m.initial_value(t0)?,
        })
    }

    /// Exact solution through [`Model::initial_value`] at `t0`.
    pub fn exact(&self, t0: f64, t: f64) -> Option<Vec<f64>> {
        match &self.inner {
            Inner::Zero(_) => Some(vec![1.0, 2.0, 3.0]),
            Inner::Decay(_) => Some(vec![(t0 - t).exp()]),
            Inner::Manufactured(m) => Some(m.exact(t)),
            Inner::Lunar(_) => None,
        }
    }

    /// Span covered by a bare command.
    pub fn default_span(&self) -> f64 {
        match &self.inner {
            Inner::Zero(_) => 1.0,
            Inner::Decay(_) => 2.0,
            Inner::Manufactured(m) => 30.0 * m.tau,
            Inner::Lunar(_) => 730.5,
        }
    }

    pub fn lunar(&self) -> Option<&LunarModel> {
        match &self.inner {
            Inner::Lunar(m) => Some(m),
            _ => None,
        }
    }

    pub fn manufactured(&self) -> Option<&ManufacturedDde> {
        match &self.inner {
            Inner::Manufactured(m) => Some(m),
            _ => None,
        }
    }
}

impl From<ManufacturedDde> for Model {
    fn from(m: ManufacturedDde) -> Self {
        Self { kind: ModelKind::Manufactured, inner: Inner::Manufactured(m) }
    }
}

impl From<LunarModel> for Model {
    fn from(m: LunarModel) -> Self {
        Self { kind: ModelKind::Lunar, inner: Inner::Lunar(m) }
    }
}

fn manufactured_from(kv: Option<&KeyValues>) -> Result<ManufacturedDde> {
    let m = ManufacturedDde::default();
    let Some(kv) = kv else { return Ok(m) };
    let dim = m.amplitude.len();
    let known = |k: &str| {
        ["alpha", "beta", "gamma", "tau"].contains(&k)
            || ["amplitude", "frequency", "phase"].iter().any(|p| {
                k.strip_prefix(p).and_then(|i| i.parse::<usize>().ok()).is_some_and(|i| i < dim)
            })
    };
    if let Some(k) = kv.keys().find(|k| !known(k)) {
        return Err(Error::Parse(format!("unknown manufactured parameter `{k}`")));
    }
    let (mut amplitude, mut frequency, mut phase) = (m.amplitude, m.frequency, m.phase);
    for i in 0..dim {
        kv.read_into(&format!("amplitude{i}"), &mut amplitude[i])?;
        kv.read_into(&format!("frequency{i}"), &mut frequency[i])?;
        kv.read_into(&format!("phase{i}"), &mut phase[i])?;
    }
    let (mut alpha, mut beta, mut gamma, mut tau) = (m.alpha, m.beta, m.gamma, m.tau);
    kv.read_into("alpha", &mut alpha)?;
    kv.read_into("beta", &mut beta)?;
    kv.read_into("gamma", &mut gamma)?;
    kv.read_into("tau", &mut tau)?;
    if !(tau > 0.0) {
        return Err(Error::InvalidConfig(format!("tau = {tau} must be positive")));
    }
    Ok(ManufacturedDde::new(amplitude, frequency, phase, alpha, beta, gamma, tau))
}

/// `t,x0,...` for every node between `t0` and `t_end`.
pub fn integrate_table(model: &Model, t0: f64, t_end: f64, cfg: &IntegratorConfig) -> Result<Table> {
    let traj = integrate(model.system(), &model.initial_value(t0)?, t_end, cfg)?;
    Ok(crate::csv::trajectory_table(&traj))
}

/// Largest absolute deviation from the exact solution over all nodes.
pub fn max_error(model: &Model, traj: &Trajectory) -> Option<f64> {
    let mut err: f64 = 0.0;
    for (i, x) in traj.states().iter().enumerate() {
        let exact = model.exact(traj.t0(), traj.time(i))?;
        for (a, b) in x.iter().zip(&exact) {
            err = err.max((a - b).abs());
        }
    }
    Some(err)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundTripRow {
    pub t: f64,
    /// Euclidean norm of the forward minus backward state.
    pub state_diff: f64,
    /// Lunar model only: difference of Earth-Moon distances, km.
    pub distance_diff: Option<f64>,
    /// Lunar model only: radius times the rotation angle between the two
    /// body orientations, km.
    pub surface_diff: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RoundTrip {
    pub forward: Trajectory,
    pub backward: Trajectory,
    /// One row per node in forward order; the last row is the turnaround.
    pub rows: Vec<RoundTripRow>,
}

impl RoundTrip {
    /// `|x_back(t0) - x0| / |x0|`.
    pub fn closure(&self) -> f64 {
        let x0 = self.forward.state(0);
        let norm = x0.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.rows[0].state_diff / norm
    }

    pub fn table(&self) -> Table {
        let lunar = self.rows.first().is_some_and(|r| r.surface_diff.is_some());
        let mut header = vec!["t", "state_diff"];
        if lunar {
            header.extend(["distance_diff", "surface_diff"]);
        }
        let mut table = Table::new(header);
        for r in &self.rows {
            let mut row = vec![r.t, r.state_diff];
            if lunar {
                row.extend([r.distance_diff.unwrap_or(f64::NAN), r.surface_diff.unwrap_or(f64::NAN)]);
            }
            table.push_floats(&row);
        }
        table
    }
}

/// Rotation angle of `R_a R_b^T` from its skew part, accurate for small angles.
fn orientation_angle(a: &[f64], b: &[f64]) -> f64 {
    let rel = (body_rotation(a[0], a[1], a[2]) * body_rotation(b[0], b[1], b[2]).inverse()).into_inner();
    let skew = Vector3::new(rel[(2, 1)] - rel[(1, 2)], rel[(0, 2)] - rel[(2, 0)], rel[(1, 0)] - rel[(0, 1)]);
    let s = (skew.norm() / 2.0).min(1.0);
    let c = (rel.trace() - 1.0) / 2.0;
    s.atan2(c)
}

/// Integrates from `t0` to `t_end`, then from the final node back to `t0`,
/// and compares the two passes node by node.
pub fn roundtrip(model: &Model, t0: f64, t_end: f64, cfg: &IntegratorConfig) -> Result<RoundTrip> {
    let system = model.system();
    let forward = integrate(system, &model.initial_value(t0)?, t_end, cfg)?;
    let n = forward.len() - 1;
    let turn = InitialValue::new(forward.time(n), forward.state(n).to_vec());
    let back_cfg = cfg.clone().with_step(-cfg.step);
    let backward = integrate(system, &turn, t0, &back_cfg)?;
    if backward.len() != forward.len() {
        return Err(Error::InsufficientRecords { need: forward.len(), have: backward.len() });
    }
    let mut rows = Vec::with_capacity(forward.len());
    for i in 0..=n {
        let (xf, xb) = (forward.state(i), backward.state(n - i));
        let state_diff = xf.iter().zip(xb).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let (distance_diff, surface_diff) = match model.lunar() {
            Some(m) => {
                let orbit = &m.params.orbit;
                let d = orbit.position(forward.time(i))?.norm() - orbit.position(backward.time(n - i))?.norm();
                (Some(d), Some(m.params.r_m * orientation_angle(xf, xb)))
            }
            None => (None, None),
        };
        rows.push(RoundTripRow { t: forward.time(i), state_diff, distance_diff, surface_diff });
    }
    Ok(RoundTrip { forward, backward, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelayedCompareRow {
    pub direction: Direction,
    pub query: DelayedQuery,
    /// Max-abs difference from the final trajectory at the query time.
    pub state_error: f64,
    pub derivative_error: f64,
}

#[derive(Debug, Clone)]
pub struct DelayedCompare {
    pub forward: Trajectory,
    pub backward: Trajectory,
    pub rows: Vec<DelayedCompareRow>,
    /// Queries beyond the final trajectory, which cannot be compared.
    pub skipped: usize,
}

impl DelayedCompare {
    /// Median state error over rows matching `direction` and `retrieval`.
    pub fn median(&self, direction: Direction, retrieval: Retrieval) -> Option<f64> {
        let mut v: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.direction == direction && r.query.retrieval == retrieval)
            .map(|r| r.state_error)
            .collect();
        median(&mut v)
    }

    pub fn table(&self) -> Table {
        let mut table = Table::new([
            "eval_time",
            "query_time",
            "delay_index",
            "direction",
            "source",
            "state_error",
            "derivative_error",
        ]);
        for r in &self.rows {
            table.push(vec![
                format_f64(r.query.eval_time),
                format_f64(r.query.query_time),
                r.query.delay_index.to_string(),
                r.direction.as_str().to_string(),
                r.query.retrieval.as_str().to_string(),
                format_f64(r.state_error),
                format_f64(r.derivative_error),
            ]);
        }
        table
    }
}

pub fn median(v: &mut [f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Integrates `span` forward and backward from `t0`, logging every delayed
/// value, then compares each with the final two-sided trajectory.
pub fn delayed_compare(model: &Model, t0: f64, span: f64, cfg: &IntegratorConfig) -> Result<DelayedCompare> {
    let system = model.system();
    let iv = model.initial_value(t0)?;
    let h = cfg.step.abs();
    let (forward, fwd_log) = integrate_logged(system, &iv, t0 + span.abs(), &cfg.clone().with_step(h))?;
    let (backward, bwd_log) = integrate_logged(system, &iv, t0 - span.abs(), &cfg.clone().with_step(-h))?;
    let stencil = cfg.stencil_size.unwrap_or(cfg.order.max(2));

    let reference = |q: f64| -> Result<Option<(Vec<f64>, Vec<f64>)>> {
        let grid = if q >= t0 { &forward } else { &backward };
        if !grid.covers(q) {
            return Ok(None);
        }
        let x = grid.sample(q, SampleKind::State, stencil, 0.0)?.value;
        let f = grid.sample(q, SampleKind::Derivative, stencil, 0.0)?.value;
        Ok(Some((x, f)))
    };

    let mut rows = Vec::with_capacity(fwd_log.len() + bwd_log.len());
    let mut skipped = 0;
    for (direction, log) in [(Direction::Forward, fwd_log), (Direction::Backward, bwd_log)] {
        for query in log {
            match reference(query.query_time)? {
                Some((x, f)) => {
                    let state_error = max_abs_diff(&query.value.state, &x);
                    let derivative_error = max_abs_diff(&query.value.derivative, &f);
                    rows.push(DelayedCompareRow { direction, query, state_error, derivative_error });
                }
                None => skipped += 1,
            }
        }
    }
    Ok(DelayedCompare { forward, backward, rows, skipped })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    pub max_error: f64,
    /// `log2` of the error ratio to the previous row; NaN on the first row,
    /// infinite when both errors vanish.
    pub order: f64,
}

pub fn convergence_table(rows: &[ConvergenceRow]) -> Table {
    let mut table = Table::new(["h", "max_error", "order"]);
    for r in rows {
        table.push_floats(&[r.h, r.max_error, r.order]);
    }
    table
}

/// Runs `cfg.step` and `halvings` successive halvings concurrently and
/// reports the maximum node error of each against the exact solution.
pub fn convergence(
    model: &Model,
    t0: f64,
    t_end: f64,
    cfg: &IntegratorConfig,
    halvings: usize,
) -> Result<Vec<ConvergenceRow>> {
    if model.exact(t0, t0).is_none() {
        return Err(Error::InvalidConfig(format!("model `{}` has no exact solution", model.kind())));
    }
    let iv = model.initial_value(t0)?;
    let steps: Vec<f64> = (0..=halvings).map(|j| cfg.step / f64::powi(2.0, j as i32)).collect();
    let errors: Vec<Result<f64>> = std::thread::scope(|scope| {
        let handles: Vec<_> = steps
            .iter()
            .map(|&h| {
                let iv = &iv;
                scope.spawn(move || {
                    let traj = integrate(model.system(), iv, t_end, &cfg.clone().with_step(h))?;
                    Ok(max_error(model, &traj).expect("exact solution checked above"))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("convergence worker panicked")).collect()
    });
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(steps.len());
    for (h, err) in steps.into_iter().zip(errors) {
        let err = err?;
        let order = match rows.last() {
            None => f64::NAN,
            Some(prev) if prev.max_error == 0.0 && err == 0.0 => f64::INFINITY,
            Some(prev) => (prev.max_error / err).log2(),
        };
        rows.push(ConvergenceRow { h, max_error: err, order });
    }
    Ok(rows)
}
