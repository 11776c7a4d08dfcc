//! The fixed-step Adams-Bashforth-Moulton integrator for delay equations.
//!
//! Startup runs Dormand-Prince 8 on a grid `startup_divisor` times finer than
//! the multistep grid, with every delayed value obtained by nested
//! integration. The multistep loop is then
//!
//! ```text
//! P:  x_p     = x_n + h * sum_{j<k} gamma_j nabla^j f_n
//! E:  f_{n+1} = f(t_{n+1}, x, delayed values from the history)
//! C:  x_{n+1} = x_p + h * gamma_k * nabla^k f_{n+1}
//! ```
//!
//! with `E, C` repeated `corrections` times (PECEC by default). Delayed values
//! always refer to `t - tau`; integrating backward in time turns their
//! interpolation into extrapolation past the newest node.

use crate::coeffs::CoefficientTable;
use crate::error::{Error, Result};
use crate::history::{SampleKind, Trajectory};
use crate::nested::solve_delayed;
use crate::rk::{dopri8_tableau, rk_step_with_slope, ButcherTableau};
use crate::system::{DdeSystem, DelayedValue, InitialValue};

pub const MAX_ORDER: usize = 13;

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    /// Number of backward differences in the predictor, `1..=13`.
    pub order: usize,
    /// Signed step; its sign selects the direction of integration.
    pub step: f64,
    /// Evaluate-correct pairs after the prediction.
    pub corrections: usize,
    pub startup_divisor: usize,
    /// Nested RK4 step, default `min |tau| / 8`.
    pub inner_step: Option<f64>,
    /// Nodes per delayed-value stencil, default `max(order, 2)`.
    pub stencil_size: Option<usize>,
    /// Largest allowed extrapolation distance, default `2 max |tau|`.
    pub max_extrapolation: Option<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            order: 13,
            step: 1.0 / 16.0,
            corrections: 2,
            startup_divisor: 8,
            inner_step: None,
            stencil_size: None,
            max_extrapolation: None,
        }
    }
}

impl IntegratorConfig {
    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn with_corrections(mut self, corrections: usize) -> Self {
        self.corrections = corrections;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(1..=MAX_ORDER).contains(&self.order) {
            return bad(format!("order {} outside 1..={MAX_ORDER}", self.order));
        }
        if self.step == 0.0 || !self.step.is_finite() {
            return bad(format!("step {} must be finite and nonzero", self.step));
        }
        if self.corrections < 1 {
            return bad("corrections must be at least 1".into());
        }
        if self.startup_divisor < 1 {
            return bad("startup divisor must be at least 1".into());
        }
        if let Some(h) = self.inner_step {
            if !(h > 0.0) || !h.is_finite() {
                return bad(format!("inner step {h} must be positive"));
            }
        }
        if let Some(s) = self.stencil_size {
            if s < 2 || s > self.order + 1 {
                return bad(format!("stencil size {s} outside 2..={}", self.order + 1));
            }
        }
        if let Some(m) = self.max_extrapolation {
            if !(m >= 0.0) {
                return bad(format!("max extrapolation {m} must be non-negative"));
            }
        }
        Ok(())
    }

    fn resolve(&self, delays: &[f64]) -> Result<Resolved> {
        self.validate()?;
        if let Some(tau) = delays.iter().find(|t| **t == 0.0 || !t.is_finite()) {
            return Err(Error::InvalidConfig(format!("delay {tau} must be finite and nonzero")));
        }
        let tau_min = delays.iter().map(|t| t.abs()).fold(f64::INFINITY, f64::min);
        let tau_max = delays.iter().map(|t| t.abs()).fold(0.0, f64::max);
        let inner_step = self.inner_step.unwrap_or(if delays.is_empty() {
            self.step.abs() / self.startup_divisor as f64
        } else {
            tau_min / 8.0
        });
        Ok(Resolved {
            order: self.order,
            h: self.step,
            corrections: self.corrections,
            divisor: self.startup_divisor,
            inner_step,
            stencil: self.stencil_size.unwrap_or(self.order.max(2)),
            max_extrapolation: self.max_extrapolation.unwrap_or(2.0 * tau_max),
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct Resolved {
    order: usize,
    h: f64,
    corrections: usize,
    divisor: usize,
    inner_step: f64,
    stencil: usize,
    max_extrapolation: f64,
}

/// How a delayed value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Retrieval {
    Nested,
    Interpolated,
    Extrapolated,
}

impl Retrieval {
    pub fn as_str(self) -> &'static str {
        match self {
            Retrieval::Nested => "nested",
            Retrieval::Interpolated => "interpolated",
            Retrieval::Extrapolated => "extrapolated",
        }
    }
}

/// One delayed value consumed by a right-hand-side evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayedQuery {
    pub eval_time: f64,
    pub delay_index: usize,
    pub query_time: f64,
    pub retrieval: Retrieval,
    pub value: DelayedValue,
}

/// Predicted state `x_n + h sum_{j<k} gamma_j nabla^j f_n`.
pub fn predict(x_n: &[f64], h: f64, gamma: &[f64], columns: &[Vec<f64>], k: usize) -> Vec<f64> {
    let mut x = x_n.to_vec();
    for j in 0..k {
        for (xi, d) in x.iter_mut().zip(&columns[j]) {
            *xi += h * gamma[j] * d;
        }
    }
    x
}

/// Corrector in the one-term form `x_p + h gamma_k nabla^k f_{n+1}`.
pub fn correct(x_pred: &[f64], h: f64, gamma_k: f64, nabla_k: &[f64]) -> Vec<f64> {
    x_pred.iter().zip(nabla_k).map(|(x, d)| x + h * gamma_k * d).collect()
}

/// Adams-Moulton corrector in its classic form
/// `x_n + h sum_{j<=k} c_j nabla^j f_{n+1}`; `columns` belong to node `n+1`.
pub fn classic_correct(x_n: &[f64], h: f64, c: &[f64], columns: &[Vec<f64>], k: usize) -> Vec<f64> {
    let mut x = x_n.to_vec();
    for j in 0..=k {
        for (xi, d) in x.iter_mut().zip(&columns[j]) {
            *xi += h * c[j] * d;
        }
    }
    x
}

/// Stateful integrator over one system and direction.
pub struct Abmd<'a, S: DdeSystem + ?Sized> {
    system: &'a S,
    cfg: Resolved,
    coeffs: CoefficientTable,
    startup_rk: ButcherTableau,
    startup_grid: Option<Trajectory>,
    traj: Trajectory,
    log: Option<Vec<DelayedQuery>>,
}

impl<'a, S: DdeSystem + ?Sized> Abmd<'a, S> {
    /// Validates the configuration and runs the startup procedure.
    pub fn new(system: &'a S, iv: &InitialValue, config: &IntegratorConfig) -> Result<Self> {
        Self::build(system, iv, config, false)
    }

    /// Like [`Abmd::new`], additionally recording every delayed value used.
    pub fn with_log(system: &'a S, iv: &InitialValue, config: &IntegratorConfig) -> Result<Self> {
        Self::build(system, iv, config, true)
    }

    fn build(system: &'a S, iv: &InitialValue, config: &IntegratorConfig, log: bool) -> Result<Self> {
        let cfg = config.resolve(system.delays())?;
        if iv.x0.len() != system.dim() {
            return Err(Error::DimensionMismatch { expected: system.dim(), got: iv.x0.len() });
        }
        let mut abmd = Self {
            system,
            cfg,
            coeffs: CoefficientTable::new(cfg.order),
            startup_rk: dopri8_tableau(),
            startup_grid: None,
            traj: Trajectory::new(iv.t0, cfg.h, system.dim(), cfg.order)?,
            log: log.then(Vec::new),
        };
        abmd.startup(iv)?;
        Ok(abmd)
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.traj
    }

    pub fn into_trajectory(self) -> Trajectory {
        self.traj
    }

    /// The fine Dormand-Prince grid built during startup.
    pub fn startup_grid(&self) -> Option<&Trajectory> {
        self.startup_grid.as_ref()
    }

    pub fn coefficients(&self) -> &CoefficientTable {
        &self.coeffs
    }

    pub fn take_log(&mut self) -> Vec<DelayedQuery> {
        self.log.as_mut().map(std::mem::take).unwrap_or_default()
    }

    fn record(&mut self, eval_time: f64, delay_index: usize, query_time: f64, retrieval: Retrieval, value: &DelayedValue) {
        if let Some(log) = self.log.as_mut() {
            log.push(DelayedQuery { eval_time, delay_index, query_time, retrieval, value: value.clone() });
        }
    }

    fn eval(&self, t: f64, x: &[f64], delayed: &[DelayedValue]) -> Result<Vec<f64>> {
        let f = self.system.rhs(t, x, delayed)?;
        if f.len() != x.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), got: f.len() });
        }
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t, stage: 0 });
        }
        Ok(f)
    }

    fn nested_delayed(&mut self, t: f64, x: &[f64]) -> Result<Vec<DelayedValue>> {
        let system = self.system;
        let delays = system.delays();
        let mut out = Vec::with_capacity(delays.len());
        for (i, &tau) in delays.iter().enumerate() {
            let d = solve_delayed(system, t, x, -tau, self.cfg.inner_step)?;
            self.record(t, i, t - tau, Retrieval::Nested, &d);
            out.push(d);
        }
        Ok(out)
    }

    fn sample_from(&self, grid: &Trajectory, q: f64) -> Result<(DelayedValue, Retrieval)> {
        let s = self.cfg.stencil;
        let limit = self.cfg.max_extrapolation;
        let state = grid.sample(q, SampleKind::State, s, limit)?;
        let derivative = grid.sample(q, SampleKind::Derivative, s, limit)?;
        let tag = if state.extrapolated { Retrieval::Extrapolated } else { Retrieval::Interpolated };
        Ok((DelayedValue { state: state.value, derivative: derivative.value }, tag))
    }

    fn fine_grid_covering(&self, q: f64) -> Option<&Trajectory> {
        self.startup_grid
            .as_ref()
            .filter(|g| g.len() >= self.cfg.stencil && g.covers(q))
    }

    /// Delayed values from the stored history (fine startup grid first).
    fn history_delayed(&mut self, t: f64) -> Result<Vec<DelayedValue>> {
        let system = self.system;
        let delays = system.delays();
        let mut out = Vec::with_capacity(delays.len());
        for (i, &tau) in delays.iter().enumerate() {
            let q = t - tau;
            let (d, tag) = match self.fine_grid_covering(q) {
                Some(fine) => self.sample_from(fine, q)?,
                None => self.sample_from(&self.traj, q)?,
            };
            self.record(t, i, q, tag, &d);
            out.push(d);
        }
        Ok(out)
    }

    fn startup(&mut self, iv: &InitialValue) -> Result<()> {
        let k = self.cfg.order;
        let div = self.cfg.divisor;
        let hf = self.cfg.h / div as f64;
        let nfine = (k - 1) * div;
        let tableau = self.startup_rk.clone();

        let mut xs = Vec::with_capacity(nfine + 1);
        let mut fs = Vec::with_capacity(nfine + 1);
        xs.push(iv.x0.clone());
        for i in 0..nfine {
            let t = iv.t0 + i as f64 * hf;
            let (next, slope) = rk_step_with_slope(
                &tableau,
                |s, y| {
                    let delayed = self.nested_delayed(s, y)?;
                    self.eval(s, y, &delayed)
                },
                t,
                &xs[i],
                hf,
            )?;
            fs.push(slope);
            xs.push(next);
        }
        let t_last = iv.t0 + nfine as f64 * hf;
        let x_last = xs[nfine].clone();
        let delayed = self.nested_delayed(t_last, &x_last)?;
        fs.push(self.eval(t_last, &x_last, &delayed)?);
        self.startup_grid = Some(Trajectory::from_records(iv.t0, hf, 0, xs.clone(), fs)?);

        let mut abm_xs = Vec::with_capacity(k);
        let mut abm_fs = Vec::with_capacity(k);
        for j in 0..k {
            let t = self.traj.time(j);
            let x = xs[j * div].clone();
            let system = self.system;
            let delays = system.delays();
            let mut delayed = Vec::with_capacity(delays.len());
            for (i, &tau) in delays.iter().enumerate() {
                let q = t - tau;
                match self.fine_grid_covering(q) {
                    Some(fine) => {
                        let (d, tag) = self.sample_from(fine, q)?;
                        self.record(t, i, q, tag, &d);
                        delayed.push(d);
                    }
                    None => {
                        let d = solve_delayed(system, t, &x, -tau, self.cfg.inner_step)?;
                        self.record(t, i, q, Retrieval::Nested, &d);
                        delayed.push(d);
                    }
                }
            }
            abm_fs.push(self.eval(t, &x, &delayed)?);
            abm_xs.push(x);
        }
        self.traj = Trajectory::from_records(iv.t0, self.cfg.h, k, abm_xs, abm_fs)?;
        Ok(())
    }

    /// One predict-(evaluate-correct)^m step appending node `n+1`.
    pub fn step(&mut self) -> Result<()> {
        let k = self.cfg.order;
        let h = self.cfg.h;
        let n = self.traj.len() - 1;
        let t_next = self.traj.time(n + 1);
        let gamma = self.coeffs.gamma();
        let columns = self.traj.differences().columns();
        if columns.len() < k {
            return Err(Error::InsufficientRecords { need: k, have: self.traj.len() });
        }
        let x_pred = predict(self.traj.state(n), h, gamma, columns, k);
        let mut f_guess = vec![0.0; x_pred.len()];
        for col in &columns[..k] {
            for (g, d) in f_guess.iter_mut().zip(col) {
                *g += d;
            }
        }
        let gamma_k = gamma[k];
        self.traj.push(&x_pred, &f_guess)?;

        let mut x = x_pred.clone();
        for _ in 0..self.cfg.corrections {
            let delayed = self.history_delayed(t_next)?;
            let f = self.eval(t_next, &x, &delayed)?;
            self.traj.replace_newest_f(&f)?;
            let nabla_k = self.traj.differences().get(k).expect("depth-k column after extension");
            x = correct(&x_pred, h, gamma_k, nabla_k);
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { t: t_next, stage: 0 });
            }
            self.traj.replace_newest_x(&x)?;
        }
        Ok(())
    }

    /// Steps until the trajectory holds `nodes` records.
    pub fn advance_to_len(&mut self, nodes: usize) -> Result<()> {
        while self.traj.len() < nodes {
            self.step()?;
        }
        Ok(())
    }
}

/// Number of grid intervals between `t0` and `t_end`, checking direction and
/// minimum span.
pub fn grid_intervals(t0: f64, t_end: f64, config: &IntegratorConfig) -> Result<usize> {
    config.validate()?;
    let span = t_end - t0;
    let h = config.step;
    if span == 0.0 || span.signum() != h.signum() {
        return Err(Error::InvalidConfig(format!(
            "span {span} and step {h} must be nonzero with the same sign"
        )));
    }
    if span.abs() < config.order as f64 * h.abs() {
        return Err(Error::InvalidConfig(format!(
            "span {} shorter than order * |step| = {}",
            span.abs(),
            config.order as f64 * h.abs()
        )));
    }
    Ok((span / h + 1e-9).floor() as usize)
}

/// Integrates from `iv` to the last grid node not beyond `t_end`.
pub fn integrate<S: DdeSystem + ?Sized>(
    system: &S,
    iv: &InitialValue,
    t_end: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    let n = grid_intervals(iv.t0, t_end, config)?;
    let mut abmd = Abmd::new(system, iv, config)?;
    abmd.advance_to_len(n + 1)?;
    Ok(abmd.into_trajectory())
}

/// [`integrate`] plus the log of every delayed value consumed.
pub fn integrate_logged<S: DdeSystem + ?Sized>(
    system: &S,
    iv: &InitialValue,
    t_end: f64,
    config: &IntegratorConfig,
) -> Result<(Trajectory, Vec<DelayedQuery>)> {
    let n = grid_intervals(iv.t0, t_end, config)?;
    let mut abmd = Abmd::with_log(system, iv, config)?;
    abmd.advance_to_len(n + 1)?;
    let log = abmd.take_log();
    Ok((abmd.into_trajectory(), log))
}

/// Startup only: the first `order` nodes of the multistep grid.
pub fn startup<S: DdeSystem + ?Sized>(
    system: &S,
    iv: &InitialValue,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    Abmd::new(system, iv, config).map(Abmd::into_trajectory)
}
