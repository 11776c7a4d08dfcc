//! Neutral DDEs with a known solution.
//!
//! For a smooth curve `g` the right-hand side
//!
//! ```text
//! f(t, x, x_d, xd_d) = g'(t) + alpha (x - g(t)) + beta (x_d - g(t - tau)) + gamma (xd_d - g'(t - tau))
//! ```
//!
//! vanishes on `x = g` apart from `g'(t)`, so `g` solves the equation in both
//! directions of time through `x(t0) = g(t0)`.

use crate::error::{Error, Result};
use crate::system::{DdeSystem, DelayedValue, InitialValue};

#[derive(Debug, Clone, PartialEq)]
pub struct ManufacturedDde {
    /// Component `i` of the solution is `amplitude[i] * sin(frequency[i] * t + phase[i])`.
    pub amplitude: Vec<f64>,
    pub frequency: Vec<f64>,
    pub phase: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub tau: f64,
    delays: [f64; 1],
}

impl Default for ManufacturedDde {
    /// Three components with weak delayed coupling and `tau = 1/4`, so the
    /// default step of 1/16 is `tau / 4`.
    fn default() -> Self {
        Self::new(
            vec![1.0, 0.8, 1.2],
            vec![1.4, 2.0, 2.4],
            vec![0.3, 1.1, -0.7],
            -0.4,
            4e-7,
            3e-8,
            0.25,
        )
    }
}

impl ManufacturedDde {
    pub fn new(
        amplitude: Vec<f64>,
        frequency: Vec<f64>,
        phase: Vec<f64>,
        alpha: f64,
        beta: f64,
        gamma: f64,
        tau: f64,
    ) -> Self {
        assert!(amplitude.len() == frequency.len() && frequency.len() == phase.len());
        Self { amplitude, frequency, phase, alpha, beta, gamma, tau, delays: [tau] }
    }

    /// Delay and step ratio of the lunar setting (`tau / h = 1.536` at
    /// `h = 1/16`) with couplings weak enough for backward extrapolation.
    pub fn short_delay() -> Self {
        Self::new(
            vec![1.0, 0.8, 1.2],
            vec![1.4, 2.0, 2.4],
            vec![0.3, 1.1, -0.7],
            -0.4,
            1e-6,
            3e-7,
            0.096,
        )
    }

    /// Same solution with different coupling coefficients.
    pub fn with_coupling(mut self, alpha: f64, beta: f64, gamma: f64) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self.gamma = gamma;
        self
    }

    pub fn exact(&self, t: f64) -> Vec<f64> {
        (0..self.amplitude.len())
            .map(|i| self.amplitude[i] * (self.frequency[i] * t + self.phase[i]).sin())
            .collect()
    }

    pub fn exact_derivative(&self, t: f64) -> Vec<f64> {
        (0..self.amplitude.len())
            .map(|i| {
                self.amplitude[i] * self.frequency[i] * (self.frequency[i] * t + self.phase[i]).cos()
            })
            .collect()
    }

    pub fn initial_value(&self, t0: f64) -> InitialValue {
        InitialValue::new(t0, self.exact(t0))
    }

    pub fn rhs_parts(&self, t: f64, x: &[f64], x_d: &[f64], xd_d: &[f64]) -> Vec<f64> {
        let g = self.exact(t);
        let dg = self.exact_derivative(t);
        let g_d = self.exact(t - self.tau);
        let dg_d = self.exact_derivative(t - self.tau);
        (0..x.len())
            .map(|i| {
                dg[i]
                    + self.alpha * (x[i] - g[i])
                    + self.beta * (x_d[i] - g_d[i])
                    + self.gamma * (xd_d[i] - dg_d[i])
            })
            .collect()
    }
}

impl DdeSystem for ManufacturedDde {
    fn dim(&self) -> usize {
        self.amplitude.len()
    }

    fn delays(&self) -> &[f64] {
        &self.delays
    }

    fn rhs(&self, t: f64, x: &[f64], delayed: &[DelayedValue]) -> Result<Vec<f64>> {
        let d = delayed.first().ok_or(Error::DimensionMismatch { expected: 1, got: 0 })?;
        if x.len() != self.dim() || d.state.len() != self.dim() || d.derivative.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(self.rhs_parts(t, x, &d.state, &d.derivative))
    }
}
