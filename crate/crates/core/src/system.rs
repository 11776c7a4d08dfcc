//! Neutral delay differential equations `x'(t) = f(t, x(t), x(t - tau_i), x'(t - tau_i))`.

use crate::error::Result;

/// Delayed state and derivative handed to the right-hand side, one per delay.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayedValue {
    pub state: Vec<f64>,
    pub derivative: Vec<f64>,
}

/// A system with constant delays.
///
/// Slot `i` of `delayed` always carries the solution at `t - delays()[i]`,
/// whichever way the integration runs. Backward integration therefore asks
/// for times that have not been computed yet.
pub trait DdeSystem {
    fn dim(&self) -> usize;

    /// Constant delays. Empty for an ordinary differential equation.
    fn delays(&self) -> &[f64];

    fn rhs(&self, t: f64, x: &[f64], delayed: &[DelayedValue]) -> Result<Vec<f64>>;
}

impl<S: DdeSystem + ?Sized> DdeSystem for &S {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn delays(&self) -> &[f64] {
        (**self).delays()
    }

    fn rhs(&self, t: f64, x: &[f64], delayed: &[DelayedValue]) -> Result<Vec<f64>> {
        (**self).rhs(t, x, delayed)
    }
}

/// Adapts a closure into a [`DdeSystem`].
pub struct FnSystem<F> {
    dim: usize,
    delays: Vec<f64>,
    f: F,
}

impl<F> FnSystem<F>
where
    F: Fn(f64, &[f64], &[DelayedValue]) -> Result<Vec<f64>>,
{
    pub fn new(dim: usize, delays: Vec<f64>, f: F) -> Self {
        Self { dim, delays, f }
    }
}

impl<F> DdeSystem for FnSystem<F>
where
    F: Fn(f64, &[f64], &[DelayedValue]) -> Result<Vec<f64>>,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn delays(&self) -> &[f64] {
        &self.delays
    }

    fn rhs(&self, t: f64, x: &[f64], delayed: &[DelayedValue]) -> Result<Vec<f64>> {
        (self.f)(t, x, delayed)
    }
}

/// Initial value `x(t0) = x0`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialValue {
    pub t0: f64,
    pub x0: Vec<f64>,
}

impl InitialValue {
    pub fn new(t0: f64, x0: Vec<f64>) -> Self {
        Self { t0, x0 }
    }
}
