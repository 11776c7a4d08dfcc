//! Nested integration: delayed values from the delay-free reduction
//! `y' = g(t, y) = f(t, y, y, 0)` integrated from the current point.

use crate::error::{Error, Result};
use crate::rk::{rk4_tableau, rk_step, ButcherTableau};
use crate::system::{DdeSystem, DelayedValue};

/// The delay-free reduction of a [`DdeSystem`]: every delayed state slot
/// receives `y` and every delayed derivative slot receives zero.
pub struct ReducedOde<'a, S: ?Sized> {
    system: &'a S,
}

pub fn reduce<S: DdeSystem + ?Sized>(system: &S) -> ReducedOde<'_, S> {
    ReducedOde { system }
}

impl<S: DdeSystem + ?Sized> ReducedOde<'_, S> {
    pub fn dim(&self) -> usize {
        self.system.dim()
    }

    pub fn eval(&self, t: f64, y: &[f64]) -> Result<Vec<f64>> {
        let slot = DelayedValue { state: y.to_vec(), derivative: vec![0.0; y.len()] };
        let delayed = vec![slot; self.system.delays().len()];
        self.system.rhs(t, y, &delayed)
    }
}

/// Approximates `(x(t_n + offset), x'(t_n + offset))` by integrating the
/// reduced ODE from `(t_n, x_n)` with `ceil(|offset| / inner_h)` RK4 steps.
pub fn solve_delayed<S: DdeSystem + ?Sized>(
    system: &S,
    t_n: f64,
    x_n: &[f64],
    offset: f64,
    inner_h: f64,
) -> Result<DelayedValue> {
    solve_delayed_with(&rk4_tableau(), system, t_n, x_n, offset, inner_h)
}

pub fn solve_delayed_with<S: DdeSystem + ?Sized>(
    tableau: &ButcherTableau,
    system: &S,
    t_n: f64,
    x_n: &[f64],
    offset: f64,
    inner_h: f64,
) -> Result<DelayedValue> {
    if !(inner_h > 0.0) || !inner_h.is_finite() {
        return Err(Error::InvalidConfig(format!("inner step {inner_h} must be positive")));
    }
    let ode = reduce(system);
    let steps = (offset.abs() / inner_h).ceil() as usize;
    let mut y = x_n.to_vec();
    if steps > 0 {
        let dt = offset / steps as f64;
        for i in 0..steps {
            y = rk_step(tableau, |t, y| ode.eval(t, y), t_n + i as f64 * dt, &y, dt)?;
        }
    }
    let derivative = ode.eval(t_n + offset, &y)?;
    if derivative.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { t: t_n + offset, stage: 0 });
    }
    Ok(DelayedValue { state: y, derivative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::FnSystem;

    fn delayed_state_system(tau: f64) -> impl DdeSystem {
        FnSystem::new(1, vec![tau], |_t, _x, d: &[DelayedValue]| Ok(d[0].state.clone()))
    }

    #[test]
    fn reduction_substitutes_state_and_zero() {
        let sys = delayed_state_system(0.5);
        assert_eq!(reduce(&sys).eval(0.0, &[2.0]).unwrap(), vec![2.0]);
        let neutral = FnSystem::new(1, vec![0.5], |_t, _x, d: &[DelayedValue]| Ok(d[0].derivative.clone()));
        assert_eq!(reduce(&neutral).eval(0.0, &[2.0]).unwrap(), vec![0.0]);
        let two = FnSystem::new(1, vec![0.5, -0.25], |_t, _x, d: &[DelayedValue]| {
            assert_eq!(d.len(), 2);
            Ok(vec![d[0].state[0] + d[1].state[0] + d[0].derivative[0] + d[1].derivative[0]])
        });
        assert_eq!(reduce(&two).eval(0.0, &[1.5]).unwrap(), vec![3.0]);
    }

    #[test]
    fn zero_offset_returns_current_point() {
        let sys = delayed_state_system(0.096);
        let d = solve_delayed(&sys, 1.0, &[3.0], 0.0, 0.012).unwrap();
        assert_eq!(d.state, vec![3.0]);
        assert_eq!(d.derivative, vec![3.0]);
    }

    #[test]
    fn exponential_reduction() {
        let tau = 0.096;
        let sys = delayed_state_system(tau);
        let d = solve_delayed(&sys, 0.0, &[1.0], tau, tau / 8.0).unwrap();
        assert!((d.state[0] - tau.exp()).abs() <= 1e-8);
        assert_eq!(d.derivative, d.state);
        let back = solve_delayed(&sys, 0.0, &[1.0], -tau, tau / 8.0).unwrap();
        assert!((back.state[0] - (-tau).exp()).abs() <= 1e-8);
    }

    #[test]
    fn rejects_bad_inner_step() {
        let sys = delayed_state_system(1.0);
        assert!(solve_delayed(&sys, 0.0, &[1.0], 1.0, 0.0).is_err());
        assert!(solve_delayed(&sys, 0.0, &[1.0], 1.0, -0.1).is_err());
    }
}
