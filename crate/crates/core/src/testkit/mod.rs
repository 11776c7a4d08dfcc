//! Independent oracles for tests and threshold calibration.
//!
//! Nothing here calls into the integrator driver: coefficients are rebuilt in
//! exact arithmetic by two different routes, the multistep scheme is
//! reimplemented in ordinate form and reference trajectories come from a
//! one-step method fed with exact delayed values.

mod rational;

pub use rational::RationalScalar;

use nalgebra::Matrix3;

use crate::error::Result;
use crate::models::ManufacturedDde;
use crate::rk::{dopri8_tableau, rk_step};
use crate::system::DelayedValue;

type Q = RationalScalar;

/// `c_j` and `gamma_j`, `j = 0..=k_max`, from the recurrence
/// `c_0 = 1, c_j = -sum_{i<j} c_i / (j + 1 - i)`, `gamma_j = sum_{i<=j} c_i`.
pub fn rational_adams(k_max: usize) -> (Vec<Q>, Vec<Q>) {
    let mut c = vec![Q::one()];
    for j in 1..=k_max {
        let mut s = Q::zero();
        for (i, ci) in c.iter().enumerate() {
            s = &s - &(ci / &Q::integer((j + 1 - i) as i64));
        }
        c.push(s);
    }
    let mut gamma = Vec::with_capacity(k_max + 1);
    let mut acc = Q::zero();
    for ci in &c {
        acc = &acc + ci;
        gamma.push(acc.clone());
    }
    (c, gamma)
}

/// Polynomial with exact coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPoly(pub Vec<Q>);

impl RationalPoly {
    pub fn constant(v: Q) -> Self {
        Self(vec![v])
    }

    /// Multiplies by `(s - root)`.
    pub fn times_linear(&self, root: &Q) -> Self {
        let mut out = vec![Q::zero(); self.0.len() + 1];
        for (i, a) in self.0.iter().enumerate() {
            out[i + 1] = &out[i + 1] + a;
            out[i] = &out[i] - &(a * root);
        }
        Self(out)
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    pub fn eval(&self, s: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, a| &(&acc * s) + a)
    }

    pub fn integrate(&self, lo: &Q, hi: &Q) -> Q {
        let anti = RationalPoly(
            std::iter::once(Q::zero())
                .chain(self.0.iter().enumerate().map(|(i, a)| a / &Q::integer(i as i64 + 1)))
                .collect(),
        );
        &anti.eval(hi) - &anti.eval(lo)
    }
}

/// `s (s + 1) ... (s + j - 1) / j!`, the backward-difference binomial.
fn rising_binomial(j: usize) -> RationalPoly {
    let mut p = RationalPoly::constant(Q::one());
    for i in 0..j {
        p = p.times_linear(&Q::integer(-(i as i64)));
    }
    let mut fact = Q::one();
    for i in 1..=j {
        fact = &fact * &Q::integer(i as i64);
    }
    p.scale(&fact.recip())
}

/// `c_j` and `gamma_j` by integrating the Newton backward interpolant:
/// `gamma_j = int_0^1 binom(s + j - 1, j) ds`, `c_j = int_{-1}^0 binom(s + j - 1, j) ds`.
pub fn adams_by_integration(k_max: usize) -> (Vec<Q>, Vec<Q>) {
    let (zero, one, minus_one) = (Q::zero(), Q::one(), Q::integer(-1));
    let mut c = Vec::with_capacity(k_max + 1);
    let mut gamma = Vec::with_capacity(k_max + 1);
    for j in 0..=k_max {
        let p = rising_binomial(j);
        gamma.push(p.integrate(&zero, &one));
        c.push(p.integrate(&minus_one, &zero));
    }
    (c, gamma)
}

/// Weights `w_m = int_0^1 l_m(s) ds` of the Lagrange basis on `nodes` (in
/// units of the step, relative to `t_n`).
pub fn lagrange_quadrature(nodes: &[i64]) -> Vec<Q> {
    let (zero, one) = (Q::zero(), Q::one());
    nodes
        .iter()
        .enumerate()
        .map(|(m, &sm)| {
            let mut p = RationalPoly::constant(Q::one());
            let mut denom = Q::one();
            for (i, &si) in nodes.iter().enumerate() {
                if i != m {
                    p = p.times_linear(&Q::integer(si));
                    denom = &denom * &Q::integer(sm - si);
                }
            }
            p.scale(&denom.recip()).integrate(&zero, &one)
        })
        .collect()
}

/// Ordinate-form Adams-Bashforth weights on `f_n, f_{n-1}, ..., f_{n-k+1}`.
pub fn adams_bashforth_weights(k: usize) -> Vec<f64> {
    let nodes: Vec<i64> = (0..k as i64).map(|m| -m).collect();
    lagrange_quadrature(&nodes).iter().map(Q::to_f64).collect()
}

/// Ordinate-form Adams-Moulton weights on `f_{n+1}, f_n, ..., f_{n+1-k}`.
pub fn adams_moulton_weights(k: usize) -> Vec<f64> {
    let nodes: Vec<i64> = (0..=k as i64).map(|m| 1 - m).collect();
    lagrange_quadrature(&nodes).iter().map(Q::to_f64).collect()
}

/// Textbook predictor-corrector in ordinate form: `k`-step Adams-Bashforth
/// predictor, `(k+1)`-point Adams-Moulton corrector, `corrections`
/// evaluate-correct pairs. Starts from `start` (the first `k` states) and
/// returns all `k + steps` states.
pub fn textbook_abm<F>(
    mut f: F,
    t0: f64,
    h: f64,
    k: usize,
    corrections: usize,
    start: &[Vec<f64>],
    steps: usize,
) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
{
    assert_eq!(start.len(), k);
    let ab = adams_bashforth_weights(k);
    let am = adams_moulton_weights(k);
    let mut xs = start.to_vec();
    let mut fs = Vec::with_capacity(k + steps);
    for (i, x) in xs.iter().enumerate() {
        fs.push(f(t0 + i as f64 * h, x)?);
    }
    for n in (k - 1)..(k - 1 + steps) {
        let t1 = t0 + (n + 1) as f64 * h;
        let xn = &xs[n];
        let weighted = |weights: &[f64], newest: Option<&Vec<f64>>| -> Vec<f64> {
            let mut acc = vec![0.0; xn.len()];
            for (i, w) in weights.iter().enumerate() {
                let fi = match (newest, i) {
                    (Some(f1), 0) => f1,
                    (Some(_), i) => &fs[n + 1 - i],
                    (None, i) => &fs[n - i],
                };
                for (a, v) in acc.iter_mut().zip(fi) {
                    *a += w * v;
                }
            }
            xn.iter().zip(&acc).map(|(x, a)| x + h * a).collect()
        };
        let xp = weighted(&ab, None);
        let mut f1 = f(t1, &xp)?;
        let mut x = xp;
        for c in 0..corrections {
            x = weighted(&am, Some(&f1));
            if c + 1 < corrections {
                f1 = f(t1, &x)?;
            }
        }
        xs.push(x);
        fs.push(f1);
    }
    Ok(xs)
}

/// `nabla^j f` at the newest entry of `fs` for `j = 0..=depth`, straight from
/// the recursive definition.
pub fn recursive_differences(fs: &[Vec<f64>], depth: usize) -> Vec<Vec<f64>> {
    let mut level: Vec<Vec<f64>> = fs.to_vec();
    let mut out = Vec::new();
    for _ in 0..=depth.min(fs.len().saturating_sub(1)) {
        out.push(level.last().expect("non-empty").clone());
        level = level
            .windows(2)
            .map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect())
            .collect();
    }
    out
}

/// Evaluates `sum_i coeffs[i] t^i` by Horner's rule.
pub fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, a| acc * t + a)
}

/// Dormand-Prince 8 at `h / 4` with the exact delayed state and derivative of
/// the manufactured solution; returns states at `t0 + i h`, `i = 0..=steps`.
pub fn reference_solution(m: &ManufacturedDde, t0: f64, h: f64, steps: usize) -> Result<Vec<Vec<f64>>> {
    use crate::system::DdeSystem;
    let rhs = |t: f64, y: &[f64]| {
        let d = DelayedValue { state: m.exact(t - m.tau), derivative: m.exact_derivative(t - m.tau) };
        m.rhs(t, y, &[d])
    };
    reference_ode(rhs, t0, &m.exact(t0), h, steps)
}

/// Dormand-Prince 8 at `h / 4` for an ordinary differential equation.
pub fn reference_ode<F>(mut f: F, t0: f64, x0: &[f64], h: f64, steps: usize) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
{
    let tab = dopri8_tableau();
    let hf = h / 4.0;
    let mut out = vec![x0.to_vec()];
    let mut y = x0.to_vec();
    for i in 0..steps {
        for j in 0..4 {
            y = rk_step(&tab, &mut f, t0 + i as f64 * h + j as f64 * hf, &y, hf)?;
        }
        out.push(y.clone());
    }
    Ok(out)
}

/// Eccentric anomaly by bisection of the monotone `E - e sin E - M`.
pub fn kepler_bisection(mean_anomaly: f64, e: f64) -> f64 {
    let g = |x: f64| x - e * x.sin() - mean_anomaly;
    let (mut lo, mut hi) = (mean_anomaly - e - 1.0, mean_anomaly + e + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Fourth-order central difference of a matrix-valued function.
pub fn fd_matrix_derivative<F>(f: F, t: f64, dt: f64) -> Matrix3<f64>
where
    F: Fn(f64) -> Matrix3<f64>,
{
    (f(t - 2.0 * dt) - f(t + 2.0 * dt) + (f(t + dt) - f(t - dt)) * 8.0) / (12.0 * dt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn spot_coefficients() {
        let (c, gamma) = rational_adams(4);
        assert_eq!(c[3], q(-1, 24));
        assert_eq!(gamma[4], q(251, 720));
        assert_eq!(gamma[0], Q::one());
    }

    #[test]
    fn recurrence_matches_integral_form() {
        assert_eq!(rational_adams(13), adams_by_integration(13));
    }

    #[test]
    fn ordinate_weights_are_textbook() {
        assert_eq!(adams_bashforth_weights(2), vec![1.5, -0.5]);
        let am = adams_moulton_weights(2);
        assert_eq!(am, vec![5.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0]);
        for k in 1..=13 {
            let s: f64 = adams_bashforth_weights(k).iter().sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn recursive_differences_small() {
        let fs = vec![vec![1.0], vec![4.0], vec![9.0], vec![16.0]];
        let d = recursive_differences(&fs, 3);
        assert_eq!(d, vec![vec![16.0], vec![7.0], vec![2.0], vec![0.0]]);
    }

    #[test]
    fn reference_manufactured_fine_resolution() {
        let m = ManufacturedDde::default();
        let h = m.tau / 16.0;
        let xs = reference_solution(&m, 0.0, h, 480).unwrap();
        let err = xs
            .iter()
            .enumerate()
            .flat_map(|(i, x)| {
                let g = m.exact(i as f64 * h);
                x.iter().zip(g).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>()
            })
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "{err:e}");
    }

    #[test]
    fn reference_decay_and_zero() {
        let xs = reference_ode(|_, y| Ok(vec![-y[0]]), 0.0, &[1.0], 1.0 / 16.0, 32).unwrap();
        let e = (-2f64).exp();
        assert!(((xs[32][0] - e) / e).abs() < 1e-13);
        let zs = reference_ode(|_, y| Ok(vec![0.0; y.len()]), 0.0, &[1.0, 2.0], 0.5, 4).unwrap();
        assert!(zs.iter().all(|z| z == &vec![1.0, 2.0]));
    }

    #[test]
    fn bisection_kepler() {
        for (m, e) in [(0.3, 0.0549), (5.0, 0.5), (-2.0, 0.9)] {
            let x = kepler_bisection(m, e);
            assert!((x - e * x.sin() - m).abs() < 1e-14);
        }
    }

    #[test]
    fn finite_difference_of_quadratic() {
        let f = |t: f64| Matrix3::from_diagonal_element(t * t);
        let d = fd_matrix_derivative(f, 1.5, 1e-3);
        assert!((d[(0, 0)] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn horner_cubic() {
        assert_eq!(horner(&[1.0, -2.0, 0.0, 3.0], 2.0), 1.0 - 4.0 + 24.0);
    }
}
