//! Barycentric Lagrange interpolation.
//!
//! For nodes `t_0..t_p` the weights are `w_j = 1 / prod_{k != j} (t_j - t_k)`
//! and the interpolant is evaluated in ratio form
//!
//! ```text
//! x(t) = sum_j (w_j / (t - t_j)) x_j  /  sum_j w_j / (t - t_j)
//! ```
//!
//! Outside the node span the same sums extrapolate, multiplied by
//! `prod_j (t - t_j)` instead of divided by `sum_j w_j / (t - t_j)`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StencilWeights {
    nodes: Vec<f64>,
    w: Vec<f64>,
}

impl StencilWeights {
    /// Computes weights for arbitrary pairwise distinct nodes in O(p^2).
    pub fn new(nodes: &[f64]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidStencil("no nodes".into()));
        }
        let mut w = vec![1.0; nodes.len()];
        for (j, &tj) in nodes.iter().enumerate() {
            let mut prod = 1.0;
            for (k, &tk) in nodes.iter().enumerate() {
                if k != j {
                    let d = tj - tk;
                    if d == 0.0 {
                        return Err(Error::InvalidStencil(format!(
                            "duplicate node {tj} at positions {k} and {j}"
                        )));
                    }
                    prod *= d;
                }
            }
            w[j] = 1.0 / prod;
        }
        Ok(Self { nodes: nodes.to_vec(), w })
    }

    /// Weights for the equidistant stencil `0, h, 2h, ..., (len-1)h`.
    pub fn equidistant(len: usize, h: f64) -> Result<Self> {
        if h == 0.0 || !h.is_finite() {
            return Err(Error::InvalidStencil(format!("step {h}")));
        }
        let nodes: Vec<f64> = (0..len).map(|j| j as f64 * h).collect();
        Self::new(&nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// Same interpolant with every weight multiplied by `factor`.
    /// Evaluates the interpolant of `values` (one vector per node) at `t`.
    pub fn eval<V: AsRef<[f64]>>(&self, values: &[V], t: f64) -> Vec<f64> {
        barycentric_eval(&self.nodes, &self.w, values, t)
    }
}

/// Barycentric evaluation with explicit node times.
///
/// `weights` may belong to a translated copy of `nodes` (equidistant stencils
/// share weights), since a common shift leaves every difference unchanged.
/// An exact node hit returns the stored vector.
pub fn barycentric_eval<V: AsRef<[f64]>>(
    nodes: &[f64],
    weights: &[f64],
    values: &[V],
    t: f64,
) -> Vec<f64> {
    assert_eq!(nodes.len(), values.len(), "one value per node");
    assert_eq!(nodes.len(), weights.len(), "one weight per node");
    if let Some(j) = nodes.iter().position(|&tj| tj == t) {
        return values[j].as_ref().to_vec();
    }
    let dim = values[0].as_ref().len();
    let (lo, hi) = nodes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &tj| (lo.min(tj), hi.max(tj)));
    let mut num = vec![0.0; dim];
    let mut den = 0.0;
    for ((&tj, &wj), v) in nodes.iter().zip(weights).zip(values) {
        let a = wj / (t - tj);
        den += a;
        for (n, x) in num.iter_mut().zip(v.as_ref()) {
            *n += a * x;
        }
    }
    // the ratio form loses accuracy away from the nodes; outside them use
    // l(t) sum_j w_j x_j / (t - t_j) with l(t) = prod_j (t - t_j)
    let scale = if (lo..=hi).contains(&t) {
        1.0 / den
    } else {
        nodes.iter().map(|&tj| t - tj).product()
    };
    for n in &mut num {
        *n *= scale;
    }
    num
}

/// Shared cache of equidistant stencil weights keyed by stencil length and
/// signed step.
#[derive(Debug, Default)]
pub struct WeightCache {
    map: RwLock<HashMap<(usize, u64), Arc<StencilWeights>>>,
}

impl WeightCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, len: usize, h: f64) -> Result<Arc<StencilWeights>> {
        let key = (len, h.to_bits());
        if let Some(w) = self.map.read().expect("weight cache poisoned").get(&key) {
            return Ok(Arc::clone(w));
        }
        let w = Arc::new(StencilWeights::equidistant(len, h)?);
        let mut map = self.map.write().expect("weight cache poisoned");
        Ok(Arc::clone(map.entry(key).or_insert(w)))
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("weight cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
