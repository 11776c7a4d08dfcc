//! Equidistant solution history with an incrementally maintained
//! backward-difference table and delayed-value sampling.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::interp::{barycentric_eval, WeightCache};

/// Backward differences `nabla^0 f .. nabla^depth f` at the newest node, plus
/// the columns one node back so the newest `f` can be replaced.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceTable {
    depth: usize,
    cur: Vec<Vec<f64>>,
    prev: Vec<Vec<f64>>,
}

impl DifferenceTable {
    pub fn new(depth: usize) -> Self {
        Self { depth, cur: Vec::new(), prev: Vec::new() }
    }

    /// Builds the table for the newest of `fs` by repeated differencing.
    pub fn from_history<V: AsRef<[f64]>>(depth: usize, fs: &[V]) -> Self {
        let mut table = Self::new(depth);
        if fs.is_empty() {
            return table;
        }
        table.cur = direct_differences(fs, depth);
        if fs.len() > 1 {
            table.prev = direct_differences(&fs[..fs.len() - 1], depth);
        }
        table
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Available columns at the newest node (at most `depth + 1`).
    pub fn columns(&self) -> &[Vec<f64>] {
        &self.cur
    }

    /// `nabla^j f` at the newest node.
    pub fn get(&self, j: usize) -> Option<&[f64]> {
        self.cur.get(j).map(Vec::as_slice)
    }

    pub fn push(&mut self, f: &[f64]) {
        self.prev = std::mem::take(&mut self.cur);
        self.rebuild_newest(f);
    }

    pub fn replace_newest(&mut self, f: &[f64]) {
        self.rebuild_newest(f);
    }

    /// Columns a new node `f` would produce, without modifying the table.
    pub fn extended(&self, f: &[f64]) -> Vec<Vec<f64>> {
        extend_columns(&self.cur, f, self.depth)
    }

    fn rebuild_newest(&mut self, f: &[f64]) {
        self.cur = extend_columns(&self.prev, f, self.depth);
    }
}

fn extend_columns(prev: &[Vec<f64>], f: &[f64], depth: usize) -> Vec<Vec<f64>> {
    let len = (prev.len() + 1).min(depth + 1);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(len);
    cols.push(f.to_vec());
    for j in 1..len {
        let col = cols[j - 1].iter().zip(&prev[j - 1]).map(|(a, b)| a - b).collect();
        cols.push(col);
    }
    cols
}

/// `nabla^j f` at the last element of `fs` for `j = 0..=min(depth, len-1)`.
pub fn direct_differences<V: AsRef<[f64]>>(fs: &[V], depth: usize) -> Vec<Vec<f64>> {
    let mut row: Vec<Vec<f64>> = fs.iter().map(|f| f.as_ref().to_vec()).collect();
    let mut out = vec![row.last().cloned().unwrap_or_default()];
    let len = fs.len().min(depth + 1);
    for _ in 1..len {
        row = row.windows(2).map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect()).collect();
        out.push(row.last().cloned().expect("non-empty difference row"));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    State,
    Derivative,
}

/// Result of a delayed sample, with whether it required extrapolation.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub value: Vec<f64>,
    pub extrapolated: bool,
}

/// Solution on the grid `t_i = t0 + i*h`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    t0: f64,
    h: f64,
    dim: usize,
    xs: Vec<Vec<f64>>,
    fs: Vec<Vec<f64>>,
    diffs: DifferenceTable,
    weights: Arc<WeightCache>,
}

impl Trajectory {
    pub fn new(t0: f64, h: f64, dim: usize, depth: usize) -> Result<Self> {
        if h == 0.0 || !h.is_finite() || !t0.is_finite() {
            return Err(Error::InvalidConfig(format!("grid t0 = {t0}, h = {h}")));
        }
        Ok(Self {
            t0,
            h,
            dim,
            xs: Vec::new(),
            fs: Vec::new(),
            diffs: DifferenceTable::new(depth),
            weights: Arc::new(WeightCache::new()),
        })
    }

    /// Builds a trajectory from complete records and derives the difference
    /// table directly.
    pub fn from_records(
        t0: f64,
        h: f64,
        depth: usize,
        xs: Vec<Vec<f64>>,
        fs: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let dim = xs.first().map_or(0, Vec::len);
        if xs.len() != fs.len() {
            return Err(Error::DimensionMismatch { expected: xs.len(), got: fs.len() });
        }
        for v in xs.iter().chain(&fs) {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
            }
        }
        let mut traj = Self::new(t0, h, dim, depth)?;
        traj.diffs = DifferenceTable::from_history(depth, &fs);
        traj.xs = xs;
        traj.fs = fs;
        Ok(traj)
    }

    pub fn with_weight_cache(mut self, cache: Arc<WeightCache>) -> Self {
        self.weights = cache;
        self
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Grid time of record `i`, always `t0 + i*h`.
    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.h
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.time(i))
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.xs[i]
    }

    pub fn derivative(&self, i: usize) -> &[f64] {
        &self.fs[i]
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.xs
    }

    pub fn derivatives(&self) -> &[Vec<f64>] {
        &self.fs
    }

    pub fn last_state(&self) -> Option<&[f64]> {
        self.xs.last().map(Vec::as_slice)
    }

    pub fn differences(&self) -> &DifferenceTable {
        &self.diffs
    }

    fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(())
    }

    pub fn push(&mut self, x: &[f64], f: &[f64]) -> Result<()> {
        self.check_dim(x)?;
        self.check_dim(f)?;
        self.xs.push(x.to_vec());
        self.fs.push(f.to_vec());
        self.diffs.push(f);
        Ok(())
    }

    pub fn replace_newest_f(&mut self, f: &[f64]) -> Result<()> {
        self.check_dim(f)?;
        let last = self
            .fs
            .last_mut()
            .ok_or(Error::InsufficientRecords { need: 1, have: 0 })?;
        last.copy_from_slice(f);
        self.diffs.replace_newest(f);
        Ok(())
    }

    pub fn replace_newest_x(&mut self, x: &[f64]) -> Result<()> {
        self.check_dim(x)?;
        let last = self
            .xs
            .last_mut()
            .ok_or(Error::InsufficientRecords { need: 1, have: 0 })?;
        last.copy_from_slice(x);
        Ok(())
    }

    /// Whether `t` lies within the closed span of computed nodes.
    pub fn covers(&self, t: f64) -> bool {
        if self.is_empty() {
            return false;
        }
        let (a, b) = (self.time(0), self.time(self.len() - 1));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        (lo..=hi).contains(&t)
    }

    /// Distance from `t` to the computed span, zero inside it.
    pub fn distance_outside(&self, t: f64) -> f64 {
        if self.is_empty() {
            return f64::INFINITY;
        }
        let (a, b) = (self.time(0), self.time(self.len() - 1));
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if t < lo {
            lo - t
        } else if t > hi {
            t - hi
        } else {
            0.0
        }
    }

    /// First index of the `size` nodes nearest to `t`, clamped to the grid.
    pub fn stencil_start(&self, t: f64, size: usize) -> usize {
        let u = (t - self.t0) / self.h;
        let start = (u - (size as f64 - 1.0) / 2.0 + 0.5).floor();
        let max = (self.len() - size) as f64;
        start.clamp(0.0, max) as usize
    }

    /// Interpolates (or extrapolates past the grid ends) the stored states or
    /// derivatives at `t` using the `stencil_size` nearest nodes.
    pub fn sample(
        &self,
        t: f64,
        kind: SampleKind,
        stencil_size: usize,
        max_extrapolation: f64,
    ) -> Result<Sample> {
        if stencil_size == 0 || self.len() < stencil_size {
            return Err(Error::InsufficientRecords { need: stencil_size.max(1), have: self.len() });
        }
        let distance = self.distance_outside(t);
        if distance > max_extrapolation {
            return Err(Error::OutOfRange { t, distance, limit: max_extrapolation });
        }
        let data = match kind {
            SampleKind::State => &self.xs,
            SampleKind::Derivative => &self.fs,
        };
        let start = self.stencil_start(t, stencil_size);
        if let Some(i) = (start..start + stencil_size).find(|&i| self.time(i) == t) {
            return Ok(Sample { value: data[i].clone(), extrapolated: false });
        }
        // stencil-local coordinates: node j sits at j h exactly, matching the cached weights
        let weights = self.weights.get(stencil_size, self.h)?;
        let local = ((t - self.t0) / self.h - start as f64) * self.h;
        let value = barycentric_eval(weights.nodes(), weights.weights(), &data[start..start + stencil_size], local);
        Ok(Sample { value, extrapolated: distance > 0.0 })
    }
}
