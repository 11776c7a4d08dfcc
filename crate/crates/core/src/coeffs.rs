//! Adams coefficients in backward-difference form.
//!
//! The Adams-Moulton coefficients obey
//!
//! ```text
//! c_0 = 1,    c_j = -sum_{i=0}^{j-1} c_i / (j + 1 - i)
//! ```
//!
//! and the Adams-Bashforth coefficients are their partial sums,
//! `gamma_j = c_0 + ... + c_j`. Both sequences are evaluated in exact rational
//! arithmetic and rounded to `f64` once, since the denominators grow quickly
//! (`c_13` has a 12 digit denominator).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Adams-Moulton (`c`) and Adams-Bashforth (`gamma`) coefficients for
/// orders `0..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    k_max: usize,
    c: Vec<f64>,
    gamma: Vec<f64>,
}

impl CoefficientTable {
    pub fn new(k_max: usize) -> Self {
        let (c, gamma) = exact_coefficients(k_max);
        let round = |r: &BigRational| r.to_f64().expect("Adams coefficients are finite");
        Self {
            k_max,
            c: c.iter().map(round).collect(),
            gamma: gamma.iter().map(round).collect(),
        }
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Adams-Moulton coefficients `c_0..=c_{k_max}`.
    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// Adams-Bashforth coefficients `gamma_0..=gamma_{k_max}`.
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// Renders the table as `j,c_j,gamma_j` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,c_j,gamma_j\n");
        for j in 0..=self.k_max {
            out.push_str(&format!(
                "{},{},{}\n",
                j,
                crate::csv::format_f64(self.c[j]),
                crate::csv::format_f64(self.gamma[j])
            ));
        }
        out
    }
}

/// Shorthand for [`CoefficientTable::new`].
pub fn build_table(k_max: usize) -> CoefficientTable {
    CoefficientTable::new(k_max)
}

/// Exact `(c, gamma)` sequences up to `k_max`.
pub fn exact_coefficients(k_max: usize) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut c: Vec<BigRational> = Vec::with_capacity(k_max + 1);
    c.push(BigRational::one());
    for j in 1..=k_max {
        let mut sum = BigRational::zero();
        for (i, ci) in c.iter().enumerate() {
            sum += ci / BigRational::from_integer(BigInt::from(j + 1 - i));
        }
        c.push(-sum);
    }
    let mut gamma = Vec::with_capacity(k_max + 1);
    let mut acc = BigRational::zero();
    for cj in &c {
        acc += cj;
        gamma.push(acc.clone());
    }
    (c, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_zero_is_the_seed() {
        let t = build_table(0);
        assert_eq!(t.c(), &[1.0]);
        assert_eq!(t.gamma(), &[1.0]);
    }

    #[test]
    fn low_order_values() {
        let t = build_table(3);
        assert_eq!(t.c(), &[1.0, -0.5, -1.0 / 12.0, -1.0 / 24.0]);
        assert_eq!(t.gamma(), &[1.0, 0.5, 5.0 / 12.0, 3.0 / 8.0]);
    }

    #[test]
    fn sign_and_monotonicity_through_13() {
        let t = build_table(13);
        assert!(t.c()[1..].iter().all(|&c| c < 0.0));
        for w in t.gamma().windows(2) {
            assert!(w[0] > w[1] && w[1] > 0.0);
        }
        for j in 1..=13 {
            let d = t.gamma()[j] - t.gamma()[j - 1] - t.c()[j];
            assert!(d.abs() <= 1e-15, "j = {j}: {d:e}");
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let csv = build_table(2).to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "j,c_j,gamma_j");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("1,-5.0000000000000000e-1,"));
    }
}
