//! Explicit fixed-step Runge-Kutta methods.
//!
//! Two tableaus are provided: the classic four-stage RK4 (nested inner
//! integration) and the 13-stage Dormand-Prince RK8(7)13M pair, of which only
//! the 8th order weights are used (startup).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    /// Embedded lower-order weights, kept for reference only.
    pub b_embedded: Option<Vec<f64>>,
    pub order: u32,
}

impl ButcherTableau {
    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// Largest `|c_i - sum_j a_ij|` over all stages.
    pub fn row_sum_defect(&self) -> f64 {
        self.a
            .iter()
            .zip(&self.c)
            .map(|(row, c)| (c - row.iter().sum::<f64>()).abs())
            .fold(0.0, f64::max)
    }

    pub fn weight_sum(&self) -> f64 {
        self.b.iter().sum()
    }
}

pub fn rk4_tableau() -> ButcherTableau {
    ButcherTableau {
        a: vec![
            vec![],
            vec![0.5],
            vec![0.0, 0.5],
            vec![0.0, 0.0, 1.0],
        ],
        b: vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
        c: vec![0.0, 0.5, 0.5, 1.0],
        b_embedded: None,
        order: 4,
    }
}

type Q = (i64, i64);

const fn q(n: i64, d: i64) -> Q {
    (n, d)
}

const Z: Q = (0, 1);

// Prince & Dormand RK8(7)13M, rational approximations as published.
const DP8_C: [Q; 13] = [
    Z,
    q(1, 18),
    q(1, 12),
    q(1, 8),
    q(5, 16),
    q(3, 8),
    q(59, 400),
    q(93, 200),
    q(5490023248, 9719169821),
    q(13, 20),
    q(1201146811, 1299019798),
    q(1, 1),
    q(1, 1),
];

const DP8_A: [&[Q]; 13] = [
    &[],
    &[q(1, 18)],
    &[q(1, 48), q(1, 16)],
    &[q(1, 32), Z, q(3, 32)],
    &[q(5, 16), Z, q(-75, 64), q(75, 64)],
    &[q(3, 80), Z, Z, q(3, 16), q(3, 20)],
    &[
        q(29443841, 614563906),
        Z,
        Z,
        q(77736538, 692538347),
        q(-28693883, 1125000000),
        q(23124283, 1800000000),
    ],
    &[
        q(16016141, 946692911),
        Z,
        Z,
        q(61564180, 158732637),
        q(22789713, 633445777),
        q(545815736, 2771057229),
        q(-180193667, 1043307555),
    ],
    &[
        q(39632708, 573591083),
        Z,
        Z,
        q(-433636366, 683701615),
        q(-421739975, 2616292301),
        q(100302831, 723423059),
        q(790204164, 839813087),
        q(800635310, 3783071287),
    ],
    &[
        q(246121993, 1340847787),
        Z,
        Z,
        q(-37695042795, 15268766246),
        q(-309121744, 1061227803),
        q(-12992083, 490766935),
        q(6005943493, 2108947869),
        q(393006217, 1396673457),
        q(123872331, 1001029789),
    ],
    &[
        q(-1028468189, 846180014),
        Z,
        Z,
        q(8478235783, 508512852),
        q(1311729495, 1432422823),
        q(-10304129995, 1701304382),
        q(-48777925059, 3047939560),
        q(15336726248, 1032824649),
        q(-45442868181, 3398467696),
        q(3065993473, 597172653),
    ],
    &[
        q(185892177, 718116043),
        Z,
        Z,
        q(-3185094517, 667107341),
        q(-477755414, 1098053517),
        q(-703635378, 230739211),
        q(5731566787, 1027545527),
        q(5232866602, 850066563),
        q(-4093664535, 808688257),
        q(3962137247, 1805957418),
        q(65686358, 487910083),
    ],
    &[
        q(403863854, 491063109),
        Z,
        Z,
        q(-5068492393, 434740067),
        q(-411421997, 543043805),
        q(652783627, 914296604),
        q(11173962825, 925320556),
        q(-13158990841, 6184727034),
        q(3936647629, 1978049680),
        q(-160528059, 685178525),
        q(248638103, 1413531060),
        Z,
    ],
];

const DP8_B: [Q; 13] = [
    q(14005451, 335480064),
    Z,
    Z,
    Z,
    Z,
    q(-59238493, 1068277825),
    q(181606767, 758867731),
    q(561292985, 797845732),
    q(-1041891430, 1371343529),
    q(760417239, 1151165299),
    q(118820643, 751138087),
    q(-528747749, 2220607170),
    q(1, 4),
];

const DP8_B_EMBEDDED: [Q; 13] = [
    q(13451932, 455176623),
    Z,
    Z,
    Z,
    Z,
    q(-808719846, 976000145),
    q(1757004468, 5645159321),
    q(656045339, 265891186),
    q(-3867574721, 1518517206),
    q(465885868, 322736535),
    q(53011238, 667516719),
    q(2, 45),
    Z,
];

fn to_f64(&(n, d): &Q) -> f64 {
    n as f64 / d as f64
}

/// Dormand-Prince RK8(7)13M.
pub fn dopri8_tableau() -> ButcherTableau {
    ButcherTableau {
        a: DP8_A.iter().map(|row| row.iter().map(to_f64).collect()).collect(),
        b: DP8_B.iter().map(to_f64).collect(),
        c: DP8_C.iter().map(to_f64).collect(),
        b_embedded: Some(DP8_B_EMBEDDED.iter().map(to_f64).collect()),
        order: 8,
    }
}

/// One explicit step; also returns the first stage derivative `g(t, y)`.
pub fn rk_step_with_slope<G>(
    tableau: &ButcherTableau,
    mut g: G,
    t: f64,
    y: &[f64],
    h: f64,
) -> Result<(Vec<f64>, Vec<f64>)>
where
    G: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
{
    let s = tableau.stages();
    let n = y.len();
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(s);
    let mut stage_y = vec![0.0; n];
    for i in 0..s {
        stage_y.copy_from_slice(y);
        for (j, &a) in tableau.a[i].iter().enumerate() {
            if a != 0.0 {
                for (sy, kj) in stage_y.iter_mut().zip(&k[j]) {
                    *sy += h * a * kj;
                }
            }
        }
        let ts = t + tableau.c[i] * h;
        if stage_y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: ts, stage: i });
        }
        let ki = g(ts, &stage_y)?;
        if ki.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: ki.len() });
        }
        if ki.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: ts, stage: i });
        }
        k.push(ki);
    }
    let mut out = y.to_vec();
    for (bi, ki) in tableau.b.iter().zip(&k) {
        if *bi != 0.0 {
            for (o, kv) in out.iter_mut().zip(ki) {
                *o += h * bi * kv;
            }
        }
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { t: t + h, stage: s });
    }
    let k1 = k.swap_remove(0);
    Ok((out, k1))
}

pub fn rk_step<G>(tableau: &ButcherTableau, g: G, t: f64, y: &[f64], h: f64) -> Result<Vec<f64>>
where
    G: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
{
    rk_step_with_slope(tableau, g, t, y, h).map(|(y, _)| y)
}

/// `steps` equal steps of size `h` starting at `(t, y)`.
pub fn integrate_fixed<G>(
    tableau: &ButcherTableau,
    mut g: G,
    t: f64,
    y: &[f64],
    h: f64,
    steps: usize,
) -> Result<Vec<f64>>
where
    G: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
{
    let mut y = y.to_vec();
    for i in 0..steps {
        y = rk_step(tableau, &mut g, t + i as f64 * h, &y, h)?;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_rhs(_t: f64, y: &[f64]) -> Result<Vec<f64>> {
        Ok(y.to_vec())
    }

    #[test]
    fn tableau_consistency() {
        for tab in [rk4_tableau(), dopri8_tableau()] {
            assert!(tab.row_sum_defect() <= 1e-15, "{}", tab.row_sum_defect());
            assert!((tab.weight_sum() - 1.0).abs() <= 1e-15);
            for (i, row) in tab.a.iter().enumerate() {
                assert_eq!(row.len(), i);
            }
        }
        let e = dopri8_tableau().b_embedded.unwrap();
        assert!((e.iter().sum::<f64>() - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn trivial_right_hand_sides() {
        let tab = rk4_tableau();
        let y = [1.0, -2.0];
        let zero = rk_step(&tab, |_, y| Ok(vec![0.0; y.len()]), 0.0, &y, 0.3).unwrap();
        assert_eq!(zero, y);
        let one = rk_step(&tab, |_, y| Ok(vec![1.0; y.len()]), 0.0, &y, -0.25).unwrap();
        assert_eq!(one, vec![0.75, -2.25]);
    }

    #[test]
    fn rk4_exponential() {
        let y = rk_step(&rk4_tableau(), exp_rhs, 0.0, &[1.0], 0.1).unwrap()[0];
        assert!((y - 0.1f64.exp()).abs() <= 1e-7);
        assert_eq!(y, 1.0 + 0.1 + 0.005 + 0.1f64.powi(3) / 6.0 + 0.1f64.powi(4) / 24.0);
    }

    #[test]
    fn dopri8_exponential() {
        let y = integrate_fixed(&dopri8_tableau(), exp_rhs, 0.0, &[1.0], 1.0 / 16.0, 16).unwrap()[0];
        let e = std::f64::consts::E;
        assert!(((y - e) / e).abs() <= 1e-12, "{:e}", (y - e) / e);
    }

    #[test]
    fn non_finite_stage_reported() {
        let err = rk_step(
            &rk4_tableau(),
            |t, _| Ok(vec![if t > 0.0 { f64::NAN } else { 1.0 }]),
            0.0,
            &[0.0],
            1.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFinite { stage: 1, .. }));
    }

    #[test]
    fn slope_is_first_stage() {
        let (_, k1) =
            rk_step_with_slope(&dopri8_tableau(), |t, y| Ok(vec![t + y[0]]), 0.5, &[2.0], 0.1)
                .unwrap();
        assert_eq!(k1, vec![2.5]);
    }
}
