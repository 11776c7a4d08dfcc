//! Keplerian forcing orbit: the Earth-Moon vector as a fixed ellipse.

use nalgebra::{Rotation3, Vector3};

use crate::error::{Error, Result};

const KEPLER_TOL: f64 = 1e-14;
const KEPLER_MAX_ITER: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct KeplerOrbit {
    /// Semi-major axis, km.
    pub a: f64,
    pub e: f64,
    /// Mean motion, rad/day.
    pub n_orb: f64,
    /// Mean anomaly at `t = 0`, rad.
    pub mean_anomaly0: f64,
    pub inclination: f64,
    pub node: f64,
    pub arg_periapsis: f64,
}

impl KeplerOrbit {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0) || !(0.0..1.0).contains(&self.e) {
            return Err(Error::InvalidConfig(format!(
                "orbit needs a > 0 and 0 <= e < 1 (a = {}, e = {})",
                self.a, self.e
            )));
        }
        Ok(())
    }

    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.n_orb
    }

    pub fn mean_anomaly(&self, t: f64) -> f64 {
        self.mean_anomaly0 + self.n_orb * t
    }

    fn orientation(&self) -> Rotation3<f64> {
        Rotation3::from_axis_angle(&Vector3::z_axis(), self.node)
            * Rotation3::from_axis_angle(&Vector3::x_axis(), self.inclination)
            * Rotation3::from_axis_angle(&Vector3::z_axis(), self.arg_periapsis)
    }

    /// Position (km) and velocity (km/day) at time `t` (days).
    pub fn state(&self, t: f64) -> Result<(Vector3<f64>, Vector3<f64>)> {
        let ecc_anomaly = solve_kepler(self.mean_anomaly(t), self.e)?;
        let (s, c) = ecc_anomaly.sin_cos();
        let b = (1.0 - self.e * self.e).sqrt();
        let r_pf = Vector3::new(self.a * (c - self.e), self.a * b * s, 0.0);
        let edot = self.n_orb / (1.0 - self.e * c);
        let v_pf = Vector3::new(-self.a * s * edot, self.a * b * c * edot, 0.0);
        let rot = self.orientation();
        Ok((rot * r_pf, rot * v_pf))
    }

    pub fn position(&self, t: f64) -> Result<Vector3<f64>> {
        self.state(t).map(|(r, _)| r)
    }
}

/// Eccentric anomaly from `E - e sin E = M` by Newton iteration.
pub fn solve_kepler(mean_anomaly: f64, e: f64) -> Result<f64> {
    let m = mean_anomaly.rem_euclid(std::f64::consts::TAU);
    let turns = mean_anomaly - m;
    let mut ecc = if e < 0.8 { m } else { std::f64::consts::PI };
    for _ in 0..KEPLER_MAX_ITER {
        let delta = (ecc - e * ecc.sin() - m) / (1.0 - e * ecc.cos());
        ecc -= delta;
        if delta.abs() <= KEPLER_TOL {
            return Ok(ecc + turns);
        }
    }
    Err(Error::KeplerNoConvergence { mean_anomaly, eccentricity: e })
}
