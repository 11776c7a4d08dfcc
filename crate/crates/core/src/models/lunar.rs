//! Lunar-like rigid-body rotation with a delayed, tidally and rotationally
//! distorted inertia tensor.
//!
//! State is `(phi, theta, psi, omega_x, omega_y, omega_z)`: 3-1-3 Euler angles
//! of the body frame and the body-frame angular velocity (rad/day). The
//! Earth-Moon vector comes from a Keplerian ellipse. Units are km and days;
//! tensors are divided by the lunar mass (km^2).
//!
//! Euler's equation in the body frame
//!
//! ```text
//! (I/m) w' = N/m - (I'/m) w - w x ((I/m) w)
//! ```
//!
//! uses `I/m` evaluated from `r(t - tau)` and `w(t - tau)`, so its time
//! derivative `I'/m` depends on the delayed derivative `w'(t - tau)`.

use std::path::Path;

use nalgebra::{Matrix3, Rotation3, Vector3};

use crate::error::{Error, Result};
use crate::models::kepler::KeplerOrbit;
use crate::models::params::KeyValues;
use crate::system::{DdeSystem, DelayedValue, InitialValue};

const GIMBAL_LIMIT: f64 = 1e-8;

const PARAM_KEYS: [&str; 22] = [
    "a", "e", "inclination", "node", "arg_periapsis", "mean_anomaly0", "n_orb", "mu_e", "mu_m", "r_m",
    "k2", "n", "tau", "i0_xx", "i0_yy", "i0_zz", "i0_xy", "i0_xz", "i0_yz", "torque", "phi0", "theta0",
];

#[derive(Debug, Clone, PartialEq)]
pub struct LunarParams {
    /// Undistorted mantle inertia tensor over mass, km^2.
    pub i0_over_m: Matrix3<f64>,
    pub k2: f64,
    /// Gravitational parameters, km^3/day^2.
    pub mu_e: f64,
    pub mu_m: f64,
    /// Equatorial radius, km.
    pub r_m: f64,
    /// Mean motion in the spin distortion term, rad/day.
    pub n: f64,
    /// Distortion delay, days.
    pub tau: f64,
    pub orbit: KeplerOrbit,
    /// Gravity-gradient torque from the Earth.
    pub torque: bool,
    /// Initial precession and nutation angles; the spin angle is chosen so the
    /// body x axis points along the Earth-Moon line at the epoch.
    pub phi0: f64,
    pub theta0: f64,
}

impl Default for LunarParams {
    fn default() -> Self {
        let n_orb = 0.229_970_85;
        let c = 0.394 * 1738.0_f64.powi(2);
        let a = c * (1.0 - 6.31e-4);
        let b = a + 2.28e-4 * c;
        Self {
            i0_over_m: Matrix3::from_diagonal(&Vector3::new(a, b, c)),
            k2: 0.0241,
            mu_e: 398_600.441_8 * 86400.0_f64.powi(2),
            mu_m: 4902.800 * 86400.0_f64.powi(2),
            r_m: 1738.0,
            n: n_orb,
            tau: 0.096,
            orbit: KeplerOrbit {
                a: 384_400.0,
                e: 0.0549,
                n_orb,
                mean_anomaly0: 0.0,
                inclination: std::f64::consts::FRAC_PI_2,
                node: 0.0,
                arg_periapsis: 0.0,
            },
            torque: true,
            phi0: 0.0,
            theta0: std::f64::consts::FRAC_PI_2 + 0.0269,
        }
    }
}

impl LunarParams {
    /// Reads `key = value` lines; absent keys keep their defaults.
    pub fn from_key_values(kv: &KeyValues) -> Result<Self> {
        if let Some(k) = kv.keys().find(|k| !PARAM_KEYS.contains(k)) {
            return Err(Error::Parse(format!("unknown lunar parameter `{k}`")));
        }
        let mut p = Self::default();
        let mut diag = p.i0_over_m.diagonal();
        let mut off = Vector3::new(p.i0_over_m[(0, 1)], p.i0_over_m[(0, 2)], p.i0_over_m[(1, 2)]);
        kv.read_into("i0_xx", &mut diag[0])?;
        kv.read_into("i0_yy", &mut diag[1])?;
        kv.read_into("i0_zz", &mut diag[2])?;
        kv.read_into("i0_xy", &mut off[0])?;
        kv.read_into("i0_xz", &mut off[1])?;
        kv.read_into("i0_yz", &mut off[2])?;
        p.i0_over_m = Matrix3::new(
            diag[0], off[0], off[1], //
            off[0], diag[1], off[2], //
            off[1], off[2], diag[2],
        );
        kv.read_into("k2", &mut p.k2)?;
        kv.read_into("mu_e", &mut p.mu_e)?;
        kv.read_into("mu_m", &mut p.mu_m)?;
        kv.read_into("r_m", &mut p.r_m)?;
        kv.read_into("n", &mut p.n)?;
        kv.read_into("tau", &mut p.tau)?;
        kv.read_into("a", &mut p.orbit.a)?;
        kv.read_into("e", &mut p.orbit.e)?;
        kv.read_into("n_orb", &mut p.orbit.n_orb)?;
        kv.read_into("mean_anomaly0", &mut p.orbit.mean_anomaly0)?;
        kv.read_into("inclination", &mut p.orbit.inclination)?;
        kv.read_into("node", &mut p.orbit.node)?;
        kv.read_into("arg_periapsis", &mut p.orbit.arg_periapsis)?;
        kv.read_into("phi0", &mut p.phi0)?;
        kv.read_into("theta0", &mut p.theta0)?;
        let mut torque = if p.torque { 1.0 } else { 0.0 };
        kv.read_into("torque", &mut torque)?;
        p.torque = torque != 0.0;
        p.validate()?;
        Ok(p)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_key_values(&KeyValues::from_file(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.orbit.validate()?;
        if !(self.tau > 0.0) {
            return Err(Error::InvalidConfig(format!("tau = {} must be positive", self.tau)));
        }
        let i0 = &self.i0_over_m;
        if (i0 - i0.transpose()).abs().max() != 0.0 {
            return Err(Error::InvalidConfig("I0/m must be symmetric".into()));
        }
        if i0.cholesky().is_none() {
            return Err(Error::InvalidConfig("I0/m must be positive definite".into()));
        }
        Ok(())
    }

    fn tidal_coefficient(&self) -> f64 {
        self.k2 * self.mu_e / self.mu_m * self.r_m.powi(5)
    }

    fn spin_coefficient(&self) -> f64 {
        self.k2 * self.r_m.powi(5) / (3.0 * self.mu_m)
    }
}

/// `(rr^T - r^2/3 I) / r^5`, the traceless tidal shape.
pub fn tidal_shape(r: &Vector3<f64>) -> Result<Matrix3<f64>> {
    let r2 = r.norm_squared();
    if r2 == 0.0 {
        return Err(Error::ZeroRadius);
    }
    let r5 = r2 * r2 * r2.sqrt();
    Ok((r * r.transpose() - Matrix3::from_diagonal_element(r2 / 3.0)) / r5)
}

/// `w w^T - (w^2 - n^2)/3 I - diag(0, 0, n^2)`, the traceless spin shape.
pub fn spin_shape(w: &Vector3<f64>, n: f64) -> Matrix3<f64> {
    let mut s = w * w.transpose() - Matrix3::from_diagonal_element((w.norm_squared() - n * n) / 3.0);
    s[(2, 2)] -= n * n;
    s
}

/// Distorted inertia tensor over mass from the delayed body-frame position
/// and angular velocity.
pub fn inertia_tensor(r_d: &Vector3<f64>, w_d: &Vector3<f64>, p: &LunarParams) -> Result<Matrix3<f64>> {
    Ok(p.i0_over_m - tidal_shape(r_d)? * p.tidal_coefficient() + spin_shape(w_d, p.n) * p.spin_coefficient())
}

/// Time derivative of [`inertia_tensor`] along `(r_d', w_d')`.
pub fn inertia_tensor_dot(
    r_d: &Vector3<f64>,
    rdot_d: &Vector3<f64>,
    w_d: &Vector3<f64>,
    wdot_d: &Vector3<f64>,
    p: &LunarParams,
) -> Result<Matrix3<f64>> {
    let r2 = r_d.norm_squared();
    if r2 == 0.0 {
        return Err(Error::ZeroRadius);
    }
    let r5 = r2 * r2 * r2.sqrt();
    let rv = r_d.dot(rdot_d);
    let shape = r_d * r_d.transpose() - Matrix3::from_diagonal_element(r2 / 3.0);
    let shape_dot = rdot_d * r_d.transpose() + r_d * rdot_d.transpose()
        - Matrix3::from_diagonal_element(2.0 * rv / 3.0);
    let tidal_dot = shape_dot / r5 - shape * (5.0 * rv / (r5 * r2));
    let spin_dot = wdot_d * w_d.transpose() + w_d * wdot_d.transpose()
        - Matrix3::from_diagonal_element(2.0 * w_d.dot(wdot_d) / 3.0);
    Ok(spin_dot * p.spin_coefficient() - tidal_dot * p.tidal_coefficient())
}

/// Inverse of a symmetric 3x3 matrix by cofactors.
pub fn symmetric_inverse(m: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    let (a, b, c) = (m[(0, 0)], m[(0, 1)], m[(0, 2)]);
    let (d, e, f) = (m[(1, 1)], m[(1, 2)], m[(2, 2)]);
    let c00 = d * f - e * e;
    let c01 = c * e - b * f;
    let c02 = b * e - c * d;
    let c11 = a * f - c * c;
    let c12 = b * c - a * e;
    let c22 = a * d - b * b;
    let det = a * c00 + b * c01 + c * c02;
    let scale = m.abs().max();
    if !det.is_finite() || det.abs() <= 1e-14 * scale * scale * scale {
        return Err(Error::SingularInertia);
    }
    Ok(Matrix3::new(c00, c01, c02, c01, c11, c12, c02, c12, c22) / det)
}

/// Body-to-inertial rotation `Rz(phi) Rx(theta) Rz(psi)`.
pub fn body_rotation(phi: f64, theta: f64, psi: f64) -> Rotation3<f64> {
    Rotation3::from_axis_angle(&Vector3::z_axis(), phi)
        * Rotation3::from_axis_angle(&Vector3::x_axis(), theta)
        * Rotation3::from_axis_angle(&Vector3::z_axis(), psi)
}

/// 3-1-3 Euler angle rates from the body-frame angular velocity.
pub fn euler_rates(theta: f64, psi: f64, w: &Vector3<f64>) -> Result<Vector3<f64>> {
    let st = theta.sin();
    if st.abs() < GIMBAL_LIMIT {
        return Err(Error::GimbalLock(st));
    }
    let (sp, cp) = psi.sin_cos();
    let phi_dot = (w.x * sp + w.y * cp) / st;
    let theta_dot = w.x * cp - w.y * sp;
    let psi_dot = w.z - phi_dot * theta.cos();
    Ok(Vector3::new(phi_dot, theta_dot, psi_dot))
}

/// Body-frame angular velocity from 3-1-3 Euler angle rates.
pub fn body_rate(theta: f64, psi: f64, rates: &Vector3<f64>) -> Vector3<f64> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = psi.sin_cos();
    Vector3::new(
        rates.x * st * sp + rates.y * cp,
        rates.x * st * cp - rates.y * sp,
        rates.x * ct + rates.z,
    )
}

/// Gravity-gradient torque over mass from a point-mass Earth at body-frame `r`.
pub fn gravity_gradient_torque(r: &Vector3<f64>, inertia: &Matrix3<f64>, mu_e: f64) -> Vector3<f64> {
    let r2 = r.norm_squared();
    let r5 = r2 * r2 * r2.sqrt();
    r.cross(&(inertia * r)) * (3.0 * mu_e / r5)
}

fn split(x: &[f64]) -> Result<(f64, f64, f64, Vector3<f64>)> {
    if x.len() != 6 {
        return Err(Error::DimensionMismatch { expected: 6, got: x.len() });
    }
    Ok((x[0], x[1], x[2], Vector3::new(x[3], x[4], x[5])))
}

/// Intermediate quantities of one right-hand-side evaluation.
#[derive(Debug, Clone)]
pub struct LunarTerms {
    pub inertia: Matrix3<f64>,
    pub inertia_dot: Matrix3<f64>,
    pub torque: Vector3<f64>,
    pub omega: Vector3<f64>,
    pub omega_dot: Vector3<f64>,
    pub angle_rates: Vector3<f64>,
}

/// Evaluates the rotational equations at `t` given the current state and the
/// state and derivative at `t - tau`.
pub fn lunar_terms(t: f64, x: &[f64], x_d: &[f64], xd_d: &[f64], p: &LunarParams) -> Result<LunarTerms> {
    let (phi, theta, psi, w) = split(x)?;
    let (phi_d, theta_d, psi_d, w_d) = split(x_d)?;
    let (_, _, _, wdot_d) = split(xd_d)?;

    let rot_d = body_rotation(phi_d, theta_d, psi_d);
    let (r_in_d, v_in_d) = p.orbit.state(t - p.tau)?;
    let r_d = rot_d.inverse() * r_in_d;
    let rdot_d = rot_d.inverse() * v_in_d - w_d.cross(&r_d);

    let inertia = inertia_tensor(&r_d, &w_d, p)?;
    let inertia_dot = inertia_tensor_dot(&r_d, &rdot_d, &w_d, &wdot_d, p)?;

    let torque = if p.torque {
        let r = body_rotation(phi, theta, psi).inverse() * p.orbit.position(t)?;
        gravity_gradient_torque(&r, &inertia, p.mu_e)
    } else {
        Vector3::zeros()
    };
    let rhs = torque - inertia_dot * w - w.cross(&(inertia * w));
    let omega_dot = symmetric_inverse(&inertia)? * rhs;
    let angle_rates = euler_rates(theta, psi, &w)?;
    Ok(LunarTerms { inertia, inertia_dot, torque, omega: w, omega_dot, angle_rates })
}

pub fn lunar_rhs(t: f64, x: &[f64], x_d: &[f64], xd_d: &[f64], p: &LunarParams) -> Result<Vec<f64>> {
    let terms = lunar_terms(t, x, x_d, xd_d, p)?;
    let (a, w) = (terms.angle_rates, terms.omega_dot);
    Ok(vec![a.x, a.y, a.z, w.x, w.y, w.z])
}

/// The lunar-like rotation problem as a [`DdeSystem`] with one delay.
#[derive(Debug, Clone)]
pub struct LunarModel {
    pub params: LunarParams,
    delays: [f64; 1],
}

impl LunarModel {
    pub fn new(params: LunarParams) -> Result<Self> {
        params.validate()?;
        let tau = params.tau;
        Ok(Self { params, delays: [tau] })
    }

    /// Synchronous rotation about the orbit normal with the body x axis on
    /// the Earth-Moon line at `t0`.
    pub fn initial_value(&self, t0: f64) -> Result<InitialValue> {
        let p = &self.params;
        let (r, v) = p.orbit.state(t0)?;
        let outer = Rotation3::from_axis_angle(&Vector3::z_axis(), p.phi0)
            * Rotation3::from_axis_angle(&Vector3::x_axis(), p.theta0);
        let local = outer.inverse() * r;
        let psi0 = local.y.atan2(local.x);
        let normal = r.cross(&v).normalize();
        let rot = body_rotation(p.phi0, p.theta0, psi0);
        let w = rot.inverse() * (normal * p.orbit.n_orb);
        Ok(InitialValue::new(t0, vec![p.phi0, p.theta0, psi0, w.x, w.y, w.z]))
    }
}

impl DdeSystem for LunarModel {
    fn dim(&self) -> usize {
        6
    }

    fn delays(&self) -> &[f64] {
        &self.delays
    }

    fn rhs(&self, t: f64, x: &[f64], delayed: &[DelayedValue]) -> Result<Vec<f64>> {
        let d = delayed.first().ok_or(Error::DimensionMismatch { expected: 1, got: 0 })?;
        lunar_rhs(t, x, &d.state, &d.derivative, &self.params)
    }
}
