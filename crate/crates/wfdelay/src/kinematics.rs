//! Relativistic scalar/vector kinematics and the central force field with
//! its global inverse.
//!
//! All maps here are pure functions on doubles with the speed of light set
//! to 1. The force field `F(x) = x / ‖x‖³` and its inverse
//! `I(y) = y / ‖y‖^(3/2)` are the backbone of the step construction: the
//! inverse turns a known force value back into the separation vector that
//! produced it.

use crate::error::{Error, Result};
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};

/// Norms below this are treated as zero to avoid overflow in `‖x‖⁻²`.
pub const NORM_UNDERFLOW: f64 = 1e-300;

/// Index of a particle in the two-body system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum ParticleLabel {
    One,
    Two,
}

impl ParticleLabel {
    pub fn other(self) -> ParticleLabel {
        match self {
            ParticleLabel::One => ParticleLabel::Two,
            ParticleLabel::Two => ParticleLabel::One,
        }
    }

    pub fn index(self) -> usize {
        match self {
            ParticleLabel::One => 0,
            ParticleLabel::Two => 1,
        }
    }
}

impl TryFrom<u8> for ParticleLabel {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(ParticleLabel::One),
            2 => Ok(ParticleLabel::Two),
            other => Err(format!("particle label must be 1 or 2, got {other}")),
        }
    }
}

impl From<ParticleLabel> for u8 {
    fn from(l: ParticleLabel) -> u8 {
        match l {
            ParticleLabel::One => 1,
            ParticleLabel::Two => 2,
        }
    }
}

/// Mass and signed charge of one particle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChargeParams {
    pub mass: f64,
    pub charge: f64,
    pub label: ParticleLabel,
}

impl ChargeParams {
    pub fn new(mass: f64, charge: f64, label: ParticleLabel) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "mass must be finite and positive, got {mass}"
            )));
        }
        if !(charge.is_finite() && charge != 0.0) {
            return Err(Error::InvalidArgument(format!(
                "charge must be finite and nonzero, got {charge}"
            )));
        }
        Ok(ChargeParams {
            mass,
            charge,
            label,
        })
    }
}

/// Instantaneous phase-space state of one particle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub time: f64,
    pub position: Vec3,
    pub momentum: Vec3,
}

impl PhasePoint {
    pub fn new(time: f64, position: Vec3, momentum: Vec3) -> Result<Self> {
        if !(time.is_finite() && position.is_finite() && momentum.is_finite()) {
            return Err(Error::InvalidArgument(
                "phase point components must be finite".into(),
            ));
        }
        Ok(PhasePoint {
            time,
            position,
            momentum,
        })
    }
}

/// Velocity of a particle of mass `m` with momentum `p`: `p / √(m² + p²)`.
///
/// The result is strictly inside the unit ball for every finite `p`.
pub fn velocity_of_momentum(p: Vec3, m: f64) -> Result<Vec3> {
    if !(p.is_finite() && m.is_finite() && m > 0.0) {
        return Err(Error::InvalidArgument(
            "momentum must be finite and mass positive".into(),
        ));
    }
    Ok(p / (m * m + p.norm_squared()).sqrt())
}

/// Momentum of a particle of mass `m` with velocity `v`: `m v / √(1 − v²)`.
pub fn momentum_of_velocity(v: Vec3, m: f64) -> Result<Vec3> {
    if !(v.is_finite() && m.is_finite() && m > 0.0) {
        return Err(Error::InvalidArgument(
            "velocity must be finite and mass positive".into(),
        ));
    }
    let v2 = v.norm_squared();
    if v2 >= 1.0 {
        return Err(Error::SuperluminalVelocity { speed: v2.sqrt() });
    }
    Ok(v * (m / (1.0 - v2).sqrt()))
}

/// `γ(v) = 1 / √(1 − v²)` for a speed `0 ≤ v < 1`.
pub fn lorentz_gamma(speed: f64) -> Result<f64> {
    if !(speed.is_finite() && speed >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "speed must be finite and nonnegative, got {speed}"
        )));
    }
    if speed >= 1.0 {
        return Err(Error::SuperluminalVelocity { speed });
    }
    Ok(1.0 / (1.0 - speed * speed).sqrt())
}

/// Central force field `F(x) = x / ‖x‖³`.
pub fn coulomb_force(x: Vec3) -> Result<Vec3> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument("force argument not finite".into()));
    }
    let r = x.norm();
    if r < NORM_UNDERFLOW {
        return Err(Error::SingularSeparation(
            "force evaluated at zero separation".into(),
        ));
    }
    Ok(x / (r * r * r))
}

/// Global inverse of [`coulomb_force`]: `I(y) = y / ‖y‖^(3/2)`.
pub fn coulomb_inverse(y: Vec3) -> Result<Vec3> {
    if !y.is_finite() {
        return Err(Error::InvalidArgument("inverse argument not finite".into()));
    }
    let r = y.norm();
    if r < NORM_UNDERFLOW {
        return Err(Error::SingularSeparation(
            "force inverse evaluated at zero".into(),
        ));
    }
    Ok(y / (r * r * r.sqrt()).sqrt())
}

/// Jacobian of `F` applied to `h`: `DF(x)[h] = h/‖x‖³ − 3 x (x·h)/‖x‖⁵`.
pub fn coulomb_force_differential(x: Vec3, h: Vec3) -> Vec3 {
    let r2 = x.norm_squared();
    let r = r2.sqrt();
    let r3 = r2 * r;
    h / r3 - x * (3.0 * x.dot(h) / (r3 * r2))
}

/// Jacobian of `I` applied to `h`: `DI(y)[h] = h/‖y‖^(3/2) − (3/2) y (y·h)/‖y‖^(7/2)`.
pub fn coulomb_inverse_differential(y: Vec3, h: Vec3) -> Vec3 {
    let r = y.norm();
    let r32 = r * r.sqrt();
    h / r32 - y * (1.5 * y.dot(h) / (r32 * r * r))
}

/// `d/dt (m γ(q̇) q̇)` expressed through velocity and acceleration:
/// `m [γ³ (v·a) v + γ a]`.
pub fn momentum_rate(m: f64, v: Vec3, a: Vec3) -> Result<Vec3> {
    let gamma = lorentz_gamma(v.norm())?;
    Ok((v * (gamma * gamma * gamma * v.dot(a)) + a * gamma) * m)
}

/// Acceleration from a momentum rate: the inverse of [`momentum_rate`] in
/// its last argument, `a = (ṗ − (v·ṗ) v) / (m γ)`.
pub fn acceleration_of_momentum_rate(m: f64, v: Vec3, pdot: Vec3) -> Result<Vec3> {
    let gamma = lorentz_gamma(v.norm())?;
    Ok((pdot - v * v.dot(pdot)) / (m * gamma))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn velocity_zero_momentum() {
        let v = velocity_of_momentum(Vec3::zero(), 1.0).unwrap();
        assert_eq!(v, Vec3::zero());
    }

    #[test]
    fn velocity_direct_value() {
        // 3/sqrt(16+9) = 3/5
        let v = velocity_of_momentum(Vec3::new(3.0, 0.0, 0.0), 4.0).unwrap();
        assert!((v.x - 0.6).abs() < 1e-15);
        assert_eq!((v.y, v.z), (0.0, 0.0));
    }

    #[test]
    fn momentum_inverse_of_velocity() {
        let p = momentum_of_velocity(Vec3::new(0.6, 0.0, 0.0), 4.0).unwrap();
        assert!((p.x - 3.0).abs() < 1e-12);
        assert!(momentum_of_velocity(Vec3::new(0.0, 0.0, 0.0), 2.0)
            .unwrap()
            .norm()
            .abs()
            < 1e-300);
        assert!(matches!(
            momentum_of_velocity(Vec3::new(1.0, 0.0, 0.0), 1.0),
            Err(Error::SuperluminalVelocity { .. })
        ));
    }

    #[test]
    fn gamma_values() {
        assert_eq!(lorentz_gamma(0.0).unwrap(), 1.0);
        assert!((lorentz_gamma(0.6).unwrap() - 1.25).abs() < 1e-15);
        assert!((lorentz_gamma(0.99).unwrap() - 7.088812050083354).abs() < 1e-4);
        assert!(matches!(
            lorentz_gamma(1.0),
            Err(Error::SuperluminalVelocity { .. })
        ));
    }

    #[test]
    fn force_values_and_errors() {
        let f = coulomb_force(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(f, Vec3::new(1.0, 0.0, 0.0));
        let f = coulomb_force(Vec3::new(2.0, 0.0, 0.0)).unwrap();
        assert!((f.x - 0.25).abs() < 1e-15);
        assert!(matches!(
            coulomb_force(Vec3::zero()),
            Err(Error::SingularSeparation(_))
        ));
        assert!(matches!(
            coulomb_inverse(Vec3::zero()),
            Err(Error::SingularSeparation(_))
        ));
    }

    #[test]
    fn inverse_values() {
        let i = coulomb_inverse(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(i, Vec3::new(1.0, 0.0, 0.0));
        let i = coulomb_inverse(Vec3::new(0.25, 0.0, 0.0)).unwrap();
        assert!((i.x - 2.0).abs() < 1e-14);
    }

    #[test]
    fn momentum_rate_roundtrip() {
        let v = Vec3::new(0.3, -0.2, 0.1);
        let a = Vec3::new(0.05, 0.4, -0.7);
        let pdot = momentum_rate(1.7, v, a).unwrap();
        let back = acceleration_of_momentum_rate(1.7, v, pdot).unwrap();
        assert!((back - a).norm() < 1e-14 * a.norm());
    }

    #[test]
    fn force_differential_matches_finite_difference() {
        let x = Vec3::new(0.8, -0.3, 1.1);
        let h = Vec3::new(0.2, 0.5, -0.4);
        let eps = 1e-7;
        let fd = (coulomb_force(x + h * eps).unwrap() - coulomb_force(x - h * eps).unwrap())
            / (2.0 * eps);
        let an = coulomb_force_differential(x, h);
        assert!((fd - an).norm() < 1e-6 * an.norm());
    }

    #[test]
    fn inverse_differential_matches_finite_difference() {
        let y = Vec3::new(0.4, 0.9, -0.2);
        let h = Vec3::new(-0.3, 0.1, 0.8);
        let eps = 1e-7;
        let fd = (coulomb_inverse(y + h * eps).unwrap() - coulomb_inverse(y - h * eps).unwrap())
            / (2.0 * eps);
        let an = coulomb_inverse_differential(y, h);
        assert!((fd - an).norm() < 1e-6 * an.norm());
    }
}
