//! Light-cone delay times and delayed field evaluation.
//!
//! For a spacetime point `(t, x)` and a source worldline `q`, the advanced
//! and retarded times solve `s = t ± ‖x − q(s)‖`. With the source speed
//! bounded strictly below 1 the defining function is monotone with slope at
//! least `1 − v̄`, so the root is unique and bracketed by the coverage
//! endpoints whenever it exists inside coverage at all.

use crate::error::{BracketSide, Error, Result};
use crate::guards::GuardParams;
use crate::kinematics::{coulomb_force, velocity_of_momentum, ChargeParams, PhasePoint};
use crate::rootfind::newton_bisect;
use crate::trajectory::WorldLine;
use crate::vec3::Vec3;

pub use crate::jets::DelaySign;

/// Solved light-cone intersection.
#[derive(Debug, Clone, Copy)]
pub struct DelayResult {
    pub sign: DelaySign,
    /// Intersection time on the source worldline.
    pub t_delayed: f64,
    /// Unit vector from the delayed source point toward the field point.
    pub direction: Vec3,
    /// `‖x − q(t_delayed)‖ = |t_delayed − t|`.
    pub separation: f64,
}

/// Electric/magnetic field pair at one spacetime point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPair {
    pub electric: Vec3,
    pub magnetic: Vec3,
}

/// Solve the delay equation `s = t ± ‖x − q(s)‖` on the source coverage.
pub fn delay_time(source: &WorldLine, t: f64, x: Vec3, sign: DelaySign) -> Result<DelayResult> {
    if !(source.speed_bound() < 1.0) {
        return Err(Error::InvalidWorldline(format!(
            "source speed bound {} is not below 1",
            source.speed_bound()
        )));
    }
    if !(t.is_finite() && x.is_finite()) {
        return Err(Error::InvalidArgument("delay query must be finite".into()));
    }
    let sf = sign.factor();
    let (lo, hi) = source.coverage();
    let g = |s: f64| {
        let q = source
            .position(s.clamp(lo, hi))
            .expect("clamped time is covered");
        s - t - sf * (x - q).norm()
    };
    let dg = |s: f64| {
        let d = source
            .eval(s.clamp(lo, hi), 1)
            .expect("clamped time is covered");
        let r = x - d[0];
        let rn = r.norm();
        if rn == 0.0 {
            1.0
        } else {
            1.0 + sf * r.dot(d[1]) / rn
        }
    };
    let ftol = 0.5e-12 * (1.0 + t.abs());
    let g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo > ftol {
        return Err(Error::OutOfDomain {
            t,
            lo,
            hi,
            side: Some(BracketSide::Below),
        });
    }
    if g_hi < -ftol {
        return Err(Error::OutOfDomain {
            t,
            lo,
            hi,
            side: Some(BracketSide::Above),
        });
    }
    let s = newton_bisect(g, dg, lo, hi, ftol, 1e-15 * (1.0 + hi.abs() - lo.abs()), 200)?;
    let s = s.clamp(lo, hi);
    let q = source.position(s)?;
    let r = x - q;
    let separation = r.norm();
    if separation < 1e-300 {
        return Err(Error::SingularSeparation(
            "field point lies on the source worldline".into(),
        ));
    }
    Ok(DelayResult {
        sign,
        t_delayed: s,
        direction: r / separation,
        separation,
    })
}

/// Rate of change `dτ/dt` of a delay along an observer trajectory:
/// `(1 ± n·v_obs) / (1 ± n·v_src)` with the source velocity evaluated at
/// the delayed time.
pub fn delay_rate(source: &WorldLine, observer_velocity: Vec3, d: &DelayResult) -> Result<f64> {
    let v_src = source.eval(d.t_delayed, 1)?[1];
    let sf = d.sign.factor();
    let num = 1.0 + sf * d.direction.dot(observer_velocity);
    let den = 1.0 + sf * d.direction.dot(v_src);
    if !(den > 0.0) {
        return Err(Error::InternalInvariant(format!(
            "delay-rate denominator {den} not positive; source speed bound violated"
        )));
    }
    Ok(num / den)
}

/// Delayed Coulomb field of a source charge: `e_src (x − q(τ)) / ‖x − q(τ)‖³`
/// with zero magnetic component.
pub fn coulomb_delayed_field(
    source: &WorldLine,
    e_src: f64,
    t: f64,
    x: Vec3,
    sign: DelaySign,
    guards: &GuardParams,
) -> Result<FieldPair> {
    let d = delay_time(source, t, x, sign)?;
    if d.separation < guards.d {
        return Err(Error::GuardSeparation {
            separation: d.separation,
            minimum: guards.d,
        });
    }
    let q = source.position(d.t_delayed)?;
    Ok(FieldPair {
        electric: coulomb_force(x - q)? * e_src,
        magnetic: Vec3::zero(),
    })
}

/// Full Liénard-Wiechert fields of a point source, near-field plus
/// radiation term, with `B = ∓ n ∧ E`.
pub fn lienard_wiechert_field(
    source: &WorldLine,
    e_src: f64,
    t: f64,
    x: Vec3,
    sign: DelaySign,
    guards: &GuardParams,
) -> Result<FieldPair> {
    if source.segments().iter().any(|s| s.degree() < 2) {
        return Err(Error::InvalidWorldline(
            "source below degree 2 cannot supply the acceleration term".into(),
        ));
    }
    let d = delay_time(source, t, x, sign)?;
    if d.separation < guards.d {
        return Err(Error::GuardSeparation {
            separation: d.separation,
            minimum: guards.d,
        });
    }
    let derivs = source.eval(d.t_delayed, 2)?;
    let n = d.direction;
    let v = derivs[1];
    let acc = derivs[2];
    let r = d.separation;
    let sf = sign.factor();
    let doppler = 1.0 + sf * n.dot(v);
    let denom = doppler * doppler * doppler;
    let near = (n + v * sf) * ((1.0 - v.norm_squared()) / (r * r * denom));
    let rad = n.cross(n.cross(acc)) / (r * denom);
    let electric = (near + rad) * e_src;
    let magnetic = n.cross(electric) * (-sf);
    Ok(FieldPair { electric, magnetic })
}

/// Right-hand side of the two-charge model for one particle:
/// `(v(p), e_i e_j [F(x − q_j(τ⁺)) + F(x − q_j(τ⁻))])`.
pub fn toy_rhs(
    state: &PhasePoint,
    own: &ChargeParams,
    partner_line: &WorldLine,
    guards: &GuardParams,
) -> Result<(Vec3, Vec3)> {
    let v = velocity_of_momentum(state.momentum, own.mass)?;
    let e_prod = own.charge * partner_line.charge().charge;
    let mut force = Vec3::zero();
    for sign in [DelaySign::Advanced, DelaySign::Retarded] {
        let d = delay_time(partner_line, state.time, state.position, sign)?;
        if d.separation < guards.d {
            return Err(Error::GuardSeparation {
                separation: d.separation,
                minimum: guards.d,
            });
        }
        let q = partner_line.position(d.t_delayed)?;
        force += coulomb_force(state.position - q)?;
    }
    Ok((v, force * e_prod))
}

/// Force on a particle from its partner: either the simplified two-sided
/// Coulomb force of the model or the full Liénard-Wiechert force
/// `e_i Σ_± (E± + v ∧ B±)`, for side-by-side comparison.
pub fn wf_force(
    full: bool,
    state: &PhasePoint,
    own: &ChargeParams,
    partner_line: &WorldLine,
    guards: &GuardParams,
) -> Result<Vec3> {
    if !full {
        return Ok(toy_rhs(state, own, partner_line, guards)?.1);
    }
    let v = velocity_of_momentum(state.momentum, own.mass)?;
    let e_partner = partner_line.charge().charge;
    let mut force = Vec3::zero();
    for sign in [DelaySign::Advanced, DelaySign::Retarded] {
        let f = lienard_wiechert_field(
            partner_line,
            e_partner,
            state.time,
            state.position,
            sign,
            guards,
        )?;
        force += f.electric + v.cross(f.magnetic);
    }
    Ok(force * own.charge)
}

/// Alias used by the jet machinery.
pub fn delay_time_from_point(
    source: &WorldLine,
    t: f64,
    x: Vec3,
    sign: DelaySign,
) -> Result<DelayResult> {
    delay_time(source, t, x, sign)
}
