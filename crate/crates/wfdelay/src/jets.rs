//! Truncated Taylor-series (jet) arithmetic.
//!
//! Derivative chains through the delay maps are deep enough that hand-rolled
//! chain rules become a liability. Everything here works on truncated Taylor
//! coefficients `f^(k)(t₀)/k!`; the grading property (coefficient `n` of any
//! result depends only on input coefficients `≤ n`) is what the order-by-order
//! solves in the generator rely on.

use crate::error::{Error, Result};
use crate::trajectory::WorldLine;
use crate::vec3::Vec3;

/// Truncated Taylor series; `c[k]` is the `k`-th scaled derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct Taylor {
    pub c: Vec<f64>,
}

impl Taylor {
    pub fn constant(v: f64, len: usize) -> Taylor {
        let mut c = vec![0.0; len];
        c[0] = v;
        Taylor { c }
    }

    /// The series of `t ↦ t` around `t0`.
    pub fn variable(t0: f64, len: usize) -> Taylor {
        let mut c = vec![0.0; len];
        c[0] = t0;
        if len > 1 {
            c[1] = 1.0;
        }
        Taylor { c }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn add(&self, o: &Taylor) -> Taylor {
        debug_assert_eq!(self.len(), o.len());
        Taylor {
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Taylor) -> Taylor {
        debug_assert_eq!(self.len(), o.len());
        Taylor {
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Taylor {
        Taylor {
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Taylor {
        Taylor {
            c: self.c.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, o: &Taylor) -> Taylor {
        debug_assert_eq!(self.len(), o.len());
        let n = self.len();
        let mut c = vec![0.0; n];
        for i in 0..n {
            if self.c[i] == 0.0 {
                continue;
            }
            for j in 0..n - i {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Taylor { c }
    }

    pub fn recip(&self) -> Result<Taylor> {
        if self.c[0] == 0.0 {
            return Err(Error::InternalInvariant(
                "series reciprocal at zero constant term".into(),
            ));
        }
        let n = self.len();
        let mut r = vec![0.0; n];
        r[0] = 1.0 / self.c[0];
        for m in 1..n {
            let mut acc = 0.0;
            for k in 1..=m {
                acc += self.c[k] * r[m - k];
            }
            r[m] = -acc / self.c[0];
        }
        Ok(Taylor { c: r })
    }

    /// `self^alpha` for a real exponent; the constant term must be positive.
    pub fn pow_real(&self, alpha: f64) -> Result<Taylor> {
        if !(self.c[0] > 0.0) {
            return Err(Error::InternalInvariant(format!(
                "series power with nonpositive constant term {}",
                self.c[0]
            )));
        }
        let n = self.len();
        let mut p = vec![0.0; n];
        p[0] = self.c[0].powf(alpha);
        for m in 1..n {
            let mut acc = 0.0;
            for k in 1..=m {
                acc += (alpha * k as f64 - (m - k) as f64) * self.c[k] * p[m - k];
            }
            p[m] = acc / (m as f64 * self.c[0]);
        }
        Ok(Taylor { c: p })
    }

    pub fn sqrt(&self) -> Result<Taylor> {
        self.pow_real(0.5)
    }

    /// Series of the time derivative (coefficient shift), keeping length by
    /// padding with a trailing zero; the top coefficient is unreliable and
    /// callers must not read orders above `len − 2` after differentiation.
    pub fn derivative(&self) -> Taylor {
        let n = self.len();
        let mut c = vec![0.0; n];
        for k in 0..n - 1 {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Taylor { c }
    }

    /// Composition `g ∘ h` where `self` holds the outer coefficients around
    /// `h`'s constant term and `inner` has a zero constant term.
    pub fn compose(&self, inner: &Taylor) -> Taylor {
        debug_assert_eq!(self.len(), inner.len());
        debug_assert_eq!(inner.c[0], 0.0, "inner series must be centered");
        let n = self.len();
        let mut acc = Taylor::constant(self.c[n - 1], n);
        for k in (0..n - 1).rev() {
            acc = acc.mul(inner);
            acc.c[0] += self.c[k];
        }
        acc
    }
}

/// Vector-valued jet: one series per spatial component.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet3 {
    pub c: [Taylor; 3],
}

impl Jet3 {
    pub fn constant(v: Vec3, len: usize) -> Jet3 {
        Jet3 {
            c: [
                Taylor::constant(v.x, len),
                Taylor::constant(v.y, len),
                Taylor::constant(v.z, len),
            ],
        }
    }

    /// Jet with prescribed value and first derivative, higher orders zero.
    pub fn linear(x: Vec3, v: Vec3, len: usize) -> Jet3 {
        let mut jet = Jet3::constant(x, len);
        if len > 1 {
            jet.c[0].c[1] = v.x;
            jet.c[1].c[1] = v.y;
            jet.c[2].c[1] = v.z;
        }
        jet
    }

    pub fn from_coeff_arrays(arrays: &[Vec<f64>; 3], len: usize) -> Jet3 {
        let take = |src: &Vec<f64>| {
            let mut c = vec![0.0; len];
            for (k, slot) in c.iter_mut().enumerate().take(src.len().min(len)) {
                *slot = src[k];
            }
            Taylor { c }
        };
        Jet3 {
            c: [take(&arrays[0]), take(&arrays[1]), take(&arrays[2])],
        }
    }

    pub fn len(&self) -> usize {
        self.c[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.c[0].is_empty()
    }

    /// Coefficient `k` as a vector.
    pub fn coeff(&self, k: usize) -> Vec3 {
        Vec3::new(self.c[0].c[k], self.c[1].c[k], self.c[2].c[k])
    }

    pub fn set_coeff(&mut self, k: usize, v: Vec3) {
        self.c[0].c[k] = v.x;
        self.c[1].c[k] = v.y;
        self.c[2].c[k] = v.z;
    }

    /// `k`-th derivative value (`coeff(k) · k!`).
    pub fn derivative_value(&self, k: usize) -> Vec3 {
        self.coeff(k) * factorial(k)
    }

    pub fn add(&self, o: &Jet3) -> Jet3 {
        Jet3 {
            c: [
                self.c[0].add(&o.c[0]),
                self.c[1].add(&o.c[1]),
                self.c[2].add(&o.c[2]),
            ],
        }
    }

    pub fn sub(&self, o: &Jet3) -> Jet3 {
        Jet3 {
            c: [
                self.c[0].sub(&o.c[0]),
                self.c[1].sub(&o.c[1]),
                self.c[2].sub(&o.c[2]),
            ],
        }
    }

    pub fn scale(&self, s: f64) -> Jet3 {
        Jet3 {
            c: [self.c[0].scale(s), self.c[1].scale(s), self.c[2].scale(s)],
        }
    }

    pub fn mul_series(&self, s: &Taylor) -> Jet3 {
        Jet3 {
            c: [self.c[0].mul(s), self.c[1].mul(s), self.c[2].mul(s)],
        }
    }

    pub fn dot(&self, o: &Jet3) -> Taylor {
        self.c[0]
            .mul(&o.c[0])
            .add(&self.c[1].mul(&o.c[1]))
            .add(&self.c[2].mul(&o.c[2]))
    }

    pub fn norm(&self) -> Result<Taylor> {
        self.dot(self).sqrt()
    }

    pub fn derivative(&self) -> Jet3 {
        Jet3 {
            c: [
                self.c[0].derivative(),
                self.c[1].derivative(),
                self.c[2].derivative(),
            ],
        }
    }

    /// Componentwise composition with a scalar inner series.
    pub fn compose(&self, inner: &Taylor) -> Jet3 {
        Jet3 {
            c: [
                self.c[0].compose(inner),
                self.c[1].compose(inner),
                self.c[2].compose(inner),
            ],
        }
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Jet of the force field `F(u) = u / ‖u‖³` along a jet `u`.
pub fn force_field_jet(u: &Jet3) -> Result<Jet3> {
    let r2 = u.dot(u);
    let scale = r2.pow_real(-1.5)?;
    Ok(u.mul_series(&scale))
}

/// Jet of the force inverse `I(w) = w / ‖w‖^(3/2)` along a jet `w`.
pub fn force_inverse_jet(w: &Jet3) -> Result<Jet3> {
    let r2 = w.dot(w);
    let scale = r2.pow_real(-0.75)?;
    Ok(w.mul_series(&scale))
}

/// Jet of the momentum `m γ(q̇) q̇` from a position jet.
pub fn momentum_jet(q: &Jet3, mass: f64) -> Result<Jet3> {
    let v = q.derivative();
    let one_minus_v2 = Taylor::constant(1.0, q.len()).sub(&v.dot(&v));
    let gamma = one_minus_v2.pow_real(-0.5)?;
    Ok(v.mul_series(&gamma).scale(mass))
}

/// Advanced (+) or retarded (−) sign of a light-cone delay.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelaySign {
    Advanced,
    Retarded,
}

impl DelaySign {
    pub fn factor(self) -> f64 {
        match self {
            DelaySign::Advanced => 1.0,
            DelaySign::Retarded => -1.0,
        }
    }
}

/// Jet of the delay map `τ(t) = t ± ‖x(t) − q(τ(t))‖` around `t0`, where the
/// observer position jet is `observer` and the source trajectory is given by
/// its jet around the base solution `tau0`.
///
/// The fixed-point pass gains one correct order per iteration.
pub fn delay_jet(
    observer: &Jet3,
    source_at_tau0: &Jet3,
    tau0: f64,
    sign: DelaySign,
) -> Result<Taylor> {
    let len = observer.len();
    // τ(t0+δ) = (t0+δ) ± ‖x(t0+δ) − q(τ)‖, expressed as a series in δ with
    // the constant term pinned to the supplied base solution.
    let mut tau = Taylor::constant(tau0, len);
    for _ in 0..=len {
        let mut inner = tau.clone();
        inner.c[0] = 0.0;
        let src = source_at_tau0.compose(&inner);
        let sep = observer.sub(&src).norm()?;
        let mut next = sep.scale(sign.factor());
        next.c[0] = tau0;
        if len > 1 {
            next.c[1] += 1.0;
        }
        tau = next;
    }
    Ok(tau)
}

/// Jet of a worldline around `t0` up to order `len − 1`.
pub fn worldline_jet(w: &WorldLine, t0: f64, len: usize) -> Result<Jet3> {
    let arrays = w.jet(t0, len - 1)?;
    Ok(Jet3::from_coeff_arrays(&arrays, len))
}

/// Jet of the two-sided delayed force on a particle with position jet
/// `observer` around `t0`, sourced by the partner worldline:
/// `e_prod · [F(x − q(τ⁺)) + F(x − q(τ⁻))]`.
pub fn delayed_force_jet(
    observer: &Jet3,
    t0: f64,
    partner: &WorldLine,
    e_prod: f64,
) -> Result<Jet3> {
    let len = observer.len();
    let mut total = Jet3::constant(Vec3::zero(), len);
    for sign in [DelaySign::Advanced, DelaySign::Retarded] {
        let tau0 = crate::delay::delay_time_from_point(partner, t0, observer.coeff(0), sign)?;
        let src_jet = worldline_jet(partner, tau0.t_delayed, len)?;
        let tau = delay_jet(observer, &src_jet, tau0.t_delayed, sign)?;
        let mut inner = tau.clone();
        inner.c[0] = 0.0;
        let src = src_jet.compose(&inner);
        let u = observer.sub(&src);
        total = total.add(&force_field_jet(&u)?);
    }
    Ok(total.scale(e_prod))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(vals: &[f64]) -> Taylor {
        Taylor { c: vals.to_vec() }
    }

    #[test]
    fn mul_matches_square() {
        // (1 + t)^2 = 1 + 2t + t²
        let a = series(&[1.0, 1.0, 0.0, 0.0]);
        let sq = a.mul(&a);
        assert_eq!(sq.c, vec![1.0, 2.0, 1.0, 0.0]);
    }

    #[test]
    fn sqrt_of_one_plus_t() {
        // √(1+t) = 1 + t/2 − t²/8 + t³/16 − …
        let a = series(&[1.0, 1.0, 0.0, 0.0]);
        let s = a.sqrt().unwrap();
        assert!((s.c[0] - 1.0).abs() < 1e-15);
        assert!((s.c[1] - 0.5).abs() < 1e-15);
        assert!((s.c[2] + 0.125).abs() < 1e-15);
        assert!((s.c[3] - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn recip_matches_geometric() {
        let a = series(&[1.0, -1.0, 0.0, 0.0, 0.0]);
        let r = a.recip().unwrap();
        assert_eq!(r.c, vec![1.0, 1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn pow_real_matches_reciprocal_sqrt() {
        let a = series(&[4.0, 1.0, -0.3, 0.2, 0.05]);
        let direct = a.pow_real(-0.5).unwrap();
        let via = a.sqrt().unwrap().recip().unwrap();
        for (x, y) in direct.c.iter().zip(via.c.iter()) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn compose_exponential_like() {
        // g(s) = 1/(1−s) around 0 composed with h(t) = t + t² gives
        // 1 + (t+t²) + (t+t²)² + … = 1 + t + 2t² + 3t³ + …
        let g = series(&[1.0, 1.0, 1.0, 1.0]);
        let h = series(&[0.0, 1.0, 1.0, 0.0]);
        let c = g.compose(&h);
        assert_eq!(c.c, vec![1.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn momentum_jet_matches_pointwise_rate() {
        use crate::kinematics::momentum_rate;
        // q(t) = (0.3t + 0.05t², −0.1t, 0): compare ṗ at t=0
        let mut q = Jet3::constant(Vec3::zero(), 5);
        q.set_coeff(1, Vec3::new(0.3, -0.1, 0.0));
        q.set_coeff(2, Vec3::new(0.05, 0.0, 0.0));
        let p = momentum_jet(&q, 2.0).unwrap();
        let pdot = p.derivative().derivative_value(0);
        let v = Vec3::new(0.3, -0.1, 0.0);
        let a = Vec3::new(0.1, 0.0, 0.0);
        let expected = momentum_rate(2.0, v, a).unwrap();
        assert!((pdot - expected).norm() < 1e-14);
    }

    #[test]
    fn delay_jet_static_source() {
        // static source at origin, observer fixed at (3,0,0):
        // τ(t) = t + 3 exactly, so the jet is [τ0, 1, 0, 0]
        let observer = Jet3::constant(Vec3::new(3.0, 0.0, 0.0), 4);
        let source = Jet3::constant(Vec3::zero(), 4);
        let tau = delay_jet(&observer, &source, 3.0, DelaySign::Advanced).unwrap();
        assert!((tau.c[0] - 3.0).abs() < 1e-15);
        assert!((tau.c[1] - 1.0).abs() < 1e-15);
        assert!(tau.c[2].abs() < 1e-15);
    }

    #[test]
    fn delay_jet_uniform_motion_matches_closed_form() {
        // observer at rest at x = (1,0,0); source q(s) = (0.5 s, 0, 0).
        // retarded: τ = t − ‖x − q(τ)‖ → τ(t) = (t − 1)·2/3 … solve:
        // τ = t − |1 − 0.5τ| with 1 − 0.5τ > 0 near t=0: τ = (t−1)/(1−0.5) · …
        // τ + 0.5·(−τ)… direct: τ = t − 1 + 0.5τ ⇒ τ = 2(t−1).
        let observer = Jet3::constant(Vec3::new(1.0, 0.0, 0.0), 4);
        // source jet around τ0 = −2: q(τ0+δ) = (−1 + 0.5δ, 0, 0)
        let mut source = Jet3::constant(Vec3::new(-1.0, 0.0, 0.0), 4);
        source.set_coeff(1, Vec3::new(0.5, 0.0, 0.0));
        let tau = delay_jet(&observer, &source, -2.0, DelaySign::Retarded).unwrap();
        assert!((tau.c[0] + 2.0).abs() < 1e-14);
        assert!((tau.c[1] - 2.0).abs() < 1e-13);
        assert!(tau.c[2].abs() < 1e-13);
    }
}
