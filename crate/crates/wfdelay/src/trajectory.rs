//! Piecewise Chebyshev worldlines with dense derivative output.
//!
//! A [`Segment`] is one polynomial piece on a time interval; a [`WorldLine`]
//! is an ordered, exactly abutting chain of segments whose joins have been
//! checked for derivative matching up to a configured order. Momentum
//! worldlines are not stored: `p(t)` is derived from `q̇(t)`, which keeps the
//! velocity–momentum relation true by construction.

use crate::chebyshev;
use crate::error::{Error, Result};
use crate::kinematics::{momentum_of_velocity, ChargeParams};
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};

/// Default order of derivative matching certified at joins.
pub const DEFAULT_JOIN_ORDER: usize = 3;

/// Relative tolerance below which two interval endpoints are considered the
/// same join point; larger gaps are interval mismatches.
const ABUT_TOL: f64 = 1e-9;

/// Node-residual threshold of [`fit_segment`], relative to `1 + ‖y‖`.
pub const FIT_TOL: f64 = 1e-12;

/// One polynomial piece of a worldline on `[a, b]`, stored as Chebyshev
/// coefficients per spatial component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SegmentRaw", into = "SegmentRaw")]
pub struct Segment {
    a: f64,
    b: f64,
    degree: usize,
    coeffs: [Vec<f64>; 3],
}

#[derive(Serialize, Deserialize)]
struct SegmentRaw {
    a: f64,
    b: f64,
    degree: usize,
    coeffs: [Vec<f64>; 3],
}

impl TryFrom<SegmentRaw> for Segment {
    type Error = String;
    fn try_from(r: SegmentRaw) -> std::result::Result<Self, String> {
        Segment::new(r.a, r.b, r.degree, r.coeffs).map_err(|e| e.to_string())
    }
}

impl From<Segment> for SegmentRaw {
    fn from(s: Segment) -> SegmentRaw {
        SegmentRaw {
            a: s.a,
            b: s.b,
            degree: s.degree,
            coeffs: s.coeffs,
        }
    }
}

impl Segment {
    pub fn new(a: f64, b: f64, degree: usize, coeffs: [Vec<f64>; 3]) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidArgument(format!(
                "segment interval must be finite with a < b, got [{a}, {b}]"
            )));
        }
        for c in &coeffs {
            if c.len() != degree + 1 {
                return Err(Error::InvalidArgument(format!(
                    "coefficient table must have degree+1 = {} entries, got {}",
                    degree + 1,
                    c.len()
                )));
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument(
                    "segment coefficients must be finite".into(),
                ));
            }
        }
        Ok(Segment {
            a,
            b,
            degree,
            coeffs,
        })
    }

    pub fn start(&self) -> f64 {
        self.a
    }

    pub fn end(&self) -> f64 {
        self.b
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.a && t <= self.b
    }

    /// Derivatives `q, q̇, …, q^(order)` at `t` (no domain check).
    pub fn derivatives(&self, t: f64, order: usize) -> Vec<Vec3> {
        let u = chebyshev::to_unit(self.a, self.b, t);
        let scale = 2.0 / (self.b - self.a);
        let mut out = Vec::with_capacity(order + 1);
        let mut cur: [Vec<f64>; 3] = self.coeffs.clone();
        let mut factor = 1.0;
        for k in 0..=order {
            if k > 0 {
                for c in cur.iter_mut() {
                    *c = chebyshev::derivative(c);
                }
                factor *= scale;
            }
            out.push(Vec3::new(
                chebyshev::eval(&cur[0], u) * factor,
                chebyshev::eval(&cur[1], u) * factor,
                chebyshev::eval(&cur[2], u) * factor,
            ));
        }
        out
    }

    pub fn value(&self, t: f64) -> Vec3 {
        self.derivatives(t, 0)[0]
    }

    /// Taylor coefficients `q^(k)(t)/k!` for `k = 0..=order`.
    pub fn jet(&self, t: f64, order: usize) -> [Vec<f64>; 3] {
        let derivs = self.derivatives(t, order);
        let mut out = [
            Vec::with_capacity(order + 1),
            Vec::with_capacity(order + 1),
            Vec::with_capacity(order + 1),
        ];
        let mut fact = 1.0;
        for (k, d) in derivs.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            out[0].push(d.x / fact);
            out[1].push(d.y / fact);
            out[2].push(d.z / fact);
        }
        out
    }

    /// Largest `‖q̇‖` on a dense grid of at least `4·degree` points.
    pub fn max_speed(&self) -> f64 {
        let n = 4 * self.degree.max(1) + 1;
        let mut worst = 0.0_f64;
        for t in chebyshev::lobatto_nodes(self.a, self.b, n) {
            worst = worst.max(self.derivatives(t, 1)[1].norm());
        }
        worst
    }

    /// Copy of this piece restricted to `[a2, b2] ⊆ [a, b]`, re-expressed in
    /// the Chebyshev basis of the smaller interval. Exact for polynomials up
    /// to round-off.
    pub fn restricted(&self, a2: f64, b2: f64) -> Result<Segment> {
        if !(a2 >= self.a - 1e-12 && b2 <= self.b + 1e-12 && a2 < b2) {
            return Err(Error::InvalidArgument(format!(
                "restriction [{a2}, {b2}] not inside [{}, {}]",
                self.a, self.b
            )));
        }
        let nodes = chebyshev::lobatto_nodes(a2, b2, 2 * self.degree + 1);
        let us: Vec<f64> = nodes
            .iter()
            .map(|&t| chebyshev::to_unit(a2, b2, t))
            .collect();
        let mut coeffs: [Vec<f64>; 3] = Default::default();
        for comp in 0..3 {
            let ys: Vec<f64> = nodes
                .iter()
                .map(|&t| self.value(t.clamp(self.a, self.b)).component(comp))
                .collect();
            let (c, _) = chebyshev::fit(&us, &ys, self.degree);
            coeffs[comp] = c;
        }
        Segment::new(a2, b2, self.degree, coeffs)
    }
}

/// Strictly increasing parameter values with vector samples.
#[derive(Debug, Clone)]
pub struct ParamSamples {
    pub params: Vec<f64>,
    pub values: Vec<Vec3>,
}

impl ParamSamples {
    pub fn new(params: Vec<f64>, values: Vec<Vec3>) -> Result<Self> {
        if params.len() != values.len() {
            return Err(Error::InvalidArgument(
                "parameter and value counts differ".into(),
            ));
        }
        if params.len() < 2 {
            return Err(Error::InvalidArgument("need at least two samples".into()));
        }
        if !params.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "parameters must be strictly increasing".into(),
            ));
        }
        if params.iter().any(|p| !p.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("samples must be finite".into()));
        }
        Ok(ParamSamples { params, values })
    }
}

/// Samples of a curve given parametrically: at driver times `t_k` the delay
/// image `tau_k = τ(t_k)` with rate `dτ/dt > 0` and value `q(τ(t_k))`.
#[derive(Debug, Clone)]
pub struct ParametricSamples {
    pub t: Vec<f64>,
    pub tau: Vec<f64>,
    pub rate: Vec<f64>,
    pub values: Vec<Vec3>,
}

/// Residual diagnostics of a [`fit_segment`] call.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitReport {
    /// Worst mismatch between fit and data at the sample nodes.
    pub node_residual: f64,
    /// Worst mismatch at odd-indexed samples when refitting on the even
    /// subset; NaN when there are too few samples to hold any out.
    pub holdout_residual: f64,
}

/// Least-squares Chebyshev fit of `samples` at the given degree, spanning
/// `[params.first(), params.last()]`.
pub fn fit_segment(samples: &ParamSamples, degree: usize) -> Result<Segment> {
    fit_segment_with_report(samples, degree).map(|(s, _)| s)
}

pub fn fit_segment_with_report(
    samples: &ParamSamples,
    degree: usize,
) -> Result<(Segment, FitReport)> {
    let n = samples.params.len();
    if n < degree + 1 {
        return Err(Error::InvalidArgument(format!(
            "need at least {} samples for degree {degree}, got {n}",
            degree + 1
        )));
    }
    if !samples.params.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(
            "parameters must be strictly increasing".into(),
        ));
    }
    let a = samples.params[0];
    let b = samples.params[n - 1];
    let us: Vec<f64> = samples
        .params
        .iter()
        .map(|&t| chebyshev::to_unit(a, b, t))
        .collect();
    let scale = 1.0
        + samples
            .values
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.norm()));
    let mut coeffs: [Vec<f64>; 3] = Default::default();
    let mut node_residual = 0.0_f64;
    for comp in 0..3 {
        let ys: Vec<f64> = samples.values.iter().map(|v| v.component(comp)).collect();
        let (c, worst) = chebyshev::fit(&us, &ys, degree);
        node_residual = node_residual.max(worst);
        coeffs[comp] = c;
    }
    if node_residual > FIT_TOL * scale {
        return Err(Error::FitFailure {
            residual: node_residual,
            threshold: FIT_TOL * scale,
        });
    }
    let segment = Segment::new(a, b, degree, coeffs)?;

    // hold out the odd samples and refit on the even ones when possible
    let even: Vec<usize> = (0..n).step_by(2).collect();
    let holdout_residual = if even.len() >= degree + 1 && even.len() < n {
        let mut worst = 0.0_f64;
        let mut hold_coeffs: [Vec<f64>; 3] = Default::default();
        let eus: Vec<f64> = even.iter().map(|&i| us[i]).collect();
        for comp in 0..3 {
            let ys: Vec<f64> = even
                .iter()
                .map(|&i| samples.values[i].component(comp))
                .collect();
            let (c, _) = chebyshev::fit(&eus, &ys, degree);
            hold_coeffs[comp] = c;
        }
        for i in (1..n).step_by(2) {
            let fitted = Vec3::new(
                chebyshev::eval(&hold_coeffs[0], us[i]),
                chebyshev::eval(&hold_coeffs[1], us[i]),
                chebyshev::eval(&hold_coeffs[2], us[i]),
            );
            worst = worst.max((fitted - samples.values[i]).norm());
        }
        worst
    } else {
        f64::NAN
    };

    Ok((
        segment,
        FitReport {
            node_residual,
            holdout_residual,
        },
    ))
}

/// Resample a parametrically given curve onto a grid in its own parameter.
///
/// The delay image `τ(t)` is interpolated from the samples and inverted for
/// each target by a bisection-safeguarded Newton solve; the value curve is
/// interpolated over `t` and evaluated at the solved parameter. Targets that
/// coincide bitwise with a sampled `τ_k` are passed through exactly.
pub fn reparameterize(parametric: &ParametricSamples, target_grid: &[f64]) -> Result<ParamSamples> {
    let n = parametric.t.len();
    if n < 2 || parametric.tau.len() != n || parametric.rate.len() != n {
        return Err(Error::InvalidArgument(
            "parametric samples must have matching lengths >= 2".into(),
        ));
    }
    if !parametric.t.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(
            "driver parameters must be strictly increasing".into(),
        ));
    }
    if let Some(r) = parametric.rate.iter().find(|r| !(**r > 0.0)) {
        return Err(Error::MonotonicityViolation(format!(
            "delay rate {r} is not positive"
        )));
    }
    if !parametric.tau.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::MonotonicityViolation(
            "delay image is not strictly increasing across samples".into(),
        ));
    }

    let (t0, t1) = (parametric.t[0], parametric.t[n - 1]);
    let us: Vec<f64> = parametric
        .t
        .iter()
        .map(|&t| chebyshev::to_unit(t0, t1, t))
        .collect();
    let deg = n - 1;
    let (tau_c, _) = chebyshev::fit(&us, &parametric.tau, deg);
    let dtau_c = chebyshev::derivative(&tau_c);
    let mut val_c: [Vec<f64>; 3] = Default::default();
    for comp in 0..3 {
        let ys: Vec<f64> = parametric.values.iter().map(|v| v.component(comp)).collect();
        let (c, _) = chebyshev::fit(&us, &ys, deg);
        val_c[comp] = c;
    }

    let tau_lo = parametric.tau[0];
    let tau_hi = parametric.tau[n - 1];
    let mut out_params = Vec::with_capacity(target_grid.len());
    let mut out_values = Vec::with_capacity(target_grid.len());
    for &target in target_grid {
        // bitwise hit on a sample: pass through
        if let Some(k) = parametric.tau.iter().position(|&tk| tk == target) {
            out_params.push(target);
            out_values.push(parametric.values[k]);
            continue;
        }
        if target < tau_lo || target > tau_hi {
            return Err(Error::OutOfDomain {
                t: target,
                lo: tau_lo,
                hi: tau_hi,
                side: None,
            });
        }
        let f = |u: f64| chebyshev::eval(&tau_c, u) - target;
        let df = |u: f64| chebyshev::eval(&dtau_c, u);
        let ftol = 0.25e-12 * (1.0 + target.abs());
        let u_star = crate::rootfind::newton_bisect(f, df, -1.0, 1.0, ftol, 1e-16, 100)?;
        let residual = f(u_star).abs();
        if residual > 1e-12 * (1.0 + target.abs()) {
            return Err(Error::InternalInvariant(format!(
                "reparameterization residual {residual:.3e} at target {target}"
            )));
        }
        out_params.push(target);
        out_values.push(Vec3::new(
            chebyshev::eval(&val_c[0], u_star),
            chebyshev::eval(&val_c[1], u_star),
            chebyshev::eval(&val_c[2], u_star),
        ));
    }
    ParamSamples::new(out_params, out_values)
}

/// Which end of a worldline an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Future,
    Past,
}

/// Smooth trajectory of one charge over a covered time interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WorldLineRaw", into = "WorldLineRaw")]
pub struct WorldLine {
    charge: ChargeParams,
    segments: Vec<Segment>,
    join_order: usize,
    #[serde(skip)]
    speed_bound: f64,
}

#[derive(Serialize, Deserialize)]
struct WorldLineRaw {
    charge: ChargeParams,
    segments: Vec<Segment>,
}

impl TryFrom<WorldLineRaw> for WorldLine {
    type Error = String;
    fn try_from(r: WorldLineRaw) -> std::result::Result<Self, String> {
        WorldLine::from_parts(r.charge, r.segments, DEFAULT_JOIN_ORDER).map_err(|e| e.to_string())
    }
}

impl From<WorldLine> for WorldLineRaw {
    fn from(w: WorldLine) -> WorldLineRaw {
        WorldLineRaw {
            charge: w.charge,
            segments: w.segments,
        }
    }
}

/// Per-order derivative mismatches at a candidate join.
pub fn join_mismatches(left: &Segment, right: &Segment, t: f64, orders: usize) -> Vec<f64> {
    let dl = left.derivatives(t, orders);
    let dr = right.derivatives(t, orders);
    (0..=orders)
        .map(|k| {
            let scale = 1.0 + dl[k].norm().max(dr[k].norm());
            (dl[k] - dr[k]).norm() / scale
        })
        .collect()
}

impl WorldLine {
    /// Assemble a worldline from already-abutting segments, verifying joins
    /// up to `join_order` within `join_tol`.
    pub fn new(
        charge: ChargeParams,
        segments: Vec<Segment>,
        join_order: usize,
        join_tol: f64,
    ) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidArgument(
                "worldline needs at least one segment".into(),
            ));
        }
        for w in segments.windows(2) {
            let gap = (w[1].a - w[0].b).abs();
            if gap > ABUT_TOL * (1.0 + w[0].b.abs()) {
                return Err(Error::IntervalMismatch {
                    expected: w[0].b,
                    got: w[1].a,
                    gap,
                });
            }
            let mm = join_mismatches(&w[0], &w[1], w[0].b, join_order);
            for (order, &m) in mm.iter().enumerate() {
                if m > join_tol {
                    return Err(Error::SmoothnessViolation {
                        at: w[0].b,
                        order,
                        mismatch: m,
                        tol: join_tol,
                    });
                }
            }
        }
        Ok(Self::from_parts(charge, segments, join_order)?)
    }

    /// Internal assembly without smoothness verification (used on load and
    /// by construction, which has already checked the join).
    fn from_parts(charge: ChargeParams, segments: Vec<Segment>, join_order: usize) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidArgument(
                "worldline needs at least one segment".into(),
            ));
        }
        for w in segments.windows(2) {
            if !(w[1].a - w[0].b).abs() <= ABUT_TOL * (1.0 + w[0].b.abs()) {
                return Err(Error::IntervalMismatch {
                    expected: w[0].b,
                    got: w[1].a,
                    gap: (w[1].a - w[0].b).abs(),
                });
            }
        }
        let speed_bound = segments.iter().map(Segment::max_speed).fold(0.0, f64::max);
        Ok(WorldLine {
            charge,
            segments,
            join_order,
            speed_bound,
        })
    }

    /// Sample a closed-form curve onto `n_segments` equal pieces of the
    /// given polynomial degree.
    pub fn from_fn(
        charge: ChargeParams,
        f: impl Fn(f64) -> Vec3,
        t_lo: f64,
        t_hi: f64,
        n_segments: usize,
        degree: usize,
    ) -> Result<Self> {
        if !(t_lo < t_hi) || n_segments == 0 {
            return Err(Error::InvalidArgument(
                "need t_lo < t_hi and at least one segment".into(),
            ));
        }
        let mut segments = Vec::with_capacity(n_segments);
        let mut edges: Vec<f64> = (0..=n_segments)
            .map(|k| t_lo + (t_hi - t_lo) * k as f64 / n_segments as f64)
            .collect();
        edges[0] = t_lo;
        edges[n_segments] = t_hi;
        for k in 0..n_segments {
            let (a, b) = (edges[k], edges[k + 1]);
            let nodes = chebyshev::lobatto_nodes(a, b, 2 * degree + 1);
            let values: Vec<Vec3> = nodes.iter().map(|&t| f(t)).collect();
            let samples = ParamSamples::new(nodes, values)?;
            segments.push(fit_segment(&samples, degree)?);
        }
        WorldLine::new(charge, segments, DEFAULT_JOIN_ORDER, 1e-9)
    }

    pub fn charge(&self) -> &ChargeParams {
        &self.charge
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn join_order(&self) -> usize {
        self.join_order
    }

    pub fn t_lo(&self) -> f64 {
        self.segments[0].a
    }

    pub fn t_hi(&self) -> f64 {
        self.segments[self.segments.len() - 1].b
    }

    pub fn coverage(&self) -> (f64, f64) {
        (self.t_lo(), self.t_hi())
    }

    pub fn covers(&self, t: f64) -> bool {
        t >= self.t_lo() && t <= self.t_hi()
    }

    /// Certified bound on `‖q̇‖` over all segments (dense-grid maximum).
    pub fn speed_bound(&self) -> f64 {
        self.speed_bound
    }

    fn segment_for(&self, t: f64) -> Result<&Segment> {
        if !self.covers(t) {
            return Err(Error::OutOfDomain {
                t,
                lo: self.t_lo(),
                hi: self.t_hi(),
                side: None,
            });
        }
        // first segment whose right endpoint is >= t; joins resolve left
        let idx = self.segments.partition_point(|s| s.b < t);
        Ok(&self.segments[idx.min(self.segments.len() - 1)])
    }

    /// Derivatives `q, q̇, …, q^(order)` at a covered time `t`.
    pub fn eval(&self, t: f64, order: usize) -> Result<Vec<Vec3>> {
        let seg = self.segment_for(t)?;
        if order > seg.degree {
            return Err(Error::InvalidArgument(format!(
                "derivative order {order} exceeds segment degree {}",
                seg.degree
            )));
        }
        Ok(seg.derivatives(t, order))
    }

    pub fn position(&self, t: f64) -> Result<Vec3> {
        Ok(self.eval(t, 0)?[0])
    }

    /// Momentum `m γ(q̇) q̇` at `t`, derived from the stored trajectory.
    pub fn momentum(&self, t: f64) -> Result<Vec3> {
        let d = self.eval(t, 1)?;
        momentum_of_velocity(d[1], self.charge.mass)
    }

    /// Taylor coefficients `q^(k)(t)/k!` for `k = 0..=order` at `t`.
    pub fn jet(&self, t: f64, order: usize) -> Result<[Vec<f64>; 3]> {
        let seg = self.segment_for(t)?;
        if order > seg.degree {
            return Err(Error::InvalidArgument(format!(
                "jet order {order} exceeds segment degree {}",
                seg.degree
            )));
        }
        Ok(seg.jet(t, order))
    }

    /// Append a segment to one end, verifying exact abutment and join
    /// smoothness. Returns the extended worldline; `self` is unchanged.
    pub fn append_segment(&self, seg: Segment, side: Side, join_tol: f64) -> Result<WorldLine> {
        let (expected, got) = match side {
            Side::Future => (self.t_hi(), seg.a),
            Side::Past => (self.t_lo(), seg.b),
        };
        let gap = (got - expected).abs();
        if gap > ABUT_TOL * (1.0 + expected.abs()) {
            return Err(Error::IntervalMismatch {
                expected,
                got,
                gap,
            });
        }
        // snap the shared endpoint so coverage stays exactly contiguous
        let seg = if got == expected {
            seg
        } else {
            match side {
                Side::Future => Segment::new(expected, seg.b, seg.degree, seg.coeffs)?,
                Side::Past => Segment::new(seg.a, expected, seg.degree, seg.coeffs)?,
            }
        };
        let (left, right, at) = match side {
            Side::Future => (self.segments.last().unwrap(), &seg, expected),
            Side::Past => (&seg, &self.segments[0], expected),
        };
        let mm = join_mismatches(left, right, at, self.join_order);
        for (order, &m) in mm.iter().enumerate() {
            if m > join_tol {
                return Err(Error::SmoothnessViolation {
                    at,
                    order,
                    mismatch: m,
                    tol: join_tol,
                });
            }
        }
        let mut segments = self.segments.clone();
        match side {
            Side::Future => segments.push(seg),
            Side::Past => segments.insert(0, seg),
        }
        let speed_bound = self.speed_bound.max(segments_speed(&segments, side));
        Ok(WorldLine {
            charge: self.charge,
            segments,
            join_order: self.join_order,
            speed_bound,
        })
    }
}

fn segments_speed(segments: &[Segment], side: Side) -> f64 {
    match side {
        Side::Future => segments.last().unwrap().max_speed(),
        Side::Past => segments[0].max_speed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::ParticleLabel;

    fn unit_charge() -> ChargeParams {
        ChargeParams::new(1.0, 1.0, ParticleLabel::One).unwrap()
    }

    fn constant_line(v: Vec3) -> WorldLine {
        WorldLine::from_fn(unit_charge(), move |_| v, 0.0, 2.0, 2, 4).unwrap()
    }

    #[test]
    fn constant_worldline_derivatives() {
        let w = constant_line(Vec3::new(1.0, 0.0, 0.0));
        let d = w.eval(1.3, 2).unwrap();
        assert!((d[0] - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-14);
        assert!(d[1].norm() < 1e-13);
        assert!(d[2].norm() < 1e-12);
    }

    #[test]
    fn eval_at_boundary_and_beyond() {
        let w = constant_line(Vec3::zero());
        assert!(w.eval(2.0, 0).is_ok());
        assert!(matches!(
            w.eval(2.0 + 1e-9, 0),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            w.eval(-1e-9, 0),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn schild_like_circle_derivatives() {
        // q(t) = (cos 0.1 t, sin 0.1 t, 0): q(0) = (1,0,0), q'(0) = (0,0.1,0)
        let w = WorldLine::from_fn(
            unit_charge(),
            |t| Vec3::new((0.1 * t).cos(), (0.1 * t).sin(), 0.0),
            -1.0,
            1.0,
            1,
            16,
        )
        .unwrap();
        let d = w.eval(0.0, 1).unwrap();
        assert!((d[0] - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-13);
        assert!((d[1] - Vec3::new(0.0, 0.1, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn fit_underdetermined_rejected() {
        let samples = ParamSamples::new(
            vec![0.0, 1.0],
            vec![Vec3::zero(), Vec3::new(1.0, 0.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(
            fit_segment(&samples, 3),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn fit_recovers_cubic_exactly() {
        let f = |t: f64| Vec3::new(t * t * t - t, 2.0 * t, -1.0 + t * t);
        let nodes = chebyshev::lobatto_nodes(0.0, 1.5, 9);
        let values: Vec<Vec3> = nodes.iter().map(|&t| f(t)).collect();
        let samples = ParamSamples::new(nodes, values).unwrap();
        let seg = fit_segment(&samples, 3).unwrap();
        for k in 0..30 {
            let t = 1.5 * (k as f64 + 0.5) / 30.0;
            assert!((seg.value(t) - f(t)).norm() < 1e-13);
        }
    }

    #[test]
    fn fit_of_sine_reports_small_midpoint_residual() {
        let nodes = chebyshev::lobatto_nodes(0.0, 1.0, 33);
        let values: Vec<Vec3> = nodes.iter().map(|&t| Vec3::new(t.sin(), 0.0, 0.0)).collect();
        let samples = ParamSamples::new(nodes, values).unwrap();
        let (_, report) = fit_segment_with_report(&samples, 16).unwrap();
        assert!(report.node_residual < 1e-14);
        assert!(report.holdout_residual < 1e-14);
    }

    #[test]
    fn reparameterize_identity_is_exact() {
        let t: Vec<f64> = (0..9).map(|k| k as f64 / 8.0).collect();
        let values: Vec<Vec3> = t.iter().map(|&tk| Vec3::new(tk * tk, 0.0, 1.0)).collect();
        let parametric = ParametricSamples {
            t: t.clone(),
            tau: t.clone(),
            rate: vec![1.0; 9],
            values: values.clone(),
        };
        let out = reparameterize(&parametric, &t).unwrap();
        assert_eq!(out.params, t);
        for (a, b) in out.values.iter().zip(values.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn reparameterize_linear_delay() {
        // τ(t) = 2t, q(τ) = (τ, 0, 0): target τ* = 1 → t* = 0.5, q = (1,0,0)
        let t: Vec<f64> = (0..9).map(|k| k as f64 / 8.0).collect();
        let parametric = ParametricSamples {
            t: t.clone(),
            tau: t.iter().map(|&x| 2.0 * x).collect(),
            rate: vec![2.0; 9],
            values: t.iter().map(|&x| Vec3::new(2.0 * x, 0.0, 0.0)).collect(),
        };
        let out = reparameterize(&parametric, &[1.0]).unwrap();
        assert!((out.params[0] - 1.0).abs() < 1e-15);
        assert!((out.values[0] - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn reparameterize_rejects_nonmonotone() {
        let t: Vec<f64> = (0..5).map(|k| k as f64).collect();
        let parametric = ParametricSamples {
            t: t.clone(),
            tau: vec![0.0, 1.0, 0.5, 2.0, 3.0],
            rate: vec![1.0, 1.0, -1.0, 1.0, 1.0],
            values: vec![Vec3::zero(); 5],
        };
        assert!(matches!(
            reparameterize(&parametric, &[0.5]),
            Err(Error::MonotonicityViolation(_))
        ));
    }

    #[test]
    fn append_detects_gap_and_kink() {
        let w = constant_line(Vec3::zero());
        // gap
        let far = Segment::new(2.001, 3.0, 2, [vec![0.0; 3], vec![0.0; 3], vec![0.0; 3]]).unwrap();
        assert!(matches!(
            w.append_segment(far, Side::Future, 1e-6),
            Err(Error::IntervalMismatch { .. })
        ));
        // kinked velocity: q(t) = 0.1 (t-2) has slope 0.1 against slope 0
        let nodes = chebyshev::lobatto_nodes(2.0, 3.0, 9);
        let values: Vec<Vec3> = nodes
            .iter()
            .map(|&t| Vec3::new(0.1 * (t - 2.0), 0.0, 0.0))
            .collect();
        let kinked = fit_segment(&ParamSamples::new(nodes, values).unwrap(), 3).unwrap();
        match w.append_segment(kinked, Side::Future, 1e-6) {
            Err(Error::SmoothnessViolation { order, .. }) => assert_eq!(order, 1),
            other => panic!("expected smoothness violation, got {other:?}"),
        }
    }

    #[test]
    fn append_exact_continuation_succeeds_and_preserves_old_values() {
        let f = |t: f64| Vec3::new(t * t - 0.25 * t, 0.5 * t, 0.0);
        let w = WorldLine::from_fn(unit_charge(), f, 0.0, 1.0, 1, 6).unwrap();
        let nodes = chebyshev::lobatto_nodes(1.0, 2.0, 13);
        let values: Vec<Vec3> = nodes.iter().map(|&t| f(t)).collect();
        let seg = fit_segment(&ParamSamples::new(nodes, values).unwrap(), 6).unwrap();
        let before: Vec<Vec3> = (0..20)
            .map(|k| w.position(k as f64 / 19.0).unwrap())
            .collect();
        let extended = w.append_segment(seg, Side::Future, 1e-9).unwrap();
        assert_eq!(extended.t_hi(), 2.0);
        for (k, &v) in before.iter().enumerate() {
            let t = k as f64 / 19.0;
            assert_eq!(extended.position(t).unwrap(), v, "value changed at t={t}");
        }
    }

    #[test]
    fn worldline_json_roundtrip_is_bit_exact() {
        let w = WorldLine::from_fn(
            unit_charge(),
            |t| Vec3::new((0.3 * t).cos(), (0.3 * t).sin(), 0.1 * t),
            -2.0,
            2.0,
            3,
            10,
        )
        .unwrap();
        let json = serde_json::to_string(&w).unwrap();
        let back: WorldLine = serde_json::from_str(&json).unwrap();
        for k in 0..1000 {
            let t = -2.0 + 4.0 * (k as f64 / 999.0);
            assert_eq!(w.position(t).unwrap(), back.position(t).unwrap());
        }
    }
}
