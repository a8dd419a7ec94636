//! Adaptive Gauss-Legendre quadrature on 15-point panels.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Tolerances and subdivision budget for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            max_subdivisions: 40,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidArgument(
                "quadrature tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// 15-point Gauss-Legendre nodes and weights on [-1, 1], computed once by
/// Newton iteration on the Legendre polynomial.
fn gl15() -> &'static ([f64; 15], [f64; 15]) {
    static CACHE: OnceLock<([f64; 15], [f64; 15])> = OnceLock::new();
    CACHE.get_or_init(|| {
        let n = 15usize;
        let mut nodes = [0.0; 15];
        let mut weights = [0.0; 15];
        for k in 0..n {
            // Chebyshev initial guess, then Newton on P_n
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-17 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            nodes[n - 1 - k] = x;
            weights[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn panel(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gl15();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

fn adaptive(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    worst: &mut f64,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = panel(f, a, mid);
    let right = panel(f, mid, b);
    let err = (left + right - whole).abs();
    if err <= tol || (b - a).abs() < 1e-15 * (1.0 + a.abs() + b.abs()) {
        *worst = worst.max(err);
        return Ok(left + right);
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure { estimate: err });
    }
    let l = adaptive(f, a, mid, left, 0.5 * tol, depth - 1, worst)?;
    let r = adaptive(f, mid, b, right, 0.5 * tol, depth - 1, worst)?;
    Ok(l + r)
}

/// Integrate `f` from `a` to `b` (signed: `a > b` flips the orientation).
pub fn integrate(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    config: &QuadratureConfig,
) -> Result<f64> {
    config.validate()?;
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, orient) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let first = panel(&mut f, lo, hi);
    let tol = config.abs_tol.max(config.rel_tol * first.abs());
    let mut worst = 0.0;
    let value = adaptive(
        &mut f,
        lo,
        hi,
        first,
        tol,
        config.max_subdivisions,
        &mut worst,
    )?;
    Ok(orient * value)
}
