//! Chebyshev series on an interval: nodes, evaluation, differentiation and
//! least-squares fitting.
//!
//! Series are stored as coefficients of `T_0 .. T_n` on the normalized
//! variable `u ∈ [−1, 1]`; the mapping to an interval `[a, b]` is
//! `u = (2t − a − b) / (b − a)`.

use nalgebra::{DMatrix, DVector};

/// Normalize `t ∈ [a, b]` to `u ∈ [−1, 1]`. Exact at both endpoints.
pub fn to_unit(a: f64, b: f64, t: f64) -> f64 {
    (2.0 * t - a - b) / (b - a)
}

/// `count` Chebyshev–Lobatto nodes on `[a, b]`, ascending, endpoints exact.
pub fn lobatto_nodes(a: f64, b: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "need at least two nodes");
    let n = count - 1;
    let mut out = Vec::with_capacity(count);
    for k in 0..=n {
        if k == 0 {
            out.push(a);
        } else if k == n {
            out.push(b);
        } else {
            let u = -(std::f64::consts::PI * k as f64 / n as f64).cos();
            out.push(0.5 * (a + b) + 0.5 * (b - a) * u);
        }
    }
    out
}

/// Clenshaw evaluation of `Σ c_k T_k(u)`.
pub fn eval(coeffs: &[f64], u: f64) -> f64 {
    let n = coeffs.len();
    if n == 0 {
        return 0.0;
    }
    if n == 1 {
        return coeffs[0];
    }
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    let two_u = 2.0 * u;
    for k in (1..n).rev() {
        let b0 = coeffs[k] + two_u * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    coeffs[0] + u * b1 - b2
}

/// Coefficients of the derivative with respect to `u` of `Σ c_k T_k(u)`.
///
/// The result has the same length as the input with a zero top coefficient,
/// which keeps repeated differentiation simple.
pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    let mut d = vec![0.0; n];
    if n < 2 {
        return d;
    }
    let top = n - 1;
    d[top - 1] = 2.0 * top as f64 * coeffs[top];
    for k in (1..top).rev() {
        d[k - 1] = d[k + 1] + 2.0 * k as f64 * coeffs[k];
    }
    d[0] *= 0.5;
    d
}

/// Row of basis values `T_0(u) .. T_degree(u)`.
fn basis_row(u: f64, degree: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(degree + 1);
    let mut t_prev = 1.0;
    row.push(t_prev);
    if degree == 0 {
        return row;
    }
    let mut t_cur = u;
    row.push(t_cur);
    for _ in 2..=degree {
        let t_next = 2.0 * u * t_cur - t_prev;
        t_prev = t_cur;
        t_cur = t_next;
        row.push(t_cur);
    }
    row
}

/// Least-squares fit of scalar samples `(u_k, y_k)` by a degree-`degree`
/// Chebyshev series. Returns the coefficients and the largest residual at
/// the sample nodes.
pub fn fit(us: &[f64], ys: &[f64], degree: usize) -> (Vec<f64>, f64) {
    assert_eq!(us.len(), ys.len());
    assert!(us.len() > degree, "need at least degree+1 samples");
    let rows = us.len();
    let cols = degree + 1;
    let mut a = DMatrix::zeros(rows, cols);
    for (r, &u) in us.iter().enumerate() {
        for (c, v) in basis_row(u, degree).into_iter().enumerate() {
            a[(r, c)] = v;
        }
    }
    let b = DVector::from_column_slice(ys);
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&b, 1e-300)
        .expect("svd solve cannot fail with computed factors");
    let resid = (&a * &x) - &b;
    let worst = resid.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    (x.iter().copied().collect(), worst)
}

/// Two-point Hermite interpolation: given derivative jets at `u = −1` and
/// `u = +1` (scaled Taylor coefficients `f^(k)/k!` in the `u` variable),
/// return Chebyshev coefficients of the unique polynomial of degree
/// `2·jet_len − 1` matching both jets.
pub fn hermite_from_jets(left: &[f64], right: &[f64]) -> Vec<f64> {
    assert_eq!(left.len(), right.len());
    let m = left.len();
    let degree = 2 * m - 1;
    // Solve for monomial coefficients in (u+1) and (u-1) mixed basis via a
    // plain collocation-free linear system on Chebyshev coefficients: build
    // constraint rows d^k/du^k T_j at u = ∓1.
    let cols = degree + 1;
    let mut a = DMatrix::zeros(2 * m, cols);
    let mut b = DVector::zeros(2 * m);
    for j in 0..cols {
        let mut unit = vec![0.0; cols];
        unit[j] = 1.0;
        let mut cur = unit;
        for k in 0..m {
            // k-th derivative of T_j at the endpoints
            a[(k, j)] = eval(&cur, -1.0);
            a[(m + k, j)] = eval(&cur, 1.0);
            cur = derivative(&cur);
        }
    }
    let mut fact = 1.0;
    for k in 0..m {
        if k > 0 {
            fact *= k as f64;
        }
        b[k] = left[k] * fact;
        b[m + k] = right[k] * fact;
    }
    let svd = a.svd(true, true);
    let x = svd
        .solve(&b, 1e-300)
        .expect("svd solve cannot fail with computed factors");
    x.iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lobatto_endpoints_exact() {
        let nodes = lobatto_nodes(-2.5, 7.25, 17);
        assert_eq!(nodes[0], -2.5);
        assert_eq!(nodes[16], 7.25);
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn derivative_of_t3() {
        // T_3' = 6 T_2 + 3 T_0
        let d = derivative(&[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(d, vec![3.0, 0.0, 6.0, 0.0]);
    }

    #[test]
    fn fit_reproduces_polynomial() {
        // y = u^3 - 2u = (T_3 + 3 T_1)/4 - 2 T_1
        let us = lobatto_nodes(-1.0, 1.0, 9);
        let ys: Vec<f64> = us.iter().map(|&u| u * u * u - 2.0 * u).collect();
        let (c, worst) = fit(&us, &ys, 3);
        assert!(worst < 1e-14);
        assert!((c[3] - 0.25).abs() < 1e-14);
        assert!((c[1] - (-1.25)).abs() < 1e-14);
    }

    #[test]
    fn fit_of_sine_is_spectral() {
        let us = lobatto_nodes(-1.0, 1.0, 33);
        let ys: Vec<f64> = us.iter().map(|&u| u.sin()).collect();
        let (c, worst) = fit(&us, &ys, 16);
        assert!(worst < 1e-14);
        // check off-node accuracy
        for k in 0..100 {
            let u = -1.0 + 2.0 * (k as f64 + 0.5) / 100.0;
            assert!((eval(&c, u) - u.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn hermite_matches_jets() {
        // f(u) = exp(u/2): jets of order 0..3 at both ends
        let f = |u: f64| (0.5 * u).exp();
        let jet = |u: f64| {
            let mut out = vec![];
            let mut fact = 1.0;
            for k in 0..4usize {
                if k > 0 {
                    fact *= k as f64;
                }
                out.push(f(u) * 0.5_f64.powi(k as i32) / fact);
            }
            out
        };
        let c = hermite_from_jets(&jet(-1.0), &jet(1.0));
        assert_eq!(c.len(), 8);
        let mut cur = c.clone();
        for k in 0..4usize {
            let scale = 0.5_f64.powi(k as i32);
            assert!((eval(&cur, -1.0) - f(-1.0) * scale).abs() < 1e-12);
            assert!((eval(&cur, 1.0) - f(1.0) * scale).abs() < 1e-12);
            cur = derivative(&cur);
        }
        // interior error of two-point Hermite with 8 conditions
        for k in 0..50 {
            let u = -1.0 + 2.0 * (k as f64 + 0.5) / 50.0;
            assert!((eval(&c, u) - f(u)).abs() < 1e-9);
        }
    }
}
