//! Brute-force grid searches that share no code with the library's
//! function implementations.

#![allow(dead_code)]

use std::f64::consts::PI;

/// `lo, lo + step, ..., hi`, with `hi` hit exactly.
pub fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n)
        .map(|m| if m == n { hi } else { lo + step * m as f64 })
        .collect()
}

/// Every grid point whose value is within `tol` of the grid maximum of
/// `(|x| + |y|) exp(-(x^2 + y^2))`.
pub fn four_peak_maxima(lo: f64, hi: f64, step: f64, tol: f64) -> (f64, Vec<(f64, f64)>) {
    let t = axis(lo, hi, step);
    let mut best = f64::NEG_INFINITY;
    let mut values = Vec::with_capacity(t.len() * t.len());
    for &y in &t {
        for &x in &t {
            let v = (x.abs() + y.abs()) * (-(x * x + y * y)).exp();
            best = best.max(v);
            values.push((x, y, v));
        }
    }
    let argmax = values
        .into_iter()
        .filter(|&(_, _, v)| v >= best - tol)
        .map(|(x, y, _)| (x, y))
        .collect();
    (best, argmax)
}

/// Minimizer of the 10 x 10 stochastic grid function on a square grid over
/// `[0, 10]^2`, evaluated in separable form:
/// `f(x, y) = -5 u(x) u(y) - sum_i a_i(x) sum_j eps_ij a_j(y)` with
/// `u(t) = exp(-(t - pi)^2)` and `a_i(t) = exp(-(t - i)^2)`.
pub fn stochastic_grid_argmin(eps: &[f64], step: f64) -> (f64, f64, f64) {
    assert_eq!(eps.len(), 100);
    let t = axis(0.0, 10.0, step);
    let u: Vec<f64> = t.iter().map(|&v| (-(v - PI) * (v - PI)).exp()).collect();
    let a: Vec<[f64; 10]> = t
        .iter()
        .map(|&v| std::array::from_fn(|i| (-(v - (i + 1) as f64).powi(2)).exp()))
        .collect();
    // w[n][i] = sum_j eps_ij a_j(y_n)
    let w: Vec<[f64; 10]> = a
        .iter()
        .map(|ay| std::array::from_fn(|i| (0..10).map(|j| eps[i * 10 + j] * ay[j]).sum()))
        .collect();
    let mut best = (f64::NAN, f64::NAN, f64::INFINITY);
    for (n, &y) in t.iter().enumerate() {
        for (m, &x) in t.iter().enumerate() {
            let s: f64 = (0..10).map(|i| a[m][i] * w[n][i]).sum();
            let f = -5.0 * u[m] * u[n] - s;
            if f < best.2 {
                best = (x, y, f);
            }
        }
    }
    best
}

/// Same separable form at a single point.
pub fn stochastic_grid_at(x: f64, y: f64, eps: &[f64]) -> f64 {
    let ax: Vec<f64> = (1..=10).map(|i| (-(x - i as f64).powi(2)).exp()).collect();
    let ay: Vec<f64> = (1..=10).map(|j| (-(y - j as f64).powi(2)).exp()).collect();
    let mut s = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            s += eps[i * 10 + j] * ax[i] * ay[j];
        }
    }
    -5.0 * (-(x - PI).powi(2)).exp() * (-(y - PI).powi(2)).exp() - s
}
