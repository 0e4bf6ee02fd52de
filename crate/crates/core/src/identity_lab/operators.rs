//! Finite-difference spot checks of the operator identities behind the
//! integral representations.
//!
//! The sine operator `-d/(sin u du)` is `d/dx` in `x = cos u`, so iterates are
//! taken as nested central differences in `x` of `f(arccos x)` and then
//! Richardson-extrapolated. Roundoff grows like `h^{-n}`; the step below keeps
//! the fourth iterate well inside `1e-4`.

#[allow(unused_imports)] // float methods are inherent in `core` on recent toolchains
use num_traits::Float;

use crate::orthopoly::{gegenbauer_raw, jacobi_raw};
use crate::special::gamma_ratio;

/// Step in `x = cos u` for the sine operator.
pub const SINE_OPERATOR_STEP: f64 = 1e-2;
/// Step in `t` for the `d/(4t dt)` operator.
pub const TRANSFER_STEP: f64 = 1e-2;

/// `order`-fold nested central difference of `f` with a variable prefactor:
/// `D g(y) = scale(y) · (g(y+h) - g(y-h)) / 2h`.
fn nested_central(f: &dyn Fn(f64) -> f64, scale: &dyn Fn(f64) -> f64, order: usize, y: f64, h: f64) -> f64 {
    if order == 0 {
        return f(y);
    }
    let up = nested_central(f, scale, order - 1, y + h, h);
    let down = nested_central(f, scale, order - 1, y - h, h);
    scale(y) * (up - down) / (2.0 * h)
}

/// Richardson extrapolation of [`nested_central`] over the steps `h, h/2, ..., h/2^{levels-1}`.
///
/// The error of a nested central difference is even in `h`, so each level
/// removes one more power of `h²`.
pub fn richardson_nested(
    f: &dyn Fn(f64) -> f64,
    scale: &dyn Fn(f64) -> f64,
    order: usize,
    y: f64,
    h: f64,
    levels: usize,
) -> f64 {
    let levels = levels.max(1);
    let mut table: alloc::vec::Vec<f64> =
        (0..levels).map(|k| nested_central(f, scale, order, y, h / (1u64 << k) as f64)).collect();
    for j in 1..levels {
        let factor = 4.0f64.powi(j as i32);
        for k in 0..levels - j {
            table[k] = (factor * table[k + 1] - table[k]) / (factor - 1.0);
        }
    }
    table[0]
}

/// 27 equally spaced angles on `[0.3, π - 0.3]` for the spot checks; the
/// stencil shrinks and roundoff dominates closer to the poles.
pub fn spot_check_angles() -> alloc::vec::Vec<f64> {
    let span = core::f64::consts::PI - 0.6;
    (0..27).map(|k| 0.3 + span * k as f64 / 26.0).collect()
}

/// `(-d/(sin u du))^order g` at `u ∈ (0, π)`.
///
/// Near the poles the step shrinks to keep the stencil inside the interval, at
/// the cost of roundoff growing like `h^{-order}`.
/// `levels` Richardson levels are applied on top of the step [`SINE_OPERATOR_STEP`].
pub fn sine_operator_power(g: &dyn Fn(f64) -> f64, order: usize, u: f64, levels: usize) -> f64 {
    let x = u.cos();
    // the stencil spans order·h on each side and must stay inside [-1, 1]
    let room = (1.0 - x.abs()) / order.max(1) as f64;
    let h = SINE_OPERATOR_STEP.min(0.9 * room);
    let in_x = |x: f64| g(x.acos());
    richardson_nested(&in_x, &|_| 1.0, order, x, h, levels)
}

/// `(-d/(sin u du))^n [sin(nu)/sin u]`, which vanishes identically.
///
/// The argument is a polynomial of degree `n - 1` in `cos u`, which the plain
/// `n`-fold stencil already annihilates; extrapolation would only add roundoff.
pub fn idsin_residual(n: usize, u: f64) -> f64 {
    let nf = n as f64;
    sine_operator_power(&|w: f64| (nf * w).sin() / w.sin(), n, u, 1)
}

/// `(-d/(sin u du))^n [sin((2ℓ+n+1)u)/sin u] - 2^n n! C_{2ℓ}^{(n+1)}(cos u)`.
pub fn operator_collapse_residual(n: usize, ell: usize, u: f64) -> f64 {
    let freq = (2 * ell + n + 1) as f64;
    let nf = n as f64;
    let fd = sine_operator_power(&|w: f64| (freq * w).sin() / w.sin(), n, u, 4);
    let closed = 2.0f64.powi(n as i32) * gamma_ratio(nf + 1.0, 1.0) * gegenbauer_raw(2 * ell, nf + 1.0, u.cos());
    fd - closed
}

/// `Σ_{k=0}^{ℓ} cos((2k+z)u)`.
pub fn partial_cos_sum(ell: usize, z: f64, u: f64) -> f64 {
    (0..=ell).map(|k| ((2.0 * k as f64 + z) * u).cos()).sum()
}

/// `(1/2)[sin((1-z)u) + sin((2ℓ+z+1)u)] / sin u`.
///
/// The first term is odd in `z - 1`; with `sin((z-1)u)` the identity only holds at `z = 1`.
pub fn partial_cos_sum_closed(ell: usize, z: f64, u: f64) -> f64 {
    let l = ell as f64;
    0.5 * (((1.0 - z) * u).sin() + ((2.0 * l + z + 1.0) * u).sin()) / u.sin()
}

/// Relative residual of
/// `P_ℓ^{(n,m)}(2t²-1) = 2^m (ℓ+n)!/(ℓ+n+m)! · (d/(4t dt))^m P_{ℓ+m}^{(n-m,0)}(2t²-1)`,
/// with the derivative taken by finite differences in `t`. Requires `m ≤ n`, `t > 0`.
pub fn derivative_transfer_residual(n: usize, m: usize, ell: usize, t: f64) -> f64 {
    let (nf, mf, lf) = (n as f64, m as f64, ell as f64);
    let source = |s: f64| jacobi_raw(ell + m, nf - mf, 0.0, 2.0 * s * s - 1.0);
    let fd = richardson_nested(&source, &|s| 1.0 / (4.0 * s), m, t, TRANSFER_STEP, 3);
    let rhs = 2.0f64.powi(m as i32) * gamma_ratio(lf + nf + 1.0, lf + nf + mf + 1.0) * fd;
    let lhs = jacobi_raw(ell, nf, mf, 2.0 * t * t - 1.0);
    (lhs - rhs).abs() / lhs.abs().max(1.0)
}
