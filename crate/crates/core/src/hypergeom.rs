//! Terminating Gauss hypergeometric series `2F1(-m, b; c; x)` and the
//! hypergeometric representations of the Jacobi and Gegenbauer polynomials.
//!
//! The series alternate in sign and cancel badly for large `m`: at degree 30
//! the terms reach `1e18` while the sum is `O(1)`. Terms are therefore
//! generated by the ratio recurrence and accumulated in double-double
//! arithmetic, which keeps about 1e-14 relative accuracy up to `m ≈ 30` on
//! `x ∈ [0, 1/2]` and up to `m ≈ 25` on `[0, 1]`. Beyond that the result is
//! still well defined but the conditioning of the alternating sum dominates.

use crate::dd::DoubleF64;
use crate::orthopoly::GegenbauerIndex;
use crate::{Error, Result};

/// Rising factorial `x (x+1) ... (x+k-1)`; `1` for `k = 0`.
pub fn pochhammer(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x + i as f64))
}

/// Parameters of `2F1(-m, b; c; x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminatingF21 {
    m: usize,
    b: f64,
    c: f64,
}

impl TerminatingF21 {
    /// Rejects `c ∈ {0, -1, ..., 1-m}`, where a lower Pochhammer symbol vanishes.
    pub fn new(m: usize, b: f64, c: f64) -> Result<Self> {
        let hits_pole = c <= 0.0 && c == libm::trunc(c) && (-c) < m as f64;
        if hits_pole || c.is_nan() {
            return Err(Error::InvalidHypergeometric { m, c });
        }
        Ok(Self { m, b, c })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// `Σ_{k=0}^{m} (-m)_k (b)_k / ((c)_k k!) x^k`, ascending in `k`.
pub fn f21_terminating(p: &TerminatingF21, x: f64) -> f64 {
    f21_dd(p, x).to_f64()
}

fn f21_dd(p: &TerminatingF21, x: f64) -> DoubleF64 {
    let x = DoubleF64::from(x);
    let mut term = DoubleF64::ONE;
    let mut sum = DoubleF64::ONE;
    for k in 0..p.m {
        let kf = k as f64;
        let numer = DoubleF64::from(kf - p.m as f64) * (DoubleF64::from(p.b) + DoubleF64::from(kf));
        let denom = (DoubleF64::from(p.c) + DoubleF64::from(kf)) * DoubleF64::from(kf + 1.0);
        term = term * numer / denom * x;
        sum = sum + term;
    }
    sum
}

fn pochhammer_over_factorial_dd(a: f64, k: usize) -> DoubleF64 {
    (0..k).fold(DoubleF64::ONE, |acc, i| {
        let i = i as f64;
        acc * (DoubleF64::from(a) + DoubleF64::from(i)) / DoubleF64::from(i + 1.0)
    })
}

/// `P_ℓ^{(α,β)}(x) = (α+1)_ℓ/ℓ! · 2F1(-ℓ, ℓ+α+β+1; α+1; (1-x)/2)`.
///
/// For `x < 0` the reflection `P_ℓ^{(α,β)}(x) = (-1)^ℓ P_ℓ^{(β,α)}(-x)` is
/// applied first so the series argument never exceeds `1/2`.
pub fn jacobi_from_f21(ell: usize, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::ParameterOutOfRange { name: "alpha", value: alpha });
    }
    if !(beta > -1.0) {
        return Err(Error::ParameterOutOfRange { name: "beta", value: beta });
    }
    let (a, b, y, sign) = if x < 0.0 {
        (beta, alpha, -x, if ell.is_multiple_of(2) { 1.0 } else { -1.0 })
    } else {
        (alpha, beta, x, 1.0)
    };
    let l = ell as f64;
    let series = TerminatingF21::new(ell, l + a + b + 1.0, a + 1.0)?;
    // (1 - y)/2 is exact for y in [0, 1]
    let value = pochhammer_over_factorial_dd(a + 1.0, ell) * f21_dd(&series, 0.5 * (1.0 - y));
    Ok(sign * value.to_f64())
}

/// `C_{2ℓ}^{(λ)}(t) = (-1)^ℓ (λ)_ℓ/ℓ! · 2F1(-ℓ, ℓ+λ; 1/2; t²)`.
pub fn gegenbauer_from_f21(ell: usize, lambda: f64, t: f64) -> Result<f64> {
    GegenbauerIndex::new(2 * ell, lambda)?;
    let series = TerminatingF21::new(ell, ell as f64 + lambda, 0.5)?;
    let value = pochhammer_over_factorial_dd(lambda, ell) * f21_dd(&series, t * t);
    let sign = if ell.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * value.to_f64())
}

/// `2F1(-m, m; 1/2; (1-v)/2)`, which is the Chebyshev polynomial `T_m(v)`.
pub fn chebyshev_f21(m: usize, v: f64) -> f64 {
    let p = TerminatingF21 { m, b: m as f64, c: 0.5 };
    f21_terminating(&p, 0.5 * (1.0 - v))
}
