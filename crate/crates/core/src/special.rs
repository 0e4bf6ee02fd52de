//! Gamma-function ratios and Beta moments.
//!
//! Ratios whose arguments differ by a small integer are formed as a rising
//! factorial; everything else goes through log-gamma differences with sign
//! tracking, so nothing overflows for degrees far beyond 170.

#[allow(unused_imports)] // float methods are inherent in `core` on recent toolchains
use num_traits::Float;

use crate::hypergeom::pochhammer;

/// Largest integer gap for which a ratio is formed as an explicit product.
const PRODUCT_GAP: f64 = 64.0;

/// `ln|Γ(x)|` together with the sign of `Γ(x)`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    let (value, sign) = libm::lgamma_r(x);
    (value, if sign < 0 { -1.0 } else { 1.0 })
}

fn small_integer_gap(gap: f64) -> bool {
    (0.0..=PRODUCT_GAP).contains(&gap) && gap.fract() == 0.0
}

/// `Γ(a) / Γ(b)`.
pub fn gamma_ratio(a: f64, b: f64) -> f64 {
    let gap = a - b;
    if small_integer_gap(gap) {
        let p = pochhammer(b, gap as usize);
        if p.is_finite() {
            return p;
        }
    } else if small_integer_gap(-gap) {
        let p = pochhammer(a, (-gap) as usize);
        if p.is_finite() && p != 0.0 {
            return 1.0 / p;
        }
    }
    let (la, sa) = ln_gamma_signed(a);
    let (lb, sb) = ln_gamma_signed(b);
    sa * sb * (la - lb).exp()
}

/// `Γ(a1) Γ(a2) ... / (Γ(b1) Γ(b2) ...)` as a product of pairwise ratios.
///
/// Unmatched factors fall back to a single log-gamma term.
pub fn gamma_quotient(numer: &[f64], denom: &[f64]) -> f64 {
    let mut log_sum = 0.0;
    let mut sign = 1.0;
    let mut product = 1.0;
    let pairs = numer.len().min(denom.len());
    for (a, b) in numer.iter().zip(denom) {
        product *= gamma_ratio(*a, *b);
    }
    for a in &numer[pairs..] {
        let (l, s) = ln_gamma_signed(*a);
        log_sum += l;
        sign *= s;
    }
    for b in &denom[pairs..] {
        let (l, s) = ln_gamma_signed(*b);
        log_sum -= l;
        sign *= s;
    }
    product * sign * log_sum.exp()
}

/// Euler Beta function `B(a, b)`.
pub fn beta(a: f64, b: f64) -> f64 {
    gamma_quotient(&[a, b], &[a + b])
}

/// `∫_{-1}^{1} (1 - v^2)^a dv = B(1/2, a + 1)`.
pub fn jacobi_weight_mass(a: f64) -> f64 {
    beta(0.5, a + 1.0)
}

/// `∫_{-1}^{1} v^k (1 - v^2)^a dv`; zero for odd `k`, `B((k+1)/2, a+1)` otherwise.
pub fn jacobi_weight_moment(k: usize, a: f64) -> f64 {
    if k % 2 == 1 {
        0.0
    } else {
        beta((k as f64 + 1.0) / 2.0, a + 1.0)
    }
}

/// `n!` as a float.
pub fn factorial(n: usize) -> f64 {
    gamma_ratio(n as f64 + 1.0, 1.0)
}
