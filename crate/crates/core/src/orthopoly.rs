//! Classical orthogonal polynomials on `[-1, 1]`.
//!
//! Every evaluator runs the forward three-term recurrence in the degree. The
//! hypergeometric forms in [`crate::hypergeom`] are kept as an independent
//! route for testing only.

#[allow(unused_imports)] // float methods are inherent in `core` on recent toolchains
use num_traits::Float;

use crate::special::gamma_ratio;
use crate::{Error, Result};

/// Largest degree accepted by the index types.
pub const MAX_DEGREE: usize = 10_000;

/// Arguments within this distance outside `[-1, 1]` are clamped onto the interval.
pub const CLAMP_SLACK: f64 = 1e-12;

/// Degree and exponent pair `(α, β)` of a Jacobi polynomial `P_n^{(α,β)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiIndex {
    degree: usize,
    alpha: f64,
    beta: f64,
}

impl JacobiIndex {
    pub fn new(degree: usize, alpha: f64, beta: f64) -> Result<Self> {
        check_degree(degree)?;
        if !(alpha > -1.0) {
            return Err(Error::ParameterOutOfRange { name: "alpha", value: alpha });
        }
        if !(beta > -1.0) {
            return Err(Error::ParameterOutOfRange { name: "beta", value: beta });
        }
        Ok(Self { degree, alpha, beta })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Degree and parameter `λ` of a Gegenbauer polynomial `C_n^{(λ)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerIndex {
    degree: usize,
    lambda: f64,
}

impl GegenbauerIndex {
    /// `λ` must exceed `-1/2` and be nonzero.
    pub fn new(degree: usize, lambda: f64) -> Result<Self> {
        check_degree(degree)?;
        if !(lambda > -0.5) || lambda == 0.0 {
            return Err(Error::ParameterOutOfRange { name: "lambda", value: lambda });
        }
        Ok(Self { degree, lambda })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

fn check_degree(degree: usize) -> Result<()> {
    if degree > MAX_DEGREE {
        return Err(Error::ParameterOutOfRange { name: "degree", value: degree as f64 });
    }
    Ok(())
}

/// Clamps round-off excursions past `±1` and rejects anything larger.
pub fn clamp_unit(x: f64) -> Result<f64> {
    if x.is_nan() || x.abs() > 1.0 + CLAMP_SLACK {
        return Err(Error::Domain { name: "x", value: x });
    }
    Ok(x.clamp(-1.0, 1.0))
}

/// Successive values `P_0^{(α,β)}(x), P_1^{(α,β)}(x), ...`.
///
/// The iterator is unbounded; callers `take` what they need. Parameters are
/// not validated here.
#[derive(Debug, Clone)]
pub struct JacobiTerms {
    alpha: f64,
    beta: f64,
    x: f64,
    k: usize,
    prev: f64,
    curr: f64,
}

impl JacobiTerms {
    pub fn new(alpha: f64, beta: f64, x: f64) -> Self {
        Self { alpha, beta, x, k: 0, prev: 0.0, curr: 1.0 }
    }
}

impl Iterator for JacobiTerms {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let (a, b, x) = (self.alpha, self.beta, self.x);
        let out = self.curr;
        let next = match self.k {
            // explicit degree-1 polynomial; the general recurrence is 0/0 at k = 0 when α + β = -1
            0 => (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0),
            k => {
                let k = k as f64;
                let s = 2.0 * k + a + b;
                let lead = 2.0 * (k + 1.0) * (k + a + b + 1.0) * s;
                let mid = (s + 1.0) * ((s + 2.0) * s * x + (a * a - b * b));
                let back = 2.0 * (k + a) * (k + b) * (s + 2.0);
                (mid * self.curr - back * self.prev) / lead
            }
        };
        self.prev = self.curr;
        self.curr = next;
        self.k += 1;
        Some(out)
    }
}

/// Successive values `C_0^{(λ)}(x), C_1^{(λ)}(x), ...`.
#[derive(Debug, Clone)]
pub struct GegenbauerTerms {
    lambda: f64,
    x: f64,
    k: usize,
    prev: f64,
    curr: f64,
}

impl GegenbauerTerms {
    pub fn new(lambda: f64, x: f64) -> Self {
        Self { lambda, x, k: 0, prev: 0.0, curr: 1.0 }
    }
}

impl Iterator for GegenbauerTerms {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.curr;
        let k = self.k as f64;
        let next = if self.k == 0 {
            2.0 * self.lambda * self.x
        } else {
            (2.0 * (k + self.lambda) * self.x * self.curr - (k + 2.0 * self.lambda - 1.0) * self.prev)
                / (k + 1.0)
        };
        self.prev = self.curr;
        self.curr = next;
        self.k += 1;
        Some(out)
    }
}

/// Unchecked `P_n^{(α,β)}(x)` for hot loops that validated their parameters up front.
pub(crate) fn jacobi_raw(degree: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    JacobiTerms::new(alpha, beta, x).nth(degree).unwrap_or(f64::NAN)
}

/// Unchecked `C_n^{(λ)}(x)`.
pub(crate) fn gegenbauer_raw(degree: usize, lambda: f64, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut curr = 1.0;
    for k in 0..degree {
        let k = k as f64;
        let next = if k == 0.0 {
            2.0 * lambda * x
        } else {
            (2.0 * (k + lambda) * x * curr - (k + 2.0 * lambda - 1.0) * prev) / (k + 1.0)
        };
        prev = curr;
        curr = next;
    }
    curr
}

/// `P_n^{(α,β)}(x)` by forward recurrence.
pub fn jacobi_eval(idx: &JacobiIndex, x: f64) -> Result<f64> {
    let x = clamp_unit(x)?;
    Ok(jacobi_raw(idx.degree, idx.alpha, idx.beta, x))
}

/// Convenience wrapper: validates `(degree, α, β)` and evaluates.
pub fn jacobi(degree: usize, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    jacobi_eval(&JacobiIndex::new(degree, alpha, beta)?, x)
}

/// `C_n^{(λ)}(x)` by forward recurrence.
pub fn gegenbauer_eval(idx: &GegenbauerIndex, x: f64) -> Result<f64> {
    let x = clamp_unit(x)?;
    Ok(gegenbauer_raw(idx.degree, idx.lambda, x))
}

pub fn gegenbauer(degree: usize, lambda: f64, x: f64) -> Result<f64> {
    gegenbauer_eval(&GegenbauerIndex::new(degree, lambda)?, x)
}

/// Legendre polynomial `P_n(x)`.
pub fn legendre_eval(degree: usize, x: f64) -> Result<f64> {
    check_degree(degree)?;
    let x = clamp_unit(x)?;
    let mut prev = 0.0;
    let mut curr = 1.0;
    for k in 0..degree {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * curr - k * prev) / (k + 1.0);
        prev = curr;
        curr = next;
    }
    Ok(curr)
}

/// `dⁿ/dxⁿ C_{ℓ+n}^{(λ)}(x)` where `idx.degree() = ℓ + n`, via
/// `2ⁿ Γ(λ+n)/Γ(λ) · C_ℓ^{(λ+n)}(x)`.
pub fn gegenbauer_diff_shift(n: usize, idx: &GegenbauerIndex, x: f64) -> Result<f64> {
    if n > idx.degree {
        return Err(Error::Argument("derivative order exceeds the polynomial degree"));
    }
    let x = clamp_unit(x)?;
    let lambda = idx.lambda;
    // Γ(λ+n)/Γ(λ) = (λ)_n holds for negative λ too, so no log-gamma here
    let scale = crate::hypergeom::pochhammer(lambda, n) * (2.0f64).powi(n as i32);
    Ok(scale * gegenbauer_raw(idx.degree - n, lambda + n as f64, x))
}

fn check_cd_params(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > -0.5) {
        return Err(Error::ParameterOutOfRange { name: "alpha", value: alpha });
    }
    if !(beta > -0.5) {
        return Err(Error::ParameterOutOfRange { name: "beta", value: beta });
    }
    Ok(())
}

/// Weighted partial sum
/// `Σ_{k=0}^{ℓ} (2k+α+β+1) Γ(k+α+β+1)/Γ(k+β+1) P_k^{(α,β)}(x)`.
///
/// Requires `α, β > -1/2`.
pub fn cd_partial_sum(ell: usize, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    check_degree(ell)?;
    check_cd_params(alpha, beta)?;
    let x = clamp_unit(x)?;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for (k, p) in JacobiTerms::new(alpha, beta, x).take(ell + 1).enumerate() {
        let k = k as f64;
        let coeff = (2.0 * k + alpha + beta + 1.0) * gamma_ratio(k + alpha + beta + 1.0, k + beta + 1.0);
        // Neumaier
        let term = coeff * p;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    Ok(sum + comp)
}

/// Closed form of [`cd_partial_sum`]:
/// `Γ(ℓ+α+β+2)/Γ(ℓ+β+1) · P_ℓ^{(α+1,β)}(x)`.
pub fn cd_closed_form(ell: usize, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    check_degree(ell)?;
    check_cd_params(alpha, beta)?;
    let x = clamp_unit(x)?;
    let l = ell as f64;
    Ok(gamma_ratio(l + alpha + beta + 2.0, l + beta + 1.0) * jacobi_raw(ell, alpha + 1.0, beta, x))
}
