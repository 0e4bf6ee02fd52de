//! Gauss quadrature for the symmetric Jacobi weight `(1 - v^2)^a` on `[-1, 1]`
//! and the Dirichlet–Mehler substitution.
//!
//! Rules for general `a` are built Golub–Welsch style: the eigenvalues of the
//! symmetric tridiagonal Jacobi matrix of the Gegenbauer recurrence give the
//! nodes, which are then polished by Newton's method on the orthonormal
//! recurrence. Weights come from the Christoffel function
//! `w_j = 1 / Σ_{k<n} p_k(v_j)^2`, which keeps small weights near the endpoints
//! relatively accurate.

use alloc::vec;
use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // float methods are inherent in `core` on recent toolchains
use num_traits::Float;

use crate::special::jacobi_weight_mass;
use crate::{Error, Result};

/// Maximum Newton steps per node.
const NEWTON_MAX_ITER: usize = 100;
/// Newton step size at which a node counts as converged.
const NEWTON_TOL: f64 = 1e-14;
/// Above this `|v cos θ|` the substitution switches from `acos` to `asin`.
const ACOS_SWITCH: f64 = 0.7;

/// Nodes and weights integrating against `(1 - v^2)^a` on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    weight_exponent: f64,
}

impl QuadratureRule {
    /// Nodes in strictly increasing order, all inside `(-1, 1)`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_exponent(&self) -> f64 {
        self.weight_exponent
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i f(v_i)`, approximating `∫_{-1}^{1} f(v) (1 - v^2)^a dv`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let mut sum = 0.0;
        for (&v, &w) in self.nodes.iter().zip(&self.weights) {
            let y = f(v);
            if !y.is_finite() {
                return Err(Error::NonFinite { at: v });
            }
            sum += w * y;
        }
        Ok(sum)
    }

    /// `∫_0^1 f(v) (1 - v^2)^a dv` for even `f`, by folding the symmetric rule.
    ///
    /// The result is meaningless for odd integrands.
    pub fn integrate_half<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        Ok(0.5 * self.integrate(f)?)
    }
}

/// Default node count for an integrand oscillating like a polynomial of
/// degree `degree`: `max(64, 4·degree + 32)`.
pub fn oscillation_nodes(degree: usize) -> usize {
    (4 * degree + 32).max(64)
}

/// Gauss–Chebyshev rule for `(1 - v^2)^{-1/2}`: nodes `cos((2k-1)π/2n)`,
/// equal weights `π/n`.
pub fn gauss_chebyshev_rule(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::Argument("a quadrature rule needs at least one node"));
    }
    let nf = n as f64;
    // sin form gives exact antisymmetry and an exact zero for odd n
    let nodes = (0..n).map(|j| ((2.0 * j as f64 + 1.0 - nf) * PI / (2.0 * nf)).sin()).collect();
    Ok(QuadratureRule { nodes, weights: vec![PI / nf; n], weight_exponent: -0.5 })
}

/// Squared off-diagonal `b_k` of the monic Gegenbauer recurrence for the
/// weight `(1 - v^2)^a`, `k ≥ 1`.
fn recurrence_b(k: usize, a: f64) -> f64 {
    if k == 1 {
        // the general form is 0/0 at k = 1, a = -1/2
        1.0 / (2.0 * a + 3.0)
    } else {
        let k = k as f64;
        k * (k + 2.0 * a) / (4.0 * (k + a + 0.5) * (k + a - 0.5))
    }
}

/// Memoized [`gauss_jacobi_rule`] results keyed by node count and exponent.
#[derive(Debug, Default, Clone)]
pub struct RuleCache {
    rules: BTreeMap<(usize, u64), Arc<QuadratureRule>>,
}

impl RuleCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn gauss_jacobi(&mut self, n: usize, a: f64) -> Result<Arc<QuadratureRule>> {
        let key = (n, a.to_bits());
        if let Some(rule) = self.rules.get(&key) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(gauss_jacobi_rule(n, a)?);
        self.rules.insert(key, Arc::clone(&rule));
        Ok(rule)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// Gauss–Jacobi rule with `n` nodes for `(1 - v^2)^a`, `a > -1`.
pub fn gauss_jacobi_rule(n: usize, a: f64) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::Argument("a quadrature rule needs at least one node"));
    }
    if !(a > -1.0) {
        return Err(Error::ParameterOutOfRange { name: "a", value: a });
    }
    let mass = jacobi_weight_mass(a);
    let sqrt_b: Vec<f64> = (0..=n).map(|k| if k == 0 { 0.0 } else { recurrence_b(k, a).sqrt() }).collect();

    let mut diag = vec![0.0; n];
    let mut off: Vec<f64> = (0..n).map(|i| if i + 1 < n { sqrt_b[i + 1] } else { 0.0 }).collect();
    tridiagonal_eigenvalues(&mut diag, &mut off)?;
    diag.sort_by(f64::total_cmp);

    let p0 = 1.0 / mass.sqrt();
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for &guess in &diag {
        let x = newton_polish(guess, n, p0, &sqrt_b)?;
        nodes.push(x);
        weights.push(christoffel_weight(x, n, p0, &sqrt_b));
    }

    // enforce the symmetry of the weight exactly
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights, weight_exponent: a })
}

/// Orthonormal `p_n(x)` and its derivative.
fn orthonormal_with_derivative(x: f64, n: usize, p0: f64, sqrt_b: &[f64]) -> (f64, f64) {
    let (mut p_prev, mut p) = (0.0, p0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    for k in 0..n {
        let p_next = (x * p - sqrt_b[k] * p_prev) / sqrt_b[k + 1];
        let d_next = (p + x * d - sqrt_b[k] * d_prev) / sqrt_b[k + 1];
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

fn newton_polish(mut x: f64, n: usize, p0: f64, sqrt_b: &[f64]) -> Result<f64> {
    for _ in 0..NEWTON_MAX_ITER {
        let (p, d) = orthonormal_with_derivative(x, n, p0, sqrt_b);
        let step = p / d;
        x -= step;
        if step.abs() <= NEWTON_TOL {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence { iterations: NEWTON_MAX_ITER })
}

fn christoffel_weight(x: f64, n: usize, p0: f64, sqrt_b: &[f64]) -> f64 {
    let (mut p_prev, mut p) = (0.0, p0);
    let mut sum = p0 * p0;
    for k in 0..n - 1 {
        let p_next = (x * p - sqrt_b[k] * p_prev) / sqrt_b[k + 1];
        p_prev = p;
        p = p_next;
        sum += p * p;
    }
    1.0 / sum
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson
/// shifts. `diag` is overwritten with the (unsorted) eigenvalues; `off[i]`
/// couples rows `i` and `i + 1`.
fn tridiagonal_eigenvalues(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let n = diag.len();
    const MAX_SWEEPS: usize = 60;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * scale || off[m] == 0.0 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence { iterations: MAX_SWEEPS });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// Substitution `u = arccos(v cos θ)` for integrals over `[θ, π/2]` with the
/// kernel `1/√(cos²θ - cos²u)`.
///
/// Returns `h(v) = g(u(v)) / sin(u(v))` such that
/// `∫_θ^{π/2} g(u)/√(cos²θ - cos²u) du = ∫_0^1 h(v) (1 - v^2)^{-1/2} dv`.
/// The closure is defined on all of `[-1, 1]` (negative `v` maps to
/// `u ∈ (π/2, π - θ]`), so it can be fed to a symmetric rule and folded.
pub fn mehler_map<G: Fn(f64) -> f64>(theta: f64, g: G) -> Result<impl Fn(f64) -> f64> {
    if !(theta > 0.0 && theta < PI / 2.0) {
        return Err(Error::Domain { name: "theta", value: theta });
    }
    let c = theta.cos();
    Ok(move |v: f64| {
        let y = v * c;
        let sin_u = ((1.0 - y) * (1.0 + y)).sqrt();
        let u = if y.abs() > ACOS_SWITCH {
            let a = sin_u.asin();
            if y > 0.0 {
                a
            } else {
                PI - a
            }
        } else {
            y.acos()
        };
        g(u) / sin_u
    })
}

/// `∫_θ^{π/2} g(u)/√(cos²θ - cos²u) du` with an `n_nodes` Gauss–Chebyshev rule.
///
/// `g(π - u) = g(u)` is required (the transformed integrand must be even in `v`),
/// which holds for every integrand of the Dirichlet–Mehler family.
pub fn mehler_integral<G: Fn(f64) -> f64>(theta: f64, n_nodes: usize, g: G) -> Result<f64> {
    let h = mehler_map(theta, g)?;
    gauss_chebyshev_rule(n_nodes)?.integrate_half(h)
}
