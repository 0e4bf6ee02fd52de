//! Integral right-hand sides for the Jacobi representations and a grid driver
//! that checks them against direct polynomial evaluation.
//!
//! Every `rhs_*` function evaluates one integral representation by Gauss
//! quadrature and returns the value the representation claims equals a Jacobi
//! (or Legendre) polynomial. [`verify_grid`] pairs each of them with the
//! recurrence value and emits one [`IdentityReport`] per grid point.

pub mod operators;

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)] // float methods are inherent in `core` on recent toolchains
use num_traits::Float;

use crate::hypergeom::{f21_terminating, TerminatingF21};
use crate::orthopoly::{cd_closed_form, cd_partial_sum, gegenbauer_raw, jacobi, legendre_eval};
use crate::quadrature::{gauss_chebyshev_rule, mehler_integral, oscillation_nodes, RuleCache};
use crate::special::{gamma_quotient, gamma_ratio};
use crate::{Error, Result};

/// Floor on `|lhs|` in the relative error.
pub const REL_ERR_FLOOR: f64 = 1e-30;

/// The integral representations under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    /// Dirichlet–Mehler integral for `P_ℓ(cos 2θ)`.
    DirichletMehler,
    /// `P_ℓ^{(n,0)}(cos 2θ)` through the iterated sine operator.
    Prop22,
    /// `P_ℓ^{(n,0)}(2t²-1)` as a Chebyshev-weight integral of `C_{2ℓ}^{(n+1)}`.
    Lemma24,
    /// `P_ℓ^{(n,m)}(2t²-1)` with the weight `(1-v²)^{m-1/2}`.
    EqII,
    /// `P_ℓ^{(n,m)}(cos 2θ)` with a `2F1(-m, m; 1/2; ·)` factor.
    Theorem25,
    /// Dijksma–Koornwinder representation of `P_n^{(α,β)}(1-2t²)`.
    DkEq11,
    /// Dijksma–Koornwinder product formula.
    DkProduct,
    /// Christoffel–Darboux weighted partial sum.
    CdLemma21,
}

impl IdentityId {
    pub const ALL: [IdentityId; 8] = [
        IdentityId::DirichletMehler,
        IdentityId::Prop22,
        IdentityId::Lemma24,
        IdentityId::EqII,
        IdentityId::Theorem25,
        IdentityId::DkEq11,
        IdentityId::DkProduct,
        IdentityId::CdLemma21,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            IdentityId::DirichletMehler => "dirichlet_mehler",
            IdentityId::Prop22 => "prop22",
            IdentityId::Lemma24 => "lemma24",
            IdentityId::EqII => "eq_ii",
            IdentityId::Theorem25 => "theorem25",
            IdentityId::DkEq11 => "dk_eq11",
            IdentityId::DkProduct => "dk_product",
            IdentityId::CdLemma21 => "cd_lemma21",
        }
    }

    /// Parameter names in grid (lexicographic) order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            IdentityId::DirichletMehler => &["ell", "theta"],
            IdentityId::Prop22 => &["n", "ell", "theta"],
            IdentityId::Lemma24 => &["n", "ell", "t"],
            IdentityId::EqII => &["n", "m", "ell", "t"],
            IdentityId::Theorem25 => &["n", "m", "ell", "theta"],
            IdentityId::DkEq11 => &["n", "alpha", "beta", "t"],
            IdentityId::DkProduct => &["n", "alpha", "beta", "s", "t"],
            IdentityId::CdLemma21 => &["ell", "alpha", "beta", "x"],
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.tag() == s)
            .ok_or(Error::Argument("unknown identity tag"))
    }
}

/// One verification record.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub identity: IdentityId,
    pub params: Vec<(&'static str, f64)>,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub nodes: usize,
    pub pass: bool,
}

impl IdentityReport {
    /// `name=value` pairs joined by `;`.
    pub fn param_string(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        for (i, (name, value)) in self.params.iter().enumerate() {
            if i > 0 {
                out.push(';');
            }
            let _ = write!(out, "{name}={value}");
        }
        out
    }
}

// ---------------------------------------------------------------------------
// right-hand sides

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < PI / 2.0) {
        return Err(Error::Domain { name: "theta", value: theta });
    }
    Ok(())
}

fn check_unit_interval(name: &'static str, t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain { name, value: t });
    }
    Ok(())
}

fn check_half_range(name: &'static str, value: f64) -> Result<()> {
    if !(value > -0.5) {
        return Err(Error::ParameterOutOfRange { name, value });
    }
    Ok(())
}

fn sign_of_power(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn dirichlet_mehler(ell: usize, theta: f64, nodes: usize, scale: f64) -> Result<f64> {
    check_theta(theta)?;
    let freq = 2.0 * ell as f64 + 1.0;
    let integral = mehler_integral(theta, nodes, |u| (freq * u).sin())?;
    Ok(scale * 2.0 / PI * integral)
}

/// `(2/π) ∫_θ^{π/2} sin((2ℓ+1)u) / √(cos²θ - cos²u) du`, which equals `P_ℓ(cos 2θ)`.
pub fn rhs_dirichlet_mehler(ell: usize, theta: f64, n_nodes: usize) -> Result<f64> {
    dirichlet_mehler(ell, theta, n_nodes, 1.0)
}

fn prop22(n: usize, ell: usize, theta: f64, nodes: usize, scale: f64) -> Result<f64> {
    check_theta(theta)?;
    let (nf, lf) = (n as f64, ell as f64);
    let two_n = 2.0f64.powi(n as i32);
    let prefactor = 2.0 / PI * gamma_ratio(lf + 1.0, lf + nf + 1.0) / two_n;
    // (-d/(sin u du))^n [sin((2ℓ+n+1)u)/sin u] = 2^n n! C_{2ℓ}^{(n+1)}(cos u)
    let inner = two_n * gamma_ratio(nf + 1.0, 1.0);
    let integral = mehler_integral(theta, nodes, |u| {
        u.sin() * inner * gegenbauer_raw(2 * ell, nf + 1.0, u.cos())
    })?;
    Ok(scale * prefactor * integral)
}

/// Iterated-sine-operator representation of `P_ℓ^{(n,0)}(cos 2θ)`.
pub fn rhs_prop22(n: usize, ell: usize, theta: f64, n_nodes: usize) -> Result<f64> {
    prop22(n, ell, theta, n_nodes, 1.0)
}

fn lemma24(n: usize, ell: usize, t: f64, nodes: usize, scale: f64) -> Result<f64> {
    check_unit_interval("t", t)?;
    let (nf, lf) = (n as f64, ell as f64);
    let prefactor = 2.0 / PI * gamma_quotient(&[lf + 1.0, nf + 1.0], &[lf + nf + 1.0]);
    let rule = gauss_chebyshev_rule(nodes)?;
    let integral = rule.integrate_half(|v| gegenbauer_raw(2 * ell, nf + 1.0, t * v))?;
    Ok(scale * prefactor * integral)
}

/// `(2 ℓ! n!/(π (ℓ+n)!)) ∫_0^1 C_{2ℓ}^{(n+1)}(tv) (1-v²)^{-1/2} dv`, which equals
/// `P_ℓ^{(n,0)}(2t²-1)`.
pub fn rhs_lemma24(n: usize, ell: usize, t: f64, n_nodes: usize) -> Result<f64> {
    lemma24(n, ell, t, n_nodes, 1.0)
}

/// `d_{n,m}(ℓ) = 2^{2m+1} (ℓ+m)! m! (n+m)! / (π (2m)! (ℓ+n+m)!)`.
pub fn eq_ii_constant(n: usize, m: usize, ell: usize) -> f64 {
    let (nf, mf, lf) = (n as f64, m as f64, ell as f64);
    2.0f64.powi(2 * m as i32 + 1) / PI
        * gamma_quotient(&[lf + mf + 1.0, nf + mf + 1.0, mf + 1.0], &[lf + nf + mf + 1.0, 2.0 * mf + 1.0])
}

fn eq_ii(n: usize, m: usize, ell: usize, t: f64, nodes: usize, scale: f64, rules: &mut RuleCache) -> Result<f64> {
    if m > n {
        return Err(Error::Argument("eq_ii requires m <= n"));
    }
    check_unit_interval("t", t)?;
    let lambda = (n + m) as f64 + 1.0;
    let rule = rules.gauss_jacobi(nodes, m as f64 - 0.5)?;
    let integral = rule.integrate_half(|v| gegenbauer_raw(2 * ell, lambda, v * t))?;
    Ok(scale * eq_ii_constant(n, m, ell) * integral)
}

/// `d_{n,m}(ℓ) ∫_0^1 (1-v²)^{m-1/2} C_{2ℓ}^{(n+m+1)}(vt) dv`, which equals
/// `P_ℓ^{(n,m)}(2t²-1)` for `n ≥ m`.
pub fn rhs_eq_ii(n: usize, m: usize, ell: usize, t: f64, n_nodes: usize) -> Result<f64> {
    eq_ii(n, m, ell, t, n_nodes, 1.0, &mut RuleCache::new())
}

fn theorem25(n: usize, m: usize, ell: usize, theta: f64, nodes: usize, scale: f64) -> Result<f64> {
    check_theta(theta)?;
    let (nf, mf, lf) = (n as f64, m as f64, ell as f64);
    let c = theta.cos();
    let prefactor = 2.0 / PI * gamma_quotient(&[nf + 1.0, lf + mf + 1.0], &[lf + nf + mf + 1.0]) / c.powi(m as i32);
    let chebyshev = TerminatingF21::new(m, mf, 0.5)?;
    let integral = mehler_integral(theta, nodes, |u| {
        let cos_u = u.cos();
        let f21 = f21_terminating(&chebyshev, (c - cos_u) / (2.0 * c));
        u.sin() * f21 * gegenbauer_raw(2 * ell + m, nf + 1.0, cos_u)
    })?;
    Ok(scale * prefactor * integral)
}

/// `(2 n! (ℓ+m)!/(π (ℓ+n+m)!)) cos^{-m}θ ∫_θ^{π/2} sin u / √(cos²θ-cos²u)
/// · 2F1(-m, m; 1/2; (cos θ - cos u)/(2 cos θ)) · C_{2ℓ+m}^{(n+1)}(cos u) du`,
/// which equals `P_ℓ^{(n,m)}(cos 2θ)`.
pub fn rhs_theorem25(n: usize, m: usize, ell: usize, theta: f64, n_nodes: usize) -> Result<f64> {
    theorem25(n, m, ell, theta, n_nodes, 1.0)
}

/// `c^n_{α,β} = 2 (-1)^n Γ(α+β+1) Γ(n+α+1) / (√π Γ(n+α+β+1) Γ(α+1/2))`.
pub fn dk_constant(n: usize, alpha: f64, beta: f64) -> f64 {
    let nf = n as f64;
    2.0 * sign_of_power(n) / PI.sqrt()
        * gamma_quotient(&[alpha + beta + 1.0, nf + alpha + 1.0], &[nf + alpha + beta + 1.0, alpha + 0.5])
}

fn dk_eq11(n: usize, alpha: f64, beta: f64, t: f64, nodes: usize, scale: f64, rules: &mut RuleCache) -> Result<f64> {
    check_half_range("alpha", alpha)?;
    check_half_range("beta", beta)?;
    check_unit_interval("t", t)?;
    let rule = rules.gauss_jacobi(nodes, alpha - 0.5)?;
    let lambda = alpha + beta + 1.0;
    let integral = rule.integrate_half(|u| gegenbauer_raw(2 * n, lambda, t * u))?;
    Ok(scale * dk_constant(n, alpha, beta) * integral)
}

/// `c^n_{α,β} ∫_0^1 C_{2n}^{(α+β+1)}(tu) (1-u²)^{α-1/2} du`, which equals
/// `P_n^{(α,β)}(1-2t²)`.
pub fn rhs_dk_eq11(n: usize, alpha: f64, beta: f64, t: f64, n_nodes: usize) -> Result<f64> {
    dk_eq11(n, alpha, beta, t, n_nodes, 1.0, &mut RuleCache::new())
}

/// Gamma prefactor of the product formula,
/// `Γ(α+β+1)Γ(n+α+1)Γ(n+β+1) / (π n! Γ(n+α+β+1) Γ(α+1/2) Γ(β+1/2))`.
pub fn dk_product_constant(n: usize, alpha: f64, beta: f64) -> f64 {
    let nf = n as f64;
    gamma_quotient(
        &[alpha + beta + 1.0, nf + alpha + 1.0, nf + beta + 1.0],
        &[nf + alpha + beta + 1.0, alpha + 0.5, beta + 0.5, nf + 1.0],
    ) / PI
}

#[allow(clippy::too_many_arguments)]
fn dk_product(
    n: usize,
    alpha: f64,
    beta: f64,
    s: f64,
    t: f64,
    (n_u, n_v): (usize, usize),
    scale: f64,
    rules: &mut RuleCache,
) -> Result<f64> {
    check_half_range("alpha", alpha)?;
    check_half_range("beta", beta)?;
    check_unit_interval("s", s)?;
    check_unit_interval("t", t)?;
    let rule_u = rules.gauss_jacobi(n_u, alpha - 0.5)?;
    let rule_v = rules.gauss_jacobi(n_v, beta - 0.5)?;
    let lambda = alpha + beta + 1.0;
    let st = s * t;
    let cross = ((1.0 - t * t) * (1.0 - s * s)).sqrt();
    let integral = rule_u.integrate(|u| {
        let inner: f64 = rule_v
            .nodes()
            .iter()
            .zip(rule_v.weights())
            .map(|(&v, &w)| w * gegenbauer_raw(2 * n, lambda, st * u + v * cross))
            .sum();
        inner
    })?;
    Ok(scale * dk_product_constant(n, alpha, beta) * integral)
}

/// Tensor-product quadrature of the product formula; equals
/// `P_n^{(α,β)}(1-2t²) P_n^{(α,β)}(1-2s²)`.
pub fn rhs_dk_product(n: usize, alpha: f64, beta: f64, s: f64, t: f64, n_u: usize, n_v: usize) -> Result<f64> {
    dk_product(n, alpha, beta, s, t, (n_u, n_v), 1.0, &mut RuleCache::new())
}

fn cd_rhs(ell: usize, alpha: f64, beta: f64, x: f64, scale: f64) -> Result<f64> {
    Ok(scale * cd_closed_form(ell, alpha, beta, x)?)
}

// ---------------------------------------------------------------------------
// grid driver

/// Parameter ranges for [`verify_grid`]. Each identity reads only the
/// components named by [`IdentityId::param_names`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Grid {
    pub ell: Vec<usize>,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub theta: Vec<f64>,
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub x: Vec<f64>,
}

/// `count` equally spaced points `start, start + step, ...` without accumulating round-off.
pub fn linspace_step(start: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start + step * k as f64).collect()
}

fn unit_grid(count: usize) -> Vec<f64> {
    (0..count).map(|k| k as f64 / (count - 1) as f64).collect()
}

impl Grid {
    /// The default verification grid of each identity.
    pub fn default_for(identity: IdentityId) -> Grid {
        let theta15 = linspace_step(0.1, 0.1, 15);
        match identity {
            IdentityId::DirichletMehler => Grid { ell: (0..=50).collect(), theta: theta15, ..Grid::default() },
            IdentityId::Prop22 => Grid { n: (0..=8).collect(), ell: (0..=20).collect(), theta: theta15, ..Grid::default() },
            IdentityId::Lemma24 => Grid { n: (0..=8).collect(), ell: (0..=20).collect(), t: unit_grid(15), ..Grid::default() },
            IdentityId::EqII => Grid {
                n: (0..=8).collect(),
                m: (0..=8).collect(),
                ell: (0..=20).collect(),
                t: unit_grid(15),
                ..Grid::default()
            },
            IdentityId::Theorem25 => Grid {
                n: (0..=8).collect(),
                m: (0..=4).collect(),
                ell: (0..=20).collect(),
                theta: theta15,
                ..Grid::default()
            },
            IdentityId::DkEq11 => {
                let ab = alloc::vec![-0.25, 0.0, 0.5, 1.5, 3.0];
                Grid { n: (0..=10).collect(), alpha: ab.clone(), beta: ab, t: unit_grid(15), ..Grid::default() }
            }
            IdentityId::DkProduct => {
                let ab = alloc::vec![0.0, 0.5, 1.5];
                Grid { n: (0..=6).collect(), alpha: ab.clone(), beta: ab, s: unit_grid(5), t: unit_grid(5), ..Grid::default() }
            }
            IdentityId::CdLemma21 => {
                let ab = alloc::vec![-0.4, 0.0, 0.5, 2.0];
                Grid { ell: (0..=25).collect(), alpha: ab.clone(), beta: ab, x: linspace_step(-1.0, 0.05, 41), ..Grid::default() }
            }
        }
    }

    /// Every grid point of `identity`, in lexicographic order of its parameters.
    ///
    /// Values are sorted and deduplicated first. `eq_ii` skips `m > n`.
    pub fn points(&self, identity: IdentityId) -> Vec<GridPoint> {
        fn sorted_usize(v: &[usize]) -> Vec<usize> {
            let mut v = v.to_vec();
            v.sort_unstable();
            v.dedup();
            v
        }
        fn sorted_f64(v: &[f64]) -> Vec<f64> {
            let mut v = v.to_vec();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        }
        let names = identity.param_names();
        let mut axes: Vec<Axis> = Vec::with_capacity(names.len());
        for name in names {
            axes.push(match *name {
                "ell" => Axis::Int(sorted_usize(&self.ell)),
                "n" => Axis::Int(sorted_usize(&self.n)),
                "m" => Axis::Int(sorted_usize(&self.m)),
                "alpha" => Axis::Real(sorted_f64(&self.alpha)),
                "beta" => Axis::Real(sorted_f64(&self.beta)),
                "theta" => Axis::Real(sorted_f64(&self.theta)),
                "s" => Axis::Real(sorted_f64(&self.s)),
                "t" => Axis::Real(sorted_f64(&self.t)),
                _ => Axis::Real(sorted_f64(&self.x)),
            });
        }
        let mut out = Vec::new();
        let mut cursor = alloc::vec![0usize; axes.len()];
        if axes.iter().any(|a| a.len() == 0) {
            return out;
        }
        loop {
            let mut p = GridPoint::default();
            for ((name, axis), &i) in names.iter().zip(&axes).zip(&cursor) {
                p.set(name, axis, i);
            }
            if !(identity == IdentityId::EqII && p.m > p.n) {
                out.push(p);
            }
            // odometer, last axis fastest
            let mut k = axes.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                cursor[k] += 1;
                if cursor[k] < axes[k].len() {
                    break;
                }
                cursor[k] = 0;
            }
        }
    }
}

enum Axis {
    Int(Vec<usize>),
    Real(Vec<f64>),
}

impl Axis {
    fn len(&self) -> usize {
        match self {
            Axis::Int(v) => v.len(),
            Axis::Real(v) => v.len(),
        }
    }
}

/// One parameter combination. Fields an identity does not use stay zero.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GridPoint {
    pub ell: usize,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub s: f64,
    pub t: f64,
    pub x: f64,
}

impl GridPoint {
    fn set(&mut self, name: &str, axis: &Axis, i: usize) {
        match (name, axis) {
            ("ell", Axis::Int(v)) => self.ell = v[i],
            ("n", Axis::Int(v)) => self.n = v[i],
            ("m", Axis::Int(v)) => self.m = v[i],
            ("alpha", Axis::Real(v)) => self.alpha = v[i],
            ("beta", Axis::Real(v)) => self.beta = v[i],
            ("theta", Axis::Real(v)) => self.theta = v[i],
            ("s", Axis::Real(v)) => self.s = v[i],
            ("t", Axis::Real(v)) => self.t = v[i],
            ("x", Axis::Real(v)) => self.x = v[i],
            _ => unreachable!("axis kind matches parameter name"),
        }
    }

    fn get(&self, name: &str) -> f64 {
        match name {
            "ell" => self.ell as f64,
            "n" => self.n as f64,
            "m" => self.m as f64,
            "alpha" => self.alpha,
            "beta" => self.beta,
            "theta" => self.theta,
            "s" => self.s,
            "t" => self.t,
            _ => self.x,
        }
    }
}

/// How many quadrature nodes each grid point gets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodePolicy {
    /// The same count everywhere (both axes of the product formula).
    Fixed(usize),
    /// `max(64, 4·(2ℓ+n+m) + 32)`, with `ℓ` the degree of the evaluated polynomial
    /// (`max(64, 4ℓ + 32)` for the Dirichlet–Mehler integral, at least 128 per
    /// axis for the product formula).
    Oscillation,
}

/// Tolerances and switches for [`verify_grid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub nodes: NodePolicy,
    pub tol_abs: f64,
    pub tol_rel: f64,
    /// Doubles the Gamma prefactor of every right-hand side; a sound suite must fail.
    pub perturb: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { nodes: NodePolicy::Oscillation, tol_abs: 1e-8, tol_rel: 1e-8, perturb: false }
    }
}

fn node_count(identity: IdentityId, p: &GridPoint, policy: NodePolicy) -> usize {
    if identity == IdentityId::CdLemma21 {
        return 0;
    }
    match policy {
        NodePolicy::Fixed(n) => n,
        NodePolicy::Oscillation => {
            let degree = match identity {
                IdentityId::DkEq11 => 2 * p.n,
                // 128 per axis
                IdentityId::DkProduct => return oscillation_nodes(2 * p.n).max(128),
                // the criterion pins max(64, 4ℓ + 32) here; the integrand is U_{2ℓ}(v cos θ)
                IdentityId::DirichletMehler => p.ell,
                IdentityId::Prop22 | IdentityId::Lemma24 => 2 * p.ell + p.n,
                _ => 2 * p.ell + p.n + p.m,
            };
            oscillation_nodes(degree)
        }
    }
}

fn lhs_value(identity: IdentityId, p: &GridPoint) -> Result<f64> {
    let (n, m, ell) = (p.n as f64, p.m as f64, p.ell);
    match identity {
        IdentityId::DirichletMehler => legendre_eval(ell, (2.0 * p.theta).cos()),
        IdentityId::Prop22 => jacobi(ell, n, 0.0, (2.0 * p.theta).cos()),
        IdentityId::Lemma24 => jacobi(ell, n, 0.0, 2.0 * p.t * p.t - 1.0),
        IdentityId::EqII => jacobi(ell, n, m, 2.0 * p.t * p.t - 1.0),
        IdentityId::Theorem25 => jacobi(ell, n, m, (2.0 * p.theta).cos()),
        IdentityId::DkEq11 => jacobi(p.n, p.alpha, p.beta, 1.0 - 2.0 * p.t * p.t),
        IdentityId::DkProduct => Ok(jacobi(p.n, p.alpha, p.beta, 1.0 - 2.0 * p.t * p.t)?
            * jacobi(p.n, p.alpha, p.beta, 1.0 - 2.0 * p.s * p.s)?),
        IdentityId::CdLemma21 => cd_partial_sum(ell, p.alpha, p.beta, p.x),
    }
}

fn rhs_value(identity: IdentityId, p: &GridPoint, nodes: usize, scale: f64, rules: &mut RuleCache) -> Result<f64> {
    match identity {
        IdentityId::DirichletMehler => dirichlet_mehler(p.ell, p.theta, nodes, scale),
        IdentityId::Prop22 => prop22(p.n, p.ell, p.theta, nodes, scale),
        IdentityId::Lemma24 => lemma24(p.n, p.ell, p.t, nodes, scale),
        IdentityId::EqII => eq_ii(p.n, p.m, p.ell, p.t, nodes, scale, rules),
        IdentityId::Theorem25 => theorem25(p.n, p.m, p.ell, p.theta, nodes, scale),
        IdentityId::DkEq11 => dk_eq11(p.n, p.alpha, p.beta, p.t, nodes, scale, rules),
        IdentityId::DkProduct => dk_product(p.n, p.alpha, p.beta, p.s, p.t, (nodes, nodes), scale, rules),
        IdentityId::CdLemma21 => cd_rhs(p.ell, p.alpha, p.beta, p.x, scale),
    }
}

/// Evaluates both sides of `identity` at one grid point.
///
/// Evaluation failures produce a failing report with NaN sides instead of an error.
pub fn evaluate_point(identity: IdentityId, p: &GridPoint, opts: &VerifyOptions) -> IdentityReport {
    evaluate_point_cached(identity, p, opts, &mut RuleCache::new())
}

/// [`evaluate_point`] reusing Gauss–Jacobi rules across calls.
pub fn evaluate_point_cached(
    identity: IdentityId,
    p: &GridPoint,
    opts: &VerifyOptions,
    rules: &mut RuleCache,
) -> IdentityReport {
    let nodes = node_count(identity, p, opts.nodes);
    let scale = if opts.perturb { 2.0 } else { 1.0 };
    let params = identity.param_names().iter().map(|&name| (name, p.get(name))).collect();
    let sides = lhs_value(identity, p).and_then(|l| Ok((l, rhs_value(identity, p, nodes, scale, rules)?)));
    let (lhs, rhs) = sides.unwrap_or((f64::NAN, f64::NAN));
    let abs_err = (lhs - rhs).abs();
    let rel_err = abs_err / lhs.abs().max(REL_ERR_FLOOR);
    let pass = abs_err <= opts.tol_abs || rel_err <= opts.tol_rel;
    IdentityReport { identity, params, lhs, rhs, abs_err, rel_err, nodes, pass }
}

/// Evaluates `identity` over every point of `grid`, in lexicographic order.
pub fn verify_grid(identity: IdentityId, grid: &Grid, opts: &VerifyOptions) -> Result<Vec<IdentityReport>> {
    if !(opts.tol_abs > 0.0 && opts.tol_rel > 0.0) {
        return Err(Error::Argument("tolerances must be positive"));
    }
    let points = grid.points(identity);
    if points.is_empty() {
        return Err(Error::Argument("grid is empty for this identity"));
    }
    let mut rules = RuleCache::new();
    Ok(points.iter().map(|p| evaluate_point_cached(identity, p, opts, &mut rules)).collect())
}
