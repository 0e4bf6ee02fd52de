//! Heat kernel of the magnetic Laplacian `Δ_ν` on the Riemann sphere.
//!
//! Points are stereographic coordinates `z ∈ ℂ ∪ {∞}`. The spectrum is
//! `λ_{ν,ℓ} = ν + ℓ(ℓ+2ν+1)` with multiplicity `2ℓ+2ν+1`, and the kernel is
//! evaluated two ways: as the truncated spectral series and as a real integral
//! of the derivative of the theta-type function
//! `θ_{2,ν}(t,u) = Σ_ℓ e^{-ℓ(ℓ+2ν+1)t} cos((2ℓ+2ν+1)u)`.
//!
//! `d(z,w)` is half the geodesic angle: `cos d = |1 + z w̄| / √((1+|z|²)(1+|w|²))`.
//! The heat kernel decays, `∂_t E + Δ_ν E = 0`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // float methods are inherent in `core` on recent toolchains
use num_traits::Float;

use crate::hypergeom::chebyshev_f21;
use crate::orthopoly::{jacobi_raw, JacobiTerms};
use crate::quadrature::{gauss_jacobi_rule, mehler_integral, oscillation_nodes};
use crate::special::gamma_ratio;
use crate::{Error, Result};

/// Default cap on the number of spectral terms.
pub const DEFAULT_MAX_TERMS: usize = 100_000;
/// Times below this are rejected instead of truncating a slowly converging series.
pub const MIN_TIME: f64 = 1e-3;
/// Distances this close to `π/2` are treated as antipodal by [`heat_integral`].
pub const ANTIPODAL_MARGIN: f64 = 1e-9;

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn new(re: f64, im: f64) -> Self {
        SpherePoint::Finite(Complex64::new(re, im))
    }

    pub fn real(x: f64) -> Self {
        SpherePoint::new(x, 0.0)
    }

    pub fn coordinate(&self) -> Result<Complex64> {
        match *self {
            SpherePoint::Finite(z) => Ok(z),
            SpherePoint::Infinity => Err(Error::PointAtInfinity),
        }
    }

    /// The point at angle `χ` from `0` along the positive real axis, so that
    /// `distance(0, ·) = χ / 2`.
    pub fn at_geodesic_angle(chi: f64) -> Self {
        SpherePoint::real((0.5 * chi).tan())
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::Finite(z)
    }
}

/// Sign of `ν t` in the overall exponential factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentSign {
    /// `e^{-νt}`, the decaying kernel.
    #[default]
    Decaying,
    /// `e^{+νt}`, kept for comparison with the printed formula.
    Growing,
}

/// Parameters shared by the series and integral forms of the heat kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatConfig {
    nu: u32,
    time: f64,
    epsilon: f64,
    max_terms: usize,
    sign: ExponentSign,
}

impl HeatConfig {
    pub fn new(nu: u32, time: f64, epsilon: f64) -> Result<Self> {
        if !(time > 0.0) || !time.is_finite() {
            return Err(Error::ParameterOutOfRange { name: "t", value: time });
        }
        if !(epsilon > 0.0) {
            return Err(Error::ParameterOutOfRange { name: "epsilon", value: epsilon });
        }
        Ok(Self { nu, time, epsilon, max_terms: DEFAULT_MAX_TERMS, sign: ExponentSign::Decaying })
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::Argument("max_terms must be positive"));
        }
        self.max_terms = max_terms;
        Ok(self)
    }

    pub fn with_sign(mut self, sign: ExponentSign) -> Self {
        self.sign = sign;
        self
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn sign(&self) -> ExponentSign {
        self.sign
    }

    /// Number of retained levels minus one, see [`truncation_order`].
    pub fn truncation(&self) -> Result<usize> {
        truncation_order(self.nu, self.time, self.epsilon, self.max_terms)
    }

    fn exponential(&self) -> f64 {
        let nt = self.nu as f64 * self.time;
        match self.sign {
            ExponentSign::Decaying => (-nt).exp(),
            ExponentSign::Growing => nt.exp(),
        }
    }
}

/// One eigenspace of `Δ_ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLevel {
    pub level: usize,
    pub eigenvalue: f64,
    pub degeneracy: usize,
}

impl SpectralLevel {
    pub fn new(nu: u32, level: usize) -> Self {
        Self { level, eigenvalue: eigenvalue(nu, level), degeneracy: degeneracy(nu, level) }
    }
}

/// `λ_{ν,m} = ν + m(m + 2ν + 1)`.
pub fn eigenvalue(nu: u32, m: usize) -> f64 {
    let (nu, m) = (nu as f64, m as f64);
    nu + m * (m + 2.0 * nu + 1.0)
}

/// `2ℓ + 2ν + 1`.
pub fn degeneracy(nu: u32, ell: usize) -> usize {
    2 * ell + 2 * nu as usize + 1
}

/// Half geodesic angle in `[0, π/2]`.
pub fn distance(z: SpherePoint, w: SpherePoint) -> f64 {
    match (z, w) {
        (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
        (SpherePoint::Finite(a), SpherePoint::Infinity) | (SpherePoint::Infinity, SpherePoint::Finite(a)) => {
            1.0f64.atan2(a.norm())
        }
        // atan2 keeps full relative accuracy near 0 and π/2, unlike arccos
        (SpherePoint::Finite(a), SpherePoint::Finite(b)) => (a - b).norm().atan2((1.0 + a * b.conj()).norm()),
    }
}

/// Geometry of a finite pair: `q = (1 + z w̄)/√((1+|z|²)(1+|w|²))` and `cos 2d`.
#[derive(Debug, Clone, Copy)]
struct PairGeometry {
    phase: Complex64,
    cos_2d: f64,
    d: f64,
}

impl PairGeometry {
    fn new(z: SpherePoint, w: SpherePoint) -> Result<Self> {
        let (a, b) = (z.coordinate()?, w.coordinate()?);
        let cross = 1.0 + a * b.conj();
        let (na, nb) = (1.0 + a.norm_sqr(), 1.0 + b.norm_sqr());
        let phase = cross / (na.sqrt() * nb.sqrt());
        let cos_2d = ((cross.norm_sqr() - (a - b).norm_sqr()) / (na * nb)).clamp(-1.0, 1.0);
        Ok(Self { phase, cos_2d, d: distance(z, w) })
    }

    /// `q^{2ν}` by repeated multiplication.
    fn phase_power(&self, nu: u32) -> Complex64 {
        self.phase.powu(2 * nu)
    }
}

/// `K^ν_ℓ(z,w) = (2ℓ+2ν+1) q^{2ν} P_ℓ^{(0,2ν)}(cos 2d)`.
pub fn reproducing_kernel(nu: u32, ell: usize, z: SpherePoint, w: SpherePoint) -> Result<Complex64> {
    let g = PairGeometry::new(z, w)?;
    let p = jacobi_raw(ell, 0.0, 2.0 * nu as f64, g.cos_2d);
    Ok(g.phase_power(nu) * (degeneracy(nu, ell) as f64 * p))
}

/// Smallest `L` such that the levels above `L` contribute less than `epsilon`,
/// using `|P_ℓ^{(0,2ν)}| ≤ binom(ℓ+2ν, 2ν)` on `[-1, 1]`.
///
/// The tail bound terms are generated until they drop below `ε·1e-2` while
/// shrinking by at least half per step; the rest of the tail is bounded by the
/// last term. Fails for `t < 1e-3` or when `L` would exceed `max_terms`.
pub fn truncation_order(nu: u32, t: f64, epsilon: f64, max_terms: usize) -> Result<usize> {
    if !(t > 0.0) {
        return Err(Error::ParameterOutOfRange { name: "t", value: t });
    }
    if !(epsilon > 0.0) {
        return Err(Error::ParameterOutOfRange { name: "epsilon", value: epsilon });
    }
    if t < MIN_TIME {
        return Err(Error::TimeTooSmall { t, min: MIN_TIME });
    }
    let two_nu = 2.0 * nu as f64;
    let log_binom = |l: f64| -> f64 {
        // ln binom(ℓ+2ν, 2ν) = ln Γ(ℓ+2ν+1) - ln Γ(ℓ+1) - ln Γ(2ν+1)
        gamma_ratio(l + two_nu + 1.0, l + 1.0).ln() - gamma_ratio(two_nu + 1.0, 1.0).ln()
    };
    let bound = |l: usize| -> f64 {
        let lf = l as f64;
        ((2.0 * lf + two_nu + 1.0).ln() + log_binom(lf) - lf * (lf + two_nu + 1.0) * t).exp()
    };
    let mut terms: Vec<f64> = Vec::new();
    let mut l = 0usize;
    loop {
        let b = bound(l);
        let settled = match terms.last() {
            Some(&prev) => b < 1e-2 * epsilon && b < 0.5 * prev,
            None => false,
        };
        terms.push(b);
        if settled {
            break;
        }
        if l > max_terms {
            return Err(Error::TruncationBudget { budget: max_terms });
        }
        l += 1;
    }
    // tail[L] bounds Σ_{ℓ > L}; the geometric remainder past the last term is at most that term
    let last = terms.len() - 1;
    let mut tail = terms[last];
    for cut in (0..last).rev() {
        tail += terms[cut + 1];
        if tail >= epsilon {
            let order = cut + 1;
            return if order > max_terms { Err(Error::TruncationBudget { budget: max_terms }) } else { Ok(order) };
        }
    }
    Ok(0)
}

/// `Σ_{ℓ=0}^{L} e^{-ℓ(ℓ+2ν+1)t} cos((2ℓ+2ν+1)u)`.
pub fn theta2nu(nu: u32, t: f64, u: f64, order: usize) -> f64 {
    let two_nu = 2.0 * nu as f64;
    (0..=order)
        .map(|l| {
            let l = l as f64;
            (-l * (l + two_nu + 1.0) * t).exp() * ((2.0 * l + two_nu + 1.0) * u).cos()
        })
        .sum()
}

/// `∂θ_{2,ν}/∂u = -Σ_{ℓ=0}^{L} (2ℓ+2ν+1) e^{-ℓ(ℓ+2ν+1)t} sin((2ℓ+2ν+1)u)`.
pub fn theta2nu_du(nu: u32, t: f64, u: f64, order: usize) -> f64 {
    let two_nu = 2.0 * nu as f64;
    -(0..=order)
        .map(|l| {
            let l = l as f64;
            let k = 2.0 * l + two_nu + 1.0;
            k * (-l * (l + two_nu + 1.0) * t).exp() * (k * u).sin()
        })
        .sum::<f64>()
}

/// Spectral series `e^{-νt} q^{2ν} Σ_{ℓ≤L} (2ℓ+2ν+1) e^{-ℓ(ℓ+2ν+1)t} P_ℓ^{(0,2ν)}(cos 2d)`
/// with `L` from [`truncation_order`].
pub fn heat_series(cfg: &HeatConfig, z: SpherePoint, w: SpherePoint) -> Result<Complex64> {
    heat_series_truncated(cfg, z, w, cfg.truncation()?)
}

/// [`heat_series`] with an explicit truncation order.
pub fn heat_series_truncated(cfg: &HeatConfig, z: SpherePoint, w: SpherePoint, order: usize) -> Result<Complex64> {
    let g = PairGeometry::new(z, w)?;
    let nu = cfg.nu;
    let two_nu = 2.0 * nu as f64;
    let t = cfg.time;
    let sum: f64 = JacobiTerms::new(0.0, two_nu, g.cos_2d)
        .take(order + 1)
        .enumerate()
        .map(|(l, p)| {
            let lf = l as f64;
            (2.0 * lf + two_nu + 1.0) * (-lf * (lf + two_nu + 1.0) * t).exp() * p
        })
        .sum();
    Ok(g.phase_power(nu) * (cfg.exponential() * sum))
}

/// Node count for [`heat_integral`] that integrates the transformed integrand
/// exactly at truncation order `order`.
///
/// After the substitution `cos u = v cos d` the integrand is a polynomial of
/// degree `2L + 4ν` in `v`.
pub fn heat_integral_nodes(nu: u32, order: usize) -> usize {
    oscillation_nodes(2 * order + 4 * nu as usize)
}

/// Theta-function integral
/// `2 q^{2ν} e^{-νt} / (π cos^{2ν} d) · ∫_d^{π/2} -∂_uθ_{2,ν}(t,u) T_{2ν}(cos u / cos d) / √(cos²d - cos²u) du`,
/// with `T_{2ν}(cos u/cos d) = 2F1(-2ν, 2ν; 1/2; (cos d - cos u)/(2 cos d))`.
pub fn heat_integral(cfg: &HeatConfig, z: SpherePoint, w: SpherePoint, n_nodes: usize) -> Result<Complex64> {
    let g = PairGeometry::new(z, w)?;
    let d = g.d;
    if !(d > 0.0) || d >= PI / 2.0 - ANTIPODAL_MARGIN {
        return Err(Error::DegenerateDistance { distance: d });
    }
    let order = cfg.truncation()?;
    let (nu, t) = (cfg.nu, cfg.time);
    let cos_d = d.cos();
    let integrand = |u: f64| {
        let ratio = u.cos() / cos_d;
        -theta2nu_du(nu, t, u, order) * chebyshev_f21(2 * nu as usize, ratio)
    };
    let integral = mehler_integral(d, n_nodes, integrand)?;
    let prefactor = 2.0 * cfg.exponential() / (PI * cos_d.powi(2 * nu as i32));
    Ok(g.phase_power(nu) * (prefactor * integral))
}

/// `∫_{S²} f dμ` for the probability measure `dμ = dx dy / (π (1 + |z|²)²)`.
///
/// With `z = tan(χ/2) e^{iφ}` the measure is `d(cos χ) dφ / 4π`; the rule is
/// Gauss–Legendre in `cos χ` and the trapezoid rule in `φ`.
pub fn sphere_integrate<F>(f: F, radial_nodes: usize, angular_nodes: usize) -> Result<Complex64>
where
    F: Fn(SpherePoint) -> Complex64,
{
    if radial_nodes < 4 || angular_nodes < 4 {
        return Err(Error::Argument("sphere_integrate needs at least 4 nodes per direction"));
    }
    let radial = gauss_jacobi_rule(radial_nodes, 0.0)?;
    let dphi = 2.0 * PI / angular_nodes as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for (&x, &wx) in radial.nodes().iter().zip(radial.weights()) {
        let r = ((1.0 - x) / (1.0 + x)).sqrt();
        let mut ring = Complex64::new(0.0, 0.0);
        for k in 0..angular_nodes {
            let value = f(SpherePoint::Finite(Complex64::from_polar(r, k as f64 * dphi)));
            if !(value.re.is_finite() && value.im.is_finite()) {
                return Err(Error::NonFinite { at: x });
            }
            ring += value;
        }
        total += ring * (wx * dphi);
    }
    Ok(total / (4.0 * PI))
}
