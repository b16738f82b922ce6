//! The Mordell integral
//!
//! ```text
//! Φ(x, τ) = ∫_{0↗1} e^{iπτu² + 2πixu} / (e^{2πiu} - 1) du,   Re τ > 0,
//! ```
//!
//! by slanted-path quadrature, by its exponential-sum closed form at
//! rational τ, and through its functional equation and integral
//! transformation.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::contour::{integrate_slanted, DecayProfile, SlantedPath};
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, QuadratureConfig, QuadratureResult};

/// Denominator magnitude below which the closed form is refused.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// Largest numerator or denominator accepted by [`RationalTau`].
pub const MAX_RATIONAL_PART: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MordellArgs {
    x: Complex64,
    tau: Complex64,
}

impl MordellArgs {
    pub fn new(x: Complex64, tau: Complex64) -> Result<Self> {
        if !(x.re.is_finite() && x.im.is_finite() && tau.im.is_finite()) {
            return Err(Error::NonFinite("Mordell argument"));
        }
        if !(tau.re > 0.0 && tau.re.is_finite()) {
            return Err(Error::Domain(format!("Mordell integral needs Re tau > 0, got {tau}")));
        }
        Ok(Self { x, tau })
    }

    pub fn x(&self) -> Complex64 {
        self.x
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// Arguments of the conjugated term in the functional equation,
    /// `(-x̄/τ̄, 1/τ̄)`.
    pub fn dual(&self) -> Self {
        let tb = self.tau.conj();
        Self {
            x: -self.x.conj() / tb,
            tau: 1.0 / tb,
        }
    }
}

/// `τ = m/n` with `1 <= m, n <= 64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalTau {
    m: u32,
    n: u32,
}

impl RationalTau {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        let ok = |v: u32| (1..=MAX_RATIONAL_PART).contains(&v);
        if ok(m) && ok(n) {
            Ok(Self { m, n })
        } else {
            Err(Error::Domain(format!("rational tau {m}/{n} outside 1..={MAX_RATIONAL_PART}")))
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn value(&self) -> f64 {
        self.m as f64 / self.n as f64
    }
}

/// `e^{iπ p k² / q}` with the phase reduced modulo `2π` in integers.
fn quadratic_phase(p: u64, q: u64, k: u64) -> Complex64 {
    let r = (p * k * k) % (2 * q);
    Complex64::from_polar(1.0, PI * r as f64 / q as f64)
}

/// Closed form of `Φ(x, m/n)`.
pub fn phi_rational(x: Complex64, rt: RationalTau) -> Result<Complex64> {
    let (m, n) = (rt.m as u64, rt.n as u64);
    let i = Complex64::i();
    let ratio = n as f64 / m as f64;

    // e^{iπn(2x+m)} - 1 = (-1)^{nm} e^{2πinx} - 1
    let sign = if (n * m) % 2 == 0 { 1.0 } else { -1.0 };
    let denom = sign * (2.0 * PI * i * n as f64 * x).exp() - 1.0;
    if denom.norm() < DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateRationalPoint { magnitude: denom.norm() });
    }

    let first: CompensatedSum = (1..=n)
        .map(|k| quadratic_phase(m, n, k) * (2.0 * PI * i * k as f64 * x).exp())
        .collect();
    let second: CompensatedSum = (1..=m)
        .map(|k| quadratic_phase(n, m, k).conj() * (2.0 * PI * i * k as f64 * ratio * x).exp())
        .collect();
    let prefactor = ratio.sqrt() * (i * PI * (0.25 - ratio * x * x)).exp();

    let mut num = first;
    num.add(-prefactor * second.value());
    Ok(num.value() / denom)
}

/// Peak location of `e^{-α t² + β t}` damped by an extra `e^{√2π t}` on
/// `t < 0`, the common envelope of both slanted Mordell integrands.
fn envelope_center(alpha: f64, beta: f64) -> f64 {
    let extra = SQRT_2 * PI;
    if beta > 0.0 {
        beta / (2.0 * alpha)
    } else if beta + extra < 0.0 {
        (beta + extra) / (2.0 * alpha)
    } else {
        0.0
    }
}

fn phi_integrand(x: Complex64, tau: Complex64) -> impl Fn(Complex64) -> Complex64 {
    let i = Complex64::i();
    move |u| (i * PI * tau * u * u + 2.0 * PI * i * x * u).exp() / ((2.0 * PI * i * u).exp() - 1.0)
}

fn phi_envelope(args: &MordellArgs, path: &SlantedPath) -> (DecayProfile, f64) {
    let MordellArgs { x, tau } = *args;
    let alpha = PI * tau.re;
    let beta = -2.0 * PI * (path.unit() * (path.crossing() * tau + x)).im;
    let center = envelope_center(alpha, beta);
    let peak = phi_integrand(x, tau)(path.parameterize(center)).norm().ln();
    let peak = if peak.is_finite() { peak } else { 0.0 };
    (DecayProfile::gaussian(alpha).centered_at(center).with_headroom(peak), peak)
}

/// Crossings tried when the line is chosen automatically; the first is
/// the default.
const CROSSINGS: [f64; 9] = [0.5, 0.4, 0.6, 0.3, 0.7, 0.2, 0.8, 0.1, 0.9];

/// Leaves the midpoint only when another crossing lowers the integrand's
/// peak by more than two nats. Where the Gaussian saddle lies far from
/// the midpoint line the peak can exceed the integral by many orders.
fn choose_crossing(peak_at: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut best = (CROSSINGS[0], f64::INFINITY);
    for (k, c) in CROSSINGS.into_iter().enumerate() {
        let margin = if k == 0 { 0.0 } else { 2.0 };
        let peak = peak_at(c)?;
        if peak + margin < best.1 {
            best = (c, peak);
        }
    }
    Ok(best.0)
}

/// `Φ(x, τ)` on the slope-+1 line through `crossing ∈ (0, 1)`.
pub fn phi_quadrature_through(args: MordellArgs, crossing: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    cfg.validate()?;
    let path = SlantedPath::north_east(0.0, 1.0)?.with_crossing(crossing)?;
    let (decay, _) = phi_envelope(&args, &path);
    integrate_slanted(phi_integrand(args.x, args.tau), &path, &decay, cfg)
}

/// `Φ(x, τ)` by direct quadrature, through the midpoint unless a nearby
/// crossing is much better conditioned.
pub fn phi_quadrature(args: MordellArgs, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    let crossing = choose_crossing(|c| {
        let path = SlantedPath::north_east(0.0, 1.0)?.with_crossing(c)?;
        Ok(phi_envelope(&args, &path).1)
    })?;
    phi_quadrature_through(args, crossing, cfg)
}

/// Largest error estimate, in tolerances, accepted after scaling.
const SCALED_SLACK: f64 = 100.0;

/// `pre · ∫`, with the absolute tolerance applied to the product. A
/// large prefactor can hide a tiny integral that only met `abs_tol`.
fn scaled_quadrature(
    pre: Complex64,
    cfg: &QuadratureConfig,
    integrate: impl FnOnce(&QuadratureConfig) -> Result<QuadratureResult>,
) -> Result<QuadratureResult> {
    let size = pre.norm();
    let inner = cfg.with_abs_tol(cfg.abs_tol / size.max(1.0));
    let res = match integrate(&inner) {
        Err(Error::NoConvergence { abs_error_estimate, nodes_used }) => {
            return Err(Error::NoConvergence { abs_error_estimate: abs_error_estimate * size, nodes_used })
        }
        other => other?.scaled(pre),
    };
    if res.abs_error_estimate > SCALED_SLACK * cfg.tolerance(res.value.norm()) {
        return Err(Error::NoConvergence { abs_error_estimate: res.abs_error_estimate, nodes_used: res.nodes_used });
    }
    Ok(res)
}

/// Principal `√τ`.
fn prefactor(args: &MordellArgs) -> Complex64 {
    let MordellArgs { x, tau } = *args;
    (Complex64::i() * PI * (0.25 - x * x / tau)).exp() / tau.sqrt()
}

fn transform_integrand(x: Complex64, tau: Complex64) -> impl Fn(Complex64) -> Complex64 {
    let inv = 1.0 / tau;
    let i = Complex64::i();
    move |u| (-i * PI * u * u * inv + 2.0 * PI * i * x * u * inv).exp() / ((-2.0 * PI * i * u).exp() - 1.0)
}

/// Envelope of the transformed integrand on the slope-−1 line through
/// `crossing`, with its log-magnitude at the peak.
fn transform_envelope(args: &MordellArgs, path: &SlantedPath) -> (DecayProfile, f64) {
    let inv = 1.0 / args.tau;
    let alpha = PI * inv.re;
    let beta = -2.0 * PI * (path.unit() * (args.x - path.crossing()) * inv).im;
    let center = envelope_center(alpha, beta);
    let peak = transform_integrand(args.x, args.tau)(path.parameterize(center)).norm().ln();
    let peak = if peak.is_finite() { peak } else { 0.0 };
    (DecayProfile::gaussian(alpha).centered_at(center).with_headroom(peak), peak)
}

/// [`transform_rhs`] with the slope-−1 line forced through `crossing`.
pub fn transform_rhs_through(args: MordellArgs, crossing: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    cfg.validate()?;
    let path = SlantedPath::north_west(0.0, 1.0)?.with_crossing(crossing)?;
    let (decay, _) = transform_envelope(&args, &path);
    let f = transform_integrand(args.x, args.tau);
    scaled_quadrature(prefactor(&args), cfg, |inner| integrate_slanted(f, &path, &decay, inner))
}

/// Right side of the integral transformation,
/// `e^{iπ(1/4 - x²/τ)}/√τ · ∫_{0↖1} e^{-iπu²/τ + 2πixu/τ} / (e^{-2πiu} - 1) du`.
///
/// The integrand decays at rate `π Re(1/τ)`, so small τ converges fast
/// here while the direct form slows down. On the line through `c` the
/// peak grows roughly like `e^{π c²/(2τ)}`, which the crossing choice
/// keeps in check for small τ.
pub fn transform_rhs(args: MordellArgs, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    let crossing = choose_crossing(|c| {
        let path = SlantedPath::north_west(0.0, 1.0)?.with_crossing(c)?;
        Ok(transform_envelope(&args, &path).1)
    })?;
    transform_rhs_through(args, crossing, cfg)
}

/// Right side of the functional equation,
/// `-(e^{iπ(1/4 - x²/τ)}/√τ) · conj(Φ(-x̄/τ̄, 1/τ̄))`.
pub fn functional_equation_rhs(args: MordellArgs, cfg: &QuadratureConfig) -> Result<Complex64> {
    let dual = scaled_quadrature(-prefactor(&args), cfg, |inner| {
        phi_quadrature(args.dual(), inner).map(|q| QuadratureResult { value: q.value.conj(), ..q })
    })?;
    Ok(dual.value)
}

fn relative(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / (lhs.norm() + 1e-300)
}

/// `|Φ(x,τ) - RHS| / |Φ(x,τ)|` for the functional equation.
pub fn functional_equation_residual(args: MordellArgs, cfg: &QuadratureConfig) -> Result<f64> {
    let lhs = phi_quadrature(args, cfg)?.value;
    Ok(relative(lhs, functional_equation_rhs(args, cfg)?))
}

/// `|Φ(x,τ) - transform_rhs(x,τ)| / |Φ(x,τ)|`.
pub fn transformation_residual(args: MordellArgs, cfg: &QuadratureConfig) -> Result<f64> {
    let lhs = phi_quadrature(args, cfg)?.value;
    Ok(relative(lhs, transform_rhs(args, cfg)?.value))
}

/// Mean-value check of analyticity in `x`: the average of `Φ` over `points`
/// equally spaced nodes of the circle `|x - x0| = radius`, compared with
/// `Φ(x0, τ)`. Returns the relative discrepancy.
pub fn mean_value_residual(args: MordellArgs, radius: f64, points: usize, cfg: &QuadratureConfig) -> Result<f64> {
    if radius.is_nan() || radius <= 0.0 || points < 3 {
        return Err(Error::InvalidConfig(format!("mean-value ring radius {radius}, {points} points")));
    }
    let centre = phi_quadrature(args, cfg)?.value;
    let mut acc = CompensatedSum::new();
    for k in 0..points {
        let x = args.x + Complex64::from_polar(radius, 2.0 * PI * k as f64 / points as f64);
        acc.add(phi_quadrature(MordellArgs::new(x, args.tau)?, cfg)?.value);
    }
    Ok(relative(centre, acc.value() / points as f64))
}
