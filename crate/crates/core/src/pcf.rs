//! Parabolic cylinder function U(a, z).
//!
//! For `Re a > -1/2`,
//!
//! ```text
//! U(a, z) = e^{-z²/4} / Γ(1/2 + a) · ∫_0^∞ e^{-w²/2 - zw} w^{a-1/2} dw.
//! ```
//!
//! The w-integral is evaluated on a deformed path in the slit plane:
//! an exact power series from 0 to a short departure point `w0`, an
//! optional straight segment to a vertex (usually a saddle point of the
//! integrand), then a truncated ray to infinity inside `|arg w| < π/4`.
//! Several candidate paths are scored by their peak log-magnitude and the
//! flattest one is used, which keeps cancellation small when `w^{a-1/2}`
//! oscillates (large `|Im a|`). Orders with `Re a <= -1/2` are reached by
//! running `z U(a,z) - U(a-1,z) + (a+1/2) U(a+1,z) = 0` downwards.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::contour::{integrate_ray, DecayProfile};
use crate::error::{Error, Result};
use crate::numeric::{
    adaptive_integrate, complex_gamma, complex_rgamma, real_pow, rounding_floor, QuadratureConfig, QuadratureResult,
};

/// Deepest recurrence continuation below `Re a = -1/2`.
pub const MAX_RECURRENCE_STEPS: u32 = 4;

/// Cancellation (in nats) above which the wide path search is tried.
const CANCELLATION_LIMIT: f64 = 9.0;

const RAY_ANGLES: [f64; 5] = [-0.7, -0.35, 0.0, 0.35, 0.7];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcfArgs {
    pub a: Complex64,
    pub z: Complex64,
}

impl PcfArgs {
    pub fn new(a: Complex64, z: Complex64) -> Self {
        Self { a, z }
    }
}

/// `ln` of the w-integrand `e^{-(w+z)²/2 + z²/4} w^{a-1/2}`, which carries
/// the `e^{-z²/4}` prefactor.
#[inline]
fn log_integrand(w: Complex64, a: Complex64, z: Complex64) -> Complex64 {
    let s = w + z;
    -0.5 * s * s + 0.25 * z * z + (a - 0.5) * w.ln()
}

#[inline]
fn log_magnitude(w: Complex64, a: Complex64, z: Complex64) -> f64 {
    let s = w + z;
    let q = -0.5 * s * s + 0.25 * z * z;
    q.re + (a.re - 0.5) * w.norm().ln() - a.im * w.arg()
}

/// `e^{-z²/4} ∫_0^{w0} e^{-w²/2 - zw} w^{a-1/2} dw` by termwise integration
/// of the Taylor series of `e^{-w²/2 - zw}`.
fn origin_series(a: Complex64, z: Complex64, w0: Complex64) -> Complex64 {
    let p = a + 0.5;
    let w0p = (p * w0.ln()).exp();
    let mut coeff_prev = Complex64::new(0.0, 0.0);
    let mut coeff = Complex64::new(1.0, 0.0);
    let mut w0k = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut quiet = 0;
    for k in 0..500u32 {
        let term = coeff * w0k / (p + k as f64);
        sum += term;
        // (k+1) c_{k+1} = -z c_k - c_{k-1}
        let next = (-z * coeff - coeff_prev) / (k as f64 + 1.0);
        coeff_prev = coeff;
        coeff = next;
        w0k *= w0;
        if term.norm() <= 1e-17 * sum.norm() {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    w0p * sum * (-0.25 * z * z).exp()
}

/// One deformation of `[0, ∞)`: series to `w0`, optional segment to
/// `vertex`, ray from there in direction `dir`.
#[derive(Debug, Clone, Copy)]
struct WPath {
    w0: Complex64,
    vertex: Option<Complex64>,
    dir: Complex64,
    reach: f64,
}

impl WPath {
    fn new(w0: Complex64, vertex: Option<Complex64>, dir: Complex64, a: Complex64, z: Complex64, cfg: &QuadratureConfig) -> Self {
        let start = vertex.unwrap_or(w0);
        let c = (2.0 * dir.arg()).cos();
        // Re(-(S + z + d r)²/2) falls off like -b r - c r²/2 past its peak
        let b = ((start + z) * dir).re;
        let peak = (-b / c).max(0.0);
        let slope = b.max(0.0);
        let sigma = cfg.truncation_sigma;
        let budget = sigma * sigma * cfg.log_range().max(36.0)
            + a.im.abs() * FRAC_PI_2
            + (a.re - 0.5).max(0.0) * (12.0 + start.norm()).ln();
        let reach = peak + ((slope * slope + 2.0 * c * budget).sqrt() - slope) / c;
        Self { w0, vertex, dir, reach }
    }

    fn start(&self) -> Complex64 {
        self.vertex.unwrap_or(self.w0)
    }

    /// Stays off the branch cut `(-∞, 0]` and away from the origin.
    fn is_valid(&self, rho: f64) -> bool {
        if let Some(p) = self.vertex {
            if crosses_cut(self.w0, p) || segment_distance(self.w0, p) < 0.7 * rho {
                return false;
            }
        }
        let s = self.start();
        !crosses_cut(s, s + self.dir * (self.reach + 50.0))
    }

    fn score(&self, a: Complex64, z: Complex64) -> f64 {
        let mut best = log_magnitude(self.w0, a, z);
        if let Some(p) = self.vertex {
            for i in 1..=12 {
                let w = self.w0 + (p - self.w0) * (i as f64 / 12.0);
                best = best.max(log_magnitude(w, a, z));
            }
        }
        let s = self.start();
        for i in 0..24 {
            let w = s + self.dir * (self.reach * i as f64 / 23.0);
            best = best.max(log_magnitude(w, a, z));
        }
        best
    }

    fn integrate(&self, a: Complex64, z: Complex64, cfg: &QuadratureConfig, peak: f64) -> Result<QuadratureResult> {
        let inner = QuadratureConfig {
            rel_tol: (cfg.rel_tol * 1e-2).max(1e-15),
            abs_tol: (peak.exp() * 1e-13).max(f64::MIN_POSITIVE),
            ..*cfg
        };
        let mut total = QuadratureResult {
            value: origin_series(a, z, self.w0),
            abs_error_estimate: 0.0,
            magnitude: 0.0,
            nodes_used: 0,
            refinements: 0,
            converged: true,
        };
        if let Some(p) = self.vertex {
            let chord = p - self.w0;
            let seg = adaptive_integrate(
                |v| log_integrand(self.w0 + chord * v, a, z).exp(),
                0.0,
                1.0,
                &inner,
            )?
            .require_converged()?;
            total = total.combine(seg.scaled(chord));
        }
        let s = self.start();
        let ray = adaptive_integrate(|r| log_integrand(s + self.dir * r, a, z).exp(), 0.0, self.reach, &inner)?
            .require_converged()?;
        Ok(total.combine(ray.scaled(self.dir)))
    }
}

fn crosses_cut(a: Complex64, b: Complex64) -> bool {
    if a.im * b.im > 0.0 {
        return false;
    }
    if a.im == b.im {
        // both on the real axis (a.im == b.im == 0)
        return a.im == 0.0 && a.re.min(b.re) <= 0.0;
    }
    let t = a.im / (a.im - b.im);
    a.re + t * (b.re - a.re) <= 0.0
}

fn segment_distance(a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = (-(a.conj() * d).re / d.norm_sqr()).clamp(0.0, 1.0);
    (a + d * t).norm()
}

fn saddles(a: Complex64, z: Complex64) -> [Complex64; 2] {
    // h'(w) = -w - z + (a - 1/2)/w = 0
    let disc = (z * z + 4.0 * (a - 0.5)).sqrt();
    [(-z + disc) * 0.5, (-z - disc) * 0.5]
}

fn departure_radius(z: Complex64) -> f64 {
    0.5f64.min(1.0 / z.norm().max(1.0))
}

fn narrow_candidates(a: Complex64, z: Complex64, cfg: &QuadratureConfig) -> Vec<WPath> {
    let rho = departure_radius(z);
    let mut out = Vec::with_capacity(8);
    for phi in RAY_ANGLES {
        let dir = Complex64::from_polar(1.0, phi);
        out.push(WPath::new(rho * dir, None, dir, a, z, cfg));
    }
    for p in saddles(a, z) {
        if p.norm() > rho {
            for phi in RAY_ANGLES {
                out.push(WPath::new(p * (rho / p.norm()), Some(p), Complex64::from_polar(1.0, phi), a, z, cfg));
            }
        }
    }
    out.retain(|c| c.is_valid(rho));
    out
}

fn wide_candidates(a: Complex64, z: Complex64, cfg: &QuadratureConfig) -> Vec<WPath> {
    let rho = departure_radius(z);
    let mut vertices: Vec<Option<Complex64>> = vec![None];
    vertices.extend(saddles(a, z).into_iter().filter(|p| p.norm() > rho).map(Some));
    for radius in [1.0, 2.0, 3.0, 5.0, 8.0, 12.0] {
        for k in 0..9 {
            let ang = -1.4 + 2.8 * k as f64 / 8.0;
            vertices.push(Some(Complex64::from_polar(radius, ang)));
        }
    }
    let mut out = Vec::new();
    for k in 0..13 {
        let psi = -2.7 + 5.4 * k as f64 / 12.0;
        let w0 = Complex64::from_polar(rho, psi);
        for &vertex in &vertices {
            for phi in RAY_ANGLES {
                let cand = WPath::new(w0, vertex, Complex64::from_polar(1.0, phi), a, z, cfg);
                if cand.is_valid(rho) {
                    out.push(cand);
                }
            }
        }
    }
    out
}

/// Extra score charged to paths with a vertex, which cost two quadratures.
const VERTEX_PENALTY: f64 = 1.0;
/// Per-radian charge on the ray angle: steep rays decay slowly and run long.
const ANGLE_PENALTY: f64 = 1.0;

/// Candidates ordered by penalised score, flattest first.
fn ranked(cands: Vec<WPath>, a: Complex64, z: Complex64) -> Vec<(WPath, f64)> {
    let mut scored: Vec<(WPath, f64, f64)> = cands
        .into_iter()
        .map(|c| {
            let s = c.score(a, z);
            let mut penalty = ANGLE_PENALTY * c.dir.arg().abs();
            if c.vertex.is_some() {
                penalty += VERTEX_PENALTY;
            }
            (c, s, s + penalty)
        })
        .filter(|(_, s, _)| s.is_finite())
        .collect();
    scored.sort_by(|x, y| x.2.total_cmp(&y.2));
    scored.into_iter().map(|(c, s, _)| (c, s)).collect()
}

/// Integrates along the best few candidates until one converges.
fn integrate_ranked(
    ranked: &[(WPath, f64)],
    a: Complex64,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<(QuadratureResult, f64)> {
    let mut last = Error::NonFinite("no usable integration path");
    for &(path, score) in ranked.iter().take(3) {
        match path.integrate(a, z, cfg, score) {
            Ok(v) => return Ok((v, score)),
            Err(e @ Error::NoConvergence { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// `e^{-z²/4} ∫_0^∞ e^{-w²/2 - zw} w^{a-1/2} dw` for `Re a > -1/2`.
fn pcf_integral(a: Complex64, z: Complex64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    let narrow = ranked(narrow_candidates(a, z, cfg), a, z);
    let (value, score) = integrate_ranked(&narrow, a, z, cfg)?;
    if score - value.value.norm().ln() <= CANCELLATION_LIMIT {
        return Ok(value);
    }
    let wide = ranked(wide_candidates(a, z, cfg), a, z);
    match wide.first() {
        Some(&(_, wide_score)) if wide_score < score - 1.0 => {
            let spent = value.nodes_used;
            Ok(match integrate_ranked(&wide, a, z, cfg) {
                Ok((v, _)) => QuadratureResult {
                    nodes_used: v.nodes_used + spent,
                    ..v
                },
                Err(_) => value,
            })
        }
        _ => Ok(value),
    }
}

fn check_args(args: &PcfArgs) -> Result<()> {
    let ok = [args.a, args.z].iter().all(|c| c.re.is_finite() && c.im.is_finite());
    if ok {
        Ok(())
    } else {
        Err(Error::NonFinite("pcf argument"))
    }
}

fn pcf_direct(a: Complex64, z: Complex64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    debug_assert!(a.re > -0.5);
    let value = pcf_integral(a, z, cfg)?.scaled(complex_rgamma(a + 0.5));
    if value.value.re.is_finite() && value.value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite("U(a, z) overflow"))
    }
}

/// Runs the recurrence down from orders `a + steps + 1` and `a + steps`.
fn descend(a: Complex64, z: Complex64, steps: u32, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    let top = a + steps as f64;
    let hi = pcf_direct(top + 1.0, z, cfg)?;
    let lo = pcf_direct(top, z, cfg)?;
    let (mut upper, mut lower) = (hi.value, lo.value);
    let (mut err_upper, mut err_lower) = (hi.abs_error_estimate, lo.abs_error_estimate);
    let (mut mag_upper, mut mag_lower) = (hi.magnitude, lo.magnitude);
    for k in (0..steps).rev() {
        // U(b) = z U(b+1) + (b + 3/2) U(b+2)
        let b = a + k as f64;
        let next = z * lower + (b + 1.5) * upper;
        let err = z.norm() * err_lower + (b + 1.5).norm() * err_upper;
        let mag = z.norm() * mag_lower + (b + 1.5).norm() * mag_upper;
        (upper, lower) = (lower, next);
        (err_upper, err_lower) = (err_lower, err);
        (mag_upper, mag_lower) = (mag_lower, mag);
    }
    Ok(QuadratureResult {
        value: lower,
        abs_error_estimate: err_lower.max(rounding_floor(mag_lower)),
        magnitude: mag_lower,
        nodes_used: hi.nodes_used + lo.nodes_used,
        refinements: hi.refinements.max(lo.refinements),
        converged: true,
    })
}

/// U(a, z).
///
/// Direct for `Re a > -1/2`; otherwise continued by up to
/// [`MAX_RECURRENCE_STEPS`] recurrence steps.
pub fn pcf_u(args: PcfArgs, cfg: &QuadratureConfig) -> Result<Complex64> {
    pcf_u_report(args, cfg).map(|r| r.value)
}

/// [`pcf_u`] with the error estimate and node count of the underlying
/// quadratures.
pub fn pcf_u_report(args: PcfArgs, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    cfg.validate()?;
    check_args(&args)?;
    let PcfArgs { a, z } = args;
    if a.re > -0.5 {
        return pcf_direct(a, z, cfg);
    }
    let steps = (-0.5 - a.re).floor() as u32 + 1;
    if steps > MAX_RECURRENCE_STEPS {
        return Err(Error::OrderOutOfRange { a });
    }
    descend(a, z, steps, cfg)
}

/// U(a, z) forced through `steps` recurrence steps even when the direct
/// integral is available; used to cross-check the continuation.
pub fn pcf_u_by_recurrence(args: PcfArgs, steps: u32, cfg: &QuadratureConfig) -> Result<Complex64> {
    cfg.validate()?;
    check_args(&args)?;
    if args.a.re + steps as f64 <= -0.5 {
        return Err(Error::OrderOutOfRange { a: args.a });
    }
    descend(args.a, args.z, steps, cfg).map(|r| r.value)
}

/// `|z U(a,z) - U(a-1,z) + (a+1/2) U(a+1,z)| / |U(a-1,z)|`.
pub fn pcf_recurrence_residual(a: Complex64, z: Complex64, cfg: &QuadratureConfig) -> Result<f64> {
    if a.re <= 0.5 {
        return Err(Error::Domain(format!("recurrence residual needs Re a > 1/2, got {a}")));
    }
    let u0 = pcf_u(PcfArgs::new(a, z), cfg)?;
    let um = pcf_u(PcfArgs::new(a - 1.0, z), cfg)?;
    let up = pcf_u(PcfArgs::new(a + 1.0, z), cfg)?;
    Ok((z * u0 - um + (a + 0.5) * up).norm() / (um.norm() + 1e-300))
}

/// Left side of the ray identity,
/// `∫_0^{e^{3πi/4}∞} e^{-iπz² + 2πi(u-1/2)z} z^{s-1} dz`.
pub fn pcf_ray_integral(s: Complex64, u: Complex64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    if s.re <= 0.0 {
        return Err(Error::Domain(format!("ray integral needs Re s > 0, got {s}")));
    }
    let theta = 3.0 * FRAC_PI_4;
    let dir = Complex64::from_polar(1.0, theta);
    let i = Complex64::i();
    let shift = u - 0.5;
    // |integrand| = e^{-π r² + β r} r^{Re s - 1} e^{-Im s · θ}
    let beta = (2.0 * PI * i * shift * dir).re;
    let center = (beta / (2.0 * PI)).max(0.0);
    let decay = DecayProfile::gaussian(PI)
        .centered_at(center)
        .with_headroom((s.re - 1.0).max(0.0) * (center + 4.0).ln());
    integrate_ray(
        |z| (-i * PI * z * z + 2.0 * PI * i * shift * z + (s - 1.0) * z.ln()).exp(),
        theta,
        cfg,
        &decay,
    )
}

/// Right side of the ray identity,
/// `(2π)^{-s/2} Γ(s) e^{3iπs/4 + iπ(u-1/2)²/2} U(s - 1/2, √(2π) e^{iπ/4} (u - 1/2))`.
pub fn pcf_ray_closed_form(s: Complex64, u: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
    let i = Complex64::i();
    let shift = u - 0.5;
    let arg = (2.0 * PI).sqrt() * Complex64::from_polar(1.0, FRAC_PI_4) * shift;
    let uval = pcf_u(PcfArgs::new(s - 0.5, arg), cfg)?;
    Ok(real_pow(2.0 * PI, -s / 2.0)
        * complex_gamma(s)?
        * (3.0 * i * PI * s / 4.0 + i * PI * shift * shift / 2.0).exp()
        * uval)
}

/// `∫_0^{e^{3πi/4}∞} e^{2πizu} z^{s-1} dz`, convergent for
/// `-3π/4 < arg u < π/4`.
pub fn gamma_ray_integral(s: Complex64, u: Complex64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    if s.re <= 0.0 {
        return Err(Error::Domain(format!("ray integral needs Re s > 0, got {s}")));
    }
    let theta = 3.0 * FRAC_PI_4;
    let dir = Complex64::from_polar(1.0, theta);
    let i = Complex64::i();
    let rate = -(2.0 * PI * i * u * dir).re;
    if rate <= 0.0 {
        return Err(Error::Domain(format!("ray integral diverges for u = {u}")));
    }
    let decay = DecayProfile::exponential(rate).with_headroom((s.re - 1.0).max(0.0) * 4.0 + s.im.abs() * PI);
    integrate_ray(|z| (2.0 * PI * i * z * u + (s - 1.0) * z.ln()).exp(), theta, cfg, &decay)
}

/// `e^{iπs/2} (2π)^{-s} Γ(s) u^{-s}`
pub fn gamma_ray_closed_form(s: Complex64, u: Complex64) -> Result<Complex64> {
    Ok((Complex64::i() * PI * s / 2.0).exp() * real_pow(2.0 * PI, -s) * complex_gamma(s)? * (-s * u.ln()).exp())
}

/// `U(a, 0) = 2^{(2a-3)/4} Γ(a/2 + 1/4) / Γ(a + 1/2)`.
pub fn pcf_u_at_origin(a: Complex64) -> Result<Complex64> {
    Ok(real_pow(2.0, (2.0 * a - 3.0) / 4.0) * complex_gamma(a / 2.0 + 0.25)? * complex_rgamma(a + 0.5))
}
