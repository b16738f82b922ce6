//! ζ(s) through the Riemann-Siegel integral formula
//!
//! ```text
//! π^{-s/2} Γ(s/2) ζ(s) = F(s) + conj(F(1 - s̄)),
//! F(s) = π^{-s/2} Γ(s/2) ∫_{0↙1} e^{iπu²} u^{-s} / (e^{iπu} - e^{-iπu}) du,
//! ```
//!
//! with `F` available in that classical form and in the equivalent form
//! with a parabolic cylinder kernel,
//!
//! ```text
//! F(s) = 2^{s/2} Γ(s/2) e^{-iπ(1-s)/4}
//!        ∫_{-½↘½} e^{-iπu²/2 + iπu} / (2i cos πu) · U(s - 1/2, √(2π) e^{iπ/4} u) du.
//! ```
//!
//! An accelerated alternating series provides an independent ζ.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::contour::{integrate_slanted, integrate_slanted_noisy, DecayProfile, SlantedPath};
use crate::error::{Error, Result};
use crate::numeric::{complex_gamma, real_pow, rounding_floor, CompensatedSum, QuadratureConfig, QuadratureResult};
use crate::pcf::{pcf_u_report, PcfArgs};

/// Largest `|s|` accepted.
pub const MAX_ABS_S: f64 = 60.0;
/// Largest `|Im s|` accepted.
pub const MAX_IM_S: f64 = 50.0;
/// Exclusion radius around the poles of the completed function and of
/// `Γ(s/2)`.
pub const POLE_EXCLUSION: f64 = 0.05;

/// How far an integral's error estimate may exceed the requested tolerance
/// before the evaluation is reported as not converged.
const ERROR_SLACK: f64 = 100.0;

/// Circle used to average `F` across its removable points `s = -2, -4, ...`.
const CIRCLE_RADIUS: f64 = 0.1;
const CIRCLE_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Classical,
    Pcf,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Classical => "classical",
            Method::Pcf => "pcf",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "classical" => Ok(Method::Classical),
            "pcf" => Ok(Method::Pcf),
            "oracle" => Ok(Method::Oracle),
            other => Err(Error::InvalidConfig(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub method: Method,
    pub nodes_used: usize,
}

impl EvalReport {
    /// Rejects a converged integral whose error estimate, rounding included,
    /// is still far above the requested tolerance.
    fn from_quadrature(q: QuadratureResult, prefactor: Complex64, method: Method, cfg: &QuadratureConfig) -> Result<Self> {
        if q.abs_error_estimate > ERROR_SLACK * cfg.tolerance(q.value.norm()) {
            return Err(Error::NoConvergence {
                abs_error_estimate: q.abs_error_estimate,
                nodes_used: q.nodes_used,
            });
        }
        Ok(Self {
            value: q.value * prefactor,
            abs_error_estimate: q.abs_error_estimate * prefactor.norm(),
            method,
            nodes_used: q.nodes_used,
        })
    }

    fn conj(self) -> Self {
        Self {
            value: self.value.conj(),
            ..self
        }
    }

    fn add(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            method: self.method,
            nodes_used: self.nodes_used + other.nodes_used,
        }
    }

    fn scale(self, factor: Complex64) -> Self {
        Self {
            value: self.value * factor,
            abs_error_estimate: self.abs_error_estimate * factor.norm(),
            ..self
        }
    }
}

fn check_domain(s: Complex64) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::NonFinite("s"));
    }
    if s.norm() > MAX_ABS_S || s.im.abs() > MAX_IM_S {
        return Err(Error::Domain(format!(
            "s = {s} outside |s| <= {MAX_ABS_S}, |Im s| <= {MAX_IM_S}"
        )));
    }
    Ok(())
}

/// Non-positive even integer `-2n` (`n >= 1`) within `radius` of `s`.
fn near_negative_even(s: Complex64, radius: f64) -> Option<f64> {
    let k = (s.re / 2.0).round();
    let target = 2.0 * k;
    (k <= -1.0 && (s - target).norm() < radius).then_some(target)
}

/// Applies `eval` at `s`, or averages it over a small circle when `s` sits
/// next to a removable point of `F`.
fn with_removable_points(s: Complex64, eval: impl Fn(Complex64) -> Result<EvalReport>) -> Result<EvalReport> {
    let Some(centre) = near_negative_even(s, POLE_EXCLUSION) else {
        return eval(s);
    };
    let centre = Complex64::new(centre, 0.0);
    let mut acc = CompensatedSum::new();
    let mut report: Option<EvalReport> = None;
    for k in 0..CIRCLE_POINTS {
        let p = s + Complex64::from_polar(CIRCLE_RADIUS, 2.0 * PI * k as f64 / CIRCLE_POINTS as f64);
        debug_assert!((p - centre).norm() > 0.04);
        let r = eval(p)?;
        acc.add(r.value);
        report = Some(match report {
            None => r,
            Some(prev) => EvalReport {
                abs_error_estimate: prev.abs_error_estimate.max(r.abs_error_estimate),
                nodes_used: prev.nodes_used + r.nodes_used,
                ..prev
            },
        });
    }
    let mut out = report.expect("circle has points");
    out.value = acc.value() / CIRCLE_POINTS as f64;
    Ok(out)
}

/// Gaussian window for the classical integrands on a slope-±1 line through
/// 1/2: `e^{∓iπu²}` gives `e^{-πt² - πt/√2}`, and `u^{∓s}` may add up to
/// `|Im s|·3π/4` plus polynomial growth when the real exponent is positive.
fn classical_decay(power_re: f64, s_im: f64) -> DecayProfile {
    let center = -1.0 / (2.0 * SQRT_2);
    let growth = s_im.abs() * 3.0 * FRAC_PI_4 + power_re.max(0.0) * 12.0f64.ln();
    DecayProfile::gaussian(PI).centered_at(center).with_headroom(growth)
}

/// `e^{iπu} - e^{-iπu}`
#[inline]
fn two_i_sin(u: Complex64) -> Complex64 {
    let i = Complex64::i();
    (i * PI * u).exp() - (-i * PI * u).exp()
}

fn f_upper_classical_raw(s: Complex64, cfg: &QuadratureConfig) -> Result<EvalReport> {
    let i = Complex64::i();
    let prefactor = real_pow(PI, -s / 2.0) * complex_gamma(s / 2.0)?;
    let path = SlantedPath::south_west(0.0, 1.0)?;
    let decay = classical_decay(-s.re, s.im);
    let q = integrate_slanted(
        |u| (i * PI * u * u - s * u.ln()).exp() / two_i_sin(u),
        &path,
        &decay,
        cfg,
    )?;
    EvalReport::from_quadrature(q, prefactor, Method::Classical, cfg)
}

/// `F(s)` from the classical slanted integral.
pub fn f_upper_classical(s: Complex64, cfg: &QuadratureConfig) -> Result<EvalReport> {
    cfg.validate()?;
    check_domain(s)?;
    with_removable_points(s, |p| f_upper_classical_raw(p, cfg))
}

/// Exponential window for the parabolic cylinder integrands on a line
/// through 0. The Gaussian factor of the kernel cancels the growth of U on
/// one side, leaving `e^{-√2π|t|}` from `e^{±iπu}/cos πu`; the other side
/// decays like `e^{-πt²}`.
fn pcf_decay() -> DecayProfile {
    DecayProfile::exponential(SQRT_2 * PI)
}

/// Relative accuracy assumed for every U value on top of the rounding of
/// its own integral; the reference comparisons sit between 1e-13 and 1e-11.
const U_NOMINAL_ACCURACY: f64 = 1e-12;

/// `∫ kernel(u) U(a, scale·u) du` along `path`. Each U value carries its
/// own error into the noise floor.
fn pcf_line_integral(
    a: Complex64,
    scale: Complex64,
    kernel: impl Fn(Complex64) -> Complex64,
    path: &SlantedPath,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    let mut failure = None;
    let q = integrate_slanted_noisy(
        |u| match pcf_u_report(PcfArgs::new(a, scale * u), cfg) {
            Ok(r) => {
                let size = r.value.norm();
                let delta = if size > 0.0 { rounding_floor(r.magnitude) / size } else { 0.0 };
                (kernel(u) * r.value, delta + U_NOMINAL_ACCURACY)
            }
            Err(e) => {
                failure.get_or_insert(e);
                (Complex64::new(0.0, 0.0), 0.0)
            }
        },
        path,
        &pcf_decay(),
        cfg,
    );
    match failure {
        Some(e) => Err(e),
        None => q,
    }
}

fn f_upper_pcf_raw(s: Complex64, cfg: &QuadratureConfig) -> Result<EvalReport> {
    let i = Complex64::i();
    let prefactor = real_pow(2.0, s / 2.0) * complex_gamma(s / 2.0)? * (-i * PI * (1.0 - s) / 4.0).exp();
    let scale = (2.0 * PI).sqrt() * Complex64::from_polar(1.0, FRAC_PI_4);
    let path = SlantedPath::south_east(-0.5, 0.5)?;
    let q = pcf_line_integral(
        s - 0.5,
        scale,
        |u| (-i * PI * u * u / 2.0 + i * PI * u).exp() / (2.0 * i * (PI * u).cos()),
        &path,
        cfg,
    )?;
    EvalReport::from_quadrature(q, prefactor, Method::Pcf, cfg)
}

/// `F(s)` from the parabolic cylinder form.
pub fn f_upper_pcf(s: Complex64, cfg: &QuadratureConfig) -> Result<EvalReport> {
    cfg.validate()?;
    check_domain(s)?;
    with_removable_points(s, |p| f_upper_pcf_raw(p, cfg))
}

/// `F(s)` with the given method; `Oracle` is not an `F` method.
pub fn f_upper(s: Complex64, cfg: &QuadratureConfig, method: Method) -> Result<EvalReport> {
    match method {
        Method::Classical => f_upper_classical(s, cfg),
        Method::Pcf => f_upper_pcf(s, cfg),
        Method::Oracle => Err(Error::InvalidConfig("F(s) has no oracle route".into())),
    }
}

/// `conj(F(1 - s̄))`, via `F` at the reflected point.
pub fn f_lower(s: Complex64, cfg: &QuadratureConfig, method: Method) -> Result<EvalReport> {
    let reflected = 1.0 - s.conj();
    Ok(f_upper(reflected, cfg, method)?.conj())
}

// The direct routes cross the real axis away from the mirror image of the
// reflected route's line, so the two discretisations share no nodes.
const DIRECT_CLASSICAL_CROSSING: f64 = 0.4;
const DIRECT_PCF_CROSSING: f64 = 0.1;

fn f_lower_classical_direct(s: Complex64, cfg: &QuadratureConfig) -> Result<EvalReport> {
    let i = Complex64::i();
    let w = 1.0 - s;
    let prefactor = real_pow(PI, -w / 2.0) * complex_gamma(w / 2.0)?;
    let path = SlantedPath::south_east(0.0, 1.0)?.with_crossing(DIRECT_CLASSICAL_CROSSING)?;
    let decay = classical_decay(s.re - 1.0, s.im);
    let q = integrate_slanted(
        |u| (-i * PI * u * u + (s - 1.0) * u.ln()).exp() / two_i_sin(u),
        &path,
        &decay,
        cfg,
    )?;
    EvalReport::from_quadrature(q, prefactor, Method::Classical, cfg)
}

fn f_lower_pcf_direct(s: Complex64, cfg: &QuadratureConfig) -> Result<EvalReport> {
    let i = Complex64::i();
    let w = 1.0 - s;
    let prefactor = real_pow(2.0, w / 2.0) * complex_gamma(w / 2.0)? * (i * PI * s / 4.0).exp();
    let scale = (2.0 * PI).sqrt() * Complex64::from_polar(1.0, -FRAC_PI_4);
    let path = SlantedPath::south_west(-0.5, 0.5)?.with_crossing(DIRECT_PCF_CROSSING)?;
    let q = pcf_line_integral(
        0.5 - s,
        scale,
        |u| (i * PI * u * u / 2.0 - i * PI * u).exp() / (2.0 * i * (PI * u).cos()),
        &path,
        cfg,
    )?;
    EvalReport::from_quadrature(q, prefactor, Method::Pcf, cfg)
}

/// `conj(F(1 - s̄))` from its own slanted integral rather than by
/// reflection. Kept for cross-checking [`f_lower`].
pub fn f_lower_direct(s: Complex64, cfg: &QuadratureConfig, method: Method) -> Result<EvalReport> {
    cfg.validate()?;
    check_domain(s)?;
    // removable points of F(1 - s̄) sit at s = 3, 5, ...
    let eval = |p: Complex64| match method {
        Method::Classical => f_lower_classical_direct(p, cfg),
        Method::Pcf => f_lower_pcf_direct(p, cfg),
        Method::Oracle => Err(Error::InvalidConfig("F(s) has no oracle route".into())),
    };
    let mirrored = 1.0 - s.conj();
    if near_negative_even(mirrored, POLE_EXCLUSION).is_some() {
        let mut acc = CompensatedSum::new();
        let mut nodes = 0;
        let mut err = 0.0f64;
        for k in 0..CIRCLE_POINTS {
            let r = eval(s + Complex64::from_polar(CIRCLE_RADIUS, 2.0 * PI * k as f64 / CIRCLE_POINTS as f64))?;
            acc.add(r.value);
            nodes += r.nodes_used;
            err = err.max(r.abs_error_estimate);
        }
        return Ok(EvalReport {
            value: acc.value() / CIRCLE_POINTS as f64,
            abs_error_estimate: err,
            method,
            nodes_used: nodes,
        });
    }
    eval(s)
}

fn check_poles(s: Complex64) -> Result<()> {
    for p in [0.0, 1.0] {
        if (s - p).norm() < POLE_EXCLUSION {
            return Err(Error::Pole {
                what: "completed zeta",
                at: Complex64::new(p, 0.0),
            });
        }
    }
    Ok(())
}

/// `π^{-s/2} Γ(s/2)`
fn gamma_factor(s: Complex64) -> Result<Complex64> {
    Ok(real_pow(PI, -s / 2.0) * complex_gamma(s / 2.0)?)
}

/// `π^{-s/2} Γ(s/2) ζ(s) = F(s) + conj(F(1 - s̄))`.
pub fn completed_zeta(s: Complex64, cfg: &QuadratureConfig, method: Method) -> Result<EvalReport> {
    cfg.validate()?;
    check_domain(s)?;
    check_poles(s)?;
    if method == Method::Oracle {
        let value = gamma_factor(s)? * eta_series_oracle(s, eta_series_terms(s))?;
        return Ok(EvalReport {
            value,
            abs_error_estimate: 1e-12 * value.norm(),
            method,
            nodes_used: 0,
        });
    }
    // Below the real axis both terms grow like e^{π|t|/2} while their sum
    // decays, so evaluate at s̄ and conjugate.
    if s.im < 0.0 {
        return Ok(completed_zeta(s.conj(), cfg, method)?.conj());
    }
    Ok(f_upper(s, cfg, method)?.add(f_lower(s, cfg, method)?))
}

/// [`completed_zeta`] with the second term taken from its own integral
/// ([`f_lower_direct`]) instead of by reflecting `F`. The reflection and
/// reality symmetries hold exactly for the reflected sum, so this variant
/// is what tests them.
pub fn completed_zeta_direct(s: Complex64, cfg: &QuadratureConfig, method: Method) -> Result<EvalReport> {
    cfg.validate()?;
    check_domain(s)?;
    check_poles(s)?;
    if s.im < 0.0 {
        return Ok(completed_zeta_direct(s.conj(), cfg, method)?.conj());
    }
    Ok(f_upper(s, cfg, method)?.add(f_lower_direct(s, cfg, method)?))
}

/// ζ(s), away from `s = 0, 1` and the trivial zeros `s = -2, -4, ...`.
pub fn zeta(s: Complex64, cfg: &QuadratureConfig, method: Method) -> Result<EvalReport> {
    cfg.validate()?;
    check_domain(s)?;
    check_poles(s)?;
    if let Some(p) = near_negative_even(s, POLE_EXCLUSION) {
        return Err(Error::Pole {
            what: "Γ(s/2)",
            at: Complex64::new(p, 0.0),
        });
    }
    if method == Method::Oracle {
        let value = eta_series_oracle(s, eta_series_terms(s))?;
        return Ok(EvalReport {
            value,
            abs_error_estimate: 1e-12 * value.norm(),
            method,
            nodes_used: 0,
        });
    }
    let completed = completed_zeta(s, cfg, method)?;
    Ok(completed.scale(1.0 / gamma_factor(s)?))
}

/// Series length that keeps [`eta_series_oracle`] near full precision at `s`.
pub fn eta_series_terms(s: Complex64) -> usize {
    // error ~ (1 + 2|t|) e^{π|t|/2} / (3 + √8)^n
    let t = s.im.abs();
    let need = (40.0 + PI * t / 2.0 + (1.0 + 2.0 * t).ln()) / (3.0 + 8f64.sqrt()).ln();
    (need.ceil() as usize).max(32)
}

/// ζ(s) from the alternating series `Σ (-1)^{k+1} k^{-s}` accelerated by
/// Chebyshev-weighted partial sums, divided by `1 - 2^{1-s}`.
pub fn eta_series_oracle(s: Complex64, terms: usize) -> Result<Complex64> {
    if s.re.is_nan() || s.re <= 0.0 || !s.im.is_finite() {
        return Err(Error::Domain(format!("eta series needs Re s > 0, got {s}")));
    }
    if terms < 32 {
        return Err(Error::InvalidConfig(format!("eta series needs at least 32 terms, got {terms}")));
    }
    let factor = 1.0 - real_pow(2.0, 1.0 - s);
    if factor.norm() < 1e-10 {
        return Err(Error::Domain(format!("1 - 2^(1-s) vanishes at s = {s}")));
    }
    let n = terms;
    // ln of n (n+i-1)! 4^i / ((n-i)! (2i)!), built from consecutive ratios
    let mut log_terms = Vec::with_capacity(n + 1);
    let mut current = 0.0f64;
    log_terms.push(current);
    for i in 1..=n {
        let (nf, fi) = (n as f64, i as f64);
        current += (4.0 * (nf + fi - 1.0) * (nf - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0))).ln();
        log_terms.push(current);
    }
    let top = log_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut d = Vec::with_capacity(n + 1);
    let mut running = 0.0;
    for lt in &log_terms {
        running += (lt - top).exp();
        d.push(running);
    }
    let dn = d[n];
    let mut acc = CompensatedSum::new();
    for (k, &dk) in d[..n].iter().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(sign * (dk - dn) * real_pow((k + 1) as f64, -s));
    }
    Ok(-acc.value() / (dn * factor))
}
