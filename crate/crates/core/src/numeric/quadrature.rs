//! Gauss-Legendre panel quadrature with uniform panel halving.
//!
//! Level `k` splits the interval into `2^k` panels of the configured order.
//! The integral is accepted once two consecutive levels agree to
//! `max(abs_tol, rel_tol * |value|)`; that difference is reported as the
//! error estimate. It is an estimate, not a bound.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use super::sum::CompensatedSum;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Nodes per panel.
    pub panel_order: usize,
    pub max_refinements: u32,
    /// Safety factor applied to analytically derived truncation lengths.
    pub truncation_sigma: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            panel_order: 32,
            max_refinements: 12,
            truncation_sigma: 1.5,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_truncation_sigma(mut self, sigma: f64) -> Self {
        self.truncation_sigma = sigma;
        self
    }

    pub fn with_max_refinements(mut self, n: u32) -> Self {
        self.max_refinements = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.panel_order >= 4
            && self.max_refinements >= 1
            && self.truncation_sigma >= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("{self:?}")))
        }
    }

    /// Acceptance threshold for a result of magnitude `scale`.
    pub fn tolerance(&self, scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * scale)
    }

    /// `ln(1 / abs_tol)`, the log-dynamic range truncation has to cover.
    pub fn log_range(&self) -> f64 {
        (1.0 / self.abs_tol).ln().max(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// At least the refinement difference and the rounding floor
    /// `ε·magnitude`.
    pub abs_error_estimate: f64,
    /// `∫|f|`, the scale of the rounding error in the sum.
    pub magnitude: f64,
    pub nodes_used: usize,
    pub refinements: u32,
    pub converged: bool,
}

impl QuadratureResult {
    /// Turns a non-converged result into [`Error::NoConvergence`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                abs_error_estimate: self.abs_error_estimate,
                nodes_used: self.nodes_used,
            })
        }
    }

    /// Multiplies the value (and scales the error estimate) by `factor`.
    pub fn scaled(self, factor: Complex64) -> Self {
        Self {
            value: self.value * factor,
            abs_error_estimate: self.abs_error_estimate * factor.norm(),
            magnitude: self.magnitude * factor.norm(),
            ..self
        }
    }

    /// Adds two partial results over adjacent pieces of one integral.
    pub fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            magnitude: self.magnitude + other.magnitude,
            nodes_used: self.nodes_used + other.nodes_used,
            refinements: self.refinements.max(other.refinements),
            converged: self.converged && other.converged,
        }
    }
}

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared, lazily built rules keyed by order.
pub fn gauss_legendre(order: usize) -> Arc<GaussLegendre> {
    static RULES: OnceLock<Mutex<Vec<Arc<GaussLegendre>>>> = OnceLock::new();
    let rules = RULES.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = rules.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(rule) = guard.iter().find(|r| r.order() == order) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(GaussLegendre::new(order));
    guard.push(Arc::clone(&rule));
    rule
}

/// Composite rule sums: value, `Σ|w f|` and `Σ|w f|·δ`.
fn panel_sum<F>(f: &mut F, rule: &GaussLegendre, lo: f64, hi: f64, panels: usize) -> Result<(Complex64, f64, f64)>
where
    F: FnMut(f64) -> (Complex64, f64),
{
    let h = (hi - lo) / panels as f64;
    let mut total = CompensatedSum::new();
    let (mut l1, mut noise) = (0.0, 0.0);
    for p in 0..panels {
        let a = lo + h * p as f64;
        let mid = a + 0.5 * h;
        let half = 0.5 * h;
        let mut acc = Complex64::new(0.0, 0.0);
        let (mut abs, mut rel) = (0.0, 0.0);
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let (v, delta) = f(mid + half * x);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite("integrand"));
            }
            acc += v * w;
            abs += v.norm() * w;
            rel += v.norm() * w * delta;
        }
        total.add(acc * half);
        l1 += abs * half.abs();
        noise += rel * half.abs();
    }
    Ok((total.value(), l1, noise))
}

/// Error left by summing terms of total size `magnitude` in binary64.
pub fn rounding_floor(magnitude: f64) -> f64 {
    f64::EPSILON * magnitude
}

/// Refinement differences within this factor of the noise floor are noise.
const NOISE_FACTOR: f64 = 4.0;
/// A difference that shrank by less than this factor has stagnated.
const STAGNATION: f64 = 0.5;
/// A settled value whose rounding floor is this far above the tolerance
/// came out of cancellation and carries no digits worth reporting.
const CANCELLATION_SLACK: f64 = 100.0;

/// Integrates `f` over `[t_lo, t_hi]`.
///
/// Returns `Ok` with `converged = false` when the refinement budget runs
/// out; use [`QuadratureResult::require_converged`] to make that an error.
pub fn adaptive_integrate<F>(mut f: F, t_lo: f64, t_hi: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Complex64,
{
    adaptive_integrate_noisy(|t| (f(t), 0.0), t_lo, t_hi, cfg)
}

/// [`adaptive_integrate`] for an integrand that also reports the relative
/// error `δ` of each sample. The noise `Σ|w f|·(ε + δ)` bounds the error
/// estimate from below, and refinement stops without converging once the
/// level-to-level difference has stagnated at that noise while still above
/// the tolerance.
pub fn adaptive_integrate_noisy<F>(mut f: F, t_lo: f64, t_hi: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> (Complex64, f64),
{
    cfg.validate()?;
    if !(t_lo.is_finite() && t_hi.is_finite() && t_lo < t_hi) {
        return Err(Error::Domain(format!("bad interval [{t_lo}, {t_hi}]")));
    }
    let rule = gauss_legendre(cfg.panel_order);
    let order = rule.order();

    let (mut prev, mut magnitude, mut noise) = panel_sum(&mut f, &rule, t_lo, t_hi, 1)?;
    let mut nodes_used = order;
    let mut delta = f64::INFINITY;
    let mut refinements = 0;
    let mut converged = false;
    for level in 1..=cfg.max_refinements {
        let panels = 1usize << level;
        let (cur, l1, n) = panel_sum(&mut f, &rule, t_lo, t_hi, panels)?;
        nodes_used += panels * order;
        let last = delta;
        delta = (cur - prev).norm();
        (prev, magnitude, noise, refinements) = (cur, l1, n, level);
        if delta <= cfg.tolerance(cur.norm()) {
            converged = rounding_floor(l1) + n <= CANCELLATION_SLACK * cfg.tolerance(cur.norm());
            break;
        }
        if delta > STAGNATION * last && delta <= NOISE_FACTOR * (rounding_floor(magnitude) + noise) {
            break;
        }
    }
    Ok(QuadratureResult {
        value: prev,
        abs_error_estimate: delta.max(rounding_floor(magnitude) + noise),
        magnitude,
        nodes_used,
        refinements,
        converged,
    })
}
