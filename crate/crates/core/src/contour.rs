//! Slanted-line and ray contours reduced to real-parameter integrals.
//!
//! A slanted path is a straight line of slope +1 or -1 crossing the real
//! axis between two anchor points. Arrow notation maps onto
//! `(slope, direction)` as follows:
//!
//! | arrow | slope | parameter runs |
//! |-------|-------|----------------|
//! | ↗     | +1    | -∞ → +∞        |
//! | ↙     | +1    | +∞ → -∞        |
//! | ↘     | -1    | -∞ → +∞        |
//! | ↖     | -1    | +∞ → -∞        |
//!
//! with `u(t) = crossing + t·e^{±iπ/4}`. These conventions are pinned by
//! the zeta regression tests: flipping any of them breaks ζ(2) = π²/6.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{adaptive_integrate, adaptive_integrate_noisy, QuadratureConfig, QuadratureResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slope {
    /// Slope +1, angle +π/4.
    Rising,
    /// Slope -1, angle -π/4.
    Falling,
}

impl Slope {
    pub fn angle(self) -> f64 {
        match self {
            Slope::Rising => FRAC_PI_4,
            Slope::Falling => -FRAC_PI_4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Parameter increasing.
    Ascending,
    /// Parameter decreasing.
    Descending,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Ascending => 1.0,
            Direction::Descending => -1.0,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Direction::Ascending => Direction::Descending,
            Direction::Descending => Direction::Ascending,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlantedPath {
    crossing: f64,
    slope: Slope,
    direction: Direction,
    anchors: (f64, f64),
}

impl SlantedPath {
    pub fn new(crossing: f64, slope: Slope, direction: Direction, anchors: (f64, f64)) -> Result<Self> {
        let (lo, hi) = anchors;
        if !(lo < crossing && crossing < hi) {
            return Err(Error::Domain(format!(
                "crossing {crossing} not strictly between anchors {lo} and {hi}"
            )));
        }
        Ok(Self {
            crossing,
            slope,
            direction,
            anchors,
        })
    }

    /// Path crossing at the midpoint of the anchors.
    pub fn between(lo: f64, hi: f64, slope: Slope, direction: Direction) -> Result<Self> {
        Self::new(0.5 * (lo + hi), slope, direction, (lo, hi))
    }

    /// `lo ↗ hi`
    pub fn north_east(lo: f64, hi: f64) -> Result<Self> {
        Self::between(lo, hi, Slope::Rising, Direction::Ascending)
    }

    /// `lo ↙ hi`
    pub fn south_west(lo: f64, hi: f64) -> Result<Self> {
        Self::between(lo, hi, Slope::Rising, Direction::Descending)
    }

    /// `lo ↘ hi`
    pub fn south_east(lo: f64, hi: f64) -> Result<Self> {
        Self::between(lo, hi, Slope::Falling, Direction::Ascending)
    }

    /// `lo ↖ hi`
    pub fn north_west(lo: f64, hi: f64) -> Result<Self> {
        Self::between(lo, hi, Slope::Falling, Direction::Descending)
    }

    /// Same line family, different crossing point.
    pub fn with_crossing(self, crossing: f64) -> Result<Self> {
        Self::new(crossing, self.slope, self.direction, self.anchors)
    }

    pub fn reversed(self) -> Self {
        Self {
            direction: self.direction.reversed(),
            ..self
        }
    }

    pub fn crossing(&self) -> f64 {
        self.crossing
    }

    pub fn slope(&self) -> Slope {
        self.slope
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn anchors(&self) -> (f64, f64) {
        self.anchors
    }

    /// `e^{i·slope_angle}`
    pub fn unit(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.slope.angle())
    }

    /// `u(t) = crossing + t·e^{i·slope_angle}`; direction does not enter.
    pub fn parameterize(&self, t: f64) -> Complex64 {
        self.crossing + t * self.unit()
    }
}

/// Envelope shape of an integrand along its contour parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayKind {
    /// `|f| <= C·e^{-alpha·(t - center)²}`
    Gaussian { alpha: f64 },
    /// `|f| <= C·e^{-rate·|t - center|}`
    Exponential { rate: f64 },
}

/// Where an integrand lives along its parameter, used to truncate the
/// infinite contour.
///
/// `headroom` is extra log-magnitude the integrand may reach above its
/// value at `center` (e.g. from a power factor); it widens the window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayProfile {
    pub kind: DecayKind,
    pub center: f64,
    pub headroom: f64,
}

impl DecayProfile {
    pub fn gaussian(alpha: f64) -> Self {
        Self {
            kind: DecayKind::Gaussian { alpha },
            center: 0.0,
            headroom: 0.0,
        }
    }

    pub fn exponential(rate: f64) -> Self {
        Self {
            kind: DecayKind::Exponential { rate },
            center: 0.0,
            headroom: 0.0,
        }
    }

    pub fn centered_at(mut self, center: f64) -> Self {
        self.center = center;
        self
    }

    pub fn with_headroom(mut self, headroom: f64) -> Self {
        self.headroom = headroom.max(0.0);
        self
    }

    fn validate(&self) -> Result<()> {
        let rate = match self.kind {
            DecayKind::Gaussian { alpha } => alpha,
            DecayKind::Exponential { rate } => rate,
        };
        if rate > 0.0 && rate.is_finite() && self.center.is_finite() && self.headroom.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid decay profile {self:?}")))
        }
    }

    /// Truncation half-width `T` around `center`.
    pub fn half_width(&self, cfg: &QuadratureConfig) -> f64 {
        let range = cfg.log_range() + self.headroom;
        match self.kind {
            DecayKind::Gaussian { alpha } => cfg.truncation_sigma * (range / alpha).sqrt(),
            DecayKind::Exponential { rate } => cfg.truncation_sigma * range / rate,
        }
    }

    /// `[center - T, center + T]`
    pub fn window(&self, cfg: &QuadratureConfig) -> (f64, f64) {
        let half = self.half_width(cfg);
        (self.center - half, self.center + half)
    }
}

/// `∫ f(u) du` along `path`, truncated to the decay window.
pub fn integrate_slanted<F>(
    mut f: F,
    path: &SlantedPath,
    decay: &DecayProfile,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: FnMut(Complex64) -> Complex64,
{
    integrate_slanted_noisy(|u| (f(u), 0.0), path, decay, cfg)
}

/// [`integrate_slanted`] for integrands that report a relative error per
/// sample; see [`adaptive_integrate_noisy`].
pub fn integrate_slanted_noisy<F>(
    mut f: F,
    path: &SlantedPath,
    decay: &DecayProfile,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: FnMut(Complex64) -> (Complex64, f64),
{
    decay.validate()?;
    let (lo, hi) = decay.window(cfg);
    let unit = path.unit();
    let res = adaptive_integrate_noisy(|t| f(path.crossing + t * unit), lo, hi, cfg)?.require_converged()?;
    Ok(res.scaled(unit * path.direction.sign()))
}

/// Local power-law exponent of `|f(r·e^{iθ})|` as `r → 0`, or `None` when
/// `f` vanishes there.
fn origin_exponent<F>(f: &mut F, dir: Complex64) -> Option<f64>
where
    F: FnMut(Complex64) -> Complex64,
{
    let (r1, r2) = (1e-8, 1e-5);
    let m1 = f(r1 * dir).norm();
    let m2 = f(r2 * dir).norm();
    if !(m1.is_finite() && m2.is_finite()) {
        return Some(f64::NEG_INFINITY);
    }
    if m1 == 0.0 || m2 == 0.0 {
        return None;
    }
    Some((m2 / m1).ln() / (r2 / r1).ln())
}

/// `∫_0^{e^{iθ}∞} f(z) dz`.
///
/// The decay window's upper end fixes the truncation radius. An integrable
/// power singularity at the origin is handled by the substitution
/// `r = r0·v^m` on the first piece.
pub fn integrate_ray<F>(mut f: F, angle: f64, cfg: &QuadratureConfig, decay: &DecayProfile) -> Result<QuadratureResult>
where
    F: FnMut(Complex64) -> Complex64,
{
    decay.validate()?;
    let dir = Complex64::from_polar(1.0, angle);
    let exponent = origin_exponent(&mut f, dir);
    if let Some(p) = exponent {
        if p < -0.99 {
            return Err(Error::SingularAtOrigin { exponent: p });
        }
    }
    let (_, hi) = decay.window(cfg);
    let radius = hi.max(1.0);

    // smooth iff the origin behaves like a non-negative integer power
    let smooth = match exponent {
        None => true,
        Some(p) => p > -1e-3 && (p - p.round()).abs() < 1e-3,
    };
    let res = if smooth {
        adaptive_integrate(|r| f(r * dir), 0.0, radius, cfg)?.require_converged()?
    } else {
        let p = exponent.unwrap_or(0.0);
        let m = (3.0 / (1.0 + p)).ceil().max(2.0);
        let split = radius.min(1.0);
        let head = adaptive_integrate(
            |v| {
                let r = split * v.powf(m);
                f(r * dir) * (split * m * v.powf(m - 1.0))
            },
            0.0,
            1.0,
            cfg,
        )?
        .require_converged()?;
        if split < radius {
            let tail = adaptive_integrate(|r| f(r * dir), split, radius, cfg)?.require_converged()?;
            head.combine(tail)
        } else {
            head
        }
    };
    Ok(res.scaled(dir))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{c64, complex_gamma, real_pow, rel_diff};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn parameterize_examples() {
        let p = SlantedPath::north_east(0.0, 1.0).unwrap();
        assert_eq!(p.parameterize(0.0), c64(0.5, 0.0));
        let z = p.parameterize(2f64.sqrt());
        assert!((z - c64(1.5, 1.0)).norm() < 1e-15);

        let q = SlantedPath::new(0.0, Slope::Falling, Direction::Descending, (-0.5, 0.5)).unwrap();
        let z = q.parameterize(1.0);
        assert!((z - c64(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn crossing_must_sit_between_anchors() {
        assert!(SlantedPath::new(0.0, Slope::Rising, Direction::Ascending, (0.0, 1.0)).is_err());
        assert!(SlantedPath::new(1.2, Slope::Rising, Direction::Ascending, (0.0, 1.0)).is_err());
        let p = SlantedPath::north_east(0.0, 1.0).unwrap();
        assert!(p.with_crossing(0.3).is_ok());
        assert!(p.with_crossing(1.0).is_err());
    }

    #[test]
    fn gaussian_pulled_back_to_the_line() {
        let path = SlantedPath::north_east(0.0, 1.0).unwrap();
        let unit = path.unit();
        // f(u(t)) = e^{-t²}
        let f = |u: Complex64| {
            let t = ((u - 0.5) / unit).re;
            c64((-t * t).exp(), 0.0)
        };
        let r = integrate_slanted(f, &path, &DecayProfile::gaussian(1.0), &QuadratureConfig::default()).unwrap();
        let want = unit * PI.sqrt();
        assert!(rel_diff(r.value, want) < 1e-12);
    }

    #[test]
    fn zero_integrand() {
        let path = SlantedPath::south_east(-0.5, 0.5).unwrap();
        let r = integrate_slanted(|_| c64(0.0, 0.0), &path, &DecayProfile::gaussian(1.0), &QuadratureConfig::default())
            .unwrap();
        assert_eq!(r.value, c64(0.0, 0.0));
    }

    #[test]
    fn descending_negates_ascending() {
        let cfg = QuadratureConfig::default();
        let f = |u: Complex64| (Complex64::i() * PI * u * u).exp() / (u + 3.0);
        let up = SlantedPath::north_east(0.0, 1.0).unwrap();
        let a = integrate_slanted(f, &up, &DecayProfile::gaussian(PI), &cfg).unwrap();
        let b = integrate_slanted(f, &up.reversed(), &DecayProfile::gaussian(PI), &cfg).unwrap();
        assert!(rel_diff(a.value, -b.value) < 1e-12);
    }

    #[test]
    fn ray_gaussian() {
        let r = integrate_ray(|z| (-z * z).exp(), 0.0, &QuadratureConfig::default(), &DecayProfile::gaussian(1.0))
            .unwrap();
        assert!((r.value - c64(PI.sqrt() / 2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn ray_zero() {
        let r = integrate_ray(|_| c64(0.0, 0.0), 1.0, &QuadratureConfig::default(), &DecayProfile::gaussian(1.0))
            .unwrap();
        assert_eq!(r.value, c64(0.0, 0.0));
    }

    /// ∫_0^{e^{3πi/4}∞} e^{2πizu} z^{s-1} dz = e^{iπs/2} (2π)^{-s} Γ(s) u^{-s}
    fn gamma_ray(s: Complex64, u: Complex64) -> (Complex64, Complex64) {
        let theta = 3.0 * FRAC_PI_4;
        let dir = Complex64::from_polar(1.0, theta);
        let rate = -(2.0 * PI * Complex64::i() * u * dir).re;
        let decay = DecayProfile::exponential(rate).with_headroom((s.re - 1.0).max(0.0) * 4.0);
        let lhs = integrate_ray(
            |z| (2.0 * PI * Complex64::i() * z * u).exp() * z.powc(s - 1.0),
            theta,
            &QuadratureConfig::default(),
            &decay,
        )
        .unwrap()
        .value;
        let rhs = (Complex64::i() * PI * s / 2.0).exp()
            * real_pow(2.0 * PI, -s)
            * complex_gamma(s).unwrap()
            * u.powc(-s);
        (lhs, rhs)
    }

    #[test]
    fn gamma_ray_identity() {
        let u = 0.5 + Complex64::from_polar(1.0, FRAC_PI_4);
        let (lhs, rhs) = gamma_ray(c64(2.0, 0.0), u);
        // e^{iπ}(2π)^{-2}Γ(2)u^{-2}
        let explicit = -(2.0 * PI).powi(-2) * u.powi(-2);
        assert!(rel_diff(rhs, explicit) < 1e-14);
        assert!(rel_diff(lhs, rhs) < 1e-10, "{lhs} vs {rhs}");

        // non-integer power: singular but integrable origin
        let (lhs, rhs) = gamma_ray(c64(0.6, 1.5), u);
        assert!(rel_diff(lhs, rhs) < 1e-9, "{lhs} vs {rhs}");
    }

    #[test]
    fn ray_rejects_non_integrable_origin() {
        let r = integrate_ray(
            |z| (-z * z).exp() / (z * z),
            0.0,
            &QuadratureConfig::default(),
            &DecayProfile::gaussian(1.0),
        );
        assert!(matches!(r, Err(Error::SingularAtOrigin { .. })));
    }

    #[test]
    fn truncation_window_follows_decay() {
        let cfg = QuadratureConfig::default();
        let g = DecayProfile::gaussian(PI).centered_at(2.0);
        let (lo, hi) = g.window(&cfg);
        assert!((lo + hi - 4.0).abs() < 1e-12);
        let t = 1.5 * ((1e14f64).ln() / PI).sqrt();
        assert!((hi - 2.0 - t).abs() < 1e-12);
        let e = DecayProfile::exponential(2.0).with_headroom(10.0);
        assert!((e.half_width(&cfg) - 1.5 * ((1e14f64).ln() + 10.0) / 2.0).abs() < 1e-12);
    }
}
