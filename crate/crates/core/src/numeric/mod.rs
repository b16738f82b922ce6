//! Scalar foundations: complex gamma, compensated sums, panel quadrature.

pub mod gamma;
pub mod quadrature;
pub mod sum;

pub use gamma::{complex_gamma, complex_rgamma};
pub use quadrature::{adaptive_integrate, adaptive_integrate_noisy, rounding_floor, GaussLegendre, QuadratureConfig, QuadratureResult};
pub use sum::CompensatedSum;

pub use num_complex::Complex64;

/// The scalar type used throughout the crate.
pub type ComplexValue = Complex64;

/// `Complex64::new` shorthand.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `|a - b| / |b|`, with `|a|` when `b` is zero.
pub fn rel_diff(a: Complex64, b: Complex64) -> f64 {
    let d = (a - b).norm();
    let s = b.norm();
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

/// Whether both parts are finite.
#[inline]
pub fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `base^s` for a positive real base.
#[inline]
pub fn real_pow(base: f64, s: Complex64) -> Complex64 {
    (s * base.ln()).exp()
}
