//! Complex gamma function.
//!
//! Lanczos approximation with `g = 7` and nine coefficients on `Re z >= 1/2`,
//! reflection formula below.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;

#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Distance from a non-positive integer below which `z` is treated as a pole.
pub const POLE_RADIUS: f64 = 1e-12;

/// Distance from `z` to the nearest non-positive integer.
fn pole_distance(z: Complex64) -> f64 {
    let k = z.re.round().min(0.0);
    (z - k).norm()
}

/// `ln Γ(z)` for `Re z >= 1/2` via the Lanczos series.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// Γ(z) for complex `z`.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite("gamma argument"));
    }
    if pole_distance(z) < POLE_RADIUS {
        return Err(Error::Pole { what: "gamma", at: z });
    }
    let value = if z.re < 0.5 {
        // Γ(z) Γ(1 - z) = π / sin(πz)
        let sin = (PI * z).sin();
        PI / (sin * ln_gamma_right(1.0 - z).exp())
    } else {
        ln_gamma_right(z).exp()
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite("gamma overflow"))
    }
}

/// 1/Γ(z), which is entire; returns exact zero at the poles of Γ.
pub fn complex_rgamma(z: Complex64) -> Complex64 {
    if pole_distance(z) < POLE_RADIUS {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        (PI * z).sin() * ln_gamma_right(1.0 - z).exp() / PI
    } else {
        (-ln_gamma_right(z)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn classical_values() {
        assert!(rel(complex_gamma(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-14);
        assert!(rel(complex_gamma(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(complex_gamma(c(4.0, 0.0)).unwrap(), c(6.0, 0.0)) < 1e-14);
        assert!(rel(complex_gamma(c(-0.5, 0.0)).unwrap(), c(-2.0 * PI.sqrt(), 0.0)) < 1e-14);
    }

    #[test]
    fn factorials_up_to_large_arguments() {
        let mut fact = 1.0f64;
        for n in 1..50 {
            let g = complex_gamma(c(n as f64, 0.0)).unwrap();
            assert!(rel(g, c(fact, 0.0)) < 1e-13, "n = {n}");
            fact *= n as f64;
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn reference_values_off_axis() {
        // mpmath.gamma at 30 digits
        let cases = [
            (c(1.0, 1.0), c(0.498_015_668_118_356_04, -0.154_949_828_301_810_69)),
            (c(0.25, 30.0), c(-2.998_217_844_753_813_5e-21, 2.109_202_953_984_232_2e-21)),
            (c(-3.7, 2.2), c(-0.000_611_908_720_383_720_45, 0.000_346_636_306_490_024_13)),
            (c(20.0, -15.0), c(-1.652_033_619_699_236_4e14, -5.825_849_512_483_815_7e14)),
        ];
        for (z, want) in cases {
            let got = complex_gamma(z).unwrap();
            assert!(rel(got, want) < 1e-12, "z = {z}: {got} vs {want}");
        }
    }

    #[test]
    fn poles_are_rejected() {
        for k in 0..5 {
            let z = c(-(k as f64), 0.0);
            assert!(matches!(complex_gamma(z), Err(Error::Pole { .. })));
            assert_eq!(complex_rgamma(z), c(0.0, 0.0));
        }
        assert!(complex_gamma(c(-2.0 + 1e-6, 0.0)).is_ok());
    }

    #[test]
    fn rgamma_is_reciprocal() {
        for z in [c(0.3, 0.2), c(-1.4, 3.0), c(7.5, -2.0)] {
            let prod = complex_gamma(z).unwrap() * complex_rgamma(z);
            assert!((prod - 1.0).norm() < 1e-13);
        }
    }
}
