//! Inputs shared by the criterion benches.

use siegel_core::{c64, Complex64};

/// τ values where the direct Mordell quadrature slows down.
pub const TAUS: [f64; 5] = [1.0, 0.3, 0.1, 0.03, 0.01];

/// Points for ζ timings: real axis, critical line, and off the line.
pub fn zeta_points() -> Vec<(&'static str, Complex64)> {
    vec![
        ("2", c64(2.0, 0.0)),
        ("0.5+14.13i", c64(0.5, 14.134_725)),
        ("0.25+30i", c64(0.25, 30.0)),
    ]
}

/// `(label, a, z)` for U(a, z) timings.
pub fn pcf_points() -> Vec<(&'static str, Complex64, Complex64)> {
    vec![
        ("a=1/2,z=2", c64(0.5, 0.0), c64(2.0, 0.0)),
        ("a=3i,z=-4", c64(0.0, 3.0), c64(-4.0, 0.0)),
        ("a=2+i,z=3+3i", c64(2.0, 1.0), c64(3.0, 3.0)),
        ("a=-3.2,z=1", c64(-3.2, 0.0), c64(1.0, 0.0)),
    ]
}
