//! Mordell integrals, the parabolic cylinder function U(a, z) and the
//! Riemann-Siegel integral formula for ζ(s), evaluated by contour
//! quadrature in binary64 and cross-checked against closed forms.

pub mod contour;
pub mod error;
pub mod mordell;
pub mod numeric;
pub mod pcf;
pub mod riemann_siegel;
pub mod verify;

pub use contour::{DecayProfile, Direction, Slope, SlantedPath};
pub use error::{Error, Result};
pub use mordell::{MordellArgs, RationalTau};
pub use numeric::{c64, Complex64, ComplexValue, QuadratureConfig, QuadratureResult};
pub use pcf::PcfArgs;
pub use riemann_siegel::{EvalReport, Method};
