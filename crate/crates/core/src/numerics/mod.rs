//! Numerical building blocks shared by the physics modules.

mod fourier;
mod interp;
mod quadrature;
mod sinc;

pub(crate) use fourier::uniform_step;
pub use fourier::{fourier_to_frequency, fourier_to_time, AxisKind, SampledComplexFunction};
pub use interp::HermiteTable;
pub use quadrature::{adaptive_quadrature, integrate, QuadratureResult, MAX_DEPTH};
pub use sinc::complex_sinc;
