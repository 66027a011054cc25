use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The sampled spectrum has not decayed at the edges of its frequency window.
    #[error("spectrum does not decay at the window edges (edge/peak = {edge_ratio:.3e}); widen the frequency window")]
    NonDecayingSpectrum { edge_ratio: f64 },

    #[error("quadrature did not reach tolerance {tolerance:.3e}: best estimate {estimate} with error bound {error_bound:.3e}")]
    ToleranceNotMet {
        estimate: Complex64,
        error_bound: f64,
        tolerance: f64,
    },

    #[error("integrand is not finite at x = {at}")]
    NonFiniteIntegrand { at: f64 },

    /// Complex-frequency evaluation of a probe amplitude would overflow.
    #[error("probe amplitude overflows for exponent {exponent:.1} (imaginary shift times entanglement time too large)")]
    AmplitudeOverflow { exponent: f64 },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid axis: {0}")]
    InvalidAxis(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("at grid point (shift = {shift} eV, delay = {delay} fs): {source}")]
    GridPoint {
        shift: f64,
        delay: f64,
        #[source]
        source: Box<Error>,
    },
}

pub(crate) fn ensure(cond: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}
