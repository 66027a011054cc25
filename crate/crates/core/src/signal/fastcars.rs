use num_complex::Complex64;

use super::{check_delay, jitter_average, PreparedProbe};
use crate::error::{ensure, Result};
use crate::molecular::{vibrational_coherence, VibrationalModeSet};
use crate::photon::{EntangledPairParams, ProbeState};

/// Quantum FAST CARS signal at detected frequency `omega` (eV) and delay `delay` (fs):
///
/// ```text
/// S = |Σ_b α*_b ρ_b(T) A(ω − ω_b − iγ_b, ωi)|² / 𝒩
/// ```
///
/// A pseudo-thermal probe averages the entangled signal over its arrival-time jitter.
pub fn qfastcars_point(modes: &VibrationalModeSet, probe: &PreparedProbe, omega: f64, delay: f64) -> Result<f64> {
    check_delay(delay)?;
    match probe.jitter() {
        Some(jitter) => jitter_average(|t| coherent_point(modes, probe, omega, t), delay, jitter, 1e-10),
        None => coherent_point(modes, probe, omega, delay),
    }
}

/// Pseudo-thermal FAST CARS: the entangled signal averaged uniformly over
/// arrival delays `T + δ`, `δ ∈ [0, jitter]`.
pub fn qfastcars_thermal_point(
    modes: &VibrationalModeSet,
    params: &EntangledPairParams,
    jitter: f64,
    omega: f64,
    omega_i: f64,
    delay: f64,
) -> Result<f64> {
    ensure(jitter >= 0.0 && jitter.is_finite(), "jitter", jitter, "must be non-negative")?;
    let probe = PreparedProbe::new(&ProbeState::PseudoThermal { pair: *params, jitter }, omega_i)?;
    qfastcars_point(modes, &probe, omega, delay)
}

fn coherent_point(modes: &VibrationalModeSet, probe: &PreparedProbe, omega: f64, delay: f64) -> Result<f64> {
    let mut amp = Complex64::new(0.0, 0.0);
    for m in &modes.modes {
        let rho = vibrational_coherence(m, delay);
        if rho == Complex64::new(0.0, 0.0) {
            continue;
        }
        amp += m.alpha.conj() * rho * probe.amplitude(Complex64::new(omega - m.omega, -m.gamma))?;
    }
    Ok(amp.norm_sqr() / probe.normalization())
}
