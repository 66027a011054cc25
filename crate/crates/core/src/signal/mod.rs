//! Detection signals: quantum FAST CARS, intensity-correlated QFRS and
//! heterodyne-detected QFRS, for every probe state, at single points and on
//! (Raman shift × delay) grids.
//!
//! All physical prefactors are collapsed into a constant of 1. Entangled and
//! pseudo-thermal signals are divided by the normalization constant 𝒩 of the
//! pair; separable probes use peak-normalized amplitudes and 𝒩 = 1.

mod fastcars;
mod grid;
mod qfrs;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::numerics::adaptive_quadrature;
use crate::photon::{
    normalization, separable_amplitude, two_photon_amplitude, ProbeState, TimeEnvelope,
};

pub use fastcars::{qfastcars_point, qfastcars_thermal_point};
pub use grid::{scan_grid, GridMeta, Model, ScanRequest, SignalGrid, SignalKind};
pub use qfrs::{
    qfrs_heterodyne_point, qfrs_intensity_generic, qfrs_intensity_point, qfrs_lineshape_g,
};

/// How the reference frequency ω̄ of the local oscillator is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum OmegaBar {
    /// ω̄ equals the detected frequency ω.
    #[default]
    Detected,
    /// A fixed frequency in eV.
    Fixed { value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    /// Idler detection energy (eV).
    pub omega_i: f64,
    /// Local-oscillator phase φ (rad), heterodyne only.
    pub lo_phase: f64,
    pub omega_bar: OmegaBar,
}

impl DetectionConfig {
    pub fn new(omega_i: f64) -> Self {
        DetectionConfig {
            omega_i,
            lo_phase: 0.0,
            omega_bar: OmegaBar::Detected,
        }
    }

    pub fn with_lo_phase(mut self, phase: f64) -> Self {
        self.lo_phase = phase;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.omega_i.is_finite(), "omega_i", self.omega_i, "must be finite")?;
        ensure(
            self.lo_phase > -PI && self.lo_phase <= PI,
            "lo_phase",
            self.lo_phase,
            "must lie in (-pi, pi]",
        )?;
        if let OmegaBar::Fixed { value } = self.omega_bar {
            ensure(value.is_finite(), "omega_bar", value, "must be finite")?;
        }
        Ok(())
    }
}

/// Maps any finite phase onto (−π, π].
pub fn wrap_phase(phi: f64) -> f64 {
    if phi > -PI && phi <= PI {
        return phi;
    }
    let w = phi.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// How the QFRS line shape g is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum LineShapeMethod {
    /// Adaptive quadrature of the τ integral.
    #[default]
    Quadrature,
    /// Short-delay form `Φ(ω − ω_n + 2iDTħ, ωi)`, meant for `T < D^{−1/2}`.
    Approximation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineOptions {
    /// Relative tolerance of every quadrature.
    pub tolerance: f64,
    pub method: LineShapeMethod,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            tolerance: 1e-8,
            method: LineShapeMethod::Quadrature,
        }
    }
}

impl EngineOptions {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.tolerance > 0.0 && self.tolerance < 1.0,
            "tolerance",
            self.tolerance,
            "must lie in (0, 1)",
        )
    }
}

/// A probe state evaluated once for a given idler frequency: normalization
/// constant, baseband time envelope and its peak.
#[derive(Debug, Clone)]
pub struct PreparedProbe {
    state: ProbeState,
    omega_i: f64,
    normalization: f64,
    envelope: TimeEnvelope,
    envelope_peak: f64,
}

impl PreparedProbe {
    pub fn new(state: &ProbeState, omega_i: f64) -> Result<Self> {
        state.validate()?;
        ensure(omega_i.is_finite(), "omega_i", omega_i, "must be finite")?;
        let (normalization, envelope) = match state {
            ProbeState::Entangled(p) | ProbeState::PseudoThermal { pair: p, .. } => {
                (normalization(p)?, TimeEnvelope::entangled(p, omega_i)?)
            }
            ProbeState::Fock { signal, idler } => (
                1.0,
                TimeEnvelope::gaussian(signal, separable_amplitude(idler, omega_i)),
            ),
            ProbeState::Classical(p) => (1.0, TimeEnvelope::gaussian(p, Complex64::new(1.0, 0.0))),
        };
        let envelope_peak = match &envelope {
            TimeEnvelope::Tabulated { table, .. } => table.values().iter().map(|v| v.norm()).fold(0.0, f64::max),
            TimeEnvelope::Gaussian { rate, factor } => factor.norm() * rate / (2.0 * PI).sqrt(),
        };
        Ok(PreparedProbe {
            state: *state,
            omega_i,
            normalization,
            envelope,
            envelope_peak,
        })
    }

    pub fn state(&self) -> &ProbeState {
        &self.state
    }

    pub fn omega_i(&self) -> f64 {
        self.omega_i
    }

    /// ω_pr; the Raman shift is `ω − ω_pr`.
    pub fn probe_frequency(&self) -> f64 {
        self.state.probe_frequency(self.omega_i)
    }

    /// 𝒩 for entangled and pseudo-thermal probes, 1 otherwise.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn envelope(&self) -> &TimeEnvelope {
        &self.envelope
    }

    /// Probe amplitude at a (possibly complex) s-arm frequency.
    pub fn amplitude(&self, omega_s: Complex64) -> Result<Complex64> {
        match &self.state {
            ProbeState::Entangled(p) | ProbeState::PseudoThermal { pair: p, .. } => {
                two_photon_amplitude(p, omega_s, self.omega_i)
            }
            ProbeState::Fock { signal, idler } => {
                Ok(separable_amplitude(signal, omega_s) * separable_amplitude(idler, self.omega_i))
            }
            ProbeState::Classical(p) => Ok(separable_amplitude(p, omega_s)),
        }
    }

    /// Arrival-time jitter (fs) of a pseudo-thermal probe.
    pub(crate) fn jitter(&self) -> Option<f64> {
        match self.state {
            ProbeState::PseudoThermal { jitter, .. } => Some(jitter),
            _ => None,
        }
    }

    /// `∫ e^{i·x·τ/ħ} weight(τ) env(τ) dτ` over the envelope support
    /// intersected with `window`. `bound` is an upper bound of `|weight|` on
    /// that interval, used to scale the absolute tolerance.
    pub(crate) fn envelope_transform<W>(&self, x: f64, weight: W, window: (f64, f64), bound: f64, rel_tol: f64) -> Result<Complex64>
    where
        W: Fn(f64) -> Complex64,
    {
        let (a, b) = self.envelope.support();
        let (lo, hi) = (a.max(window.0), b.min(window.1));
        if !(lo < hi) || self.envelope_peak == 0.0 || bound == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let tol = rel_tol * self.envelope_peak * bound * (hi - lo);
        let hbar = crate::units::HBAR;
        adaptive_quadrature(
            |t| self.envelope.eval(t) * Complex64::cis(x * t / hbar) * weight(t),
            lo,
            hi,
            tol,
        )
    }
}

/// Uniform average of `f(T + δ)` over `δ ∈ [0, jitter]`.
pub(crate) fn jitter_average<F>(f: F, delay: f64, jitter: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if jitter == 0.0 {
        return f(delay);
    }
    let failure = std::cell::Cell::new(None);
    // Scale the absolute tolerance by the end-point magnitudes.
    let scale = f(delay)?.abs().max(f(delay + jitter)?.abs()).max(f(delay + 0.5 * jitter)?.abs());
    let tol = (rel_tol * scale * jitter).max(f64::MIN_POSITIVE);
    let integral = adaptive_quadrature(
        |d| match f(delay + d) {
            Ok(v) => Complex64::new(v, 0.0),
            Err(e) => {
                failure.set(Some(e));
                Complex64::new(f64::NAN, 0.0)
            }
        },
        0.0,
        jitter,
        tol,
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(integral?.re / jitter)
}

pub(crate) fn check_delay(delay: f64) -> Result<()> {
    ensure(delay >= 0.0 && delay.is_finite(), "T", delay, "delay must be non-negative")
}
