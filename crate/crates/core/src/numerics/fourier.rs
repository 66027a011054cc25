//! Continuous Fourier transforms between energy (eV) and time (fs) grids.
//!
//! The transform pair is
//!
//! ```text
//! f̃(τ) = (1/2π) ∫ f(E) e^{-i E τ/ħ} dE/ħ
//! f(E)  =       ∫ f̃(τ) e^{+i E τ/ħ} dτ
//! ```
//!
//! i.e. the angular-frequency convention with `ω = E/ħ`. Both directions are
//! evaluated with an FFT of length `N`, scaled by the grid spacing and phase
//! corrected for the non-zero origin of each axis, so the results are samples
//! of the continuous transform rather than of the bare DFT.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::HBAR;

/// Samples at the edges of a spectrum must be below this fraction of its peak.
const EDGE_DECAY: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisKind {
    /// Energy axis in eV.
    Frequency,
    /// Time axis in fs.
    Time,
}

/// Complex samples on a uniform, strictly increasing axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledComplexFunction {
    start: f64,
    step: f64,
    values: Vec<Complex64>,
    kind: AxisKind,
}

impl SampledComplexFunction {
    pub fn new(start: f64, step: f64, values: Vec<Complex64>, kind: AxisKind) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) || !start.is_finite() {
            return Err(Error::InvalidAxis(format!(
                "axis must start at a finite value and increase (start {start}, step {step})"
            )));
        }
        Ok(SampledComplexFunction {
            start,
            step,
            values,
            kind,
        })
    }

    /// Builds from an explicit axis, which must be uniform to 1e-12 relative.
    pub fn from_axis(axis: &[f64], values: Vec<Complex64>, kind: AxisKind) -> Result<Self> {
        if axis.len() != values.len() {
            return Err(Error::InvalidAxis(format!(
                "{} axis points but {} values",
                axis.len(),
                values.len()
            )));
        }
        let step = uniform_step(axis)?;
        Self::new(axis[0], step, values, kind)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn kind(&self) -> AxisKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn axis(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// `Σ |f|² Δx`, with Δx in the native axis unit.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.step
    }
}

/// Returns the spacing of a uniform axis with at least two points.
pub(crate) fn uniform_step(axis: &[f64]) -> Result<f64> {
    if axis.len() < 2 {
        return Err(Error::InvalidAxis("need at least two axis points".into()));
    }
    let n = axis.len() - 1;
    let step = (axis[n] - axis[0]) / n as f64;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidAxis("axis must be strictly increasing".into()));
    }
    let scale = axis[0].abs().max(axis[n].abs()).max(step);
    for (i, &x) in axis.iter().enumerate() {
        let expected = axis[0] + step * i as f64;
        if (x - expected).abs() > 1e-12 * scale {
            return Err(Error::InvalidAxis(format!(
                "axis is not uniform at index {i} ({x} vs {expected})"
            )));
        }
    }
    Ok(step)
}

/// Continuous inverse transform of an energy-domain spectrum.
///
/// The output has the same number of samples, starts at `time_origin` and is
/// spaced `2πħ / (N ΔE)`.
pub fn fourier_to_time(spectrum: &SampledComplexFunction, time_origin: f64) -> Result<SampledComplexFunction> {
    if spectrum.kind != AxisKind::Frequency {
        return Err(Error::InvalidAxis("fourier_to_time expects a frequency axis".into()));
    }
    check_edge_decay(&spectrum.values)?;
    let n = spectrum.len();
    let de = spectrum.step;
    let dt = 2.0 * PI * HBAR / (n as f64 * de);
    let e0 = spectrum.start;

    // f̃(t0 + kΔt) = ΔE/(2πħ) e^{-i E0 (t0 + kΔt)/ħ} Σ_j [f_j e^{-i j ΔE t0/ħ}] e^{-2πi jk/N}
    let mut buf: Vec<Complex64> = spectrum
        .values
        .iter()
        .enumerate()
        .map(|(j, &v)| v * Complex64::cis(-(j as f64) * de * time_origin / HBAR))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = de / (2.0 * PI * HBAR);
    for (k, v) in buf.iter_mut().enumerate() {
        let t = time_origin + k as f64 * dt;
        *v *= Complex64::cis(-e0 * t / HBAR) * scale;
    }
    SampledComplexFunction::new(time_origin, dt, buf, AxisKind::Time)
}

/// Continuous forward transform `f(E) = ∫ f̃(τ) e^{iEτ/ħ} dτ`, the inverse of [`fourier_to_time`].
pub fn fourier_to_frequency(signal: &SampledComplexFunction, frequency_origin: f64) -> Result<SampledComplexFunction> {
    if signal.kind != AxisKind::Time {
        return Err(Error::InvalidAxis("fourier_to_frequency expects a time axis".into()));
    }
    let n = signal.len();
    let dt = signal.step;
    let de = 2.0 * PI * HBAR / (n as f64 * dt);
    let t0 = signal.start;

    let mut buf: Vec<Complex64> = signal
        .values
        .iter()
        .enumerate()
        .map(|(k, &v)| v * Complex64::cis(k as f64 * dt * frequency_origin / HBAR))
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    for (j, v) in buf.iter_mut().enumerate() {
        let e = frequency_origin + j as f64 * de;
        *v *= Complex64::cis(e * t0 / HBAR) * dt;
    }
    SampledComplexFunction::new(frequency_origin, de, buf, AxisKind::Frequency)
}

fn check_edge_decay(values: &[Complex64]) -> Result<()> {
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 || values.len() < 2 {
        return Ok(());
    }
    let edge = values[0].norm().max(values[values.len() - 1].norm());
    let ratio = edge / peak;
    if ratio >= EDGE_DECAY {
        return Err(Error::NonDecayingSpectrum { edge_ratio: ratio });
    }
    Ok(())
}
