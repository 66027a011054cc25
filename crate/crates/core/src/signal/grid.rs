use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    qfastcars_point, qfrs_heterodyne_point, qfrs_intensity_point, DetectionConfig, EngineOptions, PreparedProbe,
};
use crate::error::{Error, Result};
use crate::molecular::{VibrationalModeSet, VibronicModel};
use crate::photon::ProbeState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignalKind {
    Fastcars,
    QfrsIntensity,
    QfrsHeterodyne,
}

impl SignalKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SignalKind::Fastcars => "fastcars",
            SignalKind::QfrsIntensity => "qfrs-intensity",
            SignalKind::QfrsHeterodyne => "qfrs-heterodyne",
        }
    }

    /// Intensity kinds are non-negative.
    pub fn is_intensity(&self) -> bool {
        !matches!(self, SignalKind::QfrsHeterodyne)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Model {
    Vibrational(VibrationalModeSet),
    Vibronic(VibronicModel),
}

/// Everything a scan needs besides its axes.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRequest {
    pub kind: SignalKind,
    pub model: Model,
    pub probe: ProbeState,
    pub detection: DetectionConfig,
    pub options: EngineOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub kind: SignalKind,
    pub probe: ProbeState,
    pub omega_i: f64,
    /// ω_pr = ω0 − ωi (or the pulse center for separable probes), eV.
    pub probe_frequency: f64,
    /// 𝒩 divided out of every value.
    pub normalization: f64,
    /// Collapsed physical prefactor.
    pub prefactor: f64,
    /// Factor the raw values were divided by; 1 when not normalized.
    pub scale: f64,
    pub normalized: bool,
}

/// Signal values on a (delay × shift) grid, stored row-major by delay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalGrid {
    /// Raman shift ω − ω_pr (eV).
    pub shift_axis: Vec<f64>,
    /// Delay T (fs).
    pub delay_axis: Vec<f64>,
    pub values: Vec<f64>,
    pub meta: GridMeta,
}

impl SignalGrid {
    pub fn at(&self, delay_index: usize, shift_index: usize) -> f64 {
        self.values[delay_index * self.shift_axis.len() + shift_index]
    }

    pub fn row(&self, delay_index: usize) -> &[f64] {
        let n = self.shift_axis.len();
        &self.values[delay_index * n..(delay_index + 1) * n]
    }

    pub fn column(&self, shift_index: usize) -> Vec<f64> {
        (0..self.delay_axis.len()).map(|i| self.at(i, shift_index)).collect()
    }

    /// Sum over delays at each shift.
    pub fn shift_marginal(&self) -> Vec<f64> {
        (0..self.shift_axis.len()).map(|j| self.column(j).iter().sum()).collect()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// (shift, delay) of the largest value; the first one in row-major order on ties.
    pub fn argmax(&self) -> (f64, f64) {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = i;
            }
        }
        let n = self.shift_axis.len();
        (self.shift_axis[best % n], self.delay_axis[best / n])
    }
}

fn check_axis(name: &str, axis: &[f64]) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::InvalidAxis(format!("{name} axis is empty")));
    }
    if axis.iter().any(|x| !x.is_finite()) || axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidAxis(format!("{name} axis must be finite and strictly increasing")));
    }
    Ok(())
}

/// Evaluates the requested signal at every (shift, delay) pair.
///
/// Rows are computed in parallel and placed by index, so the output does not
/// depend on the thread count. The first failing point in row-major order is
/// reported with its coordinates.
pub fn scan_grid(request: &ScanRequest, shift_axis: &[f64], delay_axis: &[f64], normalize: bool) -> Result<SignalGrid> {
    check_axis("shift", shift_axis)?;
    check_axis("delay", delay_axis)?;
    request.detection.validate()?;
    request.options.validate()?;
    match (&request.kind, &request.model) {
        (SignalKind::Fastcars, Model::Vibrational(m)) => m.validate()?,
        (SignalKind::QfrsIntensity | SignalKind::QfrsHeterodyne, Model::Vibronic(m)) => m.validate()?,
        (kind, _) => {
            return Err(Error::Unsupported(format!(
                "{} needs a {} model",
                kind.as_str(),
                if *kind == SignalKind::Fastcars { "vibrational" } else { "vibronic" }
            )))
        }
    }
    let probe = PreparedProbe::new(&request.probe, request.detection.omega_i)?;
    let w_pr = probe.probe_frequency();

    let point = |shift: f64, delay: f64| -> Result<f64> {
        let omega = w_pr + shift;
        let v = match &request.model {
            Model::Vibrational(m) => qfastcars_point(m, &probe, omega, delay),
            Model::Vibronic(m) => match request.kind {
                SignalKind::QfrsIntensity => qfrs_intensity_point(m, &probe, omega, delay, &request.options),
                _ => qfrs_heterodyne_point(m, &probe, &request.detection, omega, delay, &request.options),
            },
        };
        v.and_then(|v| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFiniteIntegrand { at: shift })
            }
        })
        .map_err(|e| Error::GridPoint {
            shift,
            delay,
            source: Box::new(e),
        })
    };

    let rows: Vec<Result<Vec<f64>>> = delay_axis
        .par_iter()
        .map(|&t| shift_axis.iter().map(|&x| point(x, t)).collect())
        .collect();
    let mut values = Vec::with_capacity(shift_axis.len() * delay_axis.len());
    for row in rows {
        values.extend(row?);
    }

    let mut scale = 1.0;
    if normalize {
        let m = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if m > 0.0 {
            scale = m;
            for v in &mut values {
                *v /= m;
            }
        }
    }
    Ok(SignalGrid {
        shift_axis: shift_axis.to_vec(),
        delay_axis: delay_axis.to_vec(),
        values,
        meta: GridMeta {
            kind: request.kind,
            probe: request.probe,
            omega_i: request.detection.omega_i,
            probe_frequency: w_pr,
            normalization: probe.normalization(),
            prefactor: 1.0,
            scale,
            normalized: normalize,
        },
    })
}
