//! Run configuration: TOML (or JSON) document → validated [`RunConfig`].
//!
//! Energies accept plain numbers (eV) or strings with a unit: `"0.82 eV"`,
//! `"820 meV"`, `"2914 cm^-1"`. Times accept numbers (fs) or `"30 fs"`, `"1 ps"`.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::de::IgnoredAny;
use serde::{Deserialize, Serialize};

use qraman::molecular::{ExcitedStateBranch, VibrationalMode, VibrationalModeSet, VibronicModel};
use qraman::photon::{EntangledPairParams, ProbeState, SinglePhotonParams};
use qraman::signal::{
    wrap_phase, DetectionConfig, EngineOptions, LineShapeMethod, Model, OmegaBar, ScanRequest, SignalKind,
};
use qraman::units::EV_PER_WAVENUMBER;

use crate::error::{in_block, CliError};

pub const DEFAULT_OMEGA0: f64 = 4.0;
pub const DEFAULT_SIGMA0: f64 = 0.82;
pub const DEFAULT_ENTANGLEMENT_TIME: f64 = 30.0;
pub const DEFAULT_OUT_DIR: &str = "qraman-out";
/// Dephasing assigned to vibrational modes that do not give one: 1 cm⁻¹.
pub const DEFAULT_MODE_GAMMA_CM: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

impl From<f64> for Quantity {
    fn from(v: f64) -> Self {
        Quantity::Number(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexValue {
    fn value(&self) -> Complex64 {
        match *self {
            ComplexValue::Real(r) => Complex64::new(r, 0.0),
            ComplexValue::Pair([re, im]) => Complex64::new(re, im),
        }
    }

    fn from_complex(c: Complex64) -> Self {
        ComplexValue::Pair([c.re, c.im])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum StateName {
    #[default]
    Entangled,
    Fock,
    Classical,
    PseudoThermal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Text,
    Binary,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<SignalKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<RawProbe>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vibrational: Option<RawVibrational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vibronic: Option<RawVibronic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detection: Option<RawDetection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<RawGrid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<RawOutput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<RawNumeric>,
    /// Run report written into metadata documents; ignored on input.
    #[serde(default, skip_serializing)]
    pub run: Option<IgnoredAny>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawProbe {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<StateName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma0: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ts: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ti: Option<Quantity>,
    /// Pseudo-thermal arrival-time spread; defaults to `ts`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jitter: Option<Quantity>,
    /// Separable probes: s-photon (or pulse) center and width.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Quantity>,
    /// Fock probes: idler photon center and width.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idler_center: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idler_sigma: Option<Quantity>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawVibrational {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_molecules: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<RawMode>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMode {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub omega: Quantity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<ComplexValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho0: Option<ComplexValue>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawVibronic {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_h: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branches: Option<Vec<RawBranch>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBranch {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub omega_gap: Quantity,
    pub franck_condon: f64,
    /// `D^{−1/2}` as a time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dephasing_time: Option<Quantity>,
    /// `D` in fs⁻².
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dephasing_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<ComplexValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho0: Option<ComplexValue>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDetection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_i: Option<Quantity>,
    /// Radians; wrapped onto (−π, π].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo_phase: Option<f64>,
    /// `"detected"` or an energy.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_bar: Option<Quantity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAxis {
    pub start: Quantity,
    pub stop: Quantity,
    pub count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<RawAxis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delay: Option<RawAxis>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directory: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalize: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot_script: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNumeric {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<LineShapeMethod>,
}

/// Uniform axis `start..=stop` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| self.start + (self.stop - self.start) * (k as f64 / n))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub format: OutputFormat,
    pub normalize: bool,
    pub plot_script: bool,
}

/// A fully resolved and validated run description in eV and fs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub kind: SignalKind,
    pub probe: ProbeState,
    pub model: Model,
    pub detection: DetectionConfig,
    pub shift: AxisSpec,
    pub delay: AxisSpec,
    pub output: OutputConfig,
    pub options: EngineOptions,
}

impl RunConfig {
    pub fn scan_request(&self, probe: ProbeState) -> ScanRequest {
        ScanRequest {
            kind: self.kind,
            model: self.model.clone(),
            probe,
            detection: self.detection,
            options: self.options,
        }
    }

    /// The entangled pair behind the probe, if there is one.
    pub fn pair(&self) -> Option<EntangledPairParams> {
        match self.probe {
            ProbeState::Entangled(p) | ProbeState::PseudoThermal { pair: p, .. } => Some(p),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Dimension {
    Energy,
    Time,
}

fn quantity(q: &Quantity, dim: Dimension, field: &str) -> Result<f64, CliError> {
    let value = match q {
        Quantity::Number(v) => *v,
        Quantity::Text(text) => parse_quantity(text, dim).ok_or_else(|| {
            let units = match dim {
                Dimension::Energy => "eV, meV or cm^-1",
                Dimension::Time => "fs or ps",
            };
            CliError::validation(field, format!("{text:?}"), format!("expected a number with unit {units}"))
        })?,
    };
    if !value.is_finite() {
        return Err(CliError::validation(field, value, "must be finite"));
    }
    Ok(value)
}

fn parse_quantity(text: &str, dim: Dimension) -> Option<f64> {
    let text = text.trim();
    // Longest numeric prefix followed by a known unit.
    (1..=text.len()).rev().filter(|&i| text.is_char_boundary(i)).find_map(|i| {
        let number: f64 = text[..i].trim().parse().ok()?;
        let unit = text[i..].trim();
        let factor = match (dim, unit) {
            (_, "") => 1.0,
            (Dimension::Energy, "eV") => 1.0,
            // divide rather than multiply by 1e-3 so "820 meV" is exactly 0.82
            (Dimension::Energy, "meV") => return Some(number / 1e3),
            (Dimension::Energy, "cm^-1" | "cm-1" | "1/cm" | "cm⁻¹") => EV_PER_WAVENUMBER,
            (Dimension::Time, "fs") => 1.0,
            (Dimension::Time, "ps") => 1e3,
            _ => return None,
        };
        Some(number * factor)
    })
}

fn opt_quantity(q: &Option<Quantity>, dim: Dimension, field: &str, default: f64) -> Result<f64, CliError> {
    q.as_ref().map_or(Ok(default), |q| quantity(q, dim, field))
}

/// Parses a TOML document, or JSON when the text starts with `{`.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    resolve(&parse_raw(text)?)
}

pub fn parse_raw(text: &str) -> Result<RawConfig, CliError> {
    if text.trim_start().starts_with('{') {
        let mut de = serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(&mut de).map_err(|e| CliError::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    } else {
        let de = toml::Deserializer::new(text);
        serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema {
            path: e.path().to_string(),
            message: e.inner().message().to_string(),
        })
    }
}

/// Fills defaults, converts units and checks invariants.
pub fn resolve(raw: &RawConfig) -> Result<RunConfig, CliError> {
    let kind = match (raw.kind, &raw.vibrational, &raw.vibronic) {
        (_, Some(_), Some(_)) => {
            return Err(CliError::validation(
                "vibrational/vibronic",
                "both",
                "give exactly one model block",
            ))
        }
        (Some(k), _, _) => k,
        (None, Some(_), None) => SignalKind::Fastcars,
        (None, None, Some(_)) => SignalKind::QfrsIntensity,
        (None, None, None) => return Err(CliError::validation("kind", "missing", "give a signal kind and a model block")),
    };

    let probe = resolve_probe(raw.probe.as_ref().cloned().unwrap_or_default())?;
    let numeric = raw.numeric.clone().unwrap_or_default();
    let options = EngineOptions {
        tolerance: numeric.tolerance.unwrap_or(EngineOptions::default().tolerance),
        method: numeric.method.unwrap_or_default(),
    };
    options.validate().map_err(in_block("numeric"))?;

    let model = match (kind, &raw.vibrational, &raw.vibronic) {
        (SignalKind::Fastcars, Some(v), None) => Model::Vibrational(resolve_vibrational(v)?),
        (SignalKind::QfrsIntensity | SignalKind::QfrsHeterodyne, None, Some(v)) => {
            Model::Vibronic(resolve_vibronic(v, numeric.n_max)?)
        }
        (SignalKind::Fastcars, _, _) => {
            return Err(CliError::validation("vibrational", "missing", "fastcars needs a [vibrational] block"))
        }
        _ => {
            return Err(CliError::validation(
                "vibronic",
                "missing",
                format!("{} needs a [vibronic] block", kind.as_str()),
            ))
        }
    };

    let det = raw.detection.clone().unwrap_or_default();
    let omega0 = match probe {
        ProbeState::Entangled(p) | ProbeState::PseudoThermal { pair: p, .. } => p.omega0,
        _ => opt_quantity(&raw.probe.as_ref().and_then(|p| p.omega0.clone()), Dimension::Energy, "probe.omega0", DEFAULT_OMEGA0)?,
    };
    let omega_i = opt_quantity(&det.omega_i, Dimension::Energy, "detection.omega_i", omega0 / 2.0)?;
    let lo_phase = det.lo_phase.unwrap_or(0.0);
    if !lo_phase.is_finite() {
        return Err(CliError::validation("detection.lo_phase", lo_phase, "must be finite"));
    }
    let omega_bar = match &det.omega_bar {
        None => OmegaBar::Detected,
        Some(Quantity::Text(t)) if t.trim() == "detected" => OmegaBar::Detected,
        Some(q) => OmegaBar::Fixed {
            value: quantity(q, Dimension::Energy, "detection.omega_bar")?,
        },
    };
    let detection = DetectionConfig {
        omega_i,
        lo_phase: wrap_phase(lo_phase),
        omega_bar,
    };
    detection.validate().map_err(in_block("detection"))?;

    let grid = raw.grid.clone().unwrap_or_default();
    let default_shift = match kind {
        SignalKind::Fastcars => AxisSpec {
            start: 1200.0 * EV_PER_WAVENUMBER,
            stop: 3200.0 * EV_PER_WAVENUMBER,
            count: 201,
        },
        _ => AxisSpec {
            start: 1.2,
            stop: 3.2,
            count: 201,
        },
    };
    let default_delay = AxisSpec {
        start: 0.0,
        stop: if kind == SignalKind::Fastcars { 1000.0 } else { 100.0 },
        count: 201,
    };
    let shift = resolve_axis(grid.shift.as_ref(), Dimension::Energy, "grid.shift", default_shift)?;
    let delay = resolve_axis(grid.delay.as_ref(), Dimension::Time, "grid.delay", default_delay)?;
    if delay.start < 0.0 {
        return Err(CliError::validation("grid.delay.start", delay.start, "delays must be non-negative"));
    }

    let out = raw.output.clone().unwrap_or_default();
    let output = OutputConfig {
        directory: PathBuf::from(out.directory.unwrap_or_else(|| DEFAULT_OUT_DIR.to_string())),
        format: out.format.unwrap_or_default(),
        normalize: out.normalize.unwrap_or(false),
        plot_script: out.plot_script.unwrap_or(true),
    };

    Ok(RunConfig {
        kind,
        probe,
        model,
        detection,
        shift,
        delay,
        output,
        options,
    })
}

fn resolve_axis(raw: Option<&RawAxis>, dim: Dimension, field: &str, default: AxisSpec) -> Result<AxisSpec, CliError> {
    let Some(raw) = raw else { return Ok(default) };
    let axis = AxisSpec {
        start: quantity(&raw.start, dim, &format!("{field}.start"))?,
        stop: quantity(&raw.stop, dim, &format!("{field}.stop"))?,
        count: raw.count,
    };
    if axis.count == 0 {
        return Err(CliError::validation(format!("{field}.count"), 0, "need at least one point"));
    }
    if axis.count > 1 && !(axis.stop > axis.start) {
        return Err(CliError::validation(
            format!("{field}.stop"),
            axis.stop,
            "must exceed start when count > 1",
        ));
    }
    Ok(axis)
}

fn resolve_probe(raw: RawProbe) -> Result<ProbeState, CliError> {
    let omega0 = opt_quantity(&raw.omega0, Dimension::Energy, "probe.omega0", DEFAULT_OMEGA0)?;
    let sigma0 = opt_quantity(&raw.sigma0, Dimension::Energy, "probe.sigma0", DEFAULT_SIGMA0)?;
    let ts = opt_quantity(&raw.ts, Dimension::Time, "probe.ts", DEFAULT_ENTANGLEMENT_TIME)?;
    let ti = opt_quantity(&raw.ti, Dimension::Time, "probe.ti", ts)?;
    let pair = EntangledPairParams { omega0, sigma0, ts, ti };
    let single = |center: &Option<Quantity>, sigma: &Option<Quantity>, prefix: &str| -> Result<SinglePhotonParams, CliError> {
        Ok(SinglePhotonParams {
            center: opt_quantity(center, Dimension::Energy, &format!("probe.{prefix}center"), omega0 / 2.0)?,
            sigma: opt_quantity(sigma, Dimension::Energy, &format!("probe.{prefix}sigma"), sigma0)?,
        })
    };
    let state = match raw.state.unwrap_or_default() {
        StateName::Entangled => ProbeState::Entangled(pair),
        StateName::PseudoThermal => ProbeState::PseudoThermal {
            pair,
            jitter: opt_quantity(&raw.jitter, Dimension::Time, "probe.jitter", ts)?,
        },
        StateName::Classical => ProbeState::Classical(single(&raw.center, &raw.sigma, "")?),
        StateName::Fock => ProbeState::Fock {
            signal: single(&raw.center, &raw.sigma, "")?,
            idler: single(&raw.idler_center, &raw.idler_sigma, "idler_")?,
        },
    };
    state.validate().map_err(in_block("probe"))?;
    Ok(state)
}

fn resolve_vibrational(raw: &RawVibrational) -> Result<VibrationalModeSet, CliError> {
    let mut set = match (&raw.preset, &raw.modes) {
        (Some(_), Some(_)) => {
            return Err(CliError::validation("vibrational.preset", "with modes", "give a preset or a mode list, not both"))
        }
        (Some(p), None) if p == "methane" => VibrationalModeSet::methane(),
        (Some(p), None) => return Err(CliError::validation("vibrational.preset", p, "known presets: methane")),
        (None, None) => return Err(CliError::validation("vibrational.modes", "missing", "give modes or a preset")),
        (None, Some(modes)) => {
            let modes = modes
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let field = |name: &str| format!("vibrational.modes[{i}].{name}");
                    Ok(VibrationalMode {
                        label: m.label.clone().unwrap_or_default(),
                        omega: quantity(&m.omega, Dimension::Energy, &field("omega"))?,
                        gamma: opt_quantity(
                            &m.gamma,
                            Dimension::Energy,
                            &field("gamma"),
                            DEFAULT_MODE_GAMMA_CM * EV_PER_WAVENUMBER,
                        )?,
                        alpha: m.alpha.map_or(Complex64::new(1.0, 0.0), |c| c.value()),
                        rho0: m.rho0.map_or(Complex64::new(1.0, 0.0), |c| c.value()),
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            VibrationalModeSet { modes, n_molecules: 1 }
        }
    };
    if let Some(n) = raw.n_molecules {
        set.n_molecules = n;
    }
    set.validate().map_err(in_block("vibrational"))?;
    Ok(set)
}

fn resolve_vibronic(raw: &RawVibronic, n_max: Option<usize>) -> Result<VibronicModel, CliError> {
    let (branches, v_h) = match (&raw.preset, &raw.branches) {
        (Some(_), Some(_)) => {
            return Err(CliError::validation("vibronic.preset", "with branches", "give a preset or a branch list, not both"))
        }
        (Some(p), None) if p == "nitrostilbene" => {
            let m = VibronicModel::nitrostilbene();
            let v_h = opt_quantity(&raw.v_h, Dimension::Energy, "vibronic.v_h", m.v_h)?;
            (m.branches, v_h)
        }
        (Some(p), None) => return Err(CliError::validation("vibronic.preset", p, "known presets: nitrostilbene")),
        (None, None) => return Err(CliError::validation("vibronic.branches", "missing", "give branches or a preset")),
        (None, Some(list)) => {
            let v_h = match &raw.v_h {
                Some(q) => quantity(q, Dimension::Energy, "vibronic.v_h")?,
                None => return Err(CliError::validation("vibronic.v_h", "missing", "required with explicit branches")),
            };
            let branches = list
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let field = |name: &str| format!("vibronic.branches[{i}].{name}");
                    let dephasing = match (&b.dephasing_time, b.dephasing_rate) {
                        (Some(_), Some(_)) => {
                            return Err(CliError::validation(field("dephasing_rate"), "both", "give dephasing_time or dephasing_rate"))
                        }
                        (Some(t), None) => {
                            let t = quantity(t, Dimension::Time, &field("dephasing_time"))?;
                            if !(t > 0.0) {
                                return Err(CliError::validation(field("dephasing_time"), t, "must be positive"));
                            }
                            1.0 / (t * t)
                        }
                        (None, Some(d)) => d,
                        (None, None) => 0.0,
                    };
                    Ok(ExcitedStateBranch {
                        label: b.label.clone().unwrap_or_default(),
                        omega_gap: quantity(&b.omega_gap, Dimension::Energy, &field("omega_gap"))?,
                        franck_condon: b.franck_condon,
                        dephasing,
                        alpha: b.alpha.map_or(Complex64::new(1.0, 0.0), |c| c.value()),
                        rho0: b.rho0.map_or(Complex64::new(1.0, 0.0), |c| c.value()),
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            (branches, v_h)
        }
    };
    VibronicModel::new(branches, v_h, n_max).map_err(in_block("vibronic"))
}

/// Canonical document for a resolved config: every value explicit, in eV and fs.
pub fn to_raw(cfg: &RunConfig) -> RawConfig {
    let n = |v: f64| Some(Quantity::Number(v));
    let probe = match cfg.probe {
        ProbeState::Entangled(p) => RawProbe {
            state: Some(StateName::Entangled),
            omega0: n(p.omega0),
            sigma0: n(p.sigma0),
            ts: n(p.ts),
            ti: n(p.ti),
            ..RawProbe::default()
        },
        ProbeState::PseudoThermal { pair: p, jitter } => RawProbe {
            state: Some(StateName::PseudoThermal),
            omega0: n(p.omega0),
            sigma0: n(p.sigma0),
            ts: n(p.ts),
            ti: n(p.ti),
            jitter: n(jitter),
            ..RawProbe::default()
        },
        ProbeState::Classical(s) => RawProbe {
            state: Some(StateName::Classical),
            center: n(s.center),
            sigma: n(s.sigma),
            ..RawProbe::default()
        },
        ProbeState::Fock { signal, idler } => RawProbe {
            state: Some(StateName::Fock),
            center: n(signal.center),
            sigma: n(signal.sigma),
            idler_center: n(idler.center),
            idler_sigma: n(idler.sigma),
            ..RawProbe::default()
        },
    };
    let (vibrational, vibronic, n_max) = match &cfg.model {
        Model::Vibrational(set) => (
            Some(RawVibrational {
                preset: None,
                n_molecules: Some(set.n_molecules),
                modes: Some(
                    set.modes
                        .iter()
                        .map(|m| RawMode {
                            label: Some(m.label.clone()),
                            omega: Quantity::Number(m.omega),
                            gamma: n(m.gamma),
                            alpha: Some(ComplexValue::from_complex(m.alpha)),
                            rho0: Some(ComplexValue::from_complex(m.rho0)),
                        })
                        .collect(),
                ),
            }),
            None,
            None,
        ),
        Model::Vibronic(model) => (
            None,
            Some(RawVibronic {
                preset: None,
                v_h: n(model.v_h),
                branches: Some(
                    model
                        .branches
                        .iter()
                        .map(|b| RawBranch {
                            label: Some(b.label.clone()),
                            omega_gap: Quantity::Number(b.omega_gap),
                            franck_condon: b.franck_condon,
                            dephasing_time: None,
                            dephasing_rate: Some(b.dephasing),
                            alpha: Some(ComplexValue::from_complex(b.alpha)),
                            rho0: Some(ComplexValue::from_complex(b.rho0)),
                        })
                        .collect(),
                ),
            }),
            Some(model.n_max),
        ),
    };
    let axis = |a: AxisSpec| RawAxis {
        start: Quantity::Number(a.start),
        stop: Quantity::Number(a.stop),
        count: a.count,
    };
    RawConfig {
        kind: Some(cfg.kind),
        probe: Some(probe),
        vibrational,
        vibronic,
        detection: Some(RawDetection {
            omega_i: n(cfg.detection.omega_i),
            lo_phase: Some(cfg.detection.lo_phase),
            omega_bar: Some(match cfg.detection.omega_bar {
                OmegaBar::Detected => Quantity::Text("detected".into()),
                OmegaBar::Fixed { value } => Quantity::Number(value),
            }),
        }),
        grid: Some(RawGrid {
            shift: Some(axis(cfg.shift)),
            delay: Some(axis(cfg.delay)),
        }),
        output: Some(RawOutput {
            directory: Some(cfg.output.directory.to_string_lossy().into_owned()),
            format: Some(cfg.output.format),
            normalize: Some(cfg.output.normalize),
            plot_script: Some(cfg.output.plot_script),
        }),
        numeric: Some(RawNumeric {
            tolerance: Some(cfg.options.tolerance),
            n_max,
            method: Some(cfg.options.method),
        }),
        run: None,
    }
}
