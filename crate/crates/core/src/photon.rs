//! Probe-field amplitudes: the entangled two-photon wavefunction, separable
//! single-photon amplitudes, and their time-domain envelopes.
//!
//! The entangled amplitude is
//!
//! ```text
//! Φ(ωs, ωi) = E0(ωs + ωi) · sinc(ΔkL/2) · e^{iΔkL/2}
//! ΔkL       = [(ωs − ω0/2)·Ts + (ωi − ω0/2)·Ti] / ħ
//! E0(x)     = exp(−(x − ω0)² / 2σ0²)
//! ```
//!
//! It is entire in `ωs`, so it can be evaluated at the complex frequencies
//! that appear once vibrational damping is folded into the argument.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::numerics::{
    adaptive_quadrature, complex_sinc, fourier_to_time, AxisKind, HermiteTable, SampledComplexFunction,
};
use crate::units::HBAR;

/// Largest allowed `|Im ΔkL/2|`; beyond it `e^{iΔkL/2}` loses all precision.
const MAX_IMAGINARY_PHASE: f64 = 700.0;

/// Half-width (eV) of the strip in `(ωs − ωi)/2` over which the joint
/// spectral intensity is integrated for the normalization constant.
pub const NORMALIZATION_HALF_WINDOW: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntangledPairParams {
    /// Pump center energy ω0 (eV); each arm is centered at ω0/2.
    pub omega0: f64,
    /// Pump bandwidth σ0 (eV).
    pub sigma0: f64,
    /// Signal-arm entanglement time (fs).
    pub ts: f64,
    /// Idler-arm entanglement time (fs).
    pub ti: f64,
}

impl EntangledPairParams {
    pub fn new(omega0: f64, sigma0: f64, ts: f64, ti: f64) -> Result<Self> {
        let p = EntangledPairParams {
            omega0,
            sigma0,
            ts,
            ti,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.omega0 > 0.0 && self.omega0.is_finite(), "omega0", self.omega0, "must be positive")?;
        ensure(self.sigma0 > 0.0 && self.sigma0.is_finite(), "sigma0", self.sigma0, "must be positive")?;
        ensure(self.ts >= 0.0 && self.ts.is_finite(), "ts", self.ts, "must be non-negative")?;
        ensure(self.ti >= 0.0 && self.ti.is_finite(), "ti", self.ti, "must be non-negative")
    }

    /// Probe frequency ω0 − ωi for a given idler detection energy.
    pub fn probe_frequency(&self, omega_i: f64) -> f64 {
        self.omega0 - omega_i
    }

    /// Offset of the first zero of the sinc filter, `2πħ/Ts` (eV).
    pub fn spectral_resolution(&self) -> f64 {
        2.0 * PI * HBAR / self.ts
    }

    /// Interval of τ (fs) outside which `Φ̃(τ, ωi)` is negligible: the
    /// window `[0, Ts]` smeared by six pump durations on either side.
    pub fn time_support(&self) -> (f64, f64) {
        let pad = 6.0 * HBAR / self.sigma0;
        (-pad, self.ts + pad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinglePhotonParams {
    /// Center energy (eV).
    pub center: f64,
    /// Bandwidth (eV).
    pub sigma: f64,
}

impl SinglePhotonParams {
    pub fn new(center: f64, sigma: f64) -> Result<Self> {
        let p = SinglePhotonParams { center, sigma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.center > 0.0 && self.center.is_finite(), "center", self.center, "must be positive")?;
        ensure(self.sigma > 0.0 && self.sigma.is_finite(), "sigma", self.sigma, "must be positive")
    }

    /// A photon matched to one arm of `pair`: centered at ω0/2 with the pump bandwidth.
    pub fn matched_to(pair: &EntangledPairParams) -> Self {
        SinglePhotonParams {
            center: pair.omega0 / 2.0,
            sigma: pair.sigma0,
        }
    }
}

/// The light used to probe the sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "kebab-case")]
pub enum ProbeState {
    Entangled(EntangledPairParams),
    /// Fully separable photon pair.
    Fock {
        signal: SinglePhotonParams,
        idler: SinglePhotonParams,
    },
    /// Classical pulse with a Gaussian spectrum.
    Classical(SinglePhotonParams),
    /// Frequency-diagonal mixture generated from an entangled pair, modeled
    /// as an entangled probe with random arrival time spread over `jitter` fs.
    PseudoThermal { pair: EntangledPairParams, jitter: f64 },
}

impl ProbeState {
    pub fn validate(&self) -> Result<()> {
        match self {
            ProbeState::Entangled(p) => p.validate(),
            ProbeState::Fock { signal, idler } => {
                signal.validate()?;
                idler.validate()
            }
            ProbeState::Classical(p) => p.validate(),
            ProbeState::PseudoThermal { pair, jitter } => {
                pair.validate()?;
                ensure(*jitter >= 0.0 && jitter.is_finite(), "jitter", *jitter, "must be non-negative")
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ProbeState::Entangled(_) => "entangled",
            ProbeState::Fock { .. } => "fock",
            ProbeState::Classical(_) => "classical",
            ProbeState::PseudoThermal { .. } => "pseudo-thermal",
        }
    }

    /// Separable Fock pair with both photons matched to `pair`.
    pub fn fock_matched(pair: &EntangledPairParams) -> Self {
        let p = SinglePhotonParams::matched_to(pair);
        ProbeState::Fock { signal: p, idler: p }
    }

    pub fn classical_matched(pair: &EntangledPairParams) -> Self {
        ProbeState::Classical(SinglePhotonParams::matched_to(pair))
    }

    /// Probe frequency ω_pr that defines the Raman shift axis.
    pub fn probe_frequency(&self, omega_i: f64) -> f64 {
        match self {
            ProbeState::Entangled(p) | ProbeState::PseudoThermal { pair: p, .. } => p.probe_frequency(omega_i),
            ProbeState::Fock { signal, .. } => signal.center,
            ProbeState::Classical(p) => p.center,
        }
    }
}

/// Pump spectral envelope `E0(ωs + ωi)`, peak-normalized, continued to complex arguments.
pub fn pump_envelope(params: &EntangledPairParams, omega_sum: impl Into<Complex64>) -> Complex64 {
    let d = omega_sum.into() - params.omega0;
    (-(d * d) / (2.0 * params.sigma0 * params.sigma0)).exp()
}

/// Entangled two-photon amplitude `Φ(ωs, ωi)` with `ωs` possibly complex.
pub fn two_photon_amplitude(
    params: &EntangledPairParams,
    omega_s: impl Into<Complex64>,
    omega_i: f64,
) -> Result<Complex64> {
    let omega_s = omega_s.into();
    let exponent = omega_s.im.abs() / HBAR * params.ts.max(params.ti) / 2.0;
    if exponent >= MAX_IMAGINARY_PHASE {
        return Err(Error::AmplitudeOverflow { exponent });
    }
    let half = params.omega0 / 2.0;
    let half_phase = ((omega_s - half) * params.ts + (omega_i - half) * params.ti) / (2.0 * HBAR);
    let value = pump_envelope(params, omega_s + omega_i)
        * complex_sinc(half_phase)
        * (Complex64::i() * half_phase).exp();
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::AmplitudeOverflow { exponent })
    }
}

/// Gaussian single-photon (or classical pulse) amplitude, continued to complex frequency.
pub fn separable_amplitude(params: &SinglePhotonParams, omega: impl Into<Complex64>) -> Complex64 {
    let d = omega.into() - params.center;
    (-(d * d) / (2.0 * params.sigma * params.sigma)).exp()
}

/// `Φ̃(τ, ωi) = (1/2π) ∫ Φ(ω, ωi) e^{−iωτ} dω` sampled on `tau_axis` (fs).
///
/// The axis must be uniform and cover [`EntangledPairParams::time_support`].
pub fn two_photon_amplitude_time(
    params: &EntangledPairParams,
    omega_i: f64,
    tau_axis: &[f64],
) -> Result<SampledComplexFunction> {
    params.validate()?;
    let step = crate::numerics::uniform_step(tau_axis)?;
    let (lo, hi) = params.time_support();
    let (t0, t1) = (tau_axis[0], tau_axis[tau_axis.len() - 1]);
    if t0 > lo || t1 < hi {
        return Err(Error::InvalidAxis(format!(
            "tau axis [{t0}, {t1}] fs must cover the amplitude support [{lo:.3}, {hi:.3}] fs"
        )));
    }
    let values = sample_time_amplitude(params, omega_i, t0, step, tau_axis.len(), Frame::Absolute)?;
    SampledComplexFunction::new(t0, step, values, AxisKind::Time)
}

#[derive(Clone, Copy, PartialEq)]
enum Frame {
    /// Φ̃(τ) itself.
    Absolute,
    /// e^{iE_c τ/ħ} Φ̃(τ), with E_c = ω0 − ωi the spectral center.
    Baseband,
    /// d/dτ of the baseband envelope.
    BasebandDerivative,
}

fn sample_time_amplitude(
    params: &EntangledPairParams,
    omega_i: f64,
    t0: f64,
    step: f64,
    len: usize,
    frame: Frame,
) -> Result<Vec<Complex64>> {
    // Frequency window 2πħ/Δτ must span at least ±8σ0 around the center.
    let max_step = 2.0 * PI * HBAR / (16.0 * params.sigma0);
    let refine = (step / max_step).ceil().max(1.0) as usize;
    let fine = step / refine as f64;
    let (lo, hi) = params.time_support();
    let period = (len as f64 - 1.0) * step + (hi - lo) + 4.0 * HBAR / params.sigma0 + step;
    let n = ((period / fine).ceil() as usize).max(len * refine).next_power_of_two();

    let de = 2.0 * PI * HBAR / (n as f64 * fine);
    let center = params.probe_frequency(omega_i);
    let offset = -(n as f64 / 2.0) * de;
    let spectrum = (0..n)
        .map(|j| {
            let rel = offset + j as f64 * de;
            let v = two_photon_amplitude(params, center + rel, omega_i)?;
            Ok(match frame {
                Frame::BasebandDerivative => v * Complex64::new(0.0, -rel / HBAR),
                _ => v,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let origin = match frame {
        Frame::Absolute => center + offset,
        _ => offset,
    };
    let spectrum = SampledComplexFunction::new(origin, de, spectrum, AxisKind::Frequency)?;
    let time = fourier_to_time(&spectrum, t0)?;
    Ok(time.values().iter().step_by(refine).take(len).copied().collect())
}

/// Baseband time envelope `e^{iE_c τ/ħ} Φ̃(τ)` of a probe amplitude, where
/// `E_c` is the probe frequency. Evaluable at any τ.
#[derive(Debug, Clone)]
pub enum TimeEnvelope {
    /// Entangled pair: tabulated from the FFT of Φ and interpolated.
    Tabulated { table: HermiteTable, support: (f64, f64) },
    /// Gaussian pulse `factor · s/√(2π) · e^{−s²τ²/2}` with `s = σ/ħ`.
    Gaussian { rate: f64, factor: Complex64 },
}

/// Envelope samples below this fraction of the peak are treated as zero.
const SUPPORT_CUTOFF: f64 = 1e-12;

impl TimeEnvelope {
    pub fn entangled(params: &EntangledPairParams, omega_i: f64) -> Result<Self> {
        params.validate()?;
        let dur = HBAR / params.sigma0;
        let step = dur / 16.0;
        let t0 = -10.0 * dur;
        let len = ((params.ts + 20.0 * dur) / step).ceil() as usize + 1;
        let values = sample_time_amplitude(params, omega_i, t0, step, len, Frame::Baseband)?;
        let derivatives = sample_time_amplitude(params, omega_i, t0, step, len, Frame::BasebandDerivative)?;
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let above = |v: &Complex64| v.norm() > SUPPORT_CUTOFF * peak;
        let first = values.iter().position(above).unwrap_or(0);
        let last = values.iter().rposition(above).unwrap_or(len - 1);
        let support = (
            t0 + step * first.saturating_sub(1) as f64,
            t0 + step * (last + 1).min(len - 1) as f64,
        );
        Ok(TimeEnvelope::Tabulated {
            table: HermiteTable::new(t0, step, values, derivatives),
            support,
        })
    }

    pub fn gaussian(params: &SinglePhotonParams, factor: Complex64) -> Self {
        TimeEnvelope::Gaussian {
            rate: params.sigma / HBAR,
            factor,
        }
    }

    pub fn eval(&self, tau: f64) -> Complex64 {
        match self {
            TimeEnvelope::Tabulated { table, .. } => table.eval(tau),
            TimeEnvelope::Gaussian { rate, factor } => {
                factor * (rate / (2.0 * PI).sqrt() * (-0.5 * rate * rate * tau * tau).exp())
            }
        }
    }

    /// Interval (fs) outside which the envelope is below 1e-12 of its peak.
    pub fn support(&self) -> (f64, f64) {
        match self {
            TimeEnvelope::Tabulated { support, .. } => *support,
            TimeEnvelope::Gaussian { rate, .. } => {
                let w = (2.0 * (1.0 / SUPPORT_CUTOFF).ln()).sqrt() / rate;
                (-w, w)
            }
        }
    }
}

/// `∬ |Φ(ωs, ωi)|² dωs dωi` (eV²) over the strip `|ωs − ωi| ≤ 2·NORMALIZATION_HALF_WINDOW`.
///
/// Along the sum coordinate the integral runs over the region where the
/// pump envelope exceeds 1e-8 of its peak. The joint intensity of an ideal
/// `Ts = Ti` pair is constant along the difference coordinate, so a fixed
/// strip is what keeps the constant finite.
pub fn normalization(params: &EntangledPairParams) -> Result<f64> {
    params.validate()?;
    let u_max = params.sigma0 * (2.0 * 1e8f64.ln()).sqrt();
    let half = params.omega0 / 2.0;
    let area = params.sigma0 * PI.sqrt();
    let inner = |v: f64| -> Result<f64> {
        let f = |u: f64| {
            let ws = half + 0.5 * u + v;
            let wi = half + 0.5 * u - v;
            // Real arguments cannot overflow.
            let a = two_photon_amplitude(params, ws, wi).unwrap_or_default();
            Complex64::new(a.norm_sqr(), 0.0)
        };
        Ok(adaptive_quadrature(f, -u_max, u_max, 1e-12 * area)?.re)
    };
    let w = NORMALIZATION_HALF_WINDOW;
    let outer = if params.ts == params.ti {
        // Integrand independent of v.
        2.0 * w * inner(0.0)?
    } else {
        let cell = std::cell::Cell::new(None);
        let value = adaptive_quadrature(
            |v| match inner(v) {
                Ok(x) => Complex64::new(x, 0.0),
                Err(e) => {
                    cell.set(Some(e));
                    Complex64::new(f64::NAN, 0.0)
                }
            },
            -w,
            w,
            1e-10 * area * 2.0 * w,
        );
        if let Some(e) = cell.take() {
            return Err(e);
        }
        value?.re
    };
    Ok(outer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::erf::erf;

    fn reference_pair() -> EntangledPairParams {
        EntangledPairParams::new(4.0, 0.82, 30.0, 30.0).unwrap()
    }

    #[test]
    fn pump_envelope_shape() {
        let p = reference_pair();
        assert_eq!(pump_envelope(&p, p.omega0), Complex64::new(1.0, 0.0));
        let one_sigma = pump_envelope(&p, p.omega0 + p.sigma0);
        assert!((one_sigma.re - (-0.5f64).exp()).abs() < 1e-15);
        assert_eq!(pump_envelope(&p, 1e3).norm(), 0.0);
        assert_eq!(pump_envelope(&p, -1e3).norm(), 0.0);
    }

    #[test]
    fn amplitude_at_degenerate_center_is_one() {
        let p = reference_pair();
        let v = two_photon_amplitude(&p, p.omega0 / 2.0, p.omega0 / 2.0).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn first_sinc_zero() {
        let p = reference_pair();
        let ws = p.omega0 / 2.0 + 2.0 * PI * HBAR / p.ts;
        let v = two_photon_amplitude(&p, ws, p.omega0 / 2.0).unwrap();
        assert!(v.norm() < 1e-12, "{v}");
    }

    #[test]
    fn one_picosecond_resolution_is_33_wavenumbers() {
        let p = EntangledPairParams::new(3.0, HBAR / 35.0, 1000.0, 1000.0).unwrap();
        let r = p.spectral_resolution();
        assert!((r - 4.135e-3).abs() < 1e-6, "{r}");
        let k = crate::units::ev_to_wavenumber(r);
        assert!((k - 33.3).abs() < 0.1, "{k}");
    }

    #[test]
    fn overflow_guard() {
        let p = EntangledPairParams::new(3.0, 0.1, 1000.0, 1000.0).unwrap();
        let z = Complex64::new(1.5, -1.0);
        assert!(matches!(
            two_photon_amplitude(&p, z, 1.5),
            Err(Error::AmplitudeOverflow { .. })
        ));
    }

    #[test]
    fn separable_amplitude_values() {
        let p = SinglePhotonParams::new(2.0, 0.4).unwrap();
        assert_eq!(separable_amplitude(&p, 2.0), Complex64::new(1.0, 0.0));
        assert!((separable_amplitude(&p, 2.4).re - (-0.5f64).exp()).abs() < 1e-15);
        let g = 0.3;
        let v = separable_amplitude(&p, Complex64::new(2.0, g));
        // (ig)² = −g², so the exponent flips sign.
        assert!((v.re - (g * g / (2.0 * 0.16)).exp()).abs() < 1e-14);
        assert!(v.im.abs() < 1e-15);
        assert!(v.re > 1.0);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(EntangledPairParams::new(4.0, -1.0, 30.0, 30.0).is_err());
        assert!(EntangledPairParams::new(4.0, 0.8, -1.0, 30.0).is_err());
        assert!(SinglePhotonParams::new(2.0, 0.0).is_err());
        let thermal = ProbeState::PseudoThermal {
            pair: reference_pair(),
            jitter: -1.0,
        };
        assert!(thermal.validate().is_err());
    }

    /// Φ̃ for Ts = Ti: the sinc·phase factor is a unit boxcar on τ ∈ [0, Ts] in
    /// time, so Φ̃ is the pump Gaussian convolved with it:
    /// Φ̃(τ) = e^{−iΩcτ}/(2Ts) · [erf(s(Ts − τ)/√2) + erf(sτ/√2)], s = σ0/ħ.
    fn erf_oracle(p: &EntangledPairParams, omega_i: f64, tau: f64) -> Complex64 {
        let s = p.sigma0 / HBAR;
        let c = p.probe_frequency(omega_i) / HBAR;
        let env = (erf(s * (p.ts - tau) / 2f64.sqrt()) + erf(s * tau / 2f64.sqrt())) / (2.0 * p.ts);
        Complex64::cis(-c * tau) * env
    }

    #[test]
    fn time_amplitude_matches_erf_oracle() {
        let p = reference_pair();
        for &omega_i in &[2.0, 1.9] {
            let tau: Vec<f64> = (0..1201).map(|k| -10.0 + 0.04 * k as f64).collect();
            let out = two_photon_amplitude_time(&p, omega_i, &tau).unwrap();
            let peak = 1.0 / p.ts;
            let max_err = tau
                .iter()
                .zip(out.values())
                .map(|(&t, v)| (v - erf_oracle(&p, omega_i, t)).norm())
                .fold(0.0, f64::max);
            assert!(max_err / peak < 1e-6, "omega_i {omega_i}: {}", max_err / peak);
        }
    }

    #[test]
    fn degenerate_time_amplitude_is_pump_gaussian() {
        let p = EntangledPairParams::new(4.0, 0.82, 0.0, 0.0).unwrap();
        let tau: Vec<f64> = (0..401).map(|k| -8.0 + 0.04 * k as f64).collect();
        let out = two_photon_amplitude_time(&p, 2.0, &tau).unwrap();
        let s = p.sigma0 / HBAR;
        for (&t, v) in tau.iter().zip(out.values()) {
            let exact = Complex64::cis(-2.0 * t / HBAR) * (s / (2.0 * PI).sqrt()) * (-0.5 * s * s * t * t).exp();
            assert!((v - exact).norm() < 1e-9);
        }
    }

    #[test]
    fn time_amplitude_parseval() {
        let p = reference_pair();
        let tau: Vec<f64> = (0..2001).map(|k| -15.0 + 0.03 * k as f64).collect();
        let out = two_photon_amplitude_time(&p, 2.0, &tau).unwrap();
        let lhs = out.energy();
        // (1/2π) ∫|Φ|² dω with dω = dE/ħ.
        let rhs = adaptive_quadrature(
            |e| Complex64::new(two_photon_amplitude(&p, e, 2.0).unwrap().norm_sqr(), 0.0),
            2.0 - 8.0 * p.sigma0,
            2.0 + 8.0 * p.sigma0,
            1e-12,
        )
        .unwrap()
        .re
            / (2.0 * PI * HBAR);
        assert!((lhs - rhs).abs() < 1e-8 * rhs, "{lhs} vs {rhs}");
    }

    #[test]
    fn time_axis_must_cover_support() {
        let p = reference_pair();
        let tau: Vec<f64> = (0..100).map(|k| k as f64 * 0.1).collect();
        assert!(matches!(
            two_photon_amplitude_time(&p, 2.0, &tau),
            Err(Error::InvalidAxis(_))
        ));
    }

    #[test]
    fn envelope_matches_oracle_off_grid() {
        let p = reference_pair();
        let env = TimeEnvelope::entangled(&p, 2.0).unwrap();
        let (lo, hi) = env.support();
        assert!(lo < -3.0 && lo > -10.0 && hi > 33.0 && hi < 40.0, "{lo} {hi}");
        let c = p.probe_frequency(2.0) / HBAR;
        let mut max_err: f64 = 0.0;
        for k in 0..3000 {
            let t = -5.0 + 40.0 * (k as f64 + 0.37) / 3000.0;
            let exact = erf_oracle(&p, 2.0, t) * Complex64::cis(c * t);
            max_err = max_err.max((env.eval(t) - exact).norm());
        }
        assert!(max_err * p.ts < 1e-6, "{}", max_err * p.ts);
    }

    #[test]
    fn normalization_scales_with_pump_bandwidth() {
        let narrow = EntangledPairParams::new(4.0, 0.2, 0.0, 0.0).unwrap();
        let wide = EntangledPairParams::new(4.0, 0.4, 0.0, 0.0).unwrap();
        let n1 = normalization(&narrow).unwrap();
        let n2 = normalization(&wide).unwrap();
        assert!(n1 > 0.0);
        assert!((n2 / n1 - 2.0).abs() < 1e-6, "{}", n2 / n1);
        // σ0√π per unit length of the 2·half-window strip.
        let expected = 0.2 * PI.sqrt() * 2.0 * NORMALIZATION_HALF_WINDOW;
        assert!((n1 - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn normalization_symmetric_under_arm_swap() {
        let a = EntangledPairParams::new(4.0, 0.3, 40.0, 10.0).unwrap();
        let b = EntangledPairParams::new(4.0, 0.3, 10.0, 40.0).unwrap();
        let na = normalization(&a).unwrap();
        let nb = normalization(&b).unwrap();
        assert!(na > 0.0);
        assert!((na - nb).abs() < 1e-8 * na, "{na} {nb}");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn exchange_symmetry_for_equal_times(a in 1.0f64..3.0, b in 1.0f64..3.0, t in 0.0f64..200.0) {
                let p = EntangledPairParams::new(4.0, 0.5, t, t).unwrap();
                let ab = two_photon_amplitude(&p, a, b).unwrap();
                let ba = two_photon_amplitude(&p, b, a).unwrap();
                prop_assert!((ab - ba).norm() <= 1e-12);
            }

            #[test]
            fn bounded_on_real_axis(a in 0.0f64..5.0, b in 0.0f64..5.0, ts in 0.0f64..500.0, ti in 0.0f64..500.0) {
                let p = EntangledPairParams::new(4.0, 0.5, ts, ti).unwrap();
                prop_assert!(two_photon_amplitude(&p, a, b).unwrap().norm() <= 1.0 + 1e-15);
            }

            #[test]
            fn cauchy_mean_value(re in 1.0f64..3.0, im in -0.05f64..0.05, r in 0.001f64..0.02) {
                // An entire function equals its mean over any circle around the point.
                let p = EntangledPairParams::new(4.0, 0.5, 60.0, 30.0).unwrap();
                let z0 = Complex64::new(re, im);
                let n = 64;
                let mean = (0..n)
                    .map(|k| {
                        let z = z0 + Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64);
                        two_photon_amplitude(&p, z, 1.9).unwrap()
                    })
                    .sum::<Complex64>()
                    / n as f64;
                let center = two_photon_amplitude(&p, z0, 1.9).unwrap();
                prop_assert!((mean - center).norm() < 1e-8);
            }

            #[test]
            fn separable_even_about_center(d in 0.0f64..2.0) {
                let p = SinglePhotonParams::new(2.0, 0.3).unwrap();
                prop_assert!((separable_amplitude(&p, 2.0 + d) - separable_amplitude(&p, 2.0 - d)).norm() < 1e-14);
            }
        }
    }
}
