//! Intensity-correlated and heterodyne-detected QFRS.
//!
//! For harmonic `n` of a branch with energy `ω_n = ω_gap + n·v_h` the line shape is
//!
//! ```text
//! g_n(ω, T) = ∫ e^{i(ω − ω_n)τ/ħ} e^{−D(τ² + 2Tτ)} Φ̃(τ, ωi) dτ
//! ```
//!
//! which grows like `e^{DT²}` while `ρ⁽ⁿ⁾(T)` decays like `e^{−DT²}`. The
//! engine therefore integrates `h_n = g_n e^{−DT²}` with the damping
//! `e^{−D(τ+T)²}` and multiplies by the bounded remainder of `ρ⁽ⁿ⁾(T)`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::{check_delay, jitter_average, DetectionConfig, EngineOptions, LineShapeMethod, OmegaBar, PreparedProbe};
use crate::error::Result;
use crate::molecular::{franck_condon_weight, CoherenceTrajectory, ExcitedStateBranch, VibronicModel};
use crate::units::HBAR;

/// Damping factors below this fraction of their peak are truncated.
const DAMPING_CUTOFF: f64 = 1e-12;

/// Line shape `g_n(ω, T)` of harmonic `n`.
pub fn qfrs_lineshape_g(
    branch: &ExcitedStateBranch,
    v_h: f64,
    n: usize,
    probe: &PreparedProbe,
    omega: f64,
    delay: f64,
    options: &EngineOptions,
) -> Result<Complex64> {
    check_delay(delay)?;
    let h = damped_lineshape(branch, v_h, n, probe, omega, delay, options)?;
    Ok(h * (branch.dephasing * delay * delay).exp())
}

/// `h_n = g_n e^{−DT²}`.
fn damped_lineshape(
    branch: &ExcitedStateBranch,
    v_h: f64,
    n: usize,
    probe: &PreparedProbe,
    omega: f64,
    delay: f64,
    options: &EngineOptions,
) -> Result<Complex64> {
    let d = branch.dephasing;
    let detuning = omega - probe.probe_frequency() - branch.harmonic_energy(v_h, n);
    match options.method {
        LineShapeMethod::Approximation => {
            let shifted = Complex64::new(omega - branch.harmonic_energy(v_h, n), 2.0 * d * delay * HBAR);
            Ok(probe.amplitude(shifted)? * (-d * delay * delay).exp())
        }
        LineShapeMethod::Quadrature => {
            let (a, b) = probe.envelope().support();
            let window = damping_window(d, delay);
            // Largest value of e^{−D(τ+T)²} on the integration interval.
            let nearest = (-delay).clamp(a.max(window.0), b.min(window.1));
            let bound = (-d * (nearest + delay).powi(2)).exp();
            probe.envelope_transform(
                detuning,
                |t| Complex64::new((-d * (t + delay).powi(2)).exp(), 0.0),
                window,
                bound,
                options.tolerance,
            )
        }
    }
}

fn damping_window(d: f64, delay: f64) -> (f64, f64) {
    if d == 0.0 {
        return (f64::NEG_INFINITY, f64::INFINITY);
    }
    let w = ((1.0 / DAMPING_CUTOFF).ln() / d).sqrt();
    (-delay - w, -delay + w)
}

/// `Σ_branches Σ_n α* ρ⁽ⁿ⁾(T) g_n(ω, T)` at one delay.
fn vibronic_amplitude(
    model: &VibronicModel,
    probe: &PreparedProbe,
    omega: f64,
    delay: f64,
    options: &EngineOptions,
) -> Result<Complex64> {
    let mut amp = Complex64::new(0.0, 0.0);
    for branch in &model.branches {
        let weight = branch.alpha.conj() * branch.rho0;
        if weight == Complex64::new(0.0, 0.0) {
            continue;
        }
        for n in 0..=model.n_max {
            let s = franck_condon_weight(branch.franck_condon, n);
            if s == 0.0 {
                continue;
            }
            let phase = Complex64::cis(-branch.harmonic_energy(model.v_h, n) * delay / HBAR);
            let h = damped_lineshape(branch, model.v_h, n, probe, omega, delay, options)?;
            amp += weight * s * phase * h;
        }
    }
    Ok(amp)
}

/// Intensity-correlated QFRS `|Σ α* g_n ρ⁽ⁿ⁾(T)|² / 𝒩`.
pub fn qfrs_intensity_point(
    model: &VibronicModel,
    probe: &PreparedProbe,
    omega: f64,
    delay: f64,
    options: &EngineOptions,
) -> Result<f64> {
    check_delay(delay)?;
    let coherent = |t: f64| Ok(vibronic_amplitude(model, probe, omega, t, options)?.norm_sqr() / probe.normalization());
    match probe.jitter() {
        Some(jitter) => jitter_average(coherent, delay, jitter, options.tolerance),
        None => coherent(delay),
    }
}

/// Intensity from arbitrary coherence trajectories, through the line-shape
/// integral `f(T)/2π = ∫ ρ(s + T) e^{iωs/ħ} Φ̃(s, ωi) ds`.
///
/// Closed-form trajectories are evaluated at negative times as well, so they
/// reproduce [`qfrs_intensity_point`].
pub fn qfrs_intensity_generic(
    trajectories: &[(Complex64, CoherenceTrajectory)],
    probe: &PreparedProbe,
    omega: f64,
    delay: f64,
    options: &EngineOptions,
) -> Result<f64> {
    check_delay(delay)?;
    let shift = omega - probe.probe_frequency();
    let mut amp = Complex64::new(0.0, 0.0);
    for (alpha, traj) in trajectories {
        let window = match traj.support() {
            Some((lo, hi)) => (lo - delay, hi - delay),
            None => (f64::NEG_INFINITY, f64::INFINITY),
        };
        let (a, b) = probe.envelope().support();
        let (lo, hi) = (a.max(window.0), b.min(window.1));
        if !(lo < hi) {
            continue;
        }
        let bound = (0..=64)
            .map(|k| traj.value_at(lo + (hi - lo) * k as f64 / 64.0 + delay).norm())
            .fold(0.0, f64::max);
        let f = probe.envelope_transform(
            shift,
            |s| traj.value_at(s + delay),
            (lo, hi),
            bound,
            options.tolerance,
        )?;
        amp += alpha.conj() * f;
    }
    Ok(amp.norm_sqr() / probe.normalization())
}

/// Heterodyne-detected QFRS `Σ Im[Φ_LO* α* ρ⁽ⁿ⁾(T) g_n(ω, T)] / 𝒩`.
///
/// The local oscillator is `Φ_LO = |A(ω̄, ωi)| e^{i(φ + π/2)}`: it carries the
/// magnitude of the probe amplitude at ω̄ and the phase set by `lo_phase`.
/// With φ = −π/2 a resonant slice follows `Im ρ⁽ⁿ⁾`, with φ = −π it follows `Re ρ⁽ⁿ⁾`.
/// Multiplying every initial coherence by `e^{iθ}` is equivalent to `φ → φ − θ`.
pub fn qfrs_heterodyne_point(
    model: &VibronicModel,
    probe: &PreparedProbe,
    detection: &DetectionConfig,
    omega: f64,
    delay: f64,
    options: &EngineOptions,
) -> Result<f64> {
    check_delay(delay)?;
    let omega_bar = match detection.omega_bar {
        OmegaBar::Detected => omega,
        OmegaBar::Fixed { value } => value,
    };
    let lo = probe.amplitude(Complex64::new(omega_bar, 0.0))?.norm() * Complex64::cis(detection.lo_phase + FRAC_PI_2);
    let coherent = |t: f64| Ok((lo.conj() * vibronic_amplitude(model, probe, omega, t, options)?).im / probe.normalization());
    match probe.jitter() {
        Some(jitter) => jitter_average(coherent, delay, jitter, options.tolerance),
        None => coherent(delay),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{local_maxima, pearson};
    use crate::molecular::vibronic_coherence_harmonic;
    use crate::photon::{EntangledPairParams, ProbeState, SinglePhotonParams};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn pair() -> EntangledPairParams {
        EntangledPairParams::new(4.0, 0.82, 30.0, 30.0).unwrap()
    }

    fn entangled() -> PreparedProbe {
        PreparedProbe::new(&ProbeState::Entangled(pair()), 2.0).unwrap()
    }

    fn opts() -> EngineOptions {
        EngineOptions::default()
    }

    fn approx() -> EngineOptions {
        EngineOptions {
            method: LineShapeMethod::Approximation,
            ..EngineOptions::default()
        }
    }

    #[test]
    fn undamped_lineshape_is_amplitude() {
        let probe = entangled();
        let mut b = ExcitedStateBranch::new("e1", 1.8, 2.2, 30.0);
        b.dephasing = 0.0;
        for &(x, t) in &[(1.8, 0.0), (2.1, 15.0), (1.75, 80.0), (2.6, 3.0)] {
            let w = probe.probe_frequency() + x;
            let g = qfrs_lineshape_g(&b, 0.26, 0, &probe, w, t, &opts()).unwrap();
            let exact = probe.amplitude(Complex64::new(w - 1.8, 0.0)).unwrap();
            assert!((g - exact).norm() <= 1e-6 * exact.norm().max(1e-3), "x = {x}: {g} vs {exact}");
        }
    }

    #[test]
    fn approximation_at_zero_delay() {
        let probe = entangled();
        let b = ExcitedStateBranch::new("e1", 1.8, 2.2, 30.0);
        let w = probe.probe_frequency() + 2.32;
        let g = qfrs_lineshape_g(&b, 0.26, 2, &probe, w, 0.0, &approx()).unwrap();
        assert!((g - probe.amplitude(Complex64::new(w - 2.32, 0.0)).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn approximation_converges_for_short_entanglement_time() {
        // The short-delay form holds once T·Ts·D is small; with Ts = 3 fs the
        // peak error up to T = 0.3·D^{−1/2} stays below one percent.
        let p = EntangledPairParams::new(4.0, 0.82, 3.0, 3.0).unwrap();
        let probe = PreparedProbe::new(&ProbeState::Entangled(p), 2.0).unwrap();
        let b = ExcitedStateBranch::new("e1", 1.8, 2.2, 30.0);
        let w = probe.probe_frequency() + 1.8;
        let mut errors = Vec::new();
        for &t in &[0.0, 3.0, 9.0] {
            let q = qfrs_lineshape_g(&b, 0.26, 0, &probe, w, t, &opts()).unwrap();
            let a = qfrs_lineshape_g(&b, 0.26, 0, &probe, w, t, &approx()).unwrap();
            errors.push((q - a).norm() / q.norm());
        }
        assert!(errors.iter().all(|&e| e < 0.01), "{errors:?}");
    }

    #[test]
    fn zero_coherence_gives_zero() {
        let probe = entangled();
        let mut model = VibronicModel::nitrostilbene();
        for b in &mut model.branches {
            b.rho0 = Complex64::new(0.0, 0.0);
        }
        let det = DetectionConfig::new(2.0).with_lo_phase(-FRAC_PI_2);
        assert_eq!(qfrs_intensity_point(&model, &probe, 4.3, 10.0, &opts()).unwrap(), 0.0);
        assert_eq!(qfrs_heterodyne_point(&model, &probe, &det, 4.3, 10.0, &opts()).unwrap(), 0.0);
        let zero = CoherenceTrajectory::sampled(0.0, 1.0, vec![Complex64::new(0.0, 0.0); 10]).unwrap();
        assert_eq!(
            qfrs_intensity_generic(&[(Complex64::new(1.0, 0.0), zero)], &probe, 4.3, 1.0, &opts()).unwrap(),
            0.0
        );
    }

    #[test]
    fn generic_path_matches_closed_form() {
        let probe = entangled();
        let model = VibronicModel::nitrostilbene();
        let trajectories: Vec<(Complex64, CoherenceTrajectory)> = model
            .branches
            .iter()
            .flat_map(|b| (0..=model.n_max).map(move |n| (b.alpha, CoherenceTrajectory::closed_form(b, 0.26, n))))
            .collect();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..5 {
            let w = probe.probe_frequency() + rng.gen_range(1.2..3.2);
            let t = rng.gen_range(0.0..100.0);
            let a = qfrs_intensity_point(&model, &probe, w, t, &opts()).unwrap();
            let b = qfrs_intensity_generic(&trajectories, &probe, w, t, &opts()).unwrap();
            assert!((a - b).abs() <= 1e-4 * a, "{a} vs {b} at ({w}, {t})");
        }
    }

    #[test]
    fn narrow_trajectory_picks_its_frequency() {
        // A short burst at τ = T oscillating at ν is seen where ω − ω_pr ≈ ν.
        let probe = entangled();
        let (nu, delay, width) = (2.0, 40.0, 6.0);
        let dt = 0.05;
        let values: Vec<Complex64> = (0..2001)
            .map(|k| {
                let t = k as f64 * dt;
                Complex64::from_polar((-(t - delay).powi(2) / (2.0 * width * width)).exp(), -nu * t / HBAR)
            })
            .collect();
        let traj = CoherenceTrajectory::sampled(0.0, dt, values).unwrap();
        let input = [(Complex64::new(1.0, 0.0), traj)];
        let shifts: Vec<f64> = (0..81).map(|k| 1.6 + 0.01 * k as f64).collect();
        let s: Vec<f64> = shifts
            .iter()
            .map(|x| qfrs_intensity_generic(&input, &probe, probe.probe_frequency() + x, delay, &opts()).unwrap())
            .collect();
        let imax = (0..s.len()).max_by(|&a, &b| s[a].total_cmp(&s[b])).unwrap();
        assert!((shifts[imax] - nu).abs() < 0.05, "peak at {}", shifts[imax]);
    }

    #[test]
    fn entangled_scan_resolves_branch_combs() {
        let model = VibronicModel::nitrostilbene();
        let xs: Vec<f64> = (0..201).map(|k| 1.2 + 0.01 * k as f64).collect();
        let count = |state: ProbeState| {
            let probe = PreparedProbe::new(&state, 2.0).unwrap();
            let s: Vec<f64> = xs
                .iter()
                .map(|x| qfrs_intensity_point(&model, &probe, probe.probe_frequency() + x, 0.0, &opts()).unwrap())
                .collect();
            local_maxima(&s).len()
        };
        let entangled = count(ProbeState::Entangled(pair()));
        let classical = count(ProbeState::classical_matched(&pair()));
        let fock = count(ProbeState::fock_matched(&pair()));
        assert!(classical < entangled && fock < entangled, "{entangled} {classical} {fock}");
    }

    #[test]
    fn classical_probe_merges_neighbouring_peaks() {
        let model = VibronicModel::nitrostilbene();
        let probe = PreparedProbe::new(&ProbeState::classical_matched(&pair()), 2.0).unwrap();
        let s: Vec<f64> = (0..=40)
            .map(|k| {
                let x = 1.66 + 0.01 * k as f64;
                qfrs_intensity_point(&model, &probe, probe.probe_frequency() + x, 0.0, &opts()).unwrap()
            })
            .collect();
        let has_interior_min = (1..s.len() - 1).any(|i| s[i] < s[i - 1] && s[i] < s[i + 1]);
        assert!(!has_interior_min);
    }

    #[test]
    fn heterodyne_takes_both_signs() {
        let probe = entangled();
        let model = VibronicModel::nitrostilbene();
        let det = DetectionConfig::new(2.0).with_lo_phase(-FRAC_PI_2);
        let w = probe.probe_frequency() + 2.32;
        let s: Vec<f64> = (0..60)
            .map(|k| qfrs_heterodyne_point(&model, &probe, &det, w, k as f64, &opts()).unwrap())
            .collect();
        assert!(s.iter().any(|&v| v > 0.0) && s.iter().any(|&v| v < 0.0));
    }

    #[test]
    fn heterodyne_slice_follows_harmonic_quadrature() {
        let probe = entangled();
        let model = VibronicModel::nitrostilbene();
        let det = DetectionConfig::new(2.0).with_lo_phase(-FRAC_PI_2);
        let w = probe.probe_frequency() + 2.32;
        let ts: Vec<f64> = (0..=60).map(|k| k as f64).collect();
        let s: Vec<f64> = ts
            .iter()
            .map(|&t| qfrs_heterodyne_point(&model, &probe, &det, w, t, &opts()).unwrap())
            .collect();
        let reference: Vec<f64> = ts
            .iter()
            .map(|&t| vibronic_coherence_harmonic(&model.branches[0], 0.26, 2, t).im)
            .collect();
        // The slice is dominated by the resonant harmonic.
        assert!(pearson(&s, &reference) > 0.9);
    }

    #[test]
    fn lo_phase_equivalence() {
        // ρ(0) → ρ(0)e^{iθ} is the same as φ → φ − θ.
        let probe = entangled();
        let model = VibronicModel::nitrostilbene();
        let theta = 0.7;
        let mut rotated = model.clone();
        for b in &mut rotated.branches {
            b.rho0 *= Complex64::cis(theta);
        }
        let det = DetectionConfig::new(2.0).with_lo_phase(0.4);
        let shifted = DetectionConfig::new(2.0).with_lo_phase(0.4 - theta);
        for &(x, t) in &[(2.32, 5.0), (1.66, 20.0), (1.4, 0.0)] {
            let w = probe.probe_frequency() + x;
            let a = qfrs_heterodyne_point(&rotated, &probe, &det, w, t, &opts()).unwrap();
            let b = qfrs_heterodyne_point(&model, &probe, &shifted, w, t, &opts()).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn fock_and_classical_envelopes() {
        let model = VibronicModel::nitrostilbene();
        let single = SinglePhotonParams::matched_to(&pair());
        let probe = PreparedProbe::new(&ProbeState::Classical(single), 2.0).unwrap();
        let mut b = model.branches[0].clone();
        b.dephasing = 0.0;
        let w = probe.probe_frequency() + 2.0;
        let g = qfrs_lineshape_g(&b, 0.26, 0, &probe, w, 12.0, &opts()).unwrap();
        let exact = probe.amplitude(Complex64::new(w - 1.8, 0.0)).unwrap();
        assert!((g - exact).norm() < 1e-8);
    }

    #[test]
    fn thermal_average_at_zero_jitter() {
        let model = VibronicModel::nitrostilbene();
        let p = entangled();
        let t = PreparedProbe::new(&ProbeState::PseudoThermal { pair: pair(), jitter: 0.0 }, 2.0).unwrap();
        let w = p.probe_frequency() + 2.06;
        let a = qfrs_intensity_point(&model, &p, w, 7.0, &opts()).unwrap();
        let b = qfrs_intensity_point(&model, &t, w, 7.0, &opts()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_negative_delay() {
        let probe = entangled();
        let model = VibronicModel::nitrostilbene();
        assert!(qfrs_intensity_point(&model, &probe, 4.0, -1.0, &opts()).is_err());
        assert!(qfrs_lineshape_g(&model.branches[0], 0.26, 0, &probe, 4.0, -PI, &opts()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn scaling_in_initial_coherence(re in -2.0f64..2.0, im in -2.0f64..2.0, c in 0.1f64..3.0, x in 1.2f64..3.2, t in 0.0f64..80.0) {
            let probe = entangled();
            let model = VibronicModel::nitrostilbene();
            let k = Complex64::new(re, im);
            let mut scaled = model.clone();
            let mut real_scaled = model.clone();
            for (b, r) in scaled.branches.iter_mut().zip(real_scaled.branches.iter_mut()) {
                b.rho0 *= k;
                r.rho0 *= c;
            }
            let w = probe.probe_frequency() + x;
            let a = qfrs_intensity_point(&model, &probe, w, t, &opts()).unwrap();
            let b = qfrs_intensity_point(&scaled, &probe, w, t, &opts()).unwrap();
            prop_assert!(a >= 0.0);
            prop_assert!((b - k.norm_sqr() * a).abs() <= 1e-10 * b.max(1e-300));
            let det = DetectionConfig::new(2.0).with_lo_phase(-FRAC_PI_2);
            let h = qfrs_heterodyne_point(&model, &probe, &det, w, t, &opts()).unwrap();
            let hc = qfrs_heterodyne_point(&real_scaled, &probe, &det, w, t, &opts()).unwrap();
            prop_assert!((hc - c * h).abs() <= 1e-10 * hc.abs().max(1e-300));
        }
    }
}
