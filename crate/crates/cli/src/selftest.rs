//! Quick oracle checks of the installed engine.

use std::f64::consts::PI;

use num_complex::Complex64;

use qraman::analysis::nearest_index;
use qraman::molecular::{
    franck_condon_weight, CoherenceTrajectory, VibrationalMode, VibrationalModeSet, VibronicModel,
};
use qraman::numerics::{adaptive_quadrature, fourier_to_time, AxisKind, SampledComplexFunction};
use qraman::photon::{two_photon_amplitude, two_photon_amplitude_time, EntangledPairParams, ProbeState};
use qraman::signal::{qfastcars_point, qfrs_intensity_generic, qfrs_intensity_point, EngineOptions, PreparedProbe};
use qraman::units::HBAR;

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, pass: bool, detail: String) -> Check {
    Check { name, pass, detail }
}

fn pair() -> EntangledPairParams {
    EntangledPairParams::new(4.0, 0.82, 30.0, 30.0).expect("valid pair")
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn quadrature() -> Check {
    // ∫ e^{−x²} over ±10 and ∫ cos over [0, π/2].
    let g = adaptive_quadrature(|x| Complex64::new((-x * x).exp(), 0.0), -10.0, 10.0, 1e-12);
    let c = adaptive_quadrature(|x| Complex64::new(x.cos(), 0.0), 0.0, PI / 2.0, 1e-12);
    match (g, c) {
        (Ok(g), Ok(c)) => {
            let err = ((g.re - PI.sqrt()).abs() / PI.sqrt()).max((c.re - 1.0).abs());
            check("quadrature", err < 1e-10, format!("max error {err:.1e}"))
        }
        (Err(e), _) | (_, Err(e)) => check("quadrature", false, e.to_string()),
    }
}

fn erf_envelope() -> Check {
    let p = pair();
    let wi = 2.0;
    let (lo, hi) = p.time_support();
    let axis = linspace(lo - 1.0, hi + 1.0, 801);
    let f = match two_photon_amplitude_time(&p, wi, &axis) {
        Ok(f) => f,
        Err(e) => return check("time-envelope", false, e.to_string()),
    };
    let s = p.sigma0 / HBAR;
    let wc = (p.omega0 - wi) / HBAR;
    let oracle = |t: f64| {
        Complex64::cis(-wc * t) / (2.0 * p.ts)
            * (libm::erf(s * (p.ts - t) / 2f64.sqrt()) + libm::erf(s * t / 2f64.sqrt()))
    };
    let peak = axis.iter().map(|&t| oracle(t).norm()).fold(0.0, f64::max);
    let worst = axis
        .iter()
        .enumerate()
        .map(|(k, &t)| (f.values()[k] - oracle(t)).norm() / peak)
        .fold(0.0, f64::max);
    check("time-envelope", worst <= 1e-6, format!("max error relative to peak {worst:.2e}"))
}

fn parseval() -> Check {
    let p = pair();
    let n = 4096;
    let e0 = 2.0 - 8.0 * p.sigma0;
    let de = 16.0 * p.sigma0 / n as f64;
    let values: Result<Vec<Complex64>, _> =
        (0..n).map(|j| two_photon_amplitude(&p, e0 + de * j as f64, 2.0)).collect();
    let result = values
        .and_then(|v| SampledComplexFunction::new(e0, de, v, AxisKind::Frequency))
        .and_then(|spec| fourier_to_time(&spec, -200.0).map(|t| (spec.energy() / HBAR, 2.0 * PI * t.energy())));
    match result {
        Ok((lhs, rhs)) => {
            let err = (lhs - rhs).abs() / lhs;
            check("parseval", err <= 1e-8, format!("relative error {err:.2e}"))
        }
        Err(e) => check("parseval", false, e.to_string()),
    }
}

fn poisson() -> Check {
    let worst = [0.0, 0.5, 1.3, 2.2, 5.0]
        .iter()
        .map(|&f| ((0..=40).map(|k| franck_condon_weight(f, k)).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    check("poisson-weights", worst <= 1e-10, format!("max |sum - 1| {worst:.2e}"))
}

fn resolution() -> Check {
    // A single narrow mode: the T = 0 line must peak at the mode and reach
    // half height 2·1.3916·ħ/Ts away (half maximum of sinc²).
    let p = pair();
    let mode = VibrationalMode::from_wavenumbers("", 2914.0, 0.01);
    let modes = VibrationalModeSet {
        modes: vec![mode.clone()],
        n_molecules: 1,
    };
    let probe = match PreparedProbe::new(&ProbeState::Entangled(p), 2.0) {
        Ok(p) => p,
        Err(e) => return check("resolution", false, e.to_string()),
    };
    let shifts = linspace(mode.omega - 0.15, mode.omega + 0.15, 3001);
    let values: Result<Vec<f64>, _> = shifts
        .iter()
        .map(|&s| qfastcars_point(&modes, &probe, probe.probe_frequency() + s, 0.0))
        .collect();
    let values = match values {
        Ok(v) => v,
        Err(e) => return check("resolution", false, e.to_string()),
    };
    let top = values.iter().cloned().fold(0.0, f64::max);
    let peak = values.iter().position(|&v| v == top).unwrap_or(0);
    let right = (peak..values.len()).find(|&i| values[i] < top / 2.0).unwrap_or(values.len() - 1);
    let half_width = shifts[right] - shifts[peak];
    let expected = 1.391_557 * 2.0 * HBAR / p.ts;
    let rel = (half_width / expected - 1.0).abs();
    let on_mode = peak.abs_diff(nearest_index(&shifts, mode.omega)) <= 1;
    check(
        "resolution",
        on_mode && rel < 0.01,
        format!("half width {half_width:.5} eV vs {expected:.5} eV"),
    )
}

fn generic_path() -> Check {
    let model = VibronicModel::nitrostilbene();
    let probe = match PreparedProbe::new(&ProbeState::Entangled(pair()), 2.0) {
        Ok(p) => p,
        Err(e) => return check("generic-trajectory", false, e.to_string()),
    };
    let opts = EngineOptions::default();
    let trajectories: Vec<(Complex64, CoherenceTrajectory)> = model
        .branches
        .iter()
        .flat_map(|b| {
            (0..=model.n_max).map(move |n| (b.alpha, CoherenceTrajectory::closed_form(b, model.v_h, n)))
        })
        .collect();
    let mut worst: f64 = 0.0;
    for (s, t) in [(1.4, 0.0), (2.07, 10.0), (2.6, 45.0)] {
        let w = probe.probe_frequency() + s;
        let pair = qfrs_intensity_point(&model, &probe, w, t, &opts)
            .and_then(|a| qfrs_intensity_generic(&trajectories, &probe, w, t, &opts).map(|b| (a, b)));
        match pair {
            Ok((a, b)) => worst = worst.max((a - b).abs() / a.abs()),
            Err(e) => return check("generic-trajectory", false, e.to_string()),
        }
    }
    check("generic-trajectory", worst <= 1e-4, format!("max relative difference {worst:.2e}"))
}

pub fn run_checks() -> Vec<Check> {
    vec![quadrature(), erf_envelope(), parseval(), poisson(), resolution(), generic_path()]
}
