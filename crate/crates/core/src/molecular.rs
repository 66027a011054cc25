//! Ground-state vibrational coherences and excited-state vibronic coherences.
//!
//! Vibronic branches are described by their derived parameters only: the
//! effective gap to the prepared state, the Franck–Condon strength `F` of the
//! high-frequency mode, and the Gaussian dephasing rate `D` from the
//! low-frequency bath. The `n`-th harmonic of a branch evolves as
//!
//! ```text
//! ρ⁽ⁿ⁾(t) = ρ(0) · S_n · exp(−i(ω_gap + n·v_h)t/ħ − D t²),   S_n = e^{−F} Fⁿ / n!
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::numerics::HermiteTable;
use crate::units::{wavenumber_to_ev, HBAR};

/// Tail mass of the Franck–Condon distribution allowed beyond `n_max`.
pub const TRUNCATION_BUDGET: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VibrationalMode {
    #[serde(default)]
    pub label: String,
    /// Mode frequency (eV).
    pub omega: f64,
    /// Dephasing rate (eV); the coherence decays as `e^{−γt/ħ}`.
    pub gamma: f64,
    /// Raman polarizability weight.
    pub alpha: Complex64,
    /// Initial coherence ρ_bg(0).
    pub rho0: Complex64,
}

impl VibrationalMode {
    /// Mode with unit polarizability and unit initial coherence.
    pub fn new(label: impl Into<String>, omega: f64, gamma: f64) -> Self {
        VibrationalMode {
            label: label.into(),
            omega,
            gamma,
            alpha: Complex64::new(1.0, 0.0),
            rho0: Complex64::new(1.0, 0.0),
        }
    }

    /// Same as [`VibrationalMode::new`] with frequency and dephasing in cm⁻¹.
    pub fn from_wavenumbers(label: impl Into<String>, omega_cm: f64, gamma_cm: f64) -> Self {
        Self::new(label, wavenumber_to_ev(omega_cm), wavenumber_to_ev(gamma_cm))
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.omega > 0.0 && self.omega.is_finite(), "omega", self.omega, "mode frequency must be positive")?;
        ensure(self.gamma >= 0.0 && self.gamma.is_finite(), "gamma", self.gamma, "dephasing must be non-negative")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VibrationalModeSet {
    pub modes: Vec<VibrationalMode>,
    /// Number of molecules; only ever a constant prefactor.
    pub n_molecules: u64,
}

impl VibrationalModeSet {
    pub fn new(modes: Vec<VibrationalMode>, n_molecules: u64) -> Result<Self> {
        let set = VibrationalModeSet { modes, n_molecules };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(Error::InvalidParameter {
                name: "modes",
                value: 0.0,
                reason: "at least one vibrational mode is required",
            });
        }
        ensure(self.n_molecules > 0, "n_molecules", self.n_molecules as f64, "must be positive")?;
        for (i, m) in self.modes.iter().enumerate() {
            m.validate()?;
            if self.modes[..i].iter().any(|o| o.omega == m.omega) {
                return Err(Error::InvalidParameter {
                    name: "omega",
                    value: m.omega,
                    reason: "mode frequencies must be distinct",
                });
            }
        }
        Ok(())
    }

    /// Raman-active modes of methane: A1 at 2914 cm⁻¹ and literature values
    /// for the E (1534 cm⁻¹) and two T2 (1306, 3019 cm⁻¹) modes, each with a
    /// 1 cm⁻¹ dephasing rate.
    pub fn methane() -> Self {
        VibrationalModeSet {
            modes: vec![
                VibrationalMode::from_wavenumbers("T2(v4)", 1306.0, 1.0),
                VibrationalMode::from_wavenumbers("E", 1534.0, 1.0),
                VibrationalMode::from_wavenumbers("A1", 2914.0, 1.0),
                VibrationalMode::from_wavenumbers("T2(v3)", 3019.0, 1.0),
            ],
            n_molecules: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcitedStateBranch {
    #[serde(default)]
    pub label: String,
    /// Effective gap between the prepared state and this branch (eV).
    pub omega_gap: f64,
    /// Franck–Condon coupling strength F (dimensionless).
    pub franck_condon: f64,
    /// Gaussian dephasing rate D (fs⁻²).
    pub dephasing: f64,
    pub alpha: Complex64,
    pub rho0: Complex64,
}

impl ExcitedStateBranch {
    /// Branch with unit weights; `dephasing_time` is `D^{−1/2}` in fs.
    pub fn new(label: impl Into<String>, omega_gap: f64, franck_condon: f64, dephasing_time: f64) -> Self {
        ExcitedStateBranch {
            label: label.into(),
            omega_gap,
            franck_condon,
            dephasing: 1.0 / (dephasing_time * dephasing_time),
            alpha: Complex64::new(1.0, 0.0),
            rho0: Complex64::new(1.0, 0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.omega_gap.is_finite(), "omega_gap", self.omega_gap, "must be finite")?;
        ensure(
            self.franck_condon >= 0.0 && self.franck_condon.is_finite(),
            "franck_condon",
            self.franck_condon,
            "must be non-negative",
        )?;
        ensure(self.dephasing >= 0.0 && self.dephasing.is_finite(), "dephasing", self.dephasing, "must be non-negative")
    }

    /// Energy (eV) of the `n`-th harmonic, `ω_gap + n·v_h`.
    pub fn harmonic_energy(&self, v_h: f64, n: usize) -> f64 {
        self.omega_gap + n as f64 * v_h
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VibronicModel {
    pub branches: Vec<ExcitedStateBranch>,
    /// High-frequency vibrational quantum (eV).
    pub v_h: f64,
    /// Highest harmonic kept in every branch sum.
    pub n_max: usize,
}

impl VibronicModel {
    /// Builds the model, choosing `n_max` from the truncation budget when not given.
    pub fn new(branches: Vec<ExcitedStateBranch>, v_h: f64, n_max: Option<usize>) -> Result<Self> {
        let required = branches
            .iter()
            .map(|b| required_harmonics(b.franck_condon))
            .max()
            .unwrap_or(0);
        let model = VibronicModel {
            branches,
            v_h,
            n_max: n_max.unwrap_or(required),
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.v_h > 0.0 && self.v_h.is_finite(), "v_h", self.v_h, "must be positive")?;
        if self.branches.is_empty() {
            return Err(Error::InvalidParameter {
                name: "branches",
                value: 0.0,
                reason: "at least one excited-state branch is required",
            });
        }
        for b in &self.branches {
            b.validate()?;
            if franck_condon_tail(b.franck_condon, self.n_max) >= TRUNCATION_BUDGET {
                return Err(Error::InvalidParameter {
                    name: "n_max",
                    value: self.n_max as f64,
                    reason: "Franck-Condon tail beyond n_max exceeds 1e-6",
                });
            }
        }
        Ok(())
    }

    /// Two branches with gaps 1.8 and 1.4 eV (excited states at 5.3 and 5.7 eV
    /// below a 7.1 eV prepared state), v_h = 0.26 eV, F = 2.2 and 1.3,
    /// D^{−1/2} = 30 and 20 fs: the 4-amino-4'-nitrostilbene parameter set.
    pub fn nitrostilbene() -> Self {
        Self::new(
            vec![
                ExcitedStateBranch::new("e1", 7.1 - 5.3, 2.2, 30.0),
                ExcitedStateBranch::new("e2", 7.1 - 5.7, 1.3, 20.0),
            ],
            0.26,
            None,
        )
        .expect("preset parameters are valid")
    }
}

/// Smallest `n_max` with Franck–Condon tail mass below the truncation budget.
pub fn required_harmonics(f: f64) -> usize {
    (0..)
        .find(|&n| franck_condon_tail(f, n) < TRUNCATION_BUDGET)
        .expect("Poisson tail vanishes")
}

/// `Σ_{n > n_max} S_n`, summed directly to avoid cancellation against 1.
pub fn franck_condon_tail(f: f64, n_max: usize) -> f64 {
    let mut tail = 0.0;
    let mut n = n_max + 1;
    loop {
        let term = franck_condon_weight(f, n);
        tail += term;
        // Terms decrease geometrically once n exceeds F.
        if (n as f64) > f && term < 1e-18 * tail.max(1e-300) || term == 0.0 && (n as f64) > f {
            return tail;
        }
        n += 1;
    }
}

/// Poisson Franck–Condon factor `S_n = e^{−F} Fⁿ / n!`.
pub fn franck_condon_weight(f: f64, n: usize) -> f64 {
    if f == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if n <= 20 {
        let factorial: f64 = (1..=n).map(|k| k as f64).product();
        (-f).exp() * f.powi(n as i32) / factorial
    } else {
        let ln_factorial: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
        (-f + n as f64 * f.ln() - ln_factorial).exp()
    }
}

/// `ρ_bg(t) = ρ_bg(0) e^{−(iω + γ)t/ħ}`. Negative times are clamped to 0.
pub fn vibrational_coherence(mode: &VibrationalMode, t: f64) -> Complex64 {
    let t = t.max(0.0);
    mode.rho0 * (Complex64::new(-mode.gamma, -mode.omega) * (t / HBAR)).exp()
}

/// `ρ⁽ⁿ⁾(t)` of one branch.
pub fn vibronic_coherence_harmonic(branch: &ExcitedStateBranch, v_h: f64, n: usize, t: f64) -> Complex64 {
    branch.rho0
        * franck_condon_weight(branch.franck_condon, n)
        * harmonic_propagator(branch, v_h, n, t)
}

/// `exp(−i(ω_gap + n v_h)t/ħ − D t²)`, valid for any real `t`.
pub(crate) fn harmonic_propagator(branch: &ExcitedStateBranch, v_h: f64, n: usize, t: f64) -> Complex64 {
    let phase = -branch.harmonic_energy(v_h, n) * t / HBAR;
    Complex64::from_polar((-branch.dephasing * t * t).exp(), phase)
}

/// Electronic coherence `Σ_{n ≤ n_max} ρ⁽ⁿ⁾(t)`.
pub fn total_vibronic_coherence(branch: &ExcitedStateBranch, v_h: f64, n_max: usize, t: f64) -> Complex64 {
    (0..=n_max)
        .map(|n| vibronic_coherence_harmonic(branch, v_h, n, t))
        .sum()
}

/// A coherence as a function of delay, either one closed-form vibronic
/// harmonic or samples on a uniform time grid.
#[derive(Debug, Clone)]
pub enum CoherenceTrajectory {
    ClosedForm {
        branch: ExcitedStateBranch,
        v_h: f64,
        harmonic: usize,
    },
    Sampled(HermiteTable),
}

impl CoherenceTrajectory {
    pub fn closed_form(branch: &ExcitedStateBranch, v_h: f64, harmonic: usize) -> Self {
        CoherenceTrajectory::ClosedForm {
            branch: branch.clone(),
            v_h,
            harmonic,
        }
    }

    /// Samples `values` at `start + k·step` (fs), interpolated with cubic Hermite splines.
    pub fn sampled(start: f64, step: f64, values: Vec<Complex64>) -> Result<Self> {
        ensure(step > 0.0 && step.is_finite(), "step", step, "time step must be positive")?;
        if values.len() < 2 {
            return Err(Error::InvalidAxis("a sampled trajectory needs at least two points".into()));
        }
        Ok(CoherenceTrajectory::Sampled(HermiteTable::from_samples(start, step, values)))
    }

    /// Value at time `t` (fs). Closed forms are evaluated for any real `t`;
    /// sampled trajectories vanish outside their grid.
    pub fn value_at(&self, t: f64) -> Complex64 {
        match self {
            CoherenceTrajectory::ClosedForm { branch, v_h, harmonic } => {
                branch.rho0
                    * franck_condon_weight(branch.franck_condon, *harmonic)
                    * harmonic_propagator(branch, *v_h, *harmonic, t)
            }
            CoherenceTrajectory::Sampled(table) => table.eval(t),
        }
    }

    /// Time interval (fs) carrying the trajectory, `None` when unbounded.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            CoherenceTrajectory::ClosedForm { branch, .. } if branch.dephasing > 0.0 => {
                let w = (1e12f64.ln() / branch.dephasing).sqrt();
                Some((-w, w))
            }
            CoherenceTrajectory::ClosedForm { .. } => None,
            CoherenceTrajectory::Sampled(table) => Some((table.start(), table.end())),
        }
    }
}
