//! Unit conventions.
//!
//! Every public interface takes energies in eV and times in fs. Phases are
//! formed as `E * t / HBAR`, so an energy `E` corresponds to the angular
//! frequency `E / HBAR` in rad/fs.

/// Reduced Planck constant in eV·fs.
pub const HBAR: f64 = 0.658_211_956_9;

/// eV per cm⁻¹.
pub const EV_PER_WAVENUMBER: f64 = 1.0 / 8065.544;

/// Bundles the fixed constants for callers that want them as a value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub hbar: f64,
    pub ev_per_wavenumber: f64,
}

impl UnitSystem {
    pub const STANDARD: UnitSystem = UnitSystem {
        hbar: HBAR,
        ev_per_wavenumber: EV_PER_WAVENUMBER,
    };
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::STANDARD
    }
}

pub fn wavenumber_to_ev(k: f64) -> f64 {
    k * EV_PER_WAVENUMBER
}

pub fn ev_to_wavenumber(e: f64) -> f64 {
    e / EV_PER_WAVENUMBER
}

/// Angular frequency (rad/fs) of an energy in eV.
pub fn angular_frequency(e: f64) -> f64 {
    e / HBAR
}

/// Oscillation period in fs of an energy in eV.
pub fn period(e: f64) -> f64 {
    2.0 * std::f64::consts::PI * HBAR / e
}
