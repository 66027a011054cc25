//! Simulation of quantum FAST CARS and quantum femtosecond Raman spectra
//! (QFRS) probed by entangled photon pairs.
//!
//! Energies are in eV, times in fs, and phases are `E·t/ħ`.

// `!(a < b)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod molecular;
pub mod numerics;
pub mod photon;
pub mod signal;
pub mod units;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/conventions.md")]
    mod conventions {}
    #[doc = include_str!("../../../book/src/probes.md")]
    mod probes {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/fastcars.md")]
    mod fastcars {}
    #[doc = include_str!("../../../book/src/qfrs.md")]
    mod qfrs {}
    #[doc = include_str!("../../../book/src/grids.md")]
    mod grids {}
}
