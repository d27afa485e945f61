//! Spectra of the Jaynes-Cummings-Kerr and two-mode Jaynes-Cummings
//! Hamiltonians in the Fock and one-variable pictures.

mod parametric;

pub mod compare;
pub mod jck;
pub mod mjc;
pub mod params;
pub mod recurrence;
pub mod report;

pub use compare::{compare_jck, compare_mjc, CompareReport, Model};
pub use parametric::ReducedOperator;
pub use params::{JCKerrParams, MJCParams};
pub use report::{jck_spectrum_report, mjc_spectrum_report, SpectrumReport};
