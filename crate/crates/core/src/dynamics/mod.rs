//! Quench dynamics: per-pair two-level evolution through the linear ramp,
//! Landau–Zener excitation, kink counting and the final-state phase.

pub mod evolve;
pub mod final_state;
pub mod fit;
pub mod integrator;
pub mod kinks;
pub mod pair;

pub use evolve::{evolve_mode, evolve_mode_detailed, Evolution, IntegratorConfig};
pub use final_state::{
    audit_closed_forms, final_phase_excluding, final_phase_one_pair, final_phase_with_defects,
    AuditRecord, ClosedFormCheck,
};
pub use fit::{fit_power_law, logspace, scaling_fit, PowerLawFit, ScalingFit, ScalingPoint};
pub use kinks::{
    kink_count, kink_count_with, lz_probability, lz_probability_xy, DefectReport, KinkMethod,
    PairCounting,
};
pub use pair::{mode_hamiltonian, ModeState};
