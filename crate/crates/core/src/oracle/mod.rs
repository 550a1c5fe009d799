//! Brute-force spin-chain oracle for small `N`.

mod berry;
mod eigen;
mod hamiltonian;
mod validate;

pub use berry::{
    berry_phase_loop, loop_ground_states, pancharatnam_phase, BerryLoop, LoopConfig, LoopSpan,
    MIN_LOOP_STEPS, MIN_OVERLAP,
};
pub use eigen::{ground_state, inner, spectrum, GroundState};
pub use hamiltonian::{
    build_hamiltonian, build_hamiltonian_with, check_oracle_size, rotation_diagonal,
    ChainConvention, SpinHamiltonian, MAX_ORACLE_SITES,
};
pub use validate::{
    validate_against_analytic, ValidationOutcome, ValidationRecord, GAP_PROFILE_POINTS,
    MIN_VALIDATION_FIELD, VALIDATION_THRESHOLD,
};
