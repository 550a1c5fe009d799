//! Geometric phase of the transverse-field XY spin chain through a linear
//! field quench.
//!
//! * [`model`]: closed-form mode grid, Bogoliubov angle, gap and phases.
//! * [`dynamics`]: two-level pair evolution, Landau–Zener kink counting,
//!   Kibble–Zurek fits and the final-state phase.
//! * [`oracle`]: the spin Hamiltonian built directly in the `2^N` space and a
//!   discretized Berry-phase loop used to check the closed forms.

pub mod dynamics;
pub mod error;
pub mod model;
pub mod oracle;
pub mod summation;

pub use dynamics::{DefectReport, IntegratorConfig, KinkMethod, ModeState, PairCounting};
pub use error::{Error, Result};
pub use model::{ChainSpec, ModeGrid, PhaseConvention, PhaseReport, QuenchSchedule};
pub use oracle::{ChainConvention, LoopConfig, LoopSpan, ValidationOutcome, ValidationRecord};
