//! The BO loop, run records, model-fit diagnostics and dictionary-size sweeps.

mod ablation;
mod bo;
mod diagnostics;
mod record;

pub use ablation::{dictionary_ablation, median, AblationEntry};
pub use bo::{embedded_cardinality_bound, run_bodi, run_bodi_observed, splitmix64, sub_seed, BoConfig, IterationState};
pub use diagnostics::{diagnostics_on, model_diagnostics, DiagnosticReport, DiagnosticRow};
pub use record::{BetaEntry, RunEvent, RunRecord, RunRow, RunSummary};
