//! Acquisition functions and their optimisers.

mod functions;
mod local_search;
mod mixed;

pub use functions::{
    beta_schedule, ei, expected_improvement, normal_cdf, normal_pdf, ucb_value, AcquisitionKind, AcquisitionSpec,
};
pub use local_search::{
    climb, generate_initial_candidates, local_search_discrete, spray_point, AcquisitionEvaluator, LocalSearchConfig,
    LocalSearchResult, ModelAcquisition,
};
pub use mixed::{alternate, optimize_acquisition, optimize_continuous, optimize_mixed, AcquisitionOptimum};
