//! Gaussian-process regression on embedded (and mixed) inputs.

mod fit;
mod gp;
mod kernel;

pub use fit::{fit_gp, FitConfig, FitResult, HyperparamBounds};
pub use gp::{
    featurize, kernel_matrix, layout_for, log_marginal_likelihood, log_marginal_likelihood_cached, posterior, GpModel,
    PairCache, Posterior, TrainingSet,
    JITTER_LADDER,
};
pub use kernel::{matern52_ard, mixed_kernel, FeatureLayout, GpHyperparams};
