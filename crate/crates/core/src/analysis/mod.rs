//! Replicate statistics, rate fits, the exit-angle discrepancy study and the
//! Jansen mean-dimension estimator.

mod ks;
mod poisson;
mod sobol;
mod stats;

pub use ks::{
    kolmogorov_survival, ks_distance, ks_reference_mc, ks_reference_opt, ks_statistic,
    two_sample_ks, KsReport, TwoSampleKs,
};
pub use poisson::{integrate_adaptive, poisson_cdf, poisson_kernel, terminal_angle};
pub use sobol::{
    jansen_sample, mean_dimension, refresh_unit_of, ColumnIndex, JansenSample, RefreshUnit,
    SobolReport, SyntheticFunctional,
};
pub use stats::{
    fit_loglog, mean, mse, reduction_factor, sample_variance, standard_error, LogLogFit, Ratio,
    ReplicateSummary, MIN_FIT_N,
};
