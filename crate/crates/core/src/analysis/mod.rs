//! Quality and iteration statistics for the threshold search, and the
//! closed-form iteration model for normally distributed rows.

mod experiment;
mod metrics;
mod normal;
mod theory;

pub use experiment::{early_stop_experiment, exit_experiment, EarlyStopTrial};
pub use metrics::{
    exit_statistics, extreme_errors, hit_rate, EarlyStopStats, ExitHistogram, DENOMINATOR_FLOOR,
};
pub use normal::{normal_cdf, normal_pdf, normal_quantile};
pub use theory::{theory_report, TheoryParams, TheoryReport};
