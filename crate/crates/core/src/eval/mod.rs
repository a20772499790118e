//! Cross-validated evaluation and the statistics used to report it.

mod cv;
mod itr;
mod metrics;
mod report;
mod ttest;

pub use cv::{fit_outer_fold, run_cv_pipeline, select_hyperparams, CvConfig, CvResult, Grid};
pub use itr::{bits_per_minute, info_per_trial, itr, ItrInput};
pub use metrics::{accuracy, kappa, Summary};
pub use report::{parse_structured, report, ReportFormat};
pub use ttest::{ln_gamma, paired_ttest_2tailed, regularized_incomplete_beta, student_t_cdf, TTest};
