//! Executable geometric checks with structured reports.

mod coisotropic;
mod curve_pullback;
mod identification;
mod intertwiner;
mod nullity;
mod reduction;
mod report;
mod runner;
mod splitting;

pub use coisotropic::check_coisotropic_symmetries;
pub use curve_pullback::{check_curve_pullback, CurvePullbackOutcome};
pub use identification::check_holonomy_identification;
pub use intertwiner::check_lagrangian_intertwiner;
pub use nullity::{check_complex_nullity, NullityOutcome};
pub use reduction::{check_reduction_conditions, ReductionOutcome};
pub use report::{point_label, CheckReport, PointResidual};
pub use runner::{
    default_tolerance, run_all, run_check, run_check_strict, standard_loops, standard_samples,
    CheckOutcome, VerifyConfig, CHECK_NAMES,
};
pub use splitting::{build_w, check_totally_real_splitting, SplittingOutcome};
