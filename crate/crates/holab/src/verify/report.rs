//! Structured pass/fail reports for the executable checks.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct PointResidual {
    pub label: String,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check_name: String,
    pub points_sampled: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub details: Vec<PointResidual>,
}

impl CheckReport {
    /// Assemble a report; `pass` is derived from the residuals so the two
    /// can never disagree.
    pub fn new(
        check_name: impl Into<String>,
        points_sampled: usize,
        tolerance: f64,
        details: Vec<PointResidual>,
    ) -> Self {
        let max_residual = details.iter().map(|d| d.residual).fold(0.0, f64::max);
        CheckReport {
            check_name: check_name.into(),
            points_sampled,
            max_residual,
            tolerance,
            pass: max_residual < tolerance,
            details,
        }
    }
}

pub fn point_label(u: &[f64]) -> String {
    let parts: Vec<String> = u.iter().map(|x| format!("{x:.6}")).collect();
    format!("({})", parts.join(", "))
}
