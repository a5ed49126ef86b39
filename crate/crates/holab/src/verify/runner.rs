//! Named check registry: runs checks against catalog entries with
//! deterministic inputs, for the CLI and the acceptance suite.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::catalog::{CatalogEntry, ReductionExpectation};
use crate::error::{Error, Result};
use crate::holonomy::{HolonomyConfig, ParamCurve, TransportOptions};
use crate::hopf;
use crate::tol;

use super::coisotropic::check_coisotropic_symmetries;
use super::curve_pullback::check_curve_pullback;
use super::identification::check_holonomy_identification;
use super::intertwiner::check_lagrangian_intertwiner;
use super::nullity::check_complex_nullity;
use super::reduction::check_reduction_conditions;
use super::report::{point_label, CheckReport, PointResidual};
use super::splitting::check_totally_real_splitting;

pub const CHECK_NAMES: [&str; 8] = [
    "coisotropic-symmetries",
    "complex-nullity",
    "curve-pullback",
    "holonomy-identification",
    "lagrangian-intertwiner",
    "lift-identities",
    "reduction-conditions",
    "totally-real-splitting",
];

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Override of the per-check default tolerance.
    pub tolerance: Option<f64>,
    pub steps: usize,
    pub seed: u64,
    pub samples: usize,
    pub loops: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { tolerance: None, steps: 192, seed: 7, samples: 3, loops: 8 }
    }
}

pub fn default_tolerance(check: &str) -> f64 {
    match check {
        "curve-pullback" => 1e-7,
        "lagrangian-intertwiner" | "holonomy-identification" => 1e-5,
        _ => tol::CHECK_ANALYTIC,
    }
}

/// Outcome of running one named check on one entry.
#[derive(Clone, Debug)]
pub enum CheckOutcome {
    Report(CheckReport),
    /// The check does not apply to the entry (precondition or missing data).
    Skipped { check: String, reason: String },
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        match self {
            CheckOutcome::Report(r) => r.pass,
            CheckOutcome::Skipped { .. } => true,
        }
    }
}

/// Deterministic loops in the entry's parameter box: coordinate-plane
/// plaquettes of varying size and corner, interleaved with random triangle
/// loops. Empty for one-parameter entries.
pub fn standard_loops(entry: &CatalogEntry, count: usize, seed: u64) -> Vec<ParamCurve> {
    let k = entry.param_dim;
    if k < 2 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x10095);
    let mut loops = Vec::with_capacity(count);
    for idx in 0..count {
        let i = idx % k;
        let j = (idx / k + 1 + i) % k;
        let (i, j) = if i == j { (0, 1) } else { (i.min(j), i.max(j)) };
        if idx % 2 == 0 {
            let side = 0.2 + 0.15 * ((idx / 2) % 3) as f64;
            let mut corner = entry.base_point.clone();
            for (c, h) in corner.iter_mut().zip(&entry.domain_halfwidth) {
                *c += rng.gen_range(-0.3..0.3) * h;
            }
            loops.push(ParamCurve::rectangle_corner(
                &corner,
                i,
                j,
                side * entry.domain_halfwidth[i].min(entry.domain_halfwidth[j]),
            ));
        } else {
            let vertex = |rng: &mut ChaCha8Rng| -> Vec<f64> {
                entry
                    .base_point
                    .iter()
                    .zip(&entry.domain_halfwidth)
                    .map(|(b, h)| b + rng.gen_range(-0.6..0.6) * h)
                    .collect()
            };
            let a = entry.base_point.clone();
            let b = vertex(&mut rng);
            let c = vertex(&mut rng);
            loops.push(ParamCurve::polyline(vec![a.clone(), b, c, a]));
        }
    }
    loops
}

/// Sample points: the base point plus deterministic draws from the box.
pub fn standard_samples(entry: &CatalogEntry, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut samples = vec![entry.base_point.clone()];
    samples.extend(entry.sample_points(count.saturating_sub(1), seed ^ 0x5a17));
    samples
}

/// Run a named check; precondition failures and missing data surface as
/// errors (the caller asked for this specific check).
pub fn run_check_strict(
    entry: &CatalogEntry,
    check: &str,
    cfg: &VerifyConfig,
) -> Result<CheckOutcome> {
    let imm = entry.immersion();
    let tolerance = cfg.tolerance.unwrap_or_else(|| default_tolerance(check));
    let opts = TransportOptions { steps: cfg.steps };
    let samples = standard_samples(entry, cfg.samples, cfg.seed);
    match check {
        "coisotropic-symmetries" => {
            check_coisotropic_symmetries(&imm, &samples, tolerance).map(CheckOutcome::Report)
        }
        "complex-nullity" => check_complex_nullity(&imm, &samples, tolerance)
            .map(|o| CheckOutcome::Report(o.report)),
        "curve-pullback" => check_curve_pullback(&imm, &samples, tolerance, 1e-4)
            .map(|o| CheckOutcome::Report(o.report)),
        "holonomy-identification" => {
            let loops = standard_loops(entry, cfg.loops, cfg.seed);
            if loops.is_empty() {
                return Err(Error::Precondition {
                    check: check.into(),
                    point: point_label(&entry.base_point),
                    reason: "no two-dimensional loop space".into(),
                    defect: entry.param_dim as f64,
                });
            }
            check_holonomy_identification(&imm, &loops, tolerance, opts).map(CheckOutcome::Report)
        }
        "lagrangian-intertwiner" => {
            let loops = standard_loops(entry, cfg.loops, cfg.seed);
            if loops.is_empty() {
                return Err(Error::Precondition {
                    check: check.into(),
                    point: point_label(&entry.base_point),
                    reason: "no two-dimensional loop space".into(),
                    defect: entry.param_dim as f64,
                });
            }
            check_lagrangian_intertwiner(&imm, &loops, tolerance, opts).map(CheckOutcome::Report)
        }
        "lift-identities" => {
            if !entry.space.is_curved() {
                return Err(Error::Precondition {
                    check: check.into(),
                    point: point_label(&entry.base_point),
                    reason: "flat model has no fibration".into(),
                    defect: 0.0,
                });
            }
            let mut details = Vec::new();
            for u in &samples {
                let rep = hopf::check_lift_identities(&imm, u, 1e-5)?;
                for (name, value) in rep.named() {
                    details.push(PointResidual {
                        label: format!("{} {name}", point_label(u)),
                        residual: value,
                    });
                }
            }
            Ok(CheckOutcome::Report(CheckReport::new(
                check,
                samples.len(),
                tolerance,
                details,
            )))
        }
        "reduction-conditions" => {
            if entry.w0_candidates.is_empty() {
                return Err(Error::InvalidInput(
                    "entry declares no candidate subbundles".into(),
                ));
            }
            let mut details = Vec::new();
            for cand in &entry.w0_candidates {
                let out = check_reduction_conditions(&imm, cand, &samples, tolerance, 1e-6)?;
                let expected_ok = match cand.expected {
                    ReductionExpectation::ComplexReduction => out.parallel && out.condition1,
                    ReductionExpectation::TotallyRealReduction => out.parallel && out.condition2,
                    ReductionExpectation::Neither => {
                        out.parallel && !out.condition1 && !out.condition2
                    }
                };
                details.extend(out.report.details);
                details.push(PointResidual {
                    label: format!(
                        "candidate {} expectation {:?} (condition1 {}, condition2 {})",
                        cand.name, cand.expected, out.condition1, out.condition2
                    ),
                    residual: if expected_ok { 0.0 } else { 1.0 },
                });
            }
            Ok(CheckOutcome::Report(CheckReport::new(
                check,
                samples.len(),
                tolerance,
                details,
            )))
        }
        "totally-real-splitting" => {
            let Some(chain) = &entry.chain else {
                return Err(Error::InvalidInput("entry declares no ambient chain".into()));
            };
            let hol_cfg =
                HolonomyConfig { seed: cfg.seed, steps: cfg.steps, ..Default::default() };
            check_totally_real_splitting(&imm, chain, &samples, tolerance, &hol_cfg)
                .map(|o| CheckOutcome::Report(o.report))
        }
        other => Err(Error::NotFound(format!("check `{other}`"))),
    }
}

/// Run a named check, treating inapplicability (failed preconditions,
/// missing chain or candidate data) as a skip. Used by `verify all`.
pub fn run_check(entry: &CatalogEntry, check: &str, cfg: &VerifyConfig) -> Result<CheckOutcome> {
    match run_check_strict(entry, check, cfg) {
        Ok(o) => Ok(o),
        Err(Error::Precondition { check, point, reason, defect }) => Ok(CheckOutcome::Skipped {
            check,
            reason: format!("precondition failed at {point}: {reason} (defect {defect:.6e})"),
        }),
        Err(Error::InvalidInput(reason)) => {
            Ok(CheckOutcome::Skipped { check: check.into(), reason })
        }
        Err(e) => Err(e),
    }
}

/// Run every registered check on the entry; checks execute concurrently and
/// results are reported in registry order.
pub fn run_all(entry: &CatalogEntry, cfg: &VerifyConfig) -> Vec<(String, Result<CheckOutcome>)> {
    CHECK_NAMES
        .par_iter()
        .map(|name| (name.to_string(), run_check(entry, name, cfg)))
        .collect()
}
