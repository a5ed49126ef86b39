//! The nullity identity of complex submanifolds.
//!
//! Whenever a unit tangent X is annihilated by every shape operator, the
//! Ricci equation collapses to R⊥(X, JX)ξ = −(c/2) Jξ: the complex
//! structure of the normal bundle is itself a curvature operator, and so
//! belongs to the holonomy algebra.

use nalgebra::{DMatrix, DVector};

use crate::crtype::{classify, CrLabel};
use crate::error::{Error, Result};
use crate::immersion::Immersion;
use crate::submanifold::{fundamental_at, normal_curvature_from};
use crate::tol;

use super::report::{point_label, CheckReport, PointResidual};

pub const NAME: &str = "complex-nullity";

pub struct NullityOutcome {
    pub report: CheckReport,
    /// Relative nullity index per sample.
    pub nullity: Vec<usize>,
    /// True when no sample had nullity directions (identity not exercised).
    pub vacuous: bool,
}

pub fn check_complex_nullity(
    imm: &Immersion,
    samples: &[Vec<f64>],
    tolerance: f64,
) -> Result<NullityOutcome> {
    let mut details = Vec::new();
    let mut nullity = Vec::new();
    let mut any = false;
    for u in samples {
        let cls = classify(imm, u, tol::CR_ANGLE_ANALYTIC)?;
        if cls.label != CrLabel::Complex {
            return Err(Error::Precondition {
                check: NAME.into(),
                point: point_label(u),
                reason: format!("not a complex submanifold point (label {})", cls.label),
                defect: cls.angles.last().copied().unwrap_or(0.0),
            });
        }
        let fd = fundamental_at(imm, u)?;
        let frame = &fd.frame;
        let space = frame.space;
        let k = frame.tangent_dim();
        let m = frame.nu_dim();

        // common kernel of the shape operators from the stacked SVD
        let mut stacked = DMatrix::zeros(k * m.max(1), k);
        for (a, s) in fd.shape.iter().enumerate() {
            stacked.view_mut((a * k, 0), (k, k)).copy_from(s);
        }
        let svd = stacked.svd(false, true);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let vt = svd.v_t.unwrap();
        let mut kernel: Vec<DVector<f64>> = Vec::new();
        for (i, s) in svd.singular_values.iter().enumerate() {
            if *s < (1e-8 * smax).max(1e-10) {
                kernel.push(vt.row(i).transpose());
            }
        }
        // an all-zero stack means every direction is a nullity direction
        if smax < 1e-10 {
            kernel = (0..k)
                .map(|i| {
                    let mut v = DVector::zeros(k);
                    v[i] = 1.0;
                    v
                })
                .collect();
        }
        let mu = kernel.len();
        nullity.push(mu);
        if mu == 0 {
            details.push(PointResidual {
                label: format!("{} nullity 0 (vacuous)", point_label(u)),
                residual: 0.0,
            });
            continue;
        }
        any = true;

        let nc = normal_curvature_from(&fd);
        let c_half = space.c() / 2.0;
        let mut res: f64 = 0.0;
        for x in &kernel {
            let x_amb = frame.tangent_from_coords(x);
            let jx = frame.tangent_coords(&space.apply_j(&x_amb));
            let r = nc.r_perp_coords(x, &jx);
            for a in 0..m {
                let xi = &frame.normal[a];
                let mut lhs = frame.normal_from_coords(&r.column(a).clone_owned());
                lhs.axpy(c_half, &space.apply_j(xi), 1.0);
                res = res.max(lhs.norm());
            }
        }
        details.push(PointResidual {
            label: format!("{} nullity {mu}", point_label(u)),
            residual: res,
        });
    }
    Ok(NullityOutcome {
        report: CheckReport::new(NAME, samples.len(), tolerance, details),
        nullity,
        vacuous: !any,
    })
}
