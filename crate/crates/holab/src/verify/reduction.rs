//! Reduction-of-codimension conditions for totally real submanifolds.
//!
//! A parallel subbundle W₀ of the normal bundle reduces the codimension in
//! two ways: if TM ⊕ W₀ is J-invariant the submanifold sits in a totally
//! geodesic complex space form; if W₀ contains the first normal space and
//! W₀ ⊥ J(TM ⊕ W₀) it sits in a totally real totally geodesic one. The
//! check verifies parallelism of a candidate and reports which condition
//! (if either) holds.

use nalgebra::{DMatrix, DVector};

use crate::catalog::W0Candidate;
use crate::crtype::classify;
use crate::error::{Error, Result};
use crate::immersion::Immersion;
use crate::linalg;
use crate::submanifold::{field_normal_derivative, fundamental_at, FieldDirection};
use crate::tol;

use super::report::{point_label, CheckReport, PointResidual};

pub const NAME: &str = "reduction-conditions";

pub struct ReductionOutcome {
    pub report: CheckReport,
    pub parallel: bool,
    pub condition1: bool,
    pub condition2: bool,
}

pub fn check_reduction_conditions(
    imm: &Immersion,
    candidate: &W0Candidate,
    samples: &[Vec<f64>],
    tolerance: f64,
    angle_tol: f64,
) -> Result<ReductionOutcome> {
    let mut details = Vec::new();
    let mut cond1_all = true;
    let mut cond2_all = true;
    let mut parallel_res: f64 = 0.0;

    for u in samples {
        let cls = classify(imm, u, tol::CR_ANGLE_ANALYTIC)?;
        if !cls.is_totally_real() {
            return Err(Error::Precondition {
                check: NAME.into(),
                point: point_label(u),
                reason: format!("not totally real (label {})", cls.label),
                defect: cls.angles.first().copied().unwrap_or(0.0),
            });
        }
        let fd = fundamental_at(imm, u)?;
        let frame = &fd.frame;
        let space = frame.space;
        let m = frame.nu_dim();

        // candidate values, checked to be a subbundle of the normal bundle
        let mut w0_ambient: Vec<DVector<f64>> = Vec::new();
        for f in &candidate.fields {
            let v = f(u);
            let p = frame.proj_normal(&v);
            if (&v - &p).norm() > 1e-6 * (1.0 + v.norm()) {
                return Err(Error::InvalidInput(format!(
                    "candidate `{}` is not a subbundle of the normal bundle at {} \
                     (projection defect {:.3e})",
                    candidate.name,
                    point_label(u),
                    (&v - &p).norm()
                )));
            }
            w0_ambient.push(p);
        }
        let coords: Vec<DVector<f64>> =
            w0_ambient.iter().map(|v| frame.normal_coords(v)).collect();
        let (w0_basis, _) = linalg::span_basis(&coords, 1e-9, 1e-12);
        let r = w0_basis.ncols();

        // parallelism: covariant derivatives of the spanning fields stay in W₀
        let proj_out = |c: &DVector<f64>| -> f64 {
            (c - &w0_basis * (w0_basis.transpose() * c)).norm()
        };
        for (s, f) in candidate.fields.iter().enumerate() {
            for a in 0..imm.param_dim() {
                let dir = FieldDirection::coordinate_direction(frame, a);
                let d = field_normal_derivative(frame, u, f.as_ref(), &dir, tol::FIELD_STEP);
                let res = proj_out(&frame.normal_coords(&d)) / (1.0 + f(u).norm());
                parallel_res = parallel_res.max(res);
                details.push(PointResidual {
                    label: format!("{} field {s} direction {a} parallel", point_label(u)),
                    residual: res,
                });
            }
        }

        // condition (1): J-invariance of TM ⊕ W₀
        let kt = frame.tangent_dim();
        let dim = space.coord_dim();
        let mut v_basis = DMatrix::zeros(dim, kt + r);
        for (i, e) in frame.tangent.iter().enumerate() {
            v_basis.set_column(i, e);
        }
        for c in 0..r {
            let amb = frame.normal_from_coords(&w0_basis.column(c).clone_owned());
            v_basis.set_column(kt + c, &amb);
        }
        let mut jv = DMatrix::zeros(dim, kt + r);
        for c in 0..kt + r {
            jv.set_column(c, &space.apply_j(&v_basis.column(c).clone_owned()));
        }
        let cond1_angle = linalg::containment_angle(&jv, &v_basis);
        let cond1 = cond1_angle < angle_tol;

        // condition (2): N¹ ⊂ W₀ and W₀ ⊥ J(TM ⊕ W₀)
        let mut alpha_vecs = Vec::new();
        for i in 0..kt {
            for j in i..kt {
                let mut v = DVector::zeros(dim);
                for a in 0..m {
                    v.axpy(fd.alpha[a][(i, j)], &frame.normal[a], 1.0);
                }
                alpha_vecs.push(frame.normal_coords(&v));
            }
        }
        let (n1_basis, _) = linalg::span_basis(&alpha_vecs, 1e-7, 1e-9);
        let n1_in_w0 = if n1_basis.ncols() == 0 {
            0.0
        } else {
            linalg::containment_angle(&n1_basis, &w0_basis)
        };
        let mut ortho_defect: f64 = 0.0;
        for c in 0..r {
            let w_amb = frame.normal_from_coords(&w0_basis.column(c).clone_owned());
            for q in 0..kt + r {
                let jvq = space.apply_j(&v_basis.column(q).clone_owned());
                ortho_defect = ortho_defect.max(space.inner_unchecked(&w_amb, &jvq).abs());
            }
        }
        let cond2 = n1_in_w0 < angle_tol && ortho_defect < angle_tol;

        details.push(PointResidual {
            label: format!(
                "{} condition-1 angle {cond1_angle:.3e}; condition-2 first-normal angle \
                 {n1_in_w0:.3e}, orthogonality defect {ortho_defect:.3e}",
                point_label(u)
            ),
            residual: 0.0,
        });
        cond1_all &= cond1;
        cond2_all &= cond2;
    }

    let report = CheckReport::new(
        format!("{NAME}[{}]", candidate.name),
        samples.len(),
        tolerance,
        details,
    );
    Ok(ReductionOutcome {
        parallel: parallel_res < tolerance,
        condition1: cond1_all,
        condition2: cond2_all,
        report,
    })
}
