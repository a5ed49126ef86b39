//! Shape matrices of pulled-back curves.
//!
//! For a curve in CPⁿ the pull-back is a surface in S^{2n+1} framed by the
//! Hopf direction and the lifted unit tangent. In that frame the shape
//! operators take rigid 2×2 forms: [[0,0],[0,⟨A_ξT,T⟩]] for normals
//! orthogonal to JT, and [[0,1],[1,⟨A_{JT}T,T⟩]] for JT itself; the
//! commutators are the rotations by ⟨A_ξT,T⟩. The pull-back has flat
//! normal bundle exactly when all ⟨A_ξT,T⟩ with ξ ⊥ JT vanish, which is
//! also the condition that the curve's ambient acceleration stays in the
//! span of T and JT (a holomorphic circle).

use nalgebra::{DMatrix, DVector};

use crate::ambient::rotate_phase;
use crate::error::{Error, Result};
use crate::hopf;
use crate::immersion::{Chart, Immersion};
use crate::submanifold::{frame_at, fundamental_at, normal_curvature_from};

use super::report::{point_label, CheckReport, PointResidual};

pub const NAME: &str = "curve-pullback";

/// Fiber angle at which the pull-back data is evaluated; nonzero so the
/// comparison also exercises circle equivariance.
const THETA: f64 = 0.4;

pub struct CurvePullbackOutcome {
    pub report: CheckReport,
    /// Values of (flatness, max |⟨A_ξT,T⟩|, acceleration defect) per sample.
    pub predicates: Vec<[f64; 3]>,
}

pub fn check_curve_pullback(
    imm: &Immersion,
    samples: &[Vec<f64>],
    tolerance: f64,
    predicate_tol: f64,
) -> Result<CurvePullbackOutcome> {
    if imm.chart() != Chart::TotalSpace || imm.param_dim() != 1 {
        return Err(Error::Precondition {
            check: NAME.into(),
            point: "-".into(),
            reason: "expects a curve given by total-space representatives".into(),
            defect: imm.param_dim() as f64,
        });
    }
    let space = imm.space();
    let pb = hopf::pullback(imm)?;
    let mut details = Vec::new();
    let mut predicates = Vec::new();

    for t in samples {
        let q = vec![t[0], THETA];
        let fd = fundamental_at(&pb, &q)?;
        let frame = &fd.frame;
        debug_assert_eq!(frame.tangent_dim(), 2);
        let that = frame.tangent[1].clone();
        let jt = space.apply_j(&that);

        // normal frame starting with JT̂
        let mut normals = vec![jt.clone()];
        for cand in &frame.normal {
            let mut v = cand.clone();
            for b in &normals {
                let c = space.inner_unchecked(&v, b);
                v.axpy(-c, b, 1.0);
            }
            let n = v.norm();
            if n > 0.5 {
                normals.push(v / n);
            }
        }
        if normals.len() != frame.nu_dim() {
            return Err(Error::DegenerateImmersion {
                point: point_label(t),
                reason: "could not complete the adapted normal frame".into(),
            });
        }

        // shape matrix of the pull-back for an arbitrary normal vector
        let shape_matrix = |xi: &DVector<f64>| -> DMatrix<f64> {
            DMatrix::from_fn(2, 2, |i, j| {
                let mut alpha_ij = DVector::zeros(space.coord_dim());
                for (a, x) in frame.normal.iter().enumerate() {
                    alpha_ij.axpy(fd.alpha[a][(i, j)], x, 1.0);
                }
                space.inner_unchecked(&alpha_ij, xi)
            })
        };

        // downstairs values ⟨A_ξ T, T⟩ from the curve itself
        let fd_down = fundamental_at(imm, t)?;
        let alpha_tt = {
            let mut v = DVector::zeros(space.coord_dim());
            for (a, x) in fd_down.frame.normal.iter().enumerate() {
                v.axpy(fd_down.alpha[a][(0, 0)], x, 1.0);
            }
            v
        };
        let a_of = |xi_up: &DVector<f64>| -> f64 {
            let xi_down = rotate_phase(xi_up, -THETA);
            space.inner_unchecked(&alpha_tt, &xi_down)
        };

        let mut entry_res: f64 = 0.0;
        let b_val = a_of(&normals[0]);
        let s_jt = shape_matrix(&normals[0]);
        let expected_jt =
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, b_val]);
        entry_res = entry_res.max((s_jt.clone() - expected_jt).amax());
        let mut max_a: f64 = 0.0;
        for xi in normals.iter().skip(1) {
            let a_val = a_of(xi);
            max_a = max_a.max(a_val.abs());
            let s = shape_matrix(xi);
            let expected = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, a_val]);
            entry_res = entry_res.max((s.clone() - expected).amax());
            let comm = &s * &s_jt - &s_jt * &s;
            let expected_comm =
                DMatrix::from_row_slice(2, 2, &[0.0, -a_val, a_val, 0.0]);
            entry_res = entry_res.max((comm - expected_comm).amax());
        }
        details.push(PointResidual {
            label: format!("{} shape-matrices", point_label(t)),
            residual: entry_res,
        });

        // the three equivalent flatness predicates, computed independently
        let flatness = normal_curvature_from(&fd).total_norm();
        let accel = {
            let jet = imm.jet(t);
            let zdot = &jet.jac[0];
            let zdd = &jet.hess[0][0];
            let phi_rate = hopf::phase_rate(&space, &jet.point, zdot);
            let mut acc = zdd + space.apply_j(zdot) * (2.0 * phi_rate);
            let down = frame_at(imm, t)?;
            let tvec = &down.tangent[0];
            let jtvec = space.apply_j(tvec);
            let z = &jet.point;
            let jz = space.apply_j(z);
            for b in [z, &jz, tvec, &jtvec] {
                let c = space.inner_unchecked(&acc, b) / space.norm2(b);
                acc.axpy(-c, b, 1.0);
            }
            acc.norm() / space.norm2(zdot).abs()
        };
        predicates.push([flatness, max_a, accel]);
        let agree = [flatness, max_a, accel]
            .iter()
            .map(|v| *v < predicate_tol)
            .collect::<Vec<_>>();
        let mismatch = !(agree.iter().all(|x| *x) || agree.iter().all(|x| !*x));
        details.push(PointResidual {
            label: format!(
                "{} predicates flat={flatness:.3e} shape={max_a:.3e} accel={accel:.3e}",
                point_label(t)
            ),
            residual: if mismatch { 1.0 } else { 0.0 },
        });
    }

    Ok(CurvePullbackOutcome {
        report: CheckReport::new(NAME, samples.len(), tolerance, details),
        predicates,
    })
}
