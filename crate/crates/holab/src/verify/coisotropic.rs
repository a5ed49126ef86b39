//! Shape-operator symmetries of coisotropic submanifolds.
//!
//! At a coisotropic point the lifted normal fields are parallel along the
//! fibers, which forces: (1) the mixed normal curvature R̂⊥(Jη, ·) of the
//! pull-back to vanish, (2) shape-operator commutators of the pull-back to
//! kill the Hopf direction, and (3) the downstairs symmetry A_ξ Jζ = A_ζ Jξ.

use nalgebra::DVector;

use crate::crtype::{classify, CrLabel};
use crate::error::{Error, Result};
use crate::hopf;
use crate::immersion::Immersion;
use crate::submanifold::{fundamental_at, normal_curvature_from};
use crate::tol;

use super::report::{point_label, CheckReport, PointResidual};

pub const NAME: &str = "coisotropic-symmetries";

pub fn check_coisotropic_symmetries(
    imm: &Immersion,
    samples: &[Vec<f64>],
    tolerance: f64,
) -> Result<CheckReport> {
    let mut details = Vec::new();
    for u in samples {
        let cls = classify(imm, u, tol::CR_ANGLE_ANALYTIC)?;
        if !cls.is_coisotropic() {
            return Err(Error::Precondition {
                check: NAME.into(),
                point: point_label(u),
                reason: format!(
                    "not coisotropic (label {}), J(normal space) leaves the tangent space",
                    cls.label
                ),
                defect: cls.coisotropic_angle,
            });
        }

        // pull-back data: items (1) and (2)
        let pb = hopf::pullback(imm)?;
        let mut q = u.to_vec();
        q.push(0.0);
        let fd_pb = fundamental_at(&pb, &q)?;
        let nc = normal_curvature_from(&fd_pb);
        let mut r1: f64 = 0.0;
        for (idx, &(i, _)) in nc.pairs.iter().enumerate() {
            if i == 0 {
                r1 = r1.max(nc.mats[idx].amax());
            }
        }
        details.push(PointResidual {
            label: format!("{} mixed-curvature", point_label(u)),
            residual: r1,
        });

        let m = fd_pb.nu_dim();
        let mut r2: f64 = 0.0;
        for a in 0..m {
            for b in (a + 1)..m {
                let comm = &fd_pb.shape[a] * &fd_pb.shape[b] - &fd_pb.shape[b] * &fd_pb.shape[a];
                // column of the Hopf direction (frame index 0)
                let col = comm.column(0);
                r2 = r2.max(col.amax());
            }
        }
        details.push(PointResidual {
            label: format!("{} hopf-commutator", point_label(u)),
            residual: r2,
        });

        // downstairs item (3): A_ξ Jζ = A_ζ Jξ
        let fd = fundamental_at(imm, u)?;
        let frame = &fd.frame;
        let space = frame.space;
        let mut r3: f64 = 0.0;
        let mut magnitude: f64 = 0.0;
        for a in 0..m {
            for b in (a + 1)..m {
                let ja = frame.tangent_coords(&space.apply_j(&frame.normal[a]));
                let jb = frame.tangent_coords(&space.apply_j(&frame.normal[b]));
                let ea = unit(m, a);
                let eb = unit(m, b);
                let lhs = fd.shape_for(&ea) * &jb;
                let rhs = fd.shape_for(&eb) * &ja;
                magnitude = magnitude.max(lhs.amax()).max(rhs.amax());
                r3 = r3.max((lhs - rhs).amax());
            }
        }
        details.push(PointResidual {
            label: format!("{} shape-symmetry (terms up to {magnitude:.3})", point_label(u)),
            residual: r3,
        });
        if cls.label == CrLabel::Coisotropic && m == 1 {
            // rank-one normal bundle: items hold with a single direction
            details.push(PointResidual {
                label: format!("{} rank-one", point_label(u)),
                residual: 0.0,
            });
        }
    }
    Ok(CheckReport::new(NAME, samples.len(), tolerance, details))
}

fn unit(m: usize, a: usize) -> DVector<f64> {
    let mut v = DVector::zeros(m);
    v[a] = 1.0;
    v
}
