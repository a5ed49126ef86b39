//! The complex structure intertwines normal and tangent holonomy on
//! Lagrangian submanifolds: τ⊥ ∘ J = J ∘ τ^tan around every loop.

use nalgebra::DMatrix;

use crate::crtype::{classify, CrLabel};
use crate::error::{Error, Result};
use crate::holonomy::{loop_transport, loop_transport_tangent, ParamCurve, TransportOptions};
use crate::immersion::Immersion;
use crate::tol;

use super::report::{point_label, CheckReport, PointResidual};

pub const NAME: &str = "lagrangian-intertwiner";

pub fn check_lagrangian_intertwiner(
    imm: &Immersion,
    loops: &[ParamCurve],
    tolerance: f64,
    opts: TransportOptions,
) -> Result<CheckReport> {
    let mut details = Vec::new();
    for (li, lp) in loops.iter().enumerate() {
        let start = lp.start();
        let cls = classify(imm, &start, tol::CR_ANGLE_ANALYTIC)?;
        if cls.label != CrLabel::Lagrangian {
            return Err(Error::Precondition {
                check: NAME.into(),
                point: point_label(&start),
                reason: format!("not Lagrangian (label {})", cls.label),
                defect: cls
                    .coisotropic_angle
                    .max(std::f64::consts::FRAC_PI_2 - cls.angles.first().copied().unwrap_or(0.0)),
            });
        }
        let perp = loop_transport(imm, lp, opts)?;
        let tan = loop_transport_tangent(imm, lp, opts)?;
        let frame = &perp.frame;
        let space = frame.space;
        let m = frame.nu_dim();
        let k = frame.tangent_dim();
        // J as a map from tangent-frame to normal-frame coordinates
        let jmat = DMatrix::from_fn(m, k, |b, i| {
            space.inner_unchecked(&space.apply_j(&frame.tangent[i]), &frame.normal[b])
        });
        let residual = (&perp.matrix * &jmat - &jmat * &tan.matrix).norm();
        details.push(PointResidual {
            label: format!("loop {li} at {}", point_label(&start)),
            residual,
        });
    }
    Ok(CheckReport::new(NAME, loops.len(), tolerance, details))
}
