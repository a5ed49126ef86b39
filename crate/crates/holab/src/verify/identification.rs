//! Identification of the downstairs and pull-back normal holonomy on
//! coisotropic submanifolds.
//!
//! A downstairs loop transport is computed by transporting along the
//! horizontal lift and undoing the lift phase algebraically. On a
//! coisotropic submanifold the same matrix must arise from transporting
//! along the lift and then *integrating* the transport equation down the
//! vertical fiber arc; the two routes share no code beyond the integrator.

use crate::crtype::classify;
use crate::error::{Error, Result};
use crate::holonomy::{loop_transport, loop_transport_fiber_closed, ParamCurve, TransportOptions};
use crate::immersion::{Chart, Immersion};
use crate::tol;

use super::report::{point_label, CheckReport, PointResidual};

pub const NAME: &str = "holonomy-identification";

pub fn check_holonomy_identification(
    imm: &Immersion,
    loops: &[ParamCurve],
    tolerance: f64,
    opts: TransportOptions,
) -> Result<CheckReport> {
    if imm.chart() != Chart::TotalSpace {
        return Err(Error::Precondition {
            check: NAME.into(),
            point: "-".into(),
            reason: "requires a curved model (the flat model has no fibration)".into(),
            defect: 0.0,
        });
    }
    let mut details = Vec::new();
    for (li, lp) in loops.iter().enumerate() {
        let start = lp.start();
        let cls = classify(imm, &start, tol::CR_ANGLE_ANALYTIC)?;
        if !cls.is_coisotropic() {
            return Err(Error::Precondition {
                check: NAME.into(),
                point: point_label(&start),
                reason: format!("not coisotropic (label {})", cls.label),
                defect: cls.coisotropic_angle,
            });
        }
        let downstairs = loop_transport(imm, lp, opts)?;
        let fiber_closed = loop_transport_fiber_closed(imm, lp, opts)?;
        let residual = (&downstairs.matrix - &fiber_closed.matrix).amax();
        details.push(PointResidual {
            label: format!(
                "loop {li} at {} (lift phase {:.6})",
                point_label(&start),
                downstairs.phase
            ),
            residual,
        });
    }
    Ok(CheckReport::new(NAME, loops.len(), tolerance, details))
}
