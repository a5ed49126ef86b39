//! Splitting of the normal bundle for totally real submanifolds of totally
//! real totally geodesic submanifolds.
//!
//! With M ⊂ N ⊂ S_c (N totally real, totally geodesic) the normal bundle
//! splits into the parallel summands ν_N M ⊕ νN|_M. Inside the second
//! summand the smallest parallel subbundle W containing J(TM) is built by
//! iterating covariant derivatives of a J(TM) frame until the span
//! stabilizes; on νN|_M the normal curvature is (c/4)(JX ∧ JY), the
//! holonomy algebra acting on W is the full rotation algebra of W, and
//! W = J(TM) exactly for totally geodesic M.

use nalgebra::{DMatrix, DVector};

use crate::catalog::{ChainData, FieldClosure};
use crate::crtype::classify;
use crate::error::{Error, Result};
use crate::holonomy::{holonomy_algebra, HolonomyConfig};
use crate::hopf;
use crate::immersion::{Chart, Immersion};
use crate::linalg;
use crate::submanifold::{
    field_normal_derivative, fundamental_at, normal_curvature_from, FieldDirection,
    FrameData,
};
use crate::tol;

use super::report::{point_label, CheckReport, PointResidual};

pub const NAME: &str = "totally-real-splitting";

pub struct SplittingOutcome {
    pub report: CheckReport,
    pub w_rank: usize,
    pub algebra_dim: usize,
    pub stabilized: bool,
}

/// Covariant-derivative field: u ↦ ∇⊥_(coordinate a) f, projected onto the
/// normal space at u; usable as input to further derivatives.
fn derivative_field(imm: Immersion, f: FieldClosure, a: usize) -> FieldClosure {
    std::sync::Arc::new(move |u: &[f64]| {
        let delta = tol::FIELD_STEP;
        let mut up = u.to_vec();
        up[a] += delta;
        let mut um = u.to_vec();
        um[a] -= delta;
        let mut d = (f(&up) - f(&um)) / (2.0 * delta);
        let space = imm.space();
        match imm.chart() {
            Chart::TotalSpace => {
                // fiber component of the lifted coordinate direction
                let jet = imm.jet(u);
                let jz = space.apply_j(&jet.point);
                let lam = space.inner_unchecked(&jet.jac[a], &jz) / space.norm2(&jet.point);
                d.axpy(-lam, &space.apply_j(&f(u)), 1.0);
                hopf::project_normal_section(&imm, u, &d).expect("normal projection")
            }
            _ => {
                let jet = imm.jet(u);
                let kp = jet.param_dim();
                let gram = DMatrix::from_fn(kp, kp, |p, q| {
                    space.inner_unchecked(&jet.jac[p], &jet.jac[q])
                });
                let rhs = DVector::from_iterator(
                    kp,
                    jet.jac.iter().map(|c| space.inner_unchecked(&d, c)),
                );
                let coef = gram.lu().solve(&rhs).expect("singular metric");
                let mut out = d;
                for (p, c) in coef.iter().enumerate() {
                    out.axpy(-c, &jet.jac[p], 1.0);
                }
                out
            }
        }
    })
}

/// J of the horizontalized coordinate tangent fields: the generating
/// sections of J(TM).
fn j_tangent_fields(imm: &Immersion) -> Vec<FieldClosure> {
    (0..imm.param_dim())
        .map(|a| {
            let imm = imm.clone();
            let f: FieldClosure = std::sync::Arc::new(move |u: &[f64]| {
                let jet = imm.jet(u);
                let space = imm.space();
                let col = match imm.chart() {
                    Chart::Flat => jet.jac[a].clone(),
                    _ => hopf::horizontal_project(&space, &jet.point, &jet.jac[a])
                        .expect("curved chart"),
                };
                space.apply_j(&col)
            });
            f
        })
        .collect()
}

/// Build the smallest parallel subbundle containing J(TM) at `u` by
/// saturating with covariant derivatives; returns the basis in normal-frame
/// coordinates and whether the span stabilized within `max_iter` rounds.
pub fn build_w(
    imm: &Immersion,
    frame: &FrameData,
    u: &[f64],
    max_iter: usize,
    angle_tol: f64,
) -> (DMatrix<f64>, bool) {
    let mut generation = j_tangent_fields(imm);
    let mut coords: Vec<DVector<f64>> = generation
        .iter()
        .map(|f| frame.normal_coords(&f(u)))
        .collect();
    let (mut basis, _) = linalg::span_basis(&coords, 1e-8, 1e-12);
    let mut stabilized = false;
    for _ in 0..max_iter {
        let mut next = Vec::new();
        for f in &generation {
            for a in 0..imm.param_dim() {
                next.push(derivative_field(imm.clone(), f.clone(), a));
            }
        }
        let mut grew = false;
        for f in &next {
            let c = frame.normal_coords(&f(u));
            let n = c.norm();
            if n < 1e-8 {
                continue;
            }
            let out = (&c - &basis * (basis.transpose() * &c)).norm();
            if out > angle_tol.max(1e-6) * n {
                grew = true;
            }
            coords.push(c);
        }
        if !grew {
            stabilized = true;
            break;
        }
        let (b, _) = linalg::span_basis(&coords, 1e-8, 1e-12);
        basis = b;
        generation = next;
    }
    (basis, stabilized)
}

pub fn check_totally_real_splitting(
    imm: &Immersion,
    chain: &ChainData,
    samples: &[Vec<f64>],
    tolerance: f64,
    hol_cfg: &HolonomyConfig,
) -> Result<SplittingOutcome> {
    let mut details = Vec::new();
    let mut w_rank = 0;
    let mut stabilized_all = true;

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

        // the two summands, from the chain's spanning fields
        let summand = |fields: &[FieldClosure]| -> (DMatrix<f64>, f64) {
            let mut defect: f64 = 0.0;
            let coords: Vec<DVector<f64>> = fields
                .iter()
                .map(|f| {
                    let v = f(u);
                    let p = frame.proj_normal(&v);
                    defect = defect.max((&v - &p).norm() / (1.0 + v.norm()));
                    frame.normal_coords(&p)
                })
                .collect();
            let (b, _) = linalg::span_basis(&coords, 1e-9, 1e-12);
            (b, defect)
        };
        let (b1, d1) = summand(&chain.nu_in_n);
        let (b2, d2) = summand(&chain.nu_of_n);
        if b1.ncols() + b2.ncols() != m {
            return Err(Error::InvalidInput(format!(
                "chain summands span {} + {} directions, expected the full normal rank {m}",
                b1.ncols(),
                b2.ncols()
            )));
        }
        let cross = if b1.ncols() == 0 {
            0.0
        } else {
            (b1.transpose() * &b2).amax()
        };
        details.push(PointResidual {
            label: format!("{} summand decomposition", point_label(u)),
            residual: d1.max(d2).max(cross),
        });

        // (a) parallelism of the summands: mixed components of covariant
        // derivatives of the spanning fields
        let mut mixed: f64 = 0.0;
        let project_onto = |b: &DMatrix<f64>, c: &DVector<f64>| -> f64 {
            if b.ncols() == 0 {
                0.0
            } else {
                (b.transpose() * c).norm()
            }
        };
        for (fields, other) in [(&chain.nu_in_n, &b2), (&chain.nu_of_n, &b1)] {
            for f in fields.iter() {
                for a in 0..imm.param_dim() {
                    let dir = FieldDirection::coordinate_direction(frame, a);
                    let d = field_normal_derivative(frame, u, f.as_ref(), &dir, tol::FIELD_STEP);
                    mixed = mixed
                        .max(project_onto(other, &frame.normal_coords(&d)) / (1.0 + f(u).norm()));
                }
            }
        }
        details.push(PointResidual {
            label: format!("{} summand parallelism", point_label(u)),
            residual: mixed,
        });

        // (b) the smallest parallel subbundle containing J(TM)
        let (w_basis, stabilized) = build_w(imm, frame, u, 10, tol::SPAN_ANGLE);
        stabilized_all &= stabilized;
        w_rank = w_basis.ncols();
        let w_in_b2 = if b2.ncols() == 0 {
            std::f64::consts::FRAC_PI_2
        } else {
            linalg::containment_angle(&w_basis, &b2)
        };
        details.push(PointResidual {
            label: format!(
                "{} W rank {w_rank} (stabilized: {stabilized}) inside second summand",
                point_label(u)
            ),
            residual: w_in_b2,
        });

        // (c) curvature formula on the second summand
        let nc = normal_curvature_from(&fd);
        let c4 = space.c() / 4.0;
        let mut curv_res: f64 = 0.0;
        let kt = frame.tangent_dim();
        for i in 0..kt {
            for j in (i + 1)..kt {
                let jei = space.apply_j(&frame.tangent[i]);
                let jej = space.apply_j(&frame.tangent[j]);
                for cix in 0..b2.ncols() {
                    let xi = frame.normal_from_coords(&b2.column(cix).clone_owned());
                    let lhs_coords = nc.r_perp(i, j) * frame.normal_coords(&xi);
                    let lhs = frame.normal_from_coords(&lhs_coords);
                    let rhs = (&jei * space.inner_unchecked(&jej, &xi)
                        - &jej * space.inner_unchecked(&jei, &xi))
                        * c4;
                    curv_res = curv_res.max((lhs - rhs).norm());
                }
            }
        }
        details.push(PointResidual {
            label: format!("{} wedge curvature formula", point_label(u)),
            residual: curv_res,
        });

        // (e) W = J(TM) exactly for totally geodesic M
        let w_is_jtm = w_rank == imm.param_dim();
        let geodesic = fd.alpha_norm() < 1e-6;
        details.push(PointResidual {
            label: format!(
                "{} W=J(TM) {} / totally geodesic {} (|alpha| {:.3e})",
                point_label(u),
                w_is_jtm,
                geodesic,
                fd.alpha_norm()
            ),
            residual: if w_is_jtm == geodesic { 0.0 } else { 1.0 },
        });
    }

    // (d) the estimated algebra acting on W has the full rotation
    // dimension w(w−1)/2. The estimate may live on the pull-back (curves),
    // whose normal space and frame are identified with the downstairs ones
    // through ambient vectors.
    let base = &samples[0];
    let est = holonomy_algebra(imm, base, hol_cfg)?;
    let fd_base = fundamental_at(imm, base)?;
    let (w_base, _) = build_w(imm, &fd_base.frame, base, 10, tol::SPAN_ANGLE);
    let mut w_est = DMatrix::zeros(est.frame.nu_dim(), w_base.ncols());
    for c in 0..w_base.ncols() {
        let amb = fd_base.frame.normal_from_coords(&w_base.column(c).clone_owned());
        w_est.set_column(c, &est.frame.normal_coords(&amb));
    }
    let restricted: Vec<DVector<f64>> = est
        .algebra
        .iter()
        .map(|a| {
            let b = w_est.transpose() * a * &w_est;
            let skew = 0.5 * (&b - b.transpose());
            if w_base.ncols() < 2 {
                DVector::zeros(1)
            } else {
                linalg::skew_to_vec(&skew)
            }
        })
        .collect();
    let (rbasis, _) = linalg::span_basis(&restricted, 1e-4, 1e-7);
    let algebra_dim = rbasis.ncols();
    let expected = w_rank * w_rank.saturating_sub(1) / 2;
    details.push(PointResidual {
        label: format!(
            "{} algebra dim on W {algebra_dim} against so(W) dim {expected} (W rank {w_rank})",
            point_label(base),
        ),
        residual: if algebra_dim == expected { 0.0 } else { 1.0 },
    });

    Ok(SplittingOutcome {
        report: CheckReport::new(NAME, samples.len(), tolerance, details),
        w_rank,
        algebra_dim,
        stabilized: stabilized_all,
    })
}
