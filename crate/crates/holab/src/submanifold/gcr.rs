//! Residuals of the three structure equations of submanifold geometry.
//!
//! The intrinsic curvature is *defined* through the first equation, so the
//! first residual checks the algebraic consistency of the resulting tensor
//! (antisymmetries, pair symmetry, first Bianchi). The second is checked as
//! a direct left-minus-right with the covariant derivative ∇ ⊕ ∇⊥ on
//! coordinate fields. The third compares the algebraic normal curvature
//! against an independent route: principal logarithms of small plaquette
//! transports, extrapolated in the plaquette radius.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::holonomy::{loop_transport, ParamCurve, TransportOptions};
use crate::hopf;
use crate::immersion::{Chart, Immersion, JetData};
use crate::linalg;

use super::curvature::normal_curvature_from;
use super::fundamental::fundamental_at;

#[derive(Clone, Copy, Debug)]
pub struct GcrConfig {
    /// Step for differencing the second-fundamental-form field.
    pub field_step: f64,
    /// Largest plaquette radius for the transport route.
    pub plaquette_radius: f64,
    /// Richardson levels in the radius (1 = raw, 2 kills O(ε), 3 kills O(ε²)).
    pub richardson_levels: usize,
    pub transport_steps: usize,
}

impl Default for GcrConfig {
    fn default() -> Self {
        GcrConfig {
            field_step: 1e-4,
            plaquette_radius: 4e-3,
            richardson_levels: 3,
            transport_steps: 64,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GcrResidual {
    /// Consistency defect of the induced curvature tensor.
    pub gauss: f64,
    /// Max ‖left − right‖ of the derivative equation on coordinate fields.
    pub codazzi: f64,
    /// Max ‖R⊥(transport) − R⊥(algebraic)‖ over frame pairs.
    pub ricci: f64,
}

/// Frame-free projection onto the normal space at an arbitrary parameter:
/// subtract the tangential part (Gram solve) and the position component.
fn project_normal_free(imm: &Immersion, jet: &JetData, v: &DVector<f64>) -> DVector<f64> {
    let space = imm.space();
    let kp = jet.param_dim();
    let gram = DMatrix::from_fn(kp, kp, |a, b| {
        space.inner_unchecked(&jet.jac[a], &jet.jac[b])
    });
    let rhs = DVector::from_iterator(kp, jet.jac.iter().map(|c| space.inner_unchecked(v, c)));
    let coef = gram.lu().solve(&rhs).expect("singular induced metric");
    let mut out = v - jet.jac_combo(coef.as_slice());
    if imm.chart() != Chart::Flat {
        let z = &jet.point;
        out.axpy(-space.inner_unchecked(&out, z) / space.norm2(z), z, 1.0);
    }
    out
}

pub fn gauss_codazzi_ricci(imm: &Immersion, u: &[f64], cfg: &GcrConfig) -> Result<GcrResidual> {
    // Work on the chart where the ambient curvature is algebraic.
    let (work, uu): (Immersion, Vec<f64>) = match imm.chart() {
        Chart::TotalSpace => {
            let pb = hopf::pullback(imm)?;
            let mut q = u.to_vec();
            q.push(0.0);
            (pb, q)
        }
        _ => (imm.clone(), u.to_vec()),
    };
    let fd = fundamental_at(&work, &uu)?;
    let frame = &fd.frame;
    let space = work.space();
    let kt = frame.tangent_dim();
    let m = frame.nu_dim();

    // ---- induced curvature consistency -------------------------------
    // R(i,j,l,p) = <Rbar(e_i,e_j)e_l, e_p> − <α(i,l),α(j,p)> + <α(i,p),α(j,l)>
    let alpha_dot = |i: usize, l: usize, j: usize, p: usize| -> f64 {
        (0..m).map(|a| fd.alpha[a][(i, l)] * fd.alpha[a][(j, p)]).sum::<f64>()
    };
    let rbar = |i: usize, j: usize, l: usize, p: usize| -> f64 {
        if !space.is_curved() {
            return 0.0;
        }
        let r = space.total_space_curvature(&frame.tangent[i], &frame.tangent[j], &frame.tangent[l]);
        space.inner_unchecked(&r, &frame.tangent[p])
    };
    let r_ind = |i: usize, j: usize, l: usize, p: usize| -> f64 {
        rbar(i, j, l, p) - alpha_dot(i, l, j, p) + alpha_dot(i, p, j, l)
    };
    let mut gauss: f64 = 0.0;
    for i in 0..kt {
        for j in 0..kt {
            for l in 0..kt {
                for p in 0..kt {
                    let v = r_ind(i, j, l, p);
                    gauss = gauss.max((v + r_ind(j, i, l, p)).abs());
                    gauss = gauss.max((v + r_ind(i, j, p, l)).abs());
                    gauss = gauss.max((v - r_ind(l, p, i, j)).abs());
                    let bianchi = r_ind(i, j, l, p) + r_ind(j, l, i, p) + r_ind(l, i, j, p);
                    gauss = gauss.max(bianchi.abs());
                }
            }
        }
    }

    // ---- derivative equation on coordinate fields ---------------------
    let kp = frame.jet.param_dim();
    let delta = cfg.field_step;
    let gram = DMatrix::from_fn(kp, kp, |a, b| {
        space.inner_unchecked(&frame.jet.jac[a], &frame.jet.jac[b])
    });
    let gram_lu = gram.lu();
    // α(X_b, X_c) as a field over the chart parameters
    let alpha_field = |b: usize, c: usize, at: &[f64]| -> DVector<f64> {
        let jet = work.jet(at);
        project_normal_free(&work, &jet, &jet.hess[b][c])
    };
    // tangential parameter coordinates of the Levi-Civita term
    let christoffel = |a: usize, b: usize| -> DVector<f64> {
        let h = &frame.jet.hess[a][b];
        let rhs = DVector::from_iterator(
            kp,
            frame.jet.jac.iter().map(|c| space.inner_unchecked(h, c)),
        );
        gram_lu.solve(&rhs).expect("singular induced metric")
    };
    let alpha_pc = |v: &DVector<f64>, w: &DVector<f64>| -> DVector<f64> {
        frame.proj_normal(&frame.jet.hess_contract(v.as_slice(), w.as_slice()))
    };
    let unit_pc = |a: usize| -> DVector<f64> {
        let mut v = DVector::zeros(kp);
        v[a] = 1.0;
        v
    };
    // ∇⊥ of the α-field along coordinate a, at the center
    let dperp = |a: usize, b: usize, c: usize| -> DVector<f64> {
        let mut up = uu.clone();
        up[a] += delta;
        let mut um = uu.clone();
        um[a] -= delta;
        let d = (alpha_field(b, c, &up) - alpha_field(b, c, &um)) / (2.0 * delta);
        frame.proj_normal(&d)
    };
    let star = |a: usize, b: usize, c: usize| -> DVector<f64> {
        dperp(a, b, c) - alpha_pc(&christoffel(a, b), &unit_pc(c))
            - alpha_pc(&unit_pc(b), &christoffel(a, c))
    };
    let mut codazzi: f64 = 0.0;
    for a in 0..kp {
        for b in (a + 1)..kp {
            for c in 0..kp {
                let lhs = if space.is_curved() {
                    let r = space.total_space_curvature(
                        &frame.jet.jac[a],
                        &frame.jet.jac[b],
                        &frame.jet.jac[c],
                    );
                    frame.proj_normal(&r)
                } else {
                    DVector::zeros(space.coord_dim())
                };
                let rhs = star(a, b, c) - star(b, a, c);
                codazzi = codazzi.max((lhs - rhs).norm());
            }
        }
    }

    // ---- normal curvature versus transport ----------------------------
    let nc = normal_curvature_from(&fd);
    let opts = TransportOptions { steps: cfg.transport_steps };
    let log_at = |i: usize, j: usize, eps: f64| -> Result<DMatrix<f64>> {
        let di: Vec<f64> = frame.coeff.row(i).iter().copied().collect();
        let dj: Vec<f64> = frame.coeff.row(j).iter().copied().collect();
        let loop_ = ParamCurve::parallelogram_corner(&uu, &di, &dj, eps);
        let lt = loop_transport(&work, &loop_, opts)?;
        Ok(linalg::so_log(&lt.matrix)? / (eps * eps))
    };
    let mut ricci: f64 = 0.0;
    for (idx, &(i, j)) in nc.pairs.iter().enumerate() {
        let eps = cfg.plaquette_radius;
        let transported = match cfg.richardson_levels {
            1 => log_at(i, j, eps)?,
            2 => log_at(i, j, eps / 2.0)? * 2.0 - log_at(i, j, eps)?,
            _ => {
                (log_at(i, j, eps)? - log_at(i, j, eps / 2.0)? * 6.0
                    + log_at(i, j, eps / 4.0)? * 8.0)
                    / 3.0
            }
        };
        ricci = ricci.max((&transported - &nc.mats[idx] * PLAQUETTE_SIGN).norm());
    }

    Ok(GcrResidual { gauss, codazzi, ricci })
}

/// Orientation of a counterclockwise plaquette transport relative to the
/// curvature operator: log τ ≈ sign · ε² R⊥(e_i, e_j).
pub const PLAQUETTE_SIGN: f64 = -1.0;
