//! Parallel transport in the normal and tangent bundles.
//!
//! The transport equations are integrated in ambient coordinates with a
//! classical fourth-order one-step method. The right-hand sides need only
//! the chart two-jet and small Gram solves (no frames), so every stage
//! evaluation is smooth. After each full step the state is re-projected
//! onto its bundle and rescaled to its initial norm.
//!
//! On the curved models a downstairs curve is transported along its
//! horizontal lift: the lift phase satisfies φ' = −⟨ż, Jz⟩/⟨z,z⟩ and is
//! integrated together with the vectors; the endpoint is identified with
//! the base representative by undoing the phase.

use nalgebra::{DMatrix, DVector};

use crate::ambient::rotate_phase;
use crate::error::{Error, Result};
use crate::hopf;
use crate::immersion::{Chart, Immersion, JetData};
use crate::submanifold::{frame_at, FrameData};

use super::curve::ParamCurve;

#[derive(Clone, Copy, Debug)]
pub struct TransportOptions {
    /// Total number of integration steps along the curve (split over the
    /// smooth pieces).
    pub steps: usize,
}

impl Default for TransportOptions {
    fn default() -> Self {
        TransportOptions { steps: 256 }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Bundle {
    Normal,
    /// Downstairs tangent vectors, carried as horizontal vectors along the
    /// lift (plain tangent vectors on flat charts).
    Tangent,
}

/// Result of transporting a frame around a loop.
#[derive(Clone, Debug)]
pub struct LoopTransport {
    /// Matrix of the transport on the base frame: column a holds the frame
    /// coordinates of the transported a-th frame vector.
    pub matrix: DMatrix<f64>,
    pub frame: FrameData,
    /// Total lift phase picked up by the horizontal lift (zero on flat and
    /// pull-back charts).
    pub phase: f64,
}

/// Transport of a frame along an open path.
#[derive(Clone, Debug)]
pub struct PathTransport {
    /// Column a holds the far-frame coordinates of the transported a-th
    /// base normal vector.
    pub matrix: DMatrix<f64>,
    pub base: FrameData,
    pub far: FrameData,
    pub phase: f64,
}

struct ChartStepper<'a> {
    imm: &'a Immersion,
    bundle: Bundle,
    dim: usize,
}

impl ChartStepper<'_> {
    /// Velocity of each carried vector, given the chart jet and the chart
    /// parameter velocity.
    fn vector_rates(
        &self,
        jet: &JetData,
        vel_param: &[f64],
        vecs: &[DVector<f64>],
    ) -> Vec<DVector<f64>> {
        let space = self.imm.space();
        let kp = jet.param_dim();
        let gram = DMatrix::from_fn(kp, kp, |a, b| {
            space.inner_unchecked(&jet.jac[a], &jet.jac[b])
        });
        let lu = gram.lu();
        let vel = jet.jac_combo(vel_param);
        let curved = self.imm.chart() != Chart::Flat;
        let z = &jet.point;
        let zz = if curved { space.norm2(z) } else { 1.0 };
        // d/dt of the Jacobian columns along the curve.
        let jac_dot: Vec<DVector<f64>> = (0..kp)
            .map(|a| {
                let mut v = DVector::zeros(self.dim);
                for (b, &c) in vel_param.iter().enumerate() {
                    if c != 0.0 {
                        v.axpy(c, &jet.hess[a][b], 1.0);
                    }
                }
                v
            })
            .collect();
        vecs.iter()
            .map(|x| match self.bundle {
                Bundle::Normal => {
                    let rhs = DVector::from_iterator(
                        kp,
                        jac_dot.iter().map(|jd| -space.inner_unchecked(x, jd)),
                    );
                    let coef = lu.solve(&rhs).expect("singular induced metric");
                    let mut dx = jet.jac_combo(coef.as_slice());
                    if curved {
                        dx.axpy(-space.inner_unchecked(x, &vel) / zz, z, 1.0);
                    }
                    dx
                }
                Bundle::Tangent => {
                    let w = lu
                        .solve(&DVector::from_iterator(
                            kp,
                            jet.jac.iter().map(|c| space.inner_unchecked(x, c)),
                        ))
                        .expect("singular induced metric");
                    let second = jet.hess_contract(vel_param, w.as_slice());
                    // normal component of the flat second derivative
                    let tang = lu
                        .solve(&DVector::from_iterator(
                            kp,
                            jet.jac.iter().map(|c| space.inner_unchecked(&second, c)),
                        ))
                        .expect("singular induced metric");
                    let mut dx = &second - jet.jac_combo(tang.as_slice());
                    if curved {
                        dx.axpy(-space.inner_unchecked(&second, z) / zz, z, 1.0);
                        let jz = space.apply_j(z);
                        dx.axpy(-space.inner_unchecked(x, &vel) / zz, z, 1.0);
                        let jvel = space.apply_j(&vel);
                        dx.axpy(-space.inner_unchecked(x, &jvel) / zz, &jz, 1.0);
                    }
                    dx
                }
            })
            .collect()
    }

    /// Re-project a vector onto its bundle at the given jet and rescale to
    /// `norm0`.
    fn project(&self, jet: &JetData, x: &DVector<f64>, norm0: f64) -> DVector<f64> {
        let space = self.imm.space();
        let kp = jet.param_dim();
        let gram = DMatrix::from_fn(kp, kp, |a, b| {
            space.inner_unchecked(&jet.jac[a], &jet.jac[b])
        });
        let lu = gram.lu();
        let coords = lu
            .solve(&DVector::from_iterator(
                kp,
                jet.jac.iter().map(|c| space.inner_unchecked(x, c)),
            ))
            .expect("singular induced metric");
        let tangential = jet.jac_combo(coords.as_slice());
        let mut out = match self.bundle {
            Bundle::Normal => {
                let mut v = x - tangential;
                if self.imm.chart() != Chart::Flat {
                    let z = &jet.point;
                    v.axpy(-space.inner_unchecked(&v, z) / space.norm2(z), z, 1.0);
                }
                v
            }
            Bundle::Tangent => {
                let mut v = tangential;
                if self.imm.chart() != Chart::Flat {
                    // keep only the horizontal part of the tangent vector
                    let jz = space.apply_j(&jet.point);
                    v.axpy(
                        -space.inner_unchecked(&v, &jz) / space.norm2(&jet.point),
                        &jz,
                        1.0,
                    );
                }
                v
            }
        };
        let n = space.norm2(&out).max(0.0).sqrt();
        if n > 0.0 {
            out *= norm0 / n;
        }
        out
    }
}

fn pack(phase: Option<f64>, vecs: &[DVector<f64>], dim: usize) -> DVector<f64> {
    let off = usize::from(phase.is_some());
    let mut s = DVector::zeros(off + vecs.len() * dim);
    if let Some(p) = phase {
        s[0] = p;
    }
    for (i, v) in vecs.iter().enumerate() {
        s.rows_mut(off + i * dim, dim).copy_from(v);
    }
    s
}

fn unpack(state: &DVector<f64>, has_phase: bool, dim: usize) -> (f64, Vec<DVector<f64>>) {
    let off = usize::from(has_phase);
    let count = (state.len() - off) / dim;
    let vecs = (0..count)
        .map(|i| state.rows(off + i * dim, dim).clone_owned())
        .collect();
    (if has_phase { state[0] } else { 0.0 }, vecs)
}

/// Right-hand side over (smooth piece, time, packed state).
type PieceRhs<'a> = dyn Fn(usize, f64, &DVector<f64>) -> DVector<f64> + 'a;

/// Fourth-order Runge–Kutta over the packed state with a post-step
/// projection hook.
fn rk4_segments(
    rhs: &PieceRhs,
    project: &dyn Fn(f64, DVector<f64>) -> DVector<f64>,
    breakpoints: &[f64],
    total_steps: usize,
    mut state: DVector<f64>,
) -> DVector<f64> {
    let nseg = breakpoints.len() - 1;
    let per_seg = total_steps.div_ceil(nseg);
    for seg in 0..nseg {
        let (a, b) = (breakpoints[seg], breakpoints[seg + 1]);
        let h = (b - a) / per_seg as f64;
        let mut t = a;
        for _ in 0..per_seg {
            let k1 = rhs(seg, t, &state);
            let k2 = rhs(seg, t + 0.5 * h, &(&state + &k1 * (0.5 * h)));
            let k3 = rhs(seg, t + 0.5 * h, &(&state + &k2 * (0.5 * h)));
            let k4 = rhs(seg, t + h, &(&state + &k3 * h));
            state += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            t += h;
            state = project(t, state);
        }
    }
    state
}

/// Integrate along a curve in the chart's own parameters (flat or
/// pull-back chart).
fn integrate_chart(
    imm: &Immersion,
    curve: &ParamCurve,
    bundle: Bundle,
    vectors: Vec<DVector<f64>>,
    opts: TransportOptions,
) -> Result<Vec<DVector<f64>>> {
    let dim = imm.space().coord_dim();
    let stepper = ChartStepper { imm, bundle, dim };
    let norms: Vec<f64> = vectors
        .iter()
        .map(|v| imm.space().norm2(v).max(0.0).sqrt())
        .collect();
    let rhs = |piece: usize, t: f64, state: &DVector<f64>| {
        let (_, vecs) = unpack(state, false, dim);
        let u = curve.eval(t);
        let jet = imm.jet(&u);
        let rates = stepper.vector_rates(&jet, &curve.piece_velocity(piece, t), &vecs);
        pack(None, &rates, dim)
    };
    let project = |t: f64, state: DVector<f64>| {
        let (_, vecs) = unpack(&state, false, dim);
        let jet = imm.jet(&curve.eval(t));
        let projected: Vec<DVector<f64>> = vecs
            .iter()
            .zip(&norms)
            .map(|(v, &n0)| stepper.project(&jet, v, n0))
            .collect();
        pack(None, &projected, dim)
    };
    let state0 = pack(None, &vectors, dim);
    let end = rk4_segments(&rhs, &project, &curve.breakpoints(), opts.steps, state0);
    let (_, vecs) = unpack(&end, false, dim);
    Ok(vecs)
}

/// Integrate a downstairs curve of a total-space chart along its horizontal
/// lift. Returns the transported vectors at the lift endpoint and the
/// accumulated phase.
fn integrate_downstairs(
    imm: &Immersion,
    curve: &ParamCurve,
    bundle: Bundle,
    vectors: Vec<DVector<f64>>,
    opts: TransportOptions,
) -> Result<(Vec<DVector<f64>>, f64)> {
    let pb = hopf::pullback(imm)?;
    let space = imm.space();
    let dim = space.coord_dim();
    let stepper = ChartStepper { imm: &pb, bundle, dim };
    let norms: Vec<f64> = vectors
        .iter()
        .map(|v| space.norm2(v).max(0.0).sqrt())
        .collect();
    let lift_params = |t: f64, phase: f64| -> Vec<f64> {
        let mut u = curve.eval(t);
        u.push(phase);
        u
    };
    let rhs = |piece: usize, t: f64, state: &DVector<f64>| {
        let (phase, vecs) = unpack(state, true, dim);
        let u = lift_params(t, phase);
        let udot = curve.piece_velocity(piece, t);
        let jet = pb.jet(&u);
        // the phase rate that keeps the lift horizontal
        let mut zdot = DVector::zeros(dim);
        for (a, &c) in udot.iter().enumerate() {
            zdot.axpy(c, &jet.jac[a], 1.0);
        }
        let phi_dot = hopf::phase_rate(&space, &jet.point, &zdot);
        let mut vel_param = udot.clone();
        vel_param.push(phi_dot);
        let rates = stepper.vector_rates(&jet, &vel_param, &vecs);
        pack(Some(phi_dot), &rates, dim)
    };
    let project = |t: f64, state: DVector<f64>| {
        let (phase, vecs) = unpack(&state, true, dim);
        let jet = pb.jet(&lift_params(t, phase));
        let projected: Vec<DVector<f64>> = vecs
            .iter()
            .zip(&norms)
            .map(|(v, &n0)| stepper.project(&jet, v, n0))
            .collect();
        pack(Some(phase), &projected, dim)
    };
    let state0 = pack(Some(0.0), &vectors, dim);
    let end = rk4_segments(&rhs, &project, &curve.breakpoints(), opts.steps, state0);
    let (phase, vecs) = unpack(&end, true, dim);
    Ok((vecs, phase))
}

fn check_loop(curve: &ParamCurve) -> Result<()> {
    if !curve.is_closed(1e-10) {
        return Err(Error::InvalidInput("curve is not a closed loop".into()));
    }
    Ok(())
}

/// Parallel transport of a normal vector along `curve`.
///
/// For a total-space chart the curve lives in the downstairs parameters and
/// the result is expressed at the representative z(u(1)) (the lift phase is
/// undone).
pub fn parallel_transport(
    imm: &Immersion,
    curve: &ParamCurve,
    xi0: &DVector<f64>,
    opts: TransportOptions,
) -> Result<DVector<f64>> {
    let start_frame = frame_at(imm, &curve.start())?;
    let residual = (xi0 - start_frame.proj_normal(xi0)).norm();
    if residual > 1e-8 * (1.0 + xi0.norm()) {
        return Err(Error::NotNormal { residual });
    }
    match imm.chart() {
        Chart::TotalSpace => {
            let (vecs, phase) = integrate_downstairs(imm, curve, Bundle::Normal, vec![xi0.clone()], opts)?;
            Ok(rotate_phase(&vecs[0], -phase))
        }
        _ => Ok(integrate_chart(imm, curve, Bundle::Normal, vec![xi0.clone()], opts)?
            .pop()
            .unwrap()),
    }
}

/// Transport the whole normal frame around a closed loop; the matrix acts
/// on normal-frame coordinates at the base point.
pub fn loop_transport(
    imm: &Immersion,
    curve: &ParamCurve,
    opts: TransportOptions,
) -> Result<LoopTransport> {
    check_loop(curve)?;
    let frame = frame_at(imm, &curve.start())?;
    let (vecs, phase) = match imm.chart() {
        Chart::TotalSpace => {
            let (vecs, phase) =
                integrate_downstairs(imm, curve, Bundle::Normal, frame.normal.clone(), opts)?;
            (vecs.iter().map(|v| rotate_phase(v, -phase)).collect::<Vec<_>>(), phase)
        }
        _ => (
            integrate_chart(imm, curve, Bundle::Normal, frame.normal.clone(), opts)?,
            0.0,
        ),
    };
    let m = frame.nu_dim();
    let matrix = DMatrix::from_fn(m, m, |b, a| {
        imm.space().inner_unchecked(&vecs[a], &frame.normal[b])
    });
    Ok(LoopTransport { matrix, frame, phase })
}

/// Loop transport in the downstairs tangent bundle (Levi-Civita
/// connection), on the tangent frame at the base point. On total-space
/// charts the vectors are carried as horizontal vectors along the lift.
pub fn loop_transport_tangent(
    imm: &Immersion,
    curve: &ParamCurve,
    opts: TransportOptions,
) -> Result<LoopTransport> {
    check_loop(curve)?;
    if imm.chart() == Chart::Pullback {
        return Err(Error::InvalidInput(
            "tangent loop transport expects a flat or total-space chart".into(),
        ));
    }
    let frame = frame_at(imm, &curve.start())?;
    let vecs = match imm.chart() {
        Chart::TotalSpace => {
            let (vecs, phase) =
                integrate_downstairs(imm, curve, Bundle::Tangent, frame.tangent.clone(), opts)?;
            vecs.iter().map(|v| rotate_phase(v, -phase)).collect()
        }
        _ => integrate_chart(imm, curve, Bundle::Tangent, frame.tangent.clone(), opts)?,
    };
    let kt = frame.tangent_dim();
    let matrix = DMatrix::from_fn(kt, kt, |j, i| {
        imm.space().inner_unchecked(&vecs[i], &frame.tangent[j]) / frame.eps[j]
    });
    Ok(LoopTransport { matrix, frame, phase: 0.0 })
}

/// Path-B loop transport for curved models: transport along the horizontal
/// lift of the downstairs loop, then along the vertical fiber arc back to
/// the starting representative. Prop-3.4-style identification compares this
/// with [`loop_transport`], which closes the lift by undoing the phase
/// algebraically.
pub fn loop_transport_fiber_closed(
    imm: &Immersion,
    curve: &ParamCurve,
    opts: TransportOptions,
) -> Result<LoopTransport> {
    check_loop(curve)?;
    if imm.chart() != Chart::TotalSpace {
        return Err(Error::InvalidInput(
            "fiber-closed transport expects a total-space chart".into(),
        ));
    }
    let frame = frame_at(imm, &curve.start())?;
    let (vecs, phase) =
        integrate_downstairs(imm, curve, Bundle::Normal, frame.normal.clone(), opts)?;
    // Vertical arc from (u0, phase) back to (u0, 0) in the pull-back chart.
    let pb = hopf::pullback(imm)?;
    let mut top = curve.start();
    top.push(phase);
    let mut bottom = curve.start();
    bottom.push(0.0);
    let fiber_steps = (opts.steps / 4).max(16);
    let vecs = integrate_chart(
        &pb,
        &ParamCurve::segment(&top, &bottom),
        Bundle::Normal,
        vecs,
        TransportOptions { steps: fiber_steps },
    )?;
    let m = frame.nu_dim();
    let matrix = DMatrix::from_fn(m, m, |b, a| {
        imm.space().inner_unchecked(&vecs[a], &frame.normal[b])
    });
    Ok(LoopTransport { matrix, frame, phase })
}

/// Transport the base normal frame along an open path; the matrix holds
/// far-frame coordinates of the transported base frame.
pub fn path_transport(
    imm: &Immersion,
    curve: &ParamCurve,
    opts: TransportOptions,
) -> Result<PathTransport> {
    let base = frame_at(imm, &curve.start())?;
    let far = frame_at(imm, &curve.eval(1.0))?;
    let vecs: Vec<DVector<f64>> = match imm.chart() {
        Chart::TotalSpace => {
            let (vecs, phase) =
                integrate_downstairs(imm, curve, Bundle::Normal, base.normal.clone(), opts)?;
            let rotated: Vec<DVector<f64>> =
                vecs.iter().map(|v| rotate_phase(v, -phase)).collect();
            return Ok(PathTransport {
                matrix: coords_on(&far, &rotated, imm),
                base,
                far,
                phase,
            });
        }
        _ => integrate_chart(imm, curve, Bundle::Normal, base.normal.clone(), opts)?,
    };
    Ok(PathTransport { matrix: coords_on(&far, &vecs, imm), base, far, phase: 0.0 })
}

fn coords_on(far: &FrameData, vecs: &[DVector<f64>], imm: &Immersion) -> DMatrix<f64> {
    let m = far.nu_dim();
    DMatrix::from_fn(m, m, |b, a| {
        imm.space().inner_unchecked(&vecs[a], &far.normal[b])
    })
}

/// Empirical convergence order of the loop integrator: compares transports
/// at n, 2n and 8n steps and returns log2 of the error ratio.
pub fn measured_order(imm: &Immersion, curve: &ParamCurve, base_steps: usize) -> Result<f64> {
    let g1 = loop_transport(imm, curve, TransportOptions { steps: base_steps })?.matrix;
    let g2 = loop_transport(imm, curve, TransportOptions { steps: 2 * base_steps })?.matrix;
    let gr = loop_transport(imm, curve, TransportOptions { steps: 8 * base_steps })?.matrix;
    let e1 = (&g1 - &gr).norm();
    let e2 = (&g2 - &gr).norm();
    if e2 == 0.0 {
        return Err(Error::InvalidInput(
            "integrator errors below round-off; use fewer steps".into(),
        ));
    }
    Ok((e1 / e2).log2())
}

/// Orthogonality defect of a transported loop matrix (`‖GᵀG − I‖`), with
/// the norm drift folded in. Used by the hygiene checks.
pub fn transport_orthogonality_defect(lt: &LoopTransport) -> f64 {
    crate::linalg::orthogonality_defect(&lt.matrix).max(0.0)
}

