//! Hopf fibrations of the curved models.
//!
//! π_c : N̄_c → S_c is the quotient by the diagonal circle action. The
//! fiber through z is t ↦ e^{it} z, its velocity is the Hopf vector Jη = Jz,
//! and the horizontal space at z is the orthogonal complement of {z, Jz}.
//! Geometry of a submanifold M of a curved space form is computed on its
//! pull-back π_c⁻¹(M), the circle bundle parametrized by (u, θ) ↦ e^{iθ} z(u).

use std::sync::Arc;

use nalgebra::DVector;

use crate::ambient::AmbientSpace;
use crate::error::{Error, Result};
use crate::immersion::{Chart, Immersion, JetData, PullbackMap};
use crate::tol;

/// Verify that `z` lies on the total space: ⟨z,z⟩ = +1 (sphere) or −1
/// (anti-de-Sitter), within [`tol::REPRESENTATIVE_NORM`].
pub fn validate_representative(space: &AmbientSpace, z: &DVector<f64>, label: &str) -> Result<()> {
    if !space.is_curved() {
        return Err(Error::UnsupportedModel);
    }
    let target = space.total_space_curvature_constant().signum();
    let defect = (space.norm2(z) - target).abs();
    if defect > tol::REPRESENTATIVE_NORM {
        return Err(Error::InvalidRepresentative { point: label.to_string(), defect });
    }
    Ok(())
}

/// Project `v` onto the horizontal space at `z`: remove the components along
/// the position z and the fiber direction Jz, with the metric signs of the
/// Lorentzian model handled by the model inner product.
pub fn horizontal_project(
    space: &AmbientSpace,
    z: &DVector<f64>,
    v: &DVector<f64>,
) -> Result<DVector<f64>> {
    if !space.is_curved() {
        return Err(Error::UnsupportedModel);
    }
    let dim = space.coord_dim();
    if v.len() != dim || z.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: v.len().max(z.len()) });
    }
    let jz = space.apply_j(z);
    let zz = space.norm2(z);
    let mut out = v.clone();
    out.axpy(-space.inner_unchecked(v, z) / zz, z, 1.0);
    // ⟨Jz, Jz⟩ = ⟨z, z⟩, which is −1 on the anti-de-Sitter space.
    out.axpy(-space.inner_unchecked(v, &jz) / zz, &jz, 1.0);
    Ok(out)
}

/// Vertical (gauge) coefficient of a vector at z: the coefficient of Jz in
/// v, i.e. ⟨v, Jz⟩ / ⟨Jz, Jz⟩.
pub fn vertical_coefficient(space: &AmbientSpace, z: &DVector<f64>, v: &DVector<f64>) -> f64 {
    let jz = space.apply_j(z);
    space.inner_unchecked(v, &jz) / space.norm2(z)
}

/// Phase rate of the horizontal lift: a curve of representatives t ↦ z(t)
/// lifts to the horizontal curve e^{iφ(t)} z(t) with φ' = −⟨ż, Jz⟩/⟨z,z⟩.
pub fn phase_rate(space: &AmbientSpace, z: &DVector<f64>, zdot: &DVector<f64>) -> f64 {
    -vertical_coefficient(space, z, zdot)
}

/// Build the pull-back immersion of a total-space chart: parameters
/// (u, θ) with θ last, mapping to e^{iθ} z(u). The jet mode is inherited.
pub fn pullback(imm: &Immersion) -> Result<Immersion> {
    if imm.chart() != Chart::TotalSpace {
        return Err(Error::InvalidInput(
            "pull-back requires a total-space representative chart".into(),
        ));
    }
    Immersion::new(
        imm.space(),
        Chart::Pullback,
        Arc::new(PullbackMap { inner: imm.map().clone() }),
        imm.jet_mode(),
    )
}

/// Gauge data of a total-space jet: the fiber direction and the vertical
/// coefficients λ_a = ⟨∂_a z, Jz⟩/⟨Jz,Jz⟩ of the Jacobian columns.
pub struct Gauge {
    pub hopf: DVector<f64>,
    pub lambda: Vec<f64>,
}

pub fn gauge_of(space: &AmbientSpace, jet: &JetData) -> Gauge {
    let hopf = space.apply_j(&jet.point);
    let zz = space.norm2(&jet.point);
    let lambda = jet
        .jac
        .iter()
        .map(|col| space.inner_unchecked(col, &hopf) / zz)
        .collect();
    Gauge { hopf, lambda }
}

/// Frame-free projection onto the downstairs normal space at `u` (for a
/// total-space chart): remove the pull-back tangential span and the
/// position component via Gram solves, which stays smooth in `u`.
pub fn project_normal_section(imm: &Immersion, u: &[f64], v: &DVector<f64>) -> Result<DVector<f64>> {
    let pb = pullback(imm)?;
    let mut q = u.to_vec();
    q.push(0.0);
    let jet = pb.jet(&q);
    let space = imm.space();
    let kp = jet.param_dim();
    let gram = nalgebra::DMatrix::from_fn(kp, kp, |a, b| {
        space.inner_unchecked(&jet.jac[a], &jet.jac[b])
    });
    let rhs = nalgebra::DVector::from_iterator(
        kp,
        jet.jac.iter().map(|c| space.inner_unchecked(v, c)),
    );
    let coef = gram
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::DegenerateImmersion {
            point: format!("{u:?}"),
            reason: "singular induced metric".into(),
        })?;
    let mut out = v.clone();
    for (a, c) in coef.iter().enumerate() {
        out.axpy(-c, &jet.jac[a], 1.0);
    }
    let z = &jet.point;
    out.axpy(-space.inner_unchecked(&out, z) / space.norm2(z), z, 1.0);
    Ok(out)
}

/// Residuals of the five lift identities relating the geometry of a
/// submanifold of a curved space form with that of its Hopf pull-back:
/// the vertical term of the lifted covariant derivative, the two fiber
/// derivative rules, the equality of second fundamental forms, the shape
/// operator / normal connection rules, and the shape operator of the Hopf
/// direction.
#[derive(Clone, Debug)]
pub struct LiftIdentityReport {
    /// vertical part of ∇'_{X̂}Ŷ against g(X, JY)·Jη
    pub vertical_term: f64,
    /// ∇'_{Jη}X̂ = ∇'_{X̂}Jη = J X̂
    pub fiber_derivative: f64,
    /// second fundamental form of the pull-back against the lifted one
    pub alpha_lift: f64,
    /// shape operator and normal connection of lifted normals
    pub shape_lift: f64,
    /// shape operator of the Hopf direction against −(Jξ)ᵀ
    pub hopf_shape: f64,
}

impl LiftIdentityReport {
    pub fn max(&self) -> f64 {
        self.vertical_term
            .max(self.fiber_derivative)
            .max(self.alpha_lift)
            .max(self.shape_lift)
            .max(self.hopf_shape)
    }

    pub fn named(&self) -> [(&'static str, f64); 5] {
        [
            ("vertical-term", self.vertical_term),
            ("fiber-derivative", self.fiber_derivative),
            ("alpha-lift", self.alpha_lift),
            ("shape-lift", self.shape_lift),
            ("hopf-shape", self.hopf_shape),
        ]
    }
}

/// Evaluate the lift-identity residuals at downstairs parameter `u`,
/// differencing fields with step `delta`. With analytic jets the residuals
/// are dominated by the field differencing, O(delta²); with
/// finite-difference jets by the jet step.
pub fn check_lift_identities(
    imm: &Immersion,
    u: &[f64],
    delta: f64,
) -> Result<LiftIdentityReport> {
    use crate::submanifold::{frame_at, fundamental_at};

    if imm.chart() != Chart::TotalSpace {
        return Err(Error::InvalidInput(
            "lift identities expect a total-space chart".into(),
        ));
    }
    let space = imm.space();
    let k = imm.param_dim();
    let jet0 = imm.jet(u);
    let z0 = jet0.point.clone();
    let jz0 = space.apply_j(&z0);
    let zz = space.norm2(&z0);

    // downstairs and pull-back fundamental data at the base point
    let fd_down = fundamental_at(imm, u)?;
    let pb = pullback(imm)?;
    let mut upb = u.to_vec();
    upb.push(0.0);
    let fd_pb = fundamental_at(&pb, &upb)?;
    let pb_frame = frame_at(&pb, &upb)?;

    // horizontalized coordinate lift fields on the θ = 0 section
    let xhat = |a: usize, at: &[f64]| -> DVector<f64> {
        let jet = imm.jet(at);
        let jz = space.apply_j(&jet.point);
        let lam = space.inner_unchecked(&jet.jac[a], &jz) / space.norm2(&jet.point);
        &jet.jac[a] - jz * lam
    };
    let lambda_at = |a: usize, at: &[f64]| -> f64 {
        let jet = imm.jet(at);
        let jz = space.apply_j(&jet.point);
        space.inner_unchecked(&jet.jac[a], &jz) / space.norm2(&jet.point)
    };
    let fd_dir = |field: &dyn Fn(&[f64]) -> DVector<f64>, a: usize| -> DVector<f64> {
        let mut up = u.to_vec();
        up[a] += delta;
        let mut um = u.to_vec();
        um[a] -= delta;
        (field(&up) - field(&um)) / (2.0 * delta)
    };
    // derivative of an invariant field along the horizontal lift direction
    let d_along = |field: &dyn Fn(&[f64]) -> DVector<f64>, a: usize| -> DVector<f64> {
        let mut d = fd_dir(field, a);
        let lam = lambda_at(a, u);
        d.axpy(-lam, &space.apply_j(&field(u)), 1.0);
        d
    };
    let remove_position = |v: &DVector<f64>| -> DVector<f64> {
        v - &z0 * (space.inner_unchecked(v, &z0) / zz)
    };

    let mut vertical_term: f64 = 0.0;
    let mut alpha_lift: f64 = 0.0;
    for a in 0..k {
        for b in 0..k {
            let field_b = |at: &[f64]| xhat(b, at);
            let nab = remove_position(&d_along(&field_b, a));
            let xa = xhat(a, u);
            let xb = xhat(b, u);
            // vertical component against the submersion term
            let vert = space.inner_unchecked(&nab, &jz0) / zz;
            let g_term = space.inner_unchecked(&xa, &space.apply_j(&xb));
            vertical_term = vertical_term.max(((vert - g_term) * jz0.norm()).abs());
            // normal component against the lifted second fundamental form
            let lhs = pb_frame.proj_normal(&nab);
            let ta = fd_down.frame.tangent_coords(&xa);
            let tb = fd_down.frame.tangent_coords(&xb);
            let rhs = fd_down.frame.normal_from_coords(&fd_down.alpha_coords(&ta, &tb));
            alpha_lift = alpha_lift.max((lhs - rhs).norm());
        }
    }

    // fiber-derivative rules
    let mut fiber_derivative: f64 = 0.0;
    for a in 0..k {
        let xa = xhat(a, u);
        let jxa = space.apply_j(&xa);
        // along the fiber: difference the phase rotation of the invariant lift
        let plus = crate::ambient::rotate_phase(&xa, delta);
        let minus = crate::ambient::rotate_phase(&xa, -delta);
        let dfiber = remove_position(&((plus - minus) / (2.0 * delta)));
        fiber_derivative = fiber_derivative.max((&dfiber - &jxa).norm());
        // the Hopf field along the lift direction
        let hopf_field = |at: &[f64]| -> DVector<f64> {
            let jet = imm.jet(at);
            space.apply_j(&jet.point)
        };
        let dh = remove_position(&d_along(&hopf_field, a));
        fiber_derivative = fiber_derivative.max((&dh - &jxa).norm());
    }

    // shape and normal-connection rules for lifted normal fields
    let mut shape_lift: f64 = 0.0;
    let mut hopf_shape: f64 = 0.0;
    let m = fd_down.frame.nu_dim();
    for c in 0..m {
        let xi0 = fd_down.frame.normal[c].clone();
        let xi_field = {
            let imm = imm.clone();
            let xi0 = xi0.clone();
            move |at: &[f64]| -> DVector<f64> {
                let v = project_normal_section(&imm, at, &xi0).expect("projection");
                let n = space.norm2(&v).max(1e-300).sqrt();
                v / n
            }
        };
        for a in 0..k {
            let d = d_along(&xi_field, a);
            let nab = remove_position(&d);
            // tangential part: shape operator of the pull-back
            let lhs_shape = -(pb_frame.proj_tangent(&nab));
            let ta = fd_down.frame.tangent_coords(&xhat(a, u));
            let xi_coords = fd_down.frame.normal_coords(&xi0);
            let shape_vec = fd_down.shape_for(&xi_coords) * &ta;
            let mut rhs_shape = fd_down.frame.tangent_from_coords(&shape_vec);
            // the fiber coefficient carries 1/⟨z,z⟩, which is −1 on the
            // anti-de-Sitter total space
            let jxi = space.apply_j(&xi0);
            rhs_shape.axpy(
                -space.inner_unchecked(&xhat(a, u), &jxi) / zz,
                &jz0,
                1.0,
            );
            shape_lift = shape_lift.max((lhs_shape - rhs_shape).norm());
            // normal part: difference the phase numerically instead of
            // applying J analytically
            let fiber_rate = {
                let p = crate::ambient::rotate_phase(&xi0, delta);
                let mn = crate::ambient::rotate_phase(&xi0, -delta);
                (p - mn) / (2.0 * delta)
            };
            let lam = lambda_at(a, u);
            let lhs_conn =
                pb_frame.proj_normal(&(fd_dir(&xi_field, a) - &fiber_rate * lam));
            let rhs_conn = pb_frame.proj_normal(&d);
            shape_lift = shape_lift.max((lhs_conn - rhs_conn).norm());
        }
        // shape operator of the Hopf direction: machinery column against
        // the tangential part of Jξ
        let xi_coords_pb = pb_frame.normal_coords(&xi0);
        let shape_pb = fd_pb.shape_for(&xi_coords_pb);
        let kt = pb_frame.tangent_dim();
        let mut lhs_vec = DVector::zeros(space.coord_dim());
        for p in 0..kt {
            lhs_vec.axpy(shape_pb[(p, 0)], &pb_frame.tangent[p], 1.0);
        }
        let rhs_vec = -pb_frame.proj_tangent(&space.apply_j(&xi0));
        hopf_shape = hopf_shape.max((lhs_vec - rhs_vec).norm());
    }

    Ok(LiftIdentityReport {
        vertical_term,
        fiber_derivative,
        alpha_lift,
        shape_lift,
        hopf_shape,
    })
}
