//! Core geometry against closed-form oracles: classical shape operators,
//! curvature tensors of the model spaces, and frame invariants.

use std::sync::Arc;

use approx::assert_relative_eq;
use nalgebra::DVector;

use holab::catalog;
use holab::crtype::{classify, CrLabel};
use holab::immersion::{Chart, CoordMap, Immersion, JetMode};
use holab::scalar::Scalar;
use holab::submanifold::{
    frame_at, fundamental_at, normal_curvature, weingarten_defect,
};
use holab::tol;
use holab::AmbientSpace;

/// Round sphere of radius r in the real slice R³ ⊂ C³.
struct SphereR3 {
    radius: f64,
}
impl CoordMap for SphereR3 {
    fn dim_in(&self) -> usize {
        2
    }
    fn dim_out(&self) -> usize {
        6
    }
    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        let r = S::constant(self.radius);
        let x = u[0].cos() * u[1].cos() * r.clone();
        let y = u[0].sin() * u[1].cos() * r.clone();
        let z = u[1].sin() * r;
        let zero = || S::constant(0.0);
        vec![x, zero(), y, zero(), z, zero()]
    }
}

#[test]
fn round_sphere_shape_operator_is_inverse_radius() {
    let radius = 1.7;
    let imm = Immersion::new(
        AmbientSpace::flat(3),
        Chart::Flat,
        Arc::new(SphereR3 { radius }),
        JetMode::Analytic,
    )
    .unwrap();
    let u = [0.4, 0.3];
    let fd = fundamental_at(&imm, &u).unwrap();
    let frame = &fd.frame;
    // identify the real normal direction ν = −x/r among the 4 normals
    let point = &frame.point;
    let nu_coords = frame.normal_coords(&(-point / radius));
    let shape = fd.shape_for(&nu_coords);
    let expected = nalgebra::DMatrix::<f64>::identity(2, 2) / radius;
    assert_relative_eq!(shape, expected, epsilon = 1e-9);
    assert!(weingarten_defect(&fd) < tol::ANALYTIC);
    assert!(fd.shape_symmetry_defect() < tol::ANALYTIC);
    assert!(fd.gamma_skew_defect() < tol::ANALYTIC);

    // same through finite differences
    let fd_num = fundamental_at(
        &imm.with_jet_mode(JetMode::finite_difference()),
        &u,
    )
    .unwrap();
    let shape_num = fd_num.shape_for(&fd_num.frame.normal_coords(&(-point / radius)));
    assert_relative_eq!(shape_num, expected, epsilon = 1e-6);
}

#[test]
fn totally_geodesic_entries_have_vanishing_second_fundamental_form() {
    for name in ["rp2-cp2", "complex-line-cp3", "rh2-ch2", "plane-c2", "geodesic-cp2"] {
        let entry = catalog::get(name).unwrap();
        let imm = entry.immersion();
        for u in holab::verify::standard_samples(&entry, 3, 11) {
            let fd = fundamental_at(&imm, &u).unwrap();
            assert!(
                fd.alpha_norm() < 1e-8,
                "{name}: |alpha| = {:.3e} at {u:?}",
                fd.alpha_norm()
            );
        }
    }
}

#[test]
fn clifford_torus_is_minimal_with_substantial_curvature() {
    let entry = catalog::get("clifford-torus-cp2").unwrap();
    let imm = entry.immersion();
    let fd = fundamental_at(&imm, &entry.base_point).unwrap();
    assert!(fd.alpha_norm() > 0.1);
    for a in 0..fd.nu_dim() {
        assert!(
            fd.shape[a].trace().abs() < 1e-9,
            "mean curvature component {a} = {:.3e}",
            fd.shape[a].trace()
        );
    }
}

#[test]
fn frame_invariants_across_the_catalog() {
    for entry in catalog::list() {
        let imm = entry.immersion();
        for u in holab::verify::standard_samples(&entry, 3, 23) {
            let fd = fundamental_at(&imm, &u).unwrap();
            let frame = &fd.frame;
            assert!(
                frame.gram_defect() < tol::FRAME,
                "{}: gram defect {:.2e} at {u:?}",
                entry.name,
                frame.gram_defect()
            );
            assert!(
                weingarten_defect(&fd) < tol::ANALYTIC,
                "{}: weingarten {:.2e}",
                entry.name,
                weingarten_defect(&fd)
            );
            assert!(fd.shape_symmetry_defect() < tol::ANALYTIC, "{}", entry.name);
            assert!(
                fd.gamma_skew_defect() < tol::ANALYTIC,
                "{}: gamma skew {:.2e}",
                entry.name,
                fd.gamma_skew_defect()
            );
            // normals orthogonal to position and fiber on curved models
            if entry.space.is_curved() {
                let space = frame.space;
                let jz = space.apply_j(&frame.point);
                for xi in &frame.normal {
                    assert!(space.inner_unchecked(xi, &frame.point).abs() < tol::FRAME);
                    assert!(space.inner_unchecked(xi, &jz).abs() < tol::FRAME);
                }
            }
        }
    }
}

#[test]
fn classification_matches_catalog_ground_truth() {
    for entry in catalog::list() {
        let expect = entry.ground_truth.cr_label.unwrap();
        let imm = entry.immersion();
        for u in holab::verify::standard_samples(&entry, 3, 37) {
            let cls = classify(&imm, &u, tol::CR_ANGLE_ANALYTIC).unwrap();
            assert_eq!(cls.label, expect, "{} at {u:?}: got {}", entry.name, cls.label);
        }
    }
}

/// Reparametrized copy of a chart: u ↦ f(u/2).
struct Reparam<T>(T);
impl<T: CoordMap> CoordMap for Reparam<T> {
    fn dim_in(&self) -> usize {
        self.0.dim_in()
    }
    fn dim_out(&self) -> usize {
        self.0.dim_out()
    }
    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        let half: Vec<S> = u.iter().map(|x| x.clone() * S::constant(0.5)).collect();
        self.0.apply(&half)
    }
}

#[test]
fn classification_is_reparametrization_invariant() {
    let entry = catalog::get("geodesic-sphere-cp2").unwrap();
    let imm = entry.immersion();
    struct Sphere07;
    impl CoordMap for Sphere07 {
        fn dim_in(&self) -> usize {
            3
        }
        fn dim_out(&self) -> usize {
            6
        }
        fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
            let (cr, sr) = (S::constant(0.7f64.cos()), S::constant(0.7f64.sin()));
            let c1 = u[1].cos() * u[0].cos() * sr.clone();
            let s1 = u[1].sin() * u[0].cos() * sr.clone();
            let c2 = u[2].cos() * u[0].sin() * sr.clone();
            let s2 = u[2].sin() * u[0].sin() * sr;
            vec![cr, S::constant(0.0), c1, s1, c2, s2]
        }
    }
    let rep = Immersion::new(
        AmbientSpace::projective(2),
        Chart::TotalSpace,
        Arc::new(Reparam(Sphere07)),
        JetMode::Analytic,
    )
    .unwrap();
    let u = entry.base_point.clone();
    let u2: Vec<f64> = u.iter().map(|x| 2.0 * x).collect();
    let a = classify(&imm, &u, tol::CR_ANGLE_ANALYTIC).unwrap();
    let b = classify(&rep, &u2, tol::CR_ANGLE_ANALYTIC).unwrap();
    assert_eq!(a.label, b.label);
    for (x, y) in a.angles.iter().zip(&b.angles) {
        assert!((x - y).abs() < 1e-8, "angles differ: {x} vs {y}");
    }
}

#[test]
fn hypersurface_normal_curvature_vanishes() {
    let entry = catalog::get("geodesic-sphere-cp2").unwrap();
    let nc = normal_curvature(&entry.immersion(), &entry.base_point).unwrap();
    assert_eq!(nc.frame.nu_dim(), 1);
    assert!(nc.total_norm() < 1e-12);
}

#[test]
fn complex_line_normal_curvature_is_minus_twice_j() {
    // R⊥(X, JX) = −2 J_ν on a totally geodesic complex line (c = 4)
    let entry = catalog::get("complex-line-cp3").unwrap();
    let imm = entry.immersion();
    let nc = normal_curvature(&imm, &entry.base_point).unwrap();
    let frame = &nc.frame;
    let space = frame.space;
    let m = frame.nu_dim();
    assert_eq!(m, 4);
    // X = e_0; its J-image is tangent with coordinates jx
    let jx = frame.tangent_coords(&space.apply_j(&frame.tangent[0]));
    let e0 = DVector::from_vec(vec![1.0, 0.0]);
    let r = nc.r_perp_coords(&e0, &jx);
    let jnu = nalgebra::DMatrix::from_fn(m, m, |b, a| {
        space.inner_unchecked(&space.apply_j(&frame.normal[a]), &frame.normal[b])
    });
    assert_relative_eq!(r, jnu * -2.0, epsilon = 1e-9);
}

#[test]
fn rp2_normal_curvature_matches_the_wedge_formula() {
    // R⊥(X,Y)ξ = (c/4)(JX ∧ JY)ξ on the totally geodesic Lagrangian RP²
    let entry = catalog::get("rp2-cp2").unwrap();
    let imm = entry.immersion();
    let nc = normal_curvature(&imm, &entry.base_point).unwrap();
    let frame = &nc.frame;
    let space = frame.space;
    let r = nc.r_perp(0, 1);
    for a in 0..frame.nu_dim() {
        let xi = &frame.normal[a];
        let lhs = frame.normal_from_coords(&r.column(a).clone_owned());
        let je0 = space.apply_j(&frame.tangent[0]);
        let je1 = space.apply_j(&frame.tangent[1]);
        let rhs = (&je0 * space.inner_unchecked(&je1, xi)
            - &je1 * space.inner_unchecked(&je0, xi))
            * (space.c() / 4.0);
        assert_relative_eq!(lhs, rhs, epsilon = 1e-9);
    }
}

#[test]
fn curvature_eigenvalues_are_frame_independent() {
    // eigenvalues of Σ R⊥ᵀR⊥ across two different frame gauges (obtained
    // by reparametrizing the chart) agree
    struct Swapped;
    impl CoordMap for Swapped {
        fn dim_in(&self) -> usize {
            2
        }
        fn dim_out(&self) -> usize {
            6
        }
        fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
            // swap and scale parameters of the projective-plane chart
            let v = [u[1].clone() * S::constant(0.5), u[0].clone() * S::constant(2.0)];
            let zero = || S::constant(0.0);
            vec![
                v[0].cos() * v[1].cos(),
                zero(),
                v[0].sin() * v[1].cos(),
                zero(),
                v[1].sin(),
                zero(),
            ]
        }
    }
    let entry = catalog::get("rp2-cp2").unwrap();
    let nc1 = normal_curvature(&entry.immersion(), &entry.base_point).unwrap();
    let other = Immersion::new(
        AmbientSpace::projective(2),
        Chart::TotalSpace,
        Arc::new(Swapped),
        JetMode::Analytic,
    )
    .unwrap();
    // same geometric point through the swapped chart
    let u2 = vec![entry.base_point[1] / 0.5, entry.base_point[0] / 2.0];
    let nc2 = normal_curvature(&other, &u2).unwrap();
    let gram_sum = |nc: &holab::submanifold::NormalCurvature| {
        let m = nc.frame.nu_dim();
        let mut s = nalgebra::DMatrix::<f64>::zeros(m, m);
        for mat in &nc.mats {
            s += mat.transpose() * mat;
        }
        let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(s).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    };
    for (a, b) in gram_sum(&nc1).iter().zip(gram_sum(&nc2).iter()) {
        assert!((a - b).abs() < 1e-8, "eigenvalues differ: {a} vs {b}");
    }
}

#[test]
fn finite_difference_jets_agree_with_analytic_ones() {
    for entry in catalog::list() {
        let an = entry.immersion();
        let fd = entry.immersion_with(JetMode::finite_difference());
        let u = &entry.base_point;
        let ja = an.jet(u);
        let jf = fd.jet(u);
        for a in 0..ja.param_dim() {
            assert!(
                (&ja.jac[a] - &jf.jac[a]).norm() < 1e-6,
                "{}: first-derivative mismatch",
                entry.name
            );
            for b in 0..ja.param_dim() {
                assert!(
                    (&ja.hess[a][b] - &jf.hess[a][b]).norm() < 1e-4,
                    "{}: second-derivative mismatch",
                    entry.name
                );
            }
        }
    }
}

#[test]
fn fiber_direction_has_the_model_causal_character() {
    for (name, expected) in [("rp2-cp2", 1.0), ("rh2-ch2", -1.0)] {
        let entry = catalog::get(name).unwrap();
        let pb = holab::hopf::pullback(&entry.immersion()).unwrap();
        let mut q = entry.base_point.clone();
        q.push(0.7);
        let frame = frame_at(&pb, &q).unwrap();
        assert_eq!(frame.eps[0], expected, "{name}: fiber causal sign");
        // and the remaining frame directions are spacelike
        assert!(frame.eps[1..].iter().all(|&e| e == 1.0));
    }
}

#[test]
fn horizontal_lifts_project_back_to_their_tangent_vectors() {
    let entry = catalog::get("clifford-torus-cp2").unwrap();
    let imm = entry.immersion();
    let frame = frame_at(&imm, &entry.base_point).unwrap();
    let space = imm.space();
    let jz = space.apply_j(&frame.point);
    for e in &frame.tangent {
        // lifted tangent vectors are orthogonal to the fiber...
        assert!(space.inner_unchecked(e, &jz).abs() < tol::FRAME);
        // ...and the horizontal projection (the lift of the projected
        // vector) returns them unchanged
        let back = holab::hopf::horizontal_project(&space, &frame.point, e).unwrap();
        assert!((&back - e).norm() < tol::FRAME);
    }
}

#[test]
fn fiber_transport_matches_phase_rotation_exactly_when_coisotropic() {
    use holab::holonomy::{parallel_transport, ParamCurve, TransportOptions};
    // along the fiber of a coisotropic pull-back, parallel transport of a
    // normal vector is multiplication by the phase
    let entry = catalog::get("clifford-torus-cp2").unwrap();
    let pb = holab::hopf::pullback(&entry.immersion()).unwrap();
    let mut a = entry.base_point.clone();
    a.push(0.0);
    let mut b = entry.base_point.clone();
    b.push(0.9);
    let frame = frame_at(&pb, &a).unwrap();
    let xi = frame.normal[0].clone();
    let out = parallel_transport(
        &pb,
        &ParamCurve::segment(&a, &b),
        &xi,
        TransportOptions { steps: 128 },
    )
    .unwrap();
    let expected = holab::ambient::rotate_phase(&xi, 0.9);
    assert!(
        (out - &expected).norm() < 1e-9,
        "fiber transport deviates from the phase rotation"
    );

    // on the non-coisotropic control the two differ visibly
    let neg = catalog::get("totally-real-surface-cp3").unwrap();
    let pb = holab::hopf::pullback(&neg.immersion()).unwrap();
    let mut a = neg.base_point.clone();
    a.push(0.0);
    let mut b = neg.base_point.clone();
    b.push(0.9);
    let frame = frame_at(&pb, &a).unwrap();
    let xi = frame.normal[0].clone();
    let out = parallel_transport(
        &pb,
        &ParamCurve::segment(&a, &b),
        &xi,
        TransportOptions { steps: 128 },
    )
    .unwrap();
    let expected = holab::ambient::rotate_phase(&xi, 0.9);
    assert!((out - &expected).norm() > 1e-2);
}

#[test]
fn negative_control_is_not_coisotropic() {
    let entry = catalog::get("totally-real-surface-cp3").unwrap();
    let cls = classify(&entry.immersion(), &entry.base_point, tol::CR_ANGLE_ANALYTIC).unwrap();
    assert_eq!(cls.label, CrLabel::TotallyReal);
    assert!(!cls.is_coisotropic());
    assert!(cls.coisotropic_angle > 1e-2);
    // its second fundamental form does not vanish (a genuine control)
    let fd = fundamental_at(&entry.immersion(), &entry.base_point).unwrap();
    assert!(fd.alpha_norm() > 0.1);
}
