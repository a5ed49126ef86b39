//! Parallel transport: exactness on flat bundles, groupoid structure,
//! linearity, integrator order, and the curvature-as-infinitesimal-holonomy
//! consistency that pins the plaquette orientation.

use approx::assert_relative_eq;
use nalgebra::DMatrix;

use holab::catalog;
use holab::holonomy::{
    loop_transport, loop_transport_tangent, measured_order, parallel_transport, path_transport,
    ParamCurve, TransportOptions,
};
use holab::linalg;
use holab::submanifold::{frame_at, gauss_codazzi_ricci, normal_curvature, GcrConfig};

fn opts(steps: usize) -> TransportOptions {
    TransportOptions { steps }
}

#[test]
fn constant_curve_is_the_identity_transport() {
    let entry = catalog::get("clifford-torus-cp2").unwrap();
    let imm = entry.immersion();
    let frame = frame_at(&imm, &entry.base_point).unwrap();
    let xi = frame.normal[0].clone();
    let curve = ParamCurve::segment(&entry.base_point, &entry.base_point);
    let out = parallel_transport(&imm, &curve, &xi, opts(16)).unwrap();
    assert_relative_eq!(out, xi, epsilon = 1e-12);
}

#[test]
fn flat_plane_loops_transport_trivially() {
    let entry = catalog::get("plane-c2").unwrap();
    let imm = entry.immersion();
    let lp = ParamCurve::rectangle_corner(&entry.base_point, 0, 1, 0.7);
    let g = loop_transport(&imm, &lp, opts(64)).unwrap();
    assert_relative_eq!(
        g.matrix,
        DMatrix::identity(2, 2),
        epsilon = 1e-12
    );
}

#[test]
fn backtracking_loops_are_identity() {
    for name in ["rp2-cp2", "clifford-torus-cp2", "rh2-ch2"] {
        let entry = catalog::get(name).unwrap();
        let imm = entry.immersion();
        let out = ParamCurve::segment(
            &entry.base_point,
            &entry
                .base_point
                .iter()
                .zip(&entry.domain_halfwidth)
                .map(|(b, h)| b + 0.6 * h)
                .collect::<Vec<_>>(),
        );
        let lp = out.backtrack();
        let g = loop_transport(&imm, &lp, opts(128)).unwrap();
        let m = g.matrix.nrows();
        assert!(
            linalg::identity_defect(&g.matrix) < 1e-9,
            "{name}: defect {:.3e}",
            linalg::identity_defect(&g.matrix)
        );
        assert_eq!(m, g.frame.nu_dim());
    }
}

#[test]
fn concatenation_is_matrix_composition() {
    let entry = catalog::get("rp2-cp2").unwrap();
    let imm = entry.immersion();
    let a = entry.base_point.clone();
    let b = vec![a[0] + 0.4, a[1] - 0.2];
    let c = vec![a[0] + 0.1, a[1] + 0.3];
    // loop through b and c, versus the two backtracking... compose paths:
    // transport along a->b->c->a must equal the product of path transports.
    let full = ParamCurve::polyline(vec![a.clone(), b.clone(), c.clone(), a.clone()]);
    let g = loop_transport(&imm, &full, opts(192)).unwrap();
    let t1 = path_transport(&imm, &ParamCurve::segment(&a, &b), opts(64)).unwrap();
    let t2 = path_transport(&imm, &ParamCurve::segment(&b, &c), opts(64)).unwrap();
    let t3 = path_transport(&imm, &ParamCurve::segment(&c, &a), opts(64)).unwrap();
    // matrices map base coords to far coords; composition runs right-to-left
    let composed = &t3.matrix * &t2.matrix * &t1.matrix;
    // t3 ends at the starting frame of t1: same frame, comparable matrices
    assert_relative_eq!(composed, g.matrix, epsilon = 1e-7);
}

#[test]
fn transport_is_linear_and_norm_preserving() {
    use rand::Rng;
    use rand::SeedableRng;
    let entry = catalog::get("rh2-ch2").unwrap();
    let imm = entry.immersion();
    let frame = frame_at(&imm, &entry.base_point).unwrap();
    let lp = ParamCurve::rectangle_corner(&entry.base_point, 0, 1, 0.3);
    let xi = frame.normal[0].clone();
    let zeta = frame.normal[1].clone();
    let space = imm.space();
    let t_xi = parallel_transport(&imm, &lp, &xi, opts(128)).unwrap();
    let t_zeta = parallel_transport(&imm, &lp, &zeta, opts(128)).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for _ in 0..4 {
        let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let combo = &xi * a + &zeta * b;
        let t_combo = parallel_transport(&imm, &lp, &combo, opts(128)).unwrap();
        assert_relative_eq!(&t_xi * a + &t_zeta * b, t_combo, epsilon = 1e-9);
    }
    assert!(
        (space.norm2(&t_xi).sqrt() - 1.0).abs() < 1e-10,
        "norm drift {:.3e}",
        space.norm2(&t_xi).sqrt() - 1.0
    );
}

#[test]
fn rejects_non_normal_input_and_open_loops() {
    let entry = catalog::get("rp2-cp2").unwrap();
    let imm = entry.immersion();
    let frame = frame_at(&imm, &entry.base_point).unwrap();
    let bad = frame.tangent[0].clone();
    let lp = ParamCurve::rectangle_corner(&entry.base_point, 0, 1, 0.3);
    assert!(parallel_transport(&imm, &lp, &bad, opts(16)).is_err());
    let open = ParamCurve::segment(&entry.base_point, &[0.9, 0.9]);
    assert!(loop_transport(&imm, &open, opts(16)).is_err());
}

#[test]
fn clifford_plaquette_holonomy_is_trivial() {
    // flat intrinsic torus + the intertwiner force trivial restricted
    // normal holonomy; the loop transport must return every normal vector
    let entry = catalog::get("clifford-torus-cp2").unwrap();
    let imm = entry.immersion();
    let frame = frame_at(&imm, &entry.base_point).unwrap();
    let lp = ParamCurve::rectangle_corner(&entry.base_point, 0, 1, 0.45);
    for xi in &frame.normal {
        let out = parallel_transport(&imm, &lp, xi, opts(256)).unwrap();
        assert!(
            (out - xi).norm() < 1e-4,
            "normal vector moved by more than 1e-4"
        );
    }
}

#[test]
fn integrator_order_is_four() {
    for name in ["rp2-cp2", "rh2-ch2", "complex-line-cp3"] {
        let entry = catalog::get(name).unwrap();
        let imm = entry.immersion();
        let lp = ParamCurve::rectangle_corner(&entry.base_point, 0, 1, 0.9);
        let order = measured_order(&imm, &lp, 8).unwrap();
        assert!(
            (3.5..=4.5).contains(&order),
            "{name}: measured order {order:.2}"
        );
    }
}

#[test]
fn tangent_loop_transport_is_orthogonal_and_curvature_sized() {
    // RP² carries the round metric: tangent holonomy around a plaquette is
    // a rotation by the oriented area
    let entry = catalog::get("rp2-cp2").unwrap();
    let imm = entry.immersion();
    let lp = ParamCurve::rectangle_corner(&entry.base_point, 0, 1, 0.4);
    let g = loop_transport_tangent(&imm, &lp, opts(192)).unwrap();
    assert!(linalg::orthogonality_defect(&g.matrix) < 1e-8);
    let angle = g.matrix[(1, 0)].atan2(g.matrix[(0, 0)]);
    assert!(
        angle.abs() > 0.01,
        "expected a visible rotation, got {angle:.3e}"
    );
}

#[test]
fn plaquette_logs_converge_to_the_algebraic_curvature() {
    // orientation and O(radius) trend of log(transport)/area against the
    // algebraic normal curvature
    for name in ["rp2-cp2", "complex-line-cp3", "rh2-ch2"] {
        let entry = catalog::get(name).unwrap();
        let imm = entry.immersion();
        let u = &entry.base_point;
        let nc = normal_curvature(&imm, u).unwrap();
        let frame = &nc.frame;
        let di: Vec<f64> = frame.coeff.row(0).iter().copied().collect();
        let dj: Vec<f64> = frame.coeff.row(1).iter().copied().collect();
        let reference = nc.r_perp(0, 1) * holab::submanifold::PLAQUETTE_SIGN;
        let err_at = |eps: f64| -> f64 {
            let lp = ParamCurve::parallelogram_corner(u, &di, &dj, eps);
            let g = loop_transport(&imm, &lp, opts(96)).unwrap();
            let log = linalg::so_log(&g.matrix).unwrap() / (eps * eps);
            (log - &reference).norm()
        };
        let e1 = err_at(0.08);
        let e2 = err_at(0.04);
        let e3 = err_at(0.02);
        assert!(
            e3 < 0.7 * e2 && e2 < 0.7 * e1,
            "{name}: no O(radius) trend: {e1:.3e} {e2:.3e} {e3:.3e}"
        );
        assert!(e3 < 0.15, "{name}: log/area far from curvature: {e3:.3e}");
    }
}

#[test]
fn gcr_residuals_on_flat_and_curved_examples() {
    let plane = catalog::get("plane-c2").unwrap();
    let g = gauss_codazzi_ricci(&plane.immersion(), &plane.base_point, &GcrConfig::default())
        .unwrap();
    assert!(g.gauss < 1e-10, "gauss {:.3e}", g.gauss);
    assert!(g.codazzi < 1e-10, "codazzi {:.3e}", g.codazzi);
    assert!(g.ricci < 1e-10, "ricci {:.3e}", g.ricci);

    let clifford = catalog::get("clifford-torus-cp2").unwrap();
    let g = gauss_codazzi_ricci(
        &clifford.immersion(),
        &clifford.base_point,
        &GcrConfig::default(),
    )
    .unwrap();
    assert!(g.gauss < 1e-10, "gauss {:.3e}", g.gauss);
    assert!(g.codazzi < 1e-6, "codazzi {:.3e}", g.codazzi);
    assert!(g.ricci < 1e-6, "ricci {:.3e}", g.ricci);
}

#[test]
fn codazzi_residual_refines_at_second_order() {
    let entry = catalog::get("conic-cp2").unwrap();
    let imm = entry.immersion();
    let res = |step: f64| {
        gauss_codazzi_ricci(
            &imm,
            &entry.base_point,
            &GcrConfig { field_step: step, ..GcrConfig::default() },
        )
        .unwrap()
        .codazzi
    };
    let r1 = res(2e-3);
    let r2 = res(1e-3);
    let ratio = r1 / r2;
    assert!(
        (3.2..=4.8).contains(&ratio),
        "refinement ratio {ratio:.2} (residuals {r1:.3e}, {r2:.3e})"
    );
}

#[test]
fn downstairs_loop_transport_reduces_to_identity_on_flat_normal_bundles() {
    let entry = catalog::get("geodesic-sphere-cp2").unwrap();
    let imm = entry.immersion();
    let lp = ParamCurve::rectangle_corner(&entry.base_point, 0, 2, 0.25);
    let g = loop_transport(&imm, &lp, opts(128)).unwrap();
    // rank-one normal bundle: the only orientation-preserving isometry is 1
    assert_relative_eq!(g.matrix[(0, 0)], 1.0, epsilon = 1e-8);
    let xi0 = g.frame.normal[0].clone();
    let out = parallel_transport(&imm, &lp, &xi0, opts(128)).unwrap();
    assert_relative_eq!(out, xi0, epsilon = 1e-7);
}
