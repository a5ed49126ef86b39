//! Acceptance suite: the ten exit criteria, one test per criterion, each
//! printing a PASS line with the measured figures (run with
//! `cargo test --test acceptance -- --nocapture` to see them).

use std::sync::Arc;

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use holab::catalog;
use holab::error::Error;
use holab::holonomy::{
    holonomy_algebra, measured_order, script_r_tensor, HolonomyConfig, ParamCurve,
    TransportOptions,
};
use holab::hopf;
use holab::immersion::{Chart, CoordMap, Immersion, JetMode};
use holab::linalg;
use holab::scalar::{Cx, Scalar};
use holab::submanifold::{gauss_codazzi_ricci, normal_curvature, GcrConfig};
use holab::verify::{
    check_coisotropic_symmetries, check_complex_nullity, check_curve_pullback,
    check_holonomy_identification, check_lagrangian_intertwiner, check_totally_real_splitting,
    run_all, standard_loops, standard_samples, VerifyConfig,
};
use holab::AmbientSpace;

const LAGRANGIAN_SURFACES: [&str; 2] = ["clifford-torus-cp2", "rp2-cp2"];
const COISOTROPIC_ENTRIES: [&str; 4] =
    ["rp2-cp2", "clifford-torus-cp2", "geodesic-sphere-cp2", "rh2-ch2"];

/// Random closed trigonometric curve in CP², normalized representative in
/// C³ with a dominant constant term.
struct TrigCurveCp2 {
    /// coeffs[j][f] = (re, im) coefficient of cos/sin harmonics per
    /// homogeneous coordinate j: (a_cos1, b_sin1, a_cos2, b_sin2).
    coeffs: [[(f64, f64); 4]; 3],
}

impl TrigCurveCp2 {
    fn random(rng: &mut ChaCha8Rng) -> Self {
        let mut coeffs = [[(0.0, 0.0); 4]; 3];
        for row in coeffs.iter_mut() {
            for c in row.iter_mut() {
                *c = (rng.gen_range(-0.12..0.12), rng.gen_range(-0.12..0.12));
            }
        }
        TrigCurveCp2 { coeffs }
    }
}

impl CoordMap for TrigCurveCp2 {
    fn dim_in(&self) -> usize {
        1
    }
    fn dim_out(&self) -> usize {
        6
    }
    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        let t = u[0].clone();
        let (c1, s1) = (t.cos(), t.sin());
        let two_t = t.clone() + t.clone();
        let (c2, s2) = (two_t.cos(), two_t.sin());
        let base = [(1.0, 0.0), (0.35, 0.1), (0.0, -0.3)];
        let mut z: Vec<Cx<S>> = Vec::with_capacity(3);
        for (coeffs, (re0, im0)) in self.coeffs.iter().zip(base) {
            let mut re = S::constant(re0);
            let mut im = S::constant(im0);
            let harmonics = [&c1, &s1, &c2, &s2];
            for (h, (a, b)) in harmonics.iter().zip(coeffs) {
                re = re + (*h).clone() * S::constant(*a);
                im = im + (*h).clone() * S::constant(*b);
            }
            z.push(Cx::new(re, im));
        }
        // normalize the representative onto the unit sphere
        let mut norm2 = S::constant(0.0);
        for c in &z {
            norm2 = norm2 + c.re.clone() * c.re.clone() + c.im.clone() * c.im.clone();
        }
        let inv = norm2.sqrt().recip();
        holab::scalar::flatten_cx(&z.iter().map(|c| c.scale(&inv)).collect::<Vec<_>>())
    }
}

fn pass(criterion: usize, message: String) {
    println!("acceptance {criterion:>2} PASS: {message}");
}

#[test]
fn criterion_01_curve_pullback_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let imm = Immersion::new(
            AmbientSpace::projective(2),
            Chart::TotalSpace,
            Arc::new(TrigCurveCp2::random(&mut rng)),
            JetMode::Analytic,
        )
        .unwrap();
        let samples = vec![vec![0.3], vec![1.1]];
        let out = check_curve_pullback(&imm, &samples, 1e-7, 1e-4).unwrap();
        assert!(
            out.report.pass,
            "matrix residual {:.3e} ≥ 1e-7",
            out.report.max_residual
        );
        worst = worst.max(out.report.max_residual);
    }
    pass(1, format!("shape matrices of 10 random curves, worst entry residual {worst:.3e} < 1e-7"));
}

#[test]
fn criterion_02_holomorphic_circle_criterion() {
    let flat_norm = |name: &str| -> f64 {
        let entry = catalog::get(name).unwrap();
        let pb = hopf::pullback(&entry.immersion()).unwrap();
        let mut q = entry.base_point.clone();
        q.push(0.0);
        normal_curvature(&pb, &q).unwrap().total_norm()
    };
    let geo = flat_norm("geodesic-cp2");
    let lat = flat_norm("latitude-circle-cp2");
    assert!(geo < 1e-6, "geodesic pull-back curvature {geo:.3e}");
    assert!(lat > 1e-2, "latitude pull-back curvature {lat:.3e}");

    for name in ["geodesic-cp2", "latitude-circle-cp2"] {
        let entry = catalog::get(name).unwrap();
        let samples = standard_samples(&entry, 3, 7);
        let out = check_curve_pullback(&entry.immersion(), &samples, 1e-6, 1e-4).unwrap();
        for p in &out.predicates {
            let votes: Vec<bool> = p.iter().map(|v| *v < 1e-4).collect();
            assert!(
                votes.iter().all(|v| *v) || votes.iter().all(|v| !*v),
                "{name}: predicates disagree: {p:?}"
            );
        }
    }
    pass(2, format!(
        "pull-back curvature {geo:.3e} (geodesic) vs {lat:.3e} (latitude); three predicates agree pairwise"
    ));
}

#[test]
fn criterion_03_coisotropic_symmetries() {
    let mut worst: f64 = 0.0;
    for name in COISOTROPIC_ENTRIES {
        let entry = catalog::get(name).unwrap();
        let samples = standard_samples(&entry, 3, 7);
        let report = check_coisotropic_symmetries(&entry.immersion(), &samples, 1e-6).unwrap();
        assert!(report.pass, "{name}: residual {:.3e}", report.max_residual);
        worst = worst.max(report.max_residual);
    }
    let neg = catalog::get("totally-real-surface-cp3").unwrap();
    let err = check_coisotropic_symmetries(
        &neg.immersion(),
        &standard_samples(&neg, 2, 7),
        1e-6,
    )
    .unwrap_err();
    let Error::Precondition { defect, .. } = err else {
        panic!("negative control must fail its precondition");
    };
    assert!(defect > 1e-2);
    pass(3, format!(
        "symmetries hold on 4 coisotropic examples (worst {worst:.3e} < 1e-6); negative control rejected with defect {defect:.3e} > 1e-2"
    ));
}

#[test]
fn criterion_04_holonomy_identification() {
    let opts = TransportOptions { steps: 192 };
    let mut worst: f64 = 0.0;
    for name in COISOTROPIC_ENTRIES {
        let entry = catalog::get(name).unwrap();
        let loops = standard_loops(&entry, 20, 7);
        assert_eq!(loops.len(), 20);
        let report =
            check_holonomy_identification(&entry.immersion(), &loops, 1e-5, opts).unwrap();
        assert!(report.pass, "{name}: residual {:.3e}", report.max_residual);
        worst = worst.max(report.max_residual);
    }
    // the identification also matches the two independently estimated
    // algebras: downstairs versus intrinsic on the pull-back
    let cfg = HolonomyConfig::default();
    let mut algebra_angle: f64 = 0.0;
    for name in ["rp2-cp2", "clifford-torus-cp2", "rh2-ch2"] {
        let entry = catalog::get(name).unwrap();
        let imm = entry.immersion();
        let down = holonomy_algebra(&imm, &entry.base_point, &cfg).unwrap();
        let pb = hopf::pullback(&imm).unwrap();
        let mut q = entry.base_point.clone();
        q.push(0.0);
        let up = holonomy_algebra(&pb, &q, &cfg).unwrap();
        assert_eq!(down.algebra_dim(), up.algebra_dim(), "{name}: algebra dims differ");
        if down.algebra_dim() > 0 {
            let to_span = |est: &holab::holonomy::HolonomyEstimate| {
                let rows: Vec<DVector<f64>> =
                    est.algebra.iter().map(linalg::skew_to_vec).collect();
                linalg::span_basis(&rows, 1e-10, 0.0).0
            };
            let angles = linalg::principal_angles(&to_span(&down), &to_span(&up));
            algebra_angle =
                algebra_angle.max(angles.into_iter().fold(0.0, f64::max));
        }
    }
    assert!(algebra_angle < 1e-5, "algebra spans differ by {algebra_angle:.3e}");
    pass(4, format!(
        "downstairs and fiber-closed transports agree on 20 loops × 4 examples (worst {worst:.3e} < 1e-5); downstairs and pull-back algebra estimates coincide (angle {algebra_angle:.3e})"
    ));
}

#[test]
fn criterion_05_trace_form_tensor() {
    let entry = catalog::get("rh2-ch2").unwrap();
    let imm = entry.immersion();
    let sr = script_r_tensor(&imm, &entry.base_point).unwrap();
    let m = sr.nu_dim();

    // properties (i)-(iv)
    let mut sym_defect: f64 = 0.0;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let v = sr.get(a, b, c, d);
                    sym_defect = sym_defect
                        .max((v + sr.get(b, a, c, d)).abs())
                        .max((v + sr.get(a, b, d, c)).abs())
                        .max((v - sr.get(c, d, a, b)).abs())
                        .max((sr.get(a, b, c, d) + sr.get(b, c, a, d) + sr.get(c, a, b, d)).abs());
                }
            }
        }
    }
    assert!(sym_defect < 1e-9, "symmetry defect {sym_defect:.3e}");

    // image property (v): spans agree within principal angle 1e-5
    let mut script_span = Vec::new();
    for a in 0..m {
        for b in (a + 1)..m {
            script_span.push(linalg::skew_to_vec(&sr.matrix(a, b)));
        }
    }
    let pb = hopf::pullback(&imm).unwrap();
    let mut q = entry.base_point.clone();
    q.push(0.0);
    let nc = normal_curvature(&pb, &q).unwrap();
    let curv_span: Vec<DVector<f64>> = nc.mats.iter().map(linalg::skew_to_vec).collect();
    let (sa, _) = linalg::span_basis(&script_span, 1e-8, 1e-10);
    let (sb, _) = linalg::span_basis(&curv_span, 1e-8, 1e-10);
    assert_eq!(sa.ncols(), sb.ncols());
    let max_angle = linalg::principal_angles(&sa, &sb)
        .into_iter()
        .fold(0.0, f64::max);
    assert!(max_angle < 1e-5, "image angle {max_angle:.3e}");

    // nonpositive sectional values and the commutator equivalence
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut max_sect: f64 = f64::NEG_INFINITY;
    for _ in 0..50 {
        let xi = DVector::from_fn(m, |_, _| rng.gen_range(-1.0..1.0));
        let zeta = DVector::from_fn(m, |_, _| rng.gen_range(-1.0..1.0));
        let sect = sr.sectional(&xi, &zeta);
        max_sect = max_sect.max(sect);
        assert!(sect <= 1e-9, "positive sectional value {sect:.3e}");
        let comm = sr.shape_commutator(&xi, &zeta).norm();
        if sect.abs() < 1e-12 {
            assert!(comm < 1e-4, "zero sectional value with commutator {comm:.3e}");
        }
        if comm < 1e-6 {
            assert!(sect.abs() < 1e-9, "commuting pair with sectional value {sect:.3e}");
        }
    }
    pass(5, format!(
        "tensor symmetries to {sym_defect:.3e}; image span angle {max_angle:.3e} < 1e-5; sectional values ≤ {max_sect:.3e} on 50 pairs"
    ));
}

#[test]
fn criterion_06_lagrangian_intertwiner() {
    let opts = TransportOptions { steps: 192 };
    let mut worst: f64 = 0.0;
    for name in LAGRANGIAN_SURFACES {
        let entry = catalog::get(name).unwrap();
        let loops = standard_loops(&entry, 20, 7);
        assert_eq!(loops.len(), 20);
        let report =
            check_lagrangian_intertwiner(&entry.immersion(), &loops, 1e-5, opts).unwrap();
        assert!(report.pass, "{name}: residual {:.3e}", report.max_residual);
        worst = worst.max(report.max_residual);
    }
    pass(6, format!(
        "J intertwines normal and tangent transport on 20 loops × 2 Lagrangian examples, worst {worst:.3e} < 1e-5"
    ));
}

#[test]
fn criterion_07_totally_real_splitting() {
    let cfg = HolonomyConfig::default();
    let mut summary = Vec::new();
    for (name, expected_rank) in
        [("rp1-in-rp2-cp2-geodesic", 1usize), ("rp1-in-rp2-cp2-nongeodesic", 2usize)]
    {
        let entry = catalog::get(name).unwrap();
        let out = check_totally_real_splitting(
            &entry.immersion(),
            entry.chain.as_ref().unwrap(),
            &standard_samples(&entry, 2, 7),
            1e-7,
            &cfg,
        )
        .unwrap();
        assert!(out.report.pass, "{name}: residual {:.3e}", out.report.max_residual);
        assert_eq!(out.w_rank, expected_rank, "{name}: W rank");
        assert_eq!(
            out.algebra_dim,
            expected_rank * (expected_rank - 1) / 2,
            "{name}: algebra dimension on W"
        );
        assert!(out.stabilized, "{name}: W saturation did not stabilize");
        summary.push(format!("{name}: W rank {}, algebra dim {}", out.w_rank, out.algebra_dim));
    }
    pass(7, format!(
        "splitting, W construction, wedge curvature formula (< 1e-7) and the geodesic equivalence hold; {}",
        summary.join("; ")
    ));
}

#[test]
fn criterion_08_complex_nullity_identity() {
    let entry = catalog::get("complex-line-cp3").unwrap();
    let samples = standard_samples(&entry, 3, 7);
    let out = check_complex_nullity(&entry.immersion(), &samples, 1e-8).unwrap();
    assert!(out.report.pass, "residual {:.3e}", out.report.max_residual);
    assert!(out.nullity.iter().all(|&mu| mu == 2));

    let est = holonomy_algebra(&entry.immersion(), &entry.base_point, &HolonomyConfig::default())
        .unwrap();
    assert_eq!(est.algebra_dim(), 1);
    let frame = &est.frame;
    let space = frame.space;
    let m = frame.nu_dim();
    let jnu = nalgebra::DMatrix::from_fn(m, m, |b, a| {
        space.inner_unchecked(&space.apply_j(&frame.normal[a]), &frame.normal[b])
    });
    let angle = linalg::principal_angles(
        &linalg::span_basis(&[linalg::skew_to_vec(&est.algebra[0])], 1e-12, 0.0).0,
        &linalg::span_basis(&[linalg::skew_to_vec(&jnu)], 1e-12, 0.0).0,
    )[0];
    assert!(angle < 1e-3, "generator angle to the normal complex structure {angle:.3e}");
    pass(8, format!(
        "nullity identity residual {:.3e} < 1e-8; estimated algebra = span of the normal complex structure (angle {angle:.3e} < 1e-3)",
        out.report.max_residual
    ));
}

#[test]
fn criterion_09_numerical_hygiene() {
    // transport orthogonality over a batch of loops
    let mut ortho: f64 = 0.0;
    for name in ["rp2-cp2", "rh2-ch2", "complex-line-cp3"] {
        let entry = catalog::get(name).unwrap();
        for lp in standard_loops(&entry, 6, 7) {
            let g = holab::holonomy::loop_transport(
                &entry.immersion(),
                &lp,
                TransportOptions { steps: 192 },
            )
            .unwrap();
            ortho = ortho.max(linalg::orthogonality_defect(&g.matrix));
        }
    }
    assert!(ortho < 1e-7, "orthogonality defect {ortho:.3e}");

    // integrator order
    let entry = catalog::get("rp2-cp2").unwrap();
    let lp = ParamCurve::rectangle_corner(&entry.base_point, 0, 1, 0.9);
    let order = measured_order(&entry.immersion(), &lp, 8).unwrap();
    assert!((3.5..=4.5).contains(&order), "order {order:.2}");

    // finite-difference refinement ratio on the lift identities
    let clifford = catalog::get("clifford-torus-cp2").unwrap();
    let lift_res = |h: f64| {
        let imm = clifford.immersion_with(JetMode::FiniteDifference { step_scale: h });
        hopf::check_lift_identities(&imm, &clifford.base_point, h).unwrap().max()
    };
    let lift_ratio = lift_res(4e-3) / lift_res(2e-3);
    assert!((3.2..=4.8).contains(&lift_ratio), "lift ratio {lift_ratio:.2}");

    // and on the derivative structure equation
    let conic = catalog::get("conic-cp2").unwrap();
    let gcr_res = |step: f64| {
        gauss_codazzi_ricci(
            &conic.immersion(),
            &conic.base_point,
            &GcrConfig { field_step: step, ..GcrConfig::default() },
        )
        .unwrap()
        .codazzi
    };
    let gcr_ratio = gcr_res(2e-3) / gcr_res(1e-3);
    assert!((3.2..=4.8).contains(&gcr_ratio), "derivative-equation ratio {gcr_ratio:.2}");

    // and on the curvature equation (algebraic route versus extrapolated
    // plaquette transports)
    let rp2 = catalog::get("rp2-cp2").unwrap();
    let ricci_res = |eps: f64| {
        gauss_codazzi_ricci(
            &rp2.immersion(),
            &rp2.base_point,
            &GcrConfig {
                plaquette_radius: eps,
                richardson_levels: 2,
                transport_steps: 96,
                ..GcrConfig::default()
            },
        )
        .unwrap()
        .ricci
    };
    let ricci_ratio = ricci_res(1.6e-2) / ricci_res(8e-3);
    assert!((3.2..=4.8).contains(&ricci_ratio), "curvature-equation ratio {ricci_ratio:.2}");
    pass(9, format!(
        "orthogonality defect {ortho:.3e} < 1e-7; integrator order {order:.2}; refinement ratios {lift_ratio:.2}, {gcr_ratio:.2} and {ricci_ratio:.2}"
    ));
}

#[test]
fn criterion_10_determinism() {
    let cfg = VerifyConfig { seed: 7, ..VerifyConfig::default() };
    for entry in catalog::list() {
        let render = || -> String {
            run_all(&entry, &cfg)
                .into_iter()
                .map(|(name, outcome)| match outcome {
                    Ok(holab::verify::CheckOutcome::Report(r)) => {
                        let rows: Vec<String> = r
                            .details
                            .iter()
                            .map(|d| format!("{}|{:.12e}", d.label, d.residual))
                            .collect();
                        format!("{name}:{}:{}", r.pass, rows.join(";"))
                    }
                    Ok(holab::verify::CheckOutcome::Skipped { reason, .. }) => {
                        format!("{name}:skip:{reason}")
                    }
                    Err(e) => format!("{name}:error:{e}"),
                })
                .collect::<Vec<_>>()
                .join("\n")
        };
        let first = render();
        let second = render();
        assert_eq!(first, second, "{}: reports differ between runs", entry.name);
        assert!(!first.is_empty());
    }
    pass(10, "full check suite renders byte-identically across repeated runs for every catalog entry".into());
}
