//! Built-in example immersions with analytic jets and documented ground
//! truth. Entries are addressable by name from the CLI and serve as the
//! test bed for every check in the crate.

use std::sync::Arc;

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ambient::AmbientSpace;
use crate::crtype::CrLabel;
use crate::error::{Error, Result};
use crate::hopf;
use crate::immersion::{Chart, CoordMap, Immersion, JetMode};
use crate::scalar::{flatten_cx, Cx, Scalar};

/// A smooth vector field along the submanifold, given on the downstairs
/// parameters.
pub type FieldClosure = Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>;

/// Ambient chain data M ⊂ N ⊂ S_c for splitting checks: spanning fields of
/// the two summands of the normal bundle.
#[derive(Clone)]
pub struct ChainData {
    /// Spanning fields of ν_N M, the normal bundle of M inside N.
    pub nu_in_n: Vec<FieldClosure>,
    /// Spanning fields of νN restricted to M.
    pub nu_of_n: Vec<FieldClosure>,
}

/// What a candidate parallel subbundle is expected to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionExpectation {
    /// TM ⊕ W₀ is J-invariant (reduction to a complex totally geodesic
    /// submanifold).
    ComplexReduction,
    /// N¹ ⊂ W₀ and W₀ ⊥ J(TM ⊕ W₀) (reduction to a totally real totally
    /// geodesic submanifold).
    TotallyRealReduction,
    /// Parallel but satisfying neither reduction condition.
    Neither,
}

#[derive(Clone)]
pub struct W0Candidate {
    pub name: &'static str,
    pub fields: Vec<FieldClosure>,
    pub expected: ReductionExpectation,
}

#[derive(Clone, Debug, Default)]
pub struct GroundTruth {
    pub cr_label: Option<CrLabel>,
    /// Flatness of the estimated restricted normal holonomy (for curves
    /// this refers to the pull-back estimate).
    pub flat_normal: Option<bool>,
    pub expected_algebra_dim: Option<usize>,
    pub minimal: Option<bool>,
    pub totally_geodesic: Option<bool>,
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub space: AmbientSpace,
    pub param_dim: usize,
    chart: Chart,
    map: Arc<dyn crate::immersion::SmoothFn>,
    pub base_point: Vec<f64>,
    /// Half-width of a safe parameter box around the base point.
    pub domain_halfwidth: Vec<f64>,
    pub ground_truth: GroundTruth,
    pub chain: Option<ChainData>,
    pub w0_candidates: Vec<W0Candidate>,
}

impl CatalogEntry {
    pub fn immersion(&self) -> Immersion {
        self.immersion_with(JetMode::Analytic)
    }

    pub fn immersion_with(&self, mode: JetMode) -> Immersion {
        Immersion::new(self.space, self.chart, self.map.clone(), mode)
            .expect("catalog entries are well formed")
    }

    /// Deterministic sample points in the entry's parameter box.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                self.base_point
                    .iter()
                    .zip(&self.domain_halfwidth)
                    .map(|(b, h)| b + rng.gen_range(-1.0..1.0) * h)
                    .collect()
            })
            .collect()
    }
}

// ---------------------------------------------------------------------
// chart maps
// ---------------------------------------------------------------------

fn interleave_real<S: Scalar>(xs: Vec<S>) -> Vec<S> {
    let mut out = Vec::with_capacity(2 * xs.len());
    for x in xs {
        out.push(x);
        out.push(S::constant(0.0));
    }
    out
}

/// ℝ² ⊂ ℂ² as the real points.
struct PlaneC2;
impl CoordMap for PlaneC2 {
    fn dim_in(&self) -> usize {
        2
    }
    fn dim_out(&self) -> usize {
        4
    }
    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        vec![u[0].clone(), S::constant(0.0), u[1].clone(), S::constant(0.0)]
    }
}

/// The complex line C × {0} ⊂ ℂ².
struct ComplexLineC2;
impl CoordMap for ComplexLineC2 {
    fn dim_in(&self) -> usize {
        2
    }
    fn dim_out(&self) -> usize {
        4
    }
    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        vec![u[0].clone(), u[1].clone(), S::constant(0.0), S::constant(0.0)]
    }
}

/// Graph of z ↦ z² in ℂ².
struct HolomorphicGraphC2;
impl CoordMap for HolomorphicGraphC2 {
    fn dim_in(&self) -> usize {
        2
    }
    fn dim_out(&self) -> usize {
        4
    }
    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        let z = Cx::new(u[0].clone(), u[1].clone());
        let z2 = z.mul(&z);
        flatten_cx(&[z, z2])
    }
}

/// Totally geodesic CP¹ ⊂ CP³ via the affine chart w = u₁ + iu₂ of the
/// first two homogeneous coordinates.
struct ComplexLineCp3;
impl CoordMap for ComplexLineCp3 {
    fn dim_in(&self) -> usize {
        2
    }
    fn dim_out(&self) -> usize {
        8
    }
    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        let norm2 =
            S::constant(1.0) + u[0].clone() * u[0].clone() + u[1].clone() * u[1].clone();
        let s = norm2.sqrt().recip();
        let zero = || Cx::<S>::new(S::constant(0.0), S::constant(0.0));
        let z = [
            Cx::real(s.clone()),
            Cx::new(u[0].clone() * s.clone(), u[1].clone() * s),
            zero(),
            zero(),
        ];
        flatten_cx(&z)
    }
}

/// The conic [1 : w : w²] ⊂ CP².
struct ConicCp2;
impl CoordMap for ConicCp2 {
    fn dim_in(&self) -> usize {
        2
    }
    fn dim_out(&self) -> usize {
        6
    }
    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        let w = Cx::new(u[0].clone(), u[1].clone());
        let w2 = w.mul(&w);
        let q = u[0].clone() * u[0].clone() + u[1].clone() * u[1].clone();
        let norm2 = S::constant(1.0) + q.clone() + q.clone() * q;
        let s = norm2.sqrt().recip();
        flatten_cx(&[Cx::real(s.clone()), w.scale(&s), w2.scale(&s)])
    }
}

/// Circle on the real slice of CP²: a great circle for latitude 0 (a
/// geodesic, hence a holomorphic circle) and a small circle otherwise.
struct LatitudeCircleCp2 {
    latitude: f64,
}
impl CoordMap for LatitudeCircleCp2 {
    fn dim_in(&self) -> usize {
        1
    }
    fn dim_out(&self) -> usize {
        6
    }
    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        let (cp, sp) = (
            S::constant(self.latitude.cos()),
            S::constant(self.latitude.sin()),
        );
        interleave_real(vec![u[0].cos() * cp.clone(), u[0].sin() * cp, sp])
    }
}

/// The Clifford torus [e^{iu₁} : e^{iu₂} : 1]/√3 in CP².
struct CliffordTorusCp2;
impl CoordMap for CliffordTorusCp2 {
    fn dim_in(&self) -> usize {
        2
    }
    fn dim_out(&self) -> usize {
        6
    }
    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        let s = S::constant(1.0 / 3f64.sqrt());
        flatten_cx(&[
            Cx::unit_circle(&u[0]).scale(&s),
            Cx::unit_circle(&u[1]).scale(&s),
            Cx::real(s),
        ])
    }
}

/// Totally geodesic real projective plane in CP² (spherical coordinates on
/// the real slice).
struct Rp2Cp2;
impl CoordMap for Rp2Cp2 {
    fn dim_in(&self) -> usize {
        2
    }
    fn dim_out(&self) -> usize {
        6
    }
    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        interleave_real(vec![
            u[0].cos() * u[1].cos(),
            u[0].sin() * u[1].cos(),
            u[1].sin(),
        ])
    }
}

/// Geodesic sphere of radius r about [1:0:0] in CP², in Hopf coordinates
/// of the orbit sphere.
struct GeodesicSphereCp2 {
    radius: f64,
}
impl CoordMap for GeodesicSphereCp2 {
    fn dim_in(&self) -> usize {
        3
    }
    fn dim_out(&self) -> usize {
        6
    }
    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        let (cr, sr) = (
            S::constant(self.radius.cos()),
            S::constant(self.radius.sin()),
        );
        let w1 = Cx::unit_circle(&u[1]).scale(&(u[0].cos() * sr.clone()));
        let w2 = Cx::unit_circle(&u[2]).scale(&(u[0].sin() * sr));
        flatten_cx(&[Cx::real(cr), w1, w2])
    }
}

/// Totally geodesic real hyperbolic plane in CH² (hyperboloid coordinates).
struct Rh2Ch2;
impl CoordMap for Rh2Ch2 {
    fn dim_in(&self) -> usize {
        2
    }
    fn dim_out(&self) -> usize {
        6
    }
    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        interleave_real(vec![
            u[0].cosh(),
            u[0].sinh() * u[1].cos(),
            u[0].sinh() * u[1].sin(),
        ])
    }
}

/// A non-great sphere inside the real slice RP³ ⊂ CP³: totally real but
/// not coisotropic (its normal bundle is too big), with nonvanishing
/// second fundamental form. The negative control.
struct TotallyRealSurfaceCp3 {
    colatitude: f64,
}
impl CoordMap for TotallyRealSurfaceCp3 {
    fn dim_in(&self) -> usize {
        2
    }
    fn dim_out(&self) -> usize {
        8
    }
    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        let (c, s) = (
            S::constant(self.colatitude.cos()),
            S::constant(self.colatitude.sin()),
        );
        interleave_real(vec![
            c,
            u[0].cos() * u[1].cos() * s.clone(),
            u[0].sin() * u[1].cos() * s.clone(),
            u[1].sin() * s,
        ])
    }
}

// ---------------------------------------------------------------------
// chain / candidate fields
// ---------------------------------------------------------------------

fn real_vector_field(
    f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
) -> FieldClosure {
    Arc::new(move |u: &[f64]| {
        let xs = f(u);
        let mut out = DVector::zeros(2 * xs.len());
        for (i, x) in xs.iter().enumerate() {
            out[2 * i] = *x;
        }
        out
    })
}

/// J of the horizontalized a-th coordinate tangent field, computed from
/// the immersion itself.
fn j_tangent_field(entry_imm: Immersion, a: usize) -> FieldClosure {
    Arc::new(move |u: &[f64]| {
        let jet = entry_imm.jet(u);
        let space = entry_imm.space();
        let col = match entry_imm.chart() {
            Chart::Flat => jet.jac[a].clone(),
            _ => hopf::horizontal_project(&space, &jet.point, &jet.jac[a])
                .expect("curved chart"),
        };
        space.apply_j(&col)
    })
}

fn j_field(space: AmbientSpace, f: FieldClosure) -> FieldClosure {
    Arc::new(move |u: &[f64]| space.apply_j(&f(u)))
}

// ---------------------------------------------------------------------
// the catalog
// ---------------------------------------------------------------------

const LATITUDE: f64 = 0.4;

fn latitude_circle_immersion(latitude: f64) -> Immersion {
    Immersion::new(
        AmbientSpace::projective(2),
        Chart::TotalSpace,
        Arc::new(LatitudeCircleCp2 { latitude }),
        JetMode::Analytic,
    )
    .unwrap()
}

/// Chain data for a latitude circle inside the real slice RP² ⊂ CP²: the
/// in-sphere normal spans ν_N M, and J(TN) = span{JT, Jw} spans νN along M.
fn latitude_chain(latitude: f64) -> ChainData {
    let w = move |u: &[f64]| -> Vec<f64> {
        let t = u[0];
        vec![
            -latitude.sin() * t.cos(),
            -latitude.sin() * t.sin(),
            latitude.cos(),
        ]
    };
    let tdot = move |u: &[f64]| -> Vec<f64> {
        let t = u[0];
        vec![-latitude.cos() * t.sin(), latitude.cos() * t.cos(), 0.0]
    };
    let space = AmbientSpace::projective(2);
    let nu_in_n = vec![real_vector_field(w)];
    let jt = j_field(space, real_vector_field(tdot));
    let jw = j_field(space, real_vector_field(w));
    ChainData { nu_in_n, nu_of_n: vec![jt, jw] }
}

/// Degenerate chain for RP² ⊂ CP² itself (M = N): ν_N M is trivial and
/// νN = J(TN) is spanned by the J-images of the coordinate tangents.
fn rp2_self_chain() -> ChainData {
    let imm = || {
        Immersion::new(
            AmbientSpace::projective(2),
            Chart::TotalSpace,
            Arc::new(Rp2Cp2),
            JetMode::Analytic,
        )
        .unwrap()
    };
    ChainData {
        nu_in_n: vec![],
        nu_of_n: vec![j_tangent_field(imm(), 0), j_tangent_field(imm(), 1)],
    }
}

fn geodesic_circle_w0_candidates() -> Vec<W0Candidate> {
    let space = AmbientSpace::projective(2);
    let w = real_vector_field(|_u: &[f64]| vec![0.0, 0.0, 1.0]);
    vec![
        W0Candidate {
            name: "j-tangent",
            fields: vec![j_tangent_field(latitude_circle_immersion(0.0), 0)],
            expected: ReductionExpectation::ComplexReduction,
        },
        W0Candidate {
            name: "real-normal",
            fields: vec![w.clone()],
            expected: ReductionExpectation::TotallyRealReduction,
        },
        W0Candidate {
            name: "real-normal-and-j-image",
            fields: vec![w.clone(), j_field(space, w)],
            expected: ReductionExpectation::Neither,
        },
    ]
}

fn clifford_w0_candidates() -> Vec<W0Candidate> {
    let imm = || {
        Immersion::new(
            AmbientSpace::projective(2),
            Chart::TotalSpace,
            Arc::new(CliffordTorusCp2),
            JetMode::Analytic,
        )
        .unwrap()
    };
    vec![W0Candidate {
        name: "j-tangent",
        fields: vec![j_tangent_field(imm(), 0), j_tangent_field(imm(), 1)],
        expected: ReductionExpectation::ComplexReduction,
    }]
}

fn geodesic_circle_entry(
    name: &'static str,
    summary: &'static str,
    with_chain: bool,
) -> CatalogEntry {
    CatalogEntry {
        name,
        summary,
        space: AmbientSpace::projective(2),
        param_dim: 1,
        chart: Chart::TotalSpace,
        map: Arc::new(LatitudeCircleCp2 { latitude: 0.0 }),
        base_point: vec![0.25],
        domain_halfwidth: vec![0.8],
        ground_truth: GroundTruth {
            cr_label: Some(CrLabel::TotallyReal),
            flat_normal: Some(true),
            expected_algebra_dim: Some(0),
            totally_geodesic: Some(true),
            ..Default::default()
        },
        chain: with_chain.then(|| latitude_chain(0.0)),
        w0_candidates: if with_chain {
            geodesic_circle_w0_candidates()
        } else {
            vec![]
        },
    }
}

fn entry_list() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "plane-c2",
            summary: "Lagrangian real plane in C^2; everything flat",
            space: AmbientSpace::flat(2),
            param_dim: 2,
            chart: Chart::Flat,
            map: Arc::new(PlaneC2),
            base_point: vec![0.2, -0.3],
            domain_halfwidth: vec![1.0, 1.0],
            ground_truth: GroundTruth {
                cr_label: Some(CrLabel::Lagrangian),
                flat_normal: Some(true),
                expected_algebra_dim: Some(0),
                minimal: Some(true),
                totally_geodesic: Some(true),
            },
            chain: None,
            w0_candidates: vec![],
        },
        CatalogEntry {
            name: "complex-line-c2",
            summary: "complex line in C^2; flat complex submanifold",
            space: AmbientSpace::flat(2),
            param_dim: 2,
            chart: Chart::Flat,
            map: Arc::new(ComplexLineC2),
            base_point: vec![0.1, 0.4],
            domain_halfwidth: vec![1.0, 1.0],
            ground_truth: GroundTruth {
                cr_label: Some(CrLabel::Complex),
                flat_normal: Some(true),
                expected_algebra_dim: Some(0),
                minimal: Some(true),
                totally_geodesic: Some(true),
            },
            chain: None,
            w0_candidates: vec![],
        },
        CatalogEntry {
            name: "holomorphic-graph-c2",
            summary: "graph of z -> z^2 in C^2; curved complex submanifold",
            space: AmbientSpace::flat(2),
            param_dim: 2,
            chart: Chart::Flat,
            map: Arc::new(HolomorphicGraphC2),
            base_point: vec![0.35, -0.2],
            domain_halfwidth: vec![0.4, 0.4],
            ground_truth: GroundTruth {
                cr_label: Some(CrLabel::Complex),
                ..Default::default()
            },
            chain: None,
            w0_candidates: vec![],
        },
        CatalogEntry {
            name: "complex-line-cp3",
            summary: "totally geodesic CP^1 in CP^3 (codimension-2 complex)",
            space: AmbientSpace::projective(3),
            param_dim: 2,
            chart: Chart::TotalSpace,
            map: Arc::new(ComplexLineCp3),
            base_point: vec![0.3, 0.1],
            domain_halfwidth: vec![0.35, 0.35],
            ground_truth: GroundTruth {
                cr_label: Some(CrLabel::Complex),
                flat_normal: Some(false),
                expected_algebra_dim: Some(1),
                minimal: Some(true),
                totally_geodesic: Some(true),
            },
            chain: None,
            w0_candidates: vec![],
        },
        CatalogEntry {
            name: "conic-cp2",
            summary: "the conic [1 : w : w^2] in CP^2; complex curve with trivial nullity",
            space: AmbientSpace::projective(2),
            param_dim: 2,
            chart: Chart::TotalSpace,
            map: Arc::new(ConicCp2),
            base_point: vec![0.3, 0.2],
            domain_halfwidth: vec![0.25, 0.25],
            ground_truth: GroundTruth {
                cr_label: Some(CrLabel::Complex),
                totally_geodesic: Some(false),
                ..Default::default()
            },
            chain: None,
            w0_candidates: vec![],
        },
        geodesic_circle_entry(
            "geodesic-cp2",
            "geodesic circle in CP^2 (holomorphic circle with zero curvature)",
            false,
        ),
        CatalogEntry {
            name: "latitude-circle-cp2",
            summary: "non-geodesic latitude circle in the real slice of CP^2; not a holomorphic circle",
            space: AmbientSpace::projective(2),
            param_dim: 1,
            chart: Chart::TotalSpace,
            map: Arc::new(LatitudeCircleCp2 { latitude: LATITUDE }),
            base_point: vec![0.25],
            domain_halfwidth: vec![0.8],
            ground_truth: GroundTruth {
                cr_label: Some(CrLabel::TotallyReal),
                flat_normal: Some(false),
                // the pull-back of a non-holomorphic circle has transitive
                // restricted normal holonomy: the full rotation algebra of
                // its rank-3 normal space
                expected_algebra_dim: Some(3),
                totally_geodesic: Some(false),
                ..Default::default()
            },
            chain: Some(latitude_chain(LATITUDE)),
            w0_candidates: vec![],
        },
        CatalogEntry {
            name: "clifford-torus-cp2",
            summary: "Lagrangian Clifford torus in CP^2; minimal, intrinsically flat",
            space: AmbientSpace::projective(2),
            param_dim: 2,
            chart: Chart::TotalSpace,
            map: Arc::new(CliffordTorusCp2),
            base_point: vec![0.4, -0.2],
            domain_halfwidth: vec![0.6, 0.6],
            ground_truth: GroundTruth {
                cr_label: Some(CrLabel::Lagrangian),
                flat_normal: Some(true),
                expected_algebra_dim: Some(0),
                minimal: Some(true),
                totally_geodesic: Some(false),
            },
            chain: None,
            w0_candidates: clifford_w0_candidates(),
        },
        CatalogEntry {
            name: "rp2-cp2",
            summary: "totally geodesic Lagrangian RP^2 in CP^2",
            space: AmbientSpace::projective(2),
            param_dim: 2,
            chart: Chart::TotalSpace,
            map: Arc::new(Rp2Cp2),
            base_point: vec![0.5, 0.3],
            domain_halfwidth: vec![0.5, 0.4],
            ground_truth: GroundTruth {
                cr_label: Some(CrLabel::Lagrangian),
                flat_normal: Some(false),
                expected_algebra_dim: Some(1),
                minimal: Some(true),
                totally_geodesic: Some(true),
            },
            chain: Some(rp2_self_chain()),
            w0_candidates: vec![],
        },
        geodesic_circle_entry(
            "rp1-in-rp2-cp2-geodesic",
            "great circle in RP^2 in CP^2, with chain data (totally geodesic variant)",
            true,
        ),
        CatalogEntry {
            name: "rp1-in-rp2-cp2-nongeodesic",
            summary: "latitude circle in RP^2 in CP^2, with chain data (non-geodesic variant)",
            space: AmbientSpace::projective(2),
            param_dim: 1,
            chart: Chart::TotalSpace,
            map: Arc::new(LatitudeCircleCp2 { latitude: LATITUDE }),
            base_point: vec![0.25],
            domain_halfwidth: vec![0.8],
            ground_truth: GroundTruth {
                cr_label: Some(CrLabel::TotallyReal),
                flat_normal: Some(false),
                expected_algebra_dim: Some(3),
                totally_geodesic: Some(false),
                ..Default::default()
            },
            chain: Some(latitude_chain(LATITUDE)),
            w0_candidates: vec![],
        },
        CatalogEntry {
            name: "geodesic-sphere-cp2",
            summary: "geodesic sphere (real hypersurface) in CP^2; coisotropic, rank-one normal bundle",
            space: AmbientSpace::projective(2),
            param_dim: 3,
            chart: Chart::TotalSpace,
            map: Arc::new(GeodesicSphereCp2 { radius: 0.7 }),
            base_point: vec![0.8, 0.3, 0.5],
            domain_halfwidth: vec![0.3, 0.3, 0.3],
            ground_truth: GroundTruth {
                cr_label: Some(CrLabel::Coisotropic),
                flat_normal: Some(true),
                expected_algebra_dim: Some(0),
                ..Default::default()
            },
            chain: None,
            w0_candidates: vec![],
        },
        CatalogEntry {
            name: "rh2-ch2",
            summary: "totally geodesic Lagrangian RH^2 in CH^2 (anti-de-Sitter pull-back)",
            space: AmbientSpace::hyperbolic(2),
            param_dim: 2,
            chart: Chart::TotalSpace,
            map: Arc::new(Rh2Ch2),
            base_point: vec![0.8, 0.5],
            domain_halfwidth: vec![0.35, 0.5],
            ground_truth: GroundTruth {
                cr_label: Some(CrLabel::Lagrangian),
                flat_normal: Some(false),
                expected_algebra_dim: Some(1),
                minimal: Some(true),
                totally_geodesic: Some(true),
            },
            chain: None,
            w0_candidates: vec![],
        },
        CatalogEntry {
            name: "totally-real-surface-cp3",
            summary: "small sphere in RP^3 in CP^3; totally real, NOT coisotropic (negative control)",
            space: AmbientSpace::projective(3),
            param_dim: 2,
            chart: Chart::TotalSpace,
            map: Arc::new(TotallyRealSurfaceCp3 { colatitude: 0.5 }),
            base_point: vec![0.45, 0.25],
            domain_halfwidth: vec![0.4, 0.4],
            ground_truth: GroundTruth {
                cr_label: Some(CrLabel::TotallyReal),
                totally_geodesic: Some(false),
                ..Default::default()
            },
            chain: None,
            w0_candidates: vec![],
        },
    ]
}

/// All catalog entries in a fixed order.
pub fn list() -> Vec<CatalogEntry> {
    entry_list()
}

pub fn names() -> Vec<&'static str> {
    entry_list().iter().map(|e| e.name).collect()
}

pub fn get(name: &str) -> Result<CatalogEntry> {
    entry_list()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::NotFound(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submanifold::frame_at;

    #[test]
    fn every_entry_builds_frames_at_its_base_point() {
        for e in list() {
            let imm = e.immersion();
            let frame =
                frame_at(&imm, &e.base_point).unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert!(
                frame.gram_defect() < crate::tol::FRAME,
                "{}: gram defect {:.3e}",
                e.name,
                frame.gram_defect()
            );
        }
    }

    #[test]
    fn unknown_name_errors() {
        assert!(matches!(get("nonsense"), Err(Error::NotFound(_))));
    }

    #[test]
    fn pullback_adds_one_dimension() {
        for e in list() {
            if e.space.is_curved() {
                let pb = crate::hopf::pullback(&e.immersion()).unwrap();
                assert_eq!(pb.param_dim(), e.param_dim + 1, "{}", e.name);
                let mut up = e.base_point.clone();
                up.push(0.3);
                let frame = frame_at(&pb, &up).unwrap();
                assert_eq!(frame.tangent_dim(), e.param_dim + 1, "{}", e.name);
            }
        }
    }
}
