//! Estimation of the Lie algebra of the restricted normal holonomy group.
//!
//! Following the curvature-span principle, the algebra at a base point is
//! spanned by normal-curvature operators conjugated back along paths. The
//! estimator collects (a) the algebraic curvature matrices at the base,
//! (b) parallel-conjugated curvature matrices from a schedule of spokes,
//! and (c) principal logarithms of near-identity loop transports, then
//! orthonormalizes the collection by singular value decomposition with a
//! relative rank cutoff.
//!
//! For immersions into the curved models with at least two parameters the
//! estimate samples the downstairs connection (loops in the submanifold,
//! transported along horizontal lifts). A curve has no two-dimensional
//! loop space downstairs, so for one-parameter immersions the estimate is
//! taken on the pull-back, whose parameter space (t, θ) does carry
//! plaquettes; its normal space is identified with the downstairs one.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hopf;
use crate::immersion::{Chart, Immersion};
use crate::linalg;
use crate::submanifold::{frame_at, normal_curvature, FrameData};
use crate::tol;

use super::curve::ParamCurve;
use super::transport::{loop_transport, path_transport, TransportOptions};

#[derive(Clone, Debug)]
pub struct HolonomyConfig {
    /// Spoke lengths; three scales let tests check the radius trend.
    pub radius_schedule: Vec<f64>,
    pub plaquettes_per_pair: usize,
    /// Relative singular-value cutoff for the span rank.
    pub rank_tol: f64,
    pub seed: u64,
    pub steps: usize,
}

impl Default for HolonomyConfig {
    fn default() -> Self {
        HolonomyConfig {
            radius_schedule: vec![0.1, 0.05, 0.025],
            plaquettes_per_pair: 4,
            rank_tol: tol::RANK_REL,
            seed: 7,
            steps: 192,
        }
    }
}

/// Which connection the estimate sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimateView {
    Flat,
    /// The normal connection of the submanifold of the curved space form.
    Downstairs,
    /// The normal connection of the Hopf pull-back.
    Pullback,
}

#[derive(Clone, Debug)]
pub struct InvariantBlock {
    /// Orthonormal basis of the block inside the normal frame (m × d).
    pub basis: DMatrix<f64>,
    /// True when every algebra element annihilates the block (flat factor).
    pub trivial: bool,
}

#[derive(Clone, Debug)]
pub struct HolonomyEstimate {
    pub base: Vec<f64>,
    pub view: EstimateView,
    pub frame: FrameData,
    /// Loop-transport matrices collected along the way.
    pub generators: Vec<DMatrix<f64>>,
    /// Frobenius-orthonormal basis of the estimated algebra.
    pub algebra: Vec<DMatrix<f64>>,
    pub invariant_blocks: Vec<InvariantBlock>,
    pub flat: bool,
    /// Worst ‖GᵀG − I‖ over the collected generators.
    pub orthogonality_defect: f64,
    /// Worst distance of a bracket of basis elements from the span.
    pub closure_defect: f64,
    /// Singular values kept by the rank cut.
    pub singular_values: Vec<f64>,
}

impl HolonomyEstimate {
    pub fn algebra_dim(&self) -> usize {
        self.algebra.len()
    }
}

/// Absolute Frobenius floor below which a collected sample is discarded as
/// integrator noise rather than normalized into the span.
const SAMPLE_FLOOR: f64 = 1e-7;

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.3 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Loop through a plaquette with corner `corner` in the (i, j) coordinate
/// plane, reached by a spoke from `base`.
fn spoke_plaquette_loop(base: &[f64], corner: &[f64], i: usize, j: usize, side: f64) -> ParamCurve {
    let mut pts = vec![base.to_vec(), corner.to_vec()];
    let mut p1 = corner.to_vec();
    p1[i] += side;
    let mut p2 = p1.clone();
    p2[j] += side;
    let mut p3 = corner.to_vec();
    p3[j] += side;
    pts.push(p1);
    pts.push(p2);
    pts.push(p3);
    pts.push(corner.to_vec());
    pts.push(base.to_vec());
    ParamCurve::polyline(pts)
}

/// Collect principal logs of plaquette loops, subdividing while the loop
/// transport is too far from the identity for a trustworthy principal
/// branch.
#[allow(clippy::too_many_arguments)]
fn collect_loop_logs(
    imm: &Immersion,
    base: &[f64],
    corner: &[f64],
    i: usize,
    j: usize,
    side: f64,
    depth: usize,
    opts: TransportOptions,
    generators: &mut Vec<DMatrix<f64>>,
    samples: &mut Vec<DMatrix<f64>>,
) -> Result<()> {
    let lp = loop_transport(imm, &spoke_plaquette_loop(base, corner, i, j, side), opts)?;
    if linalg::identity_defect(&lp.matrix) < 1.0 {
        samples.push(linalg::so_log(&lp.matrix)?);
        generators.push(lp.matrix);
        return Ok(());
    }
    if depth >= 3 {
        return Err(Error::NonconvergentLog(
            "loop transport stays far from the identity after subdivision".into(),
        ));
    }
    let half = side / 2.0;
    for (di, dj) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
        let mut c = corner.to_vec();
        c[i] += di * half;
        c[j] += dj * half;
        collect_loop_logs(imm, base, &c, i, j, half, depth + 1, opts, generators, samples)?;
    }
    Ok(())
}

/// Partition the normal space into holonomy-invariant blocks using the
/// eigenspaces of a generic positive element Σ w_k A_kᵀA_k, a fixed-seed
/// random element; degenerate clusters get one refinement attempt with a
/// second element, and any leaking blocks are merged back.
fn invariant_blocks(
    algebra: &[DMatrix<f64>],
    m: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<InvariantBlock> {
    if m == 0 {
        return Vec::new();
    }
    if algebra.is_empty() {
        return vec![InvariantBlock { basis: DMatrix::identity(m, m), trivial: true }];
    }
    let generic = |rng: &mut ChaCha8Rng| -> DMatrix<f64> {
        let mut s = DMatrix::zeros(m, m);
        for a in algebra {
            let w = rng.gen_range(0.5..1.5);
            s += a.transpose() * a * w;
        }
        s
    };
    let s1 = generic(rng);
    let eig = nalgebra::SymmetricEigen::new(s1);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let scale = eig.eigenvalues.amax().max(1.0);

    // cluster eigenvalues
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &idx in &order {
        match clusters.last_mut() {
            Some(c)
                if (eig.eigenvalues[idx] - eig.eigenvalues[*c.last().unwrap()]).abs()
                    < 1e-6 * scale =>
            {
                c.push(idx)
            }
            _ => clusters.push(vec![idx]),
        }
    }
    let basis_of = |cols: &[usize]| -> DMatrix<f64> {
        let mut b = DMatrix::zeros(m, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            b.set_column(j, &eig.eigenvectors.column(c).clone_owned());
        }
        b
    };
    let mut blocks: Vec<DMatrix<f64>> = clusters.iter().map(|c| basis_of(c)).collect();

    // refinement of degenerate clusters with a second generic element
    let s2 = generic(rng);
    let mut refined = Vec::new();
    for b in blocks.into_iter() {
        if b.ncols() < 2 {
            refined.push(b);
            continue;
        }
        let restricted = b.transpose() * &s2 * &b;
        let sub = nalgebra::SymmetricEigen::new(0.5 * (&restricted + restricted.transpose()));
        let mut idx: Vec<usize> = (0..b.ncols()).collect();
        idx.sort_by(|&x, &y| sub.eigenvalues[x].partial_cmp(&sub.eigenvalues[y]).unwrap());
        let sscale = sub.eigenvalues.amax().max(1.0);
        let mut subclusters: Vec<Vec<usize>> = Vec::new();
        for &i in &idx {
            match subclusters.last_mut() {
                Some(c)
                    if (sub.eigenvalues[i] - sub.eigenvalues[*c.last().unwrap()]).abs()
                        < 1e-6 * sscale =>
                {
                    c.push(i)
                }
                _ => subclusters.push(vec![i]),
            }
        }
        if subclusters.len() == 1 {
            refined.push(b);
            continue;
        }
        for c in subclusters {
            let mut sb = DMatrix::zeros(m, c.len());
            for (j, &i) in c.iter().enumerate() {
                sb.set_column(j, &(&b * sub.eigenvectors.column(i).clone_owned()));
            }
            refined.push(sb);
        }
    }
    blocks = refined;

    // merge any pair of blocks mixed by the algebra
    let leak = |a: &DMatrix<f64>, b: &DMatrix<f64>| -> f64 {
        algebra
            .iter()
            .map(|g| (b.transpose() * g * a).norm())
            .fold(0.0, f64::max)
    };
    loop {
        let mut merged = false;
        'outer: for p in 0..blocks.len() {
            for q in (p + 1)..blocks.len() {
                if leak(&blocks[p], &blocks[q]).max(leak(&blocks[q], &blocks[p])) > 1e-7 {
                    let joined = {
                        let mut cols: Vec<DVector<f64>> = Vec::new();
                        for c in 0..blocks[p].ncols() {
                            cols.push(blocks[p].column(c).clone_owned());
                        }
                        for c in 0..blocks[q].ncols() {
                            cols.push(blocks[q].column(c).clone_owned());
                        }
                        let (basis, _) = linalg::span_basis(&cols, 1e-9, 0.0);
                        basis
                    };
                    blocks.remove(q);
                    blocks[p] = joined;
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }

    blocks
        .into_iter()
        .map(|b| {
            let trivial = algebra
                .iter()
                .map(|g| (g * &b).norm())
                .fold(0.0, f64::max)
                < 1e-7;
            InvariantBlock { basis: b, trivial }
        })
        .collect()
}

/// Estimate the restricted normal-holonomy algebra of `imm` at `u0`.
pub fn holonomy_algebra(
    imm: &Immersion,
    u0: &[f64],
    cfg: &HolonomyConfig,
) -> Result<HolonomyEstimate> {
    let (est_imm, base, view) = match imm.chart() {
        Chart::Flat => (imm.clone(), u0.to_vec(), EstimateView::Flat),
        Chart::Pullback => (imm.clone(), u0.to_vec(), EstimateView::Pullback),
        Chart::TotalSpace if imm.param_dim() >= 2 => {
            (imm.clone(), u0.to_vec(), EstimateView::Downstairs)
        }
        Chart::TotalSpace => {
            // Curves carry no downstairs plaquettes; estimate on the
            // pull-back, whose normal spaces are identified with the
            // downstairs ones.
            let pb = hopf::pullback(imm)?;
            let mut b = u0.to_vec();
            b.push(0.0);
            (pb, b, EstimateView::Pullback)
        }
    };
    let opts = TransportOptions { steps: cfg.steps };
    let frame = frame_at(&est_imm, &base)?;
    let m = frame.nu_dim();
    let kparam = est_imm.param_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut samples: Vec<DMatrix<f64>> = Vec::new();
    let mut generators: Vec<DMatrix<f64>> = Vec::new();

    // (a) algebraic curvature at the base point
    let nc0 = normal_curvature(&est_imm, &base)?;
    samples.extend(nc0.mats.iter().cloned());

    // (b), (c): spokes and plaquettes over the radius schedule
    for &r in &cfg.radius_schedule {
        for i in 0..kparam {
            for j in (i + 1)..kparam {
                for _ in 0..cfg.plaquettes_per_pair {
                    let dir = random_unit(&mut rng, kparam);
                    let center: Vec<f64> =
                        base.iter().zip(&dir).map(|(x, d)| x + r * d).collect();
                    // conjugated curvature from the spoke
                    let spoke = ParamCurve::segment(&base, &center);
                    let pt = path_transport(&est_imm, &spoke, opts)?;
                    let nc_far = normal_curvature(&est_imm, &center)?;
                    for mat in &nc_far.mats {
                        samples.push(pt.matrix.transpose() * mat * &pt.matrix);
                    }
                    // principal log of the spoke-and-plaquette loop
                    collect_loop_logs(
                        &est_imm,
                        &base,
                        &center,
                        i,
                        j,
                        r / 2.0,
                        0,
                        opts,
                        &mut generators,
                        &mut samples,
                    )?;
                }
            }
        }
    }

    // normalize, drop noise, orthonormalize the span
    let rows: Vec<DVector<f64>> = samples
        .iter()
        .filter_map(|s| {
            let n = s.norm();
            (n > SAMPLE_FLOOR).then(|| linalg::skew_to_vec(&(s / n)))
        })
        .collect();
    let (basis, kept) = linalg::span_basis(&rows, cfg.rank_tol, tol::RANK_ABS_FLOOR);
    let algebra: Vec<DMatrix<f64>> = (0..basis.ncols())
        .map(|c| {
            let v = basis.column(c).clone_owned();
            let mat = linalg::vec_to_skew(&v, m);
            // unit Frobenius norm
            let n = mat.norm();
            mat / n
        })
        .collect();

    let orthogonality_defect = generators
        .iter()
        .map(linalg::orthogonality_defect)
        .fold(0.0, f64::max);
    let mut closure_defect: f64 = 0.0;
    for p in 0..algebra.len() {
        for q in (p + 1)..algebra.len() {
            let br = &algebra[p] * &algebra[q] - &algebra[q] * &algebra[p];
            let mut proj = DMatrix::zeros(m, m);
            for a in &algebra {
                let c = (br.transpose() * a).trace();
                proj += a * c;
            }
            closure_defect = closure_defect.max((&br - proj).norm());
        }
    }

    let blocks = invariant_blocks(&algebra, m, &mut rng);
    let flat = algebra.is_empty();
    Ok(HolonomyEstimate {
        base: base.clone(),
        view,
        frame,
        generators,
        algebra,
        invariant_blocks: blocks,
        flat,
        orthogonality_defect,
        closure_defect,
        singular_values: kept,
    })
}
