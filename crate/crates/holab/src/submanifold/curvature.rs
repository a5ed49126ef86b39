//! Normal curvature, assembled algebraically.
//!
//! The normal curvature operator on a frame pair is the normal part of the
//! ambient curvature plus the shape-operator commutator; nothing is
//! differentiated. On pull-back charts the ambient is a real space form and
//! only the commutator survives; on the downstairs view the ambient term
//! carries the J-terms of the complex space form.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::immersion::{Chart, Immersion};

use super::frame::FrameData;
use super::fundamental::{fundamental_at, FundamentalData};

#[derive(Clone, Debug)]
pub struct NormalCurvature {
    pub frame: FrameData,
    /// One m×m matrix per tangent pair i < j (row-major pair order):
    /// mats[pair][(b, a)] = ⟨R⊥(e_i, e_j) ξ_a, ξ_b⟩.
    pub pairs: Vec<(usize, usize)>,
    pub mats: Vec<DMatrix<f64>>,
}

impl NormalCurvature {
    pub fn pair_index(&self, i: usize, j: usize) -> Option<usize> {
        self.pairs.iter().position(|&(a, b)| (a, b) == (i, j))
    }

    /// R⊥(e_i, e_j) for any index order (antisymmetric in the pair).
    pub fn r_perp(&self, i: usize, j: usize) -> DMatrix<f64> {
        let m = self.frame.nu_dim();
        if i == j {
            return DMatrix::zeros(m, m);
        }
        if i < j {
            self.mats[self.pair_index(i, j).unwrap()].clone()
        } else {
            -self.mats[self.pair_index(j, i).unwrap()].clone()
        }
    }

    /// R⊥(v, w) for tangent-frame coordinate vectors.
    pub fn r_perp_coords(&self, v: &DVector<f64>, w: &DVector<f64>) -> DMatrix<f64> {
        let m = self.frame.nu_dim();
        let kt = self.frame.tangent_dim();
        let mut out = DMatrix::zeros(m, m);
        for i in 0..kt {
            for j in 0..kt {
                if i == j {
                    continue;
                }
                let c = v[i] * w[j];
                if c != 0.0 {
                    out += self.r_perp(i, j) * c;
                }
            }
        }
        out
    }

    /// Total Frobenius norm over all pairs; zero iff the normal bundle is
    /// flat at the point (to working accuracy).
    pub fn total_norm(&self) -> f64 {
        self.mats.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
    }

    pub fn max_skew_defect(&self) -> f64 {
        self.mats
            .iter()
            .map(|m| (m + m.transpose()).amax())
            .fold(0.0, f64::max)
    }
}

/// Normal curvature from precomputed fundamental data.
pub fn normal_curvature_from(fd: &FundamentalData) -> NormalCurvature {
    let frame = fd.frame.clone();
    let kt = frame.tangent_dim();
    let m = frame.nu_dim();
    let space = frame.space;
    // Operator commutators [A_a, A_b]; the (i, j) loop only reads entries.
    let comm: Vec<Vec<DMatrix<f64>>> = (0..m)
        .map(|a| {
            (0..m)
                .map(|b| &fd.shape[a] * &fd.shape[b] - &fd.shape[b] * &fd.shape[a])
                .collect()
        })
        .collect();
    let mut pairs = Vec::new();
    let mut mats = Vec::new();
    for i in 0..kt {
        for j in (i + 1)..kt {
            let mut mat = DMatrix::zeros(m, m);
            // Shape-operator commutator term ⟨[A_a, A_b] e_i, e_j⟩.
            for a in 0..m {
                for b in 0..m {
                    if a != b {
                        mat[(b, a)] += comm[a][b][(j, i)] * frame.eps[j];
                    }
                }
            }
            // Ambient curvature term.
            if space.is_curved() {
                for a in 0..m {
                    let r = match frame.chart {
                        Chart::TotalSpace => space.curvature_tensor(
                            &frame.tangent[i],
                            &frame.tangent[j],
                            &frame.normal[a],
                        ),
                        _ => space.total_space_curvature(
                            &frame.tangent[i],
                            &frame.tangent[j],
                            &frame.normal[a],
                        ),
                    };
                    for b in 0..m {
                        mat[(b, a)] += space.inner_unchecked(&r, &frame.normal[b]);
                    }
                }
            }
            pairs.push((i, j));
            mats.push(mat);
        }
    }
    NormalCurvature { frame, pairs, mats }
}

/// Normal curvature of `imm` at `u`.
pub fn normal_curvature(imm: &Immersion, u: &[f64]) -> Result<NormalCurvature> {
    Ok(normal_curvature_from(&fundamental_at(imm, u)?))
}
