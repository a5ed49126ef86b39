//! The trace-form curvature tensor on the normal space of a pull-back.
//!
//! ⟨T(ξ₁,ξ₂)ξ₃,ξ₄⟩ = −½ tr([A_{ξ₁}, A_{ξ₂}] ∘ [A_{ξ₃}, A_{ξ₄}]) is an
//! algebraic curvature tensor built from the pull-back shape operators. It
//! carries the same span as the normal curvature and has nonpositive
//! sectional values on coisotropic pull-backs, where the commutators kill
//! the Hopf direction and act on spacelike vectors only.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hopf;
use crate::immersion::{Chart, Immersion};
use crate::submanifold::{fundamental_at, FundamentalData};

#[derive(Clone, Debug)]
pub struct ScriptR {
    pub fd: FundamentalData,
    m: usize,
    vals: Vec<f64>,
    /// Commutators [A_a, A_b] of the pull-back shape operators.
    comms: Vec<DMatrix<f64>>,
}

impl ScriptR {
    pub fn nu_dim(&self) -> usize {
        self.m
    }

    /// ⟨T(ξ_a, ξ_b) ξ_c, ξ_d⟩.
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let m = self.m;
        self.vals[((a * m + b) * m + c) * m + d]
    }

    /// Matrix of T(ξ_a, ξ_b) on the normal frame: entry (d, c).
    pub fn matrix(&self, a: usize, b: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.m, self.m, |d, c| self.get(a, b, c, d))
    }

    /// Sectional value ⟨T(ξ, ζ)ζ, ξ⟩ for normal coordinate vectors.
    pub fn sectional(&self, xi: &nalgebra::DVector<f64>, zeta: &nalgebra::DVector<f64>) -> f64 {
        let m = self.m;
        let mut s = 0.0;
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        s += xi[a] * zeta[b] * zeta[c] * xi[d] * self.get(a, b, c, d);
                    }
                }
            }
        }
        s
    }

    /// Commutator of shape operators along normal coordinate directions.
    pub fn shape_commutator(
        &self,
        xi: &nalgebra::DVector<f64>,
        zeta: &nalgebra::DVector<f64>,
    ) -> DMatrix<f64> {
        let sa = self.fd.shape_for(xi);
        let sb = self.fd.shape_for(zeta);
        &sa * &sb - sb * sa
    }

    pub fn comm(&self, a: usize, b: usize) -> &DMatrix<f64> {
        &self.comms[a * self.m + b]
    }
}

/// Evaluate the tensor on the pull-back of `imm` at downstairs parameter
/// `p` (or directly on a pull-back chart at its own parameters).
pub fn script_r_tensor(imm: &Immersion, p: &[f64]) -> Result<ScriptR> {
    let fd = match imm.chart() {
        Chart::Pullback => fundamental_at(imm, p)?,
        Chart::TotalSpace => {
            let pb = hopf::pullback(imm)?;
            let mut q = p.to_vec();
            q.push(0.0);
            fundamental_at(&pb, &q)?
        }
        Chart::Flat => {
            return Err(Error::InvalidInput(
                "the trace-form tensor is defined on pull-backs of the curved models".into(),
            ))
        }
    };
    let m = fd.nu_dim();
    let comms: Vec<DMatrix<f64>> = (0..m * m)
        .map(|idx| {
            let (a, b) = (idx / m, idx % m);
            &fd.shape[a] * &fd.shape[b] - &fd.shape[b] * &fd.shape[a]
        })
        .collect();
    let mut vals = vec![0.0; m * m * m * m];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let t = -(0.5) * (&comms[a * m + b] * &comms[c * m + d]).trace();
                    vals[((a * m + b) * m + c) * m + d] = t;
                }
            }
        }
    }
    Ok(ScriptR { fd, m, vals, comms })
}
