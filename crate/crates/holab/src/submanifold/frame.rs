//! Adapted frames along an immersion.
//!
//! A frame at a parameter point holds a (pseudo-)orthonormal tangent basis
//! and an orthonormal spacelike normal basis of the submanifold inside its
//! working ambient space. On pull-back charts the first tangent vector is
//! always the Hopf direction Jη; in the anti-de-Sitter model it is the
//! unique timelike direction. Geometry of a submanifold of a curved space
//! form (total-space chart) is read off the pull-back at θ = 0: the
//! horizontal tangent vectors represent the tangent space downstairs and
//! the normal vectors are shared between the two pictures.

use nalgebra::{DMatrix, DVector};

use crate::ambient::AmbientSpace;
use crate::error::{Error, Result};
use crate::hopf;
use crate::immersion::{Chart, Immersion, JetData};
use crate::linalg;
use crate::tol;

#[derive(Clone, Debug)]
pub struct FrameData {
    pub space: AmbientSpace,
    /// Chart the frame belongs to; `TotalSpace` marks the downstairs view
    /// of a pull-back frame (jet and coefficients refer to the pull-back
    /// parameters (u, θ), tangent vectors are horizontal).
    pub chart: Chart,
    pub point: DVector<f64>,
    pub tangent: Vec<DVector<f64>>,
    /// Causal signs ⟨e_i, e_i⟩ of the tangent vectors.
    pub eps: Vec<f64>,
    pub normal: Vec<DVector<f64>>,
    /// Frame coefficients: tangent[i] = Σ_a coeff[(i, a)] · jet.jac[a].
    pub coeff: DMatrix<f64>,
    /// The two-jet the frame was built from (pull-back jet for curved
    /// charts).
    pub jet: JetData,
}

impl FrameData {
    pub fn tangent_dim(&self) -> usize {
        self.tangent.len()
    }

    pub fn nu_dim(&self) -> usize {
        self.normal.len()
    }

    pub fn is_lorentzian(&self) -> bool {
        self.eps.iter().any(|&e| e < 0.0)
    }

    fn inner(&self, v: &DVector<f64>, w: &DVector<f64>) -> f64 {
        self.space.inner_unchecked(v, w)
    }

    /// Coordinates of `v` on the tangent frame.
    pub fn tangent_coords(&self, v: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.tangent.len(),
            self.tangent
                .iter()
                .zip(&self.eps)
                .map(|(e, s)| self.inner(v, e) / s),
        )
    }

    /// Coordinates of `v` on the normal frame.
    pub fn normal_coords(&self, v: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.normal.len(),
            self.normal.iter().map(|x| self.inner(v, x)),
        )
    }

    pub fn proj_tangent(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(v.len());
        for (e, s) in self.tangent.iter().zip(&self.eps) {
            out.axpy(self.inner(v, e) / s, e, 1.0);
        }
        out
    }

    /// Component along the total-space position (zero on flat charts).
    pub fn proj_position(&self, v: &DVector<f64>) -> DVector<f64> {
        if self.space.is_curved() {
            let z = &self.point;
            z * (self.inner(v, z) / self.space.norm2(z))
        } else {
            DVector::zeros(v.len())
        }
    }

    /// Projection onto the normal space of the working submanifold.
    pub fn proj_normal(&self, v: &DVector<f64>) -> DVector<f64> {
        v - self.proj_tangent(v) - self.proj_position(v)
    }

    /// Vector from normal-frame coordinates.
    pub fn normal_from_coords(&self, c: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.point.len());
        for (b, x) in self.normal.iter().enumerate() {
            out.axpy(c[b], x, 1.0);
        }
        out
    }

    pub fn tangent_from_coords(&self, c: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.point.len());
        for (i, e) in self.tangent.iter().enumerate() {
            out.axpy(c[i], e, 1.0);
        }
        out
    }

    pub fn tangent_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.point.len(), self.tangent.len());
        for (i, e) in self.tangent.iter().enumerate() {
            m.set_column(i, e);
        }
        m
    }

    pub fn normal_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.point.len(), self.normal.len());
        for (b, x) in self.normal.iter().enumerate() {
            m.set_column(b, x);
        }
        m
    }

    /// Component matrix of J on the frame basis (tangent ⊕ normal): entry
    /// (p, q) is the coefficient of basis vector p in J(basis vector q).
    /// The part of J that leaves the working tangent bundle (J of the Hopf
    /// direction points at the position) is not represented.
    pub fn j_frame(&self) -> DMatrix<f64> {
        let kt = self.tangent.len();
        let n = kt + self.normal.len();
        let mut m = DMatrix::zeros(n, n);
        let basis = |q: usize| -> &DVector<f64> {
            if q < kt {
                &self.tangent[q]
            } else {
                &self.normal[q - kt]
            }
        };
        for q in 0..n {
            let jb = self.space.apply_j(basis(q));
            for p in 0..n {
                let s = if p < kt { self.eps[p] } else { 1.0 };
                m[(p, q)] = self.inner(&jb, basis(p)) / s;
            }
        }
        m
    }

    /// Gram defect of the adapted frame against the expected signature.
    pub fn gram_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let all: Vec<(&DVector<f64>, f64)> = self
            .tangent
            .iter()
            .zip(self.eps.iter().copied())
            .chain(self.normal.iter().map(|v| (v, 1.0)))
            .collect();
        for (p, (v, sv)) in all.iter().enumerate() {
            for (q, (w, _)) in all.iter().enumerate() {
                let target = if p == q { *sv } else { 0.0 };
                worst = worst.max((self.inner(v, w) - target).abs());
            }
        }
        worst
    }
}

/// Orthonormal vectors with their combination coefficients over the
/// original spanning set.
type BasisWithCoeffs = (Vec<DVector<f64>>, Vec<Vec<f64>>);

/// Metric-orthonormalize the spanning set `h` (assumed spacelike span),
/// tracking combination coefficients over `rows` of parameter directions.
fn gram_schmidt(
    space: &AmbientSpace,
    h: &[DVector<f64>],
    rows: &[Vec<f64>],
    label: &str,
) -> Result<BasisWithCoeffs> {
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(h.len());
    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(h.len());
    for (i, v) in h.iter().enumerate() {
        let mut w = v.clone();
        let mut row = rows[i].clone();
        // Two passes of projection for numerical orthogonality.
        for _ in 0..2 {
            for (e, c) in basis.iter().zip(coeffs.iter()) {
                let t = space.inner_unchecked(&w, e);
                w.axpy(-t, e, 1.0);
                for (r, rc) in row.iter_mut().zip(c) {
                    *r -= t * rc;
                }
            }
        }
        let n2 = space.norm2(&w);
        if n2 <= 0.0 || n2.sqrt() < 1e-10 * (1.0 + v.norm()) {
            return Err(Error::DegenerateImmersion {
                point: label.to_string(),
                reason: format!("tangent direction {i} is linearly dependent"),
            });
        }
        let n = n2.sqrt();
        w /= n;
        for r in row.iter_mut() {
            *r /= n;
        }
        basis.push(w);
        coeffs.push(row);
    }
    Ok((basis, coeffs))
}

/// Complete `occupied` (with causal signs) to a full basis; returns `m`
/// orthonormal spacelike vectors picked greedily from the standard basis.
fn complete_normals(
    space: &AmbientSpace,
    occupied: &[(DVector<f64>, f64)],
    m: usize,
    label: &str,
) -> Result<Vec<DVector<f64>>> {
    let dim = space.coord_dim();
    let mut normals: Vec<DVector<f64>> = Vec::with_capacity(m);
    for _ in 0..m {
        let mut best: Option<(f64, DVector<f64>)> = None;
        for idx in 0..dim {
            let mut v = DVector::zeros(dim);
            v[idx] = 1.0;
            for _ in 0..2 {
                for (b, s) in occupied {
                    let t = space.inner_unchecked(&v, b) / s;
                    v.axpy(-t, b, 1.0);
                }
                for b in &normals {
                    let t = space.inner_unchecked(&v, b);
                    v.axpy(-t, b, 1.0);
                }
            }
            let norm = v.norm();
            if best.as_ref().is_none_or(|(bn, _)| norm > *bn) {
                best = Some((norm, v));
            }
        }
        let (norm, v) = best.unwrap();
        let n2 = space.norm2(&v);
        if norm < 1e-8 || n2 <= 0.0 {
            return Err(Error::DegenerateImmersion {
                point: label.to_string(),
                reason: "cannot complete an orthonormal normal basis".into(),
            });
        }
        normals.push(v / n2.sqrt());
    }
    Ok(normals)
}

fn check_conditioning(cols: &[DVector<f64>], label: &str) -> Result<()> {
    if cols.is_empty() {
        return Ok(());
    }
    let mut m = DMatrix::zeros(cols[0].len(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    let cond = linalg::condition_number(&m);
    if !cond.is_finite() || cond > tol::JACOBIAN_COND_MAX {
        return Err(Error::DegenerateImmersion {
            point: label.to_string(),
            reason: format!("Jacobian condition number {cond:.3e}"),
        });
    }
    Ok(())
}

fn label_of(u: &[f64]) -> String {
    let parts: Vec<String> = u.iter().map(|x| format!("{x:.6}")).collect();
    format!("u = ({})", parts.join(", "))
}

/// Build the adapted frame of `imm` at `u`.
///
/// * flat chart: `u` has the immersion's parameter dimension;
/// * total-space chart: the frame of the pull-back at (u, 0) with the
///   fiber direction removed from the tangent list (downstairs view);
/// * pull-back chart: `u` includes the fiber angle as the last entry.
pub fn frame_at(imm: &Immersion, u: &[f64]) -> Result<FrameData> {
    match imm.chart() {
        Chart::Flat => flat_frame(imm, u),
        Chart::Pullback => pullback_frame(imm, u, false),
        Chart::TotalSpace => {
            let pb = hopf::pullback(imm)?;
            let mut uu = u.to_vec();
            uu.push(0.0);
            pullback_frame(&pb, &uu, true)
        }
    }
}

fn flat_frame(imm: &Immersion, u: &[f64]) -> Result<FrameData> {
    let space = imm.space();
    let jet = imm.jet(u);
    let label = label_of(u);
    check_conditioning(&jet.jac, &label)?;
    let k = jet.param_dim();
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut r = vec![0.0; k];
            r[i] = 1.0;
            r
        })
        .collect();
    let (tangent, coeff_rows) = gram_schmidt(&space, &jet.jac, &rows, &label)?;
    let occupied: Vec<(DVector<f64>, f64)> =
        tangent.iter().map(|e| (e.clone(), 1.0)).collect();
    let m = space.coord_dim() - k;
    let normal = complete_normals(&space, &occupied, m, &label)?;
    let coeff = DMatrix::from_fn(k, k, |i, a| coeff_rows[i][a]);
    Ok(FrameData {
        space,
        chart: Chart::Flat,
        point: jet.point.clone(),
        tangent,
        eps: vec![1.0; k],
        normal,
        coeff,
        jet,
    })
}

/// `downstairs`: drop the fiber direction from the tangent list, producing
/// the frame of the submanifold of the space form itself.
fn pullback_frame(pb: &Immersion, u: &[f64], downstairs: bool) -> Result<FrameData> {
    let space = pb.space();
    let jet = pb.jet(u);
    let label = label_of(u);
    hopf::validate_representative(&space, &jet.point, &label)?;
    let kpb = jet.param_dim(); // k + 1, fiber last
    let k = kpb - 1;
    let z = &jet.point;
    let jz = space.apply_j(z);
    let zz = space.norm2(z);

    // Fiber direction: the θ-column of the Jacobian is exactly Jz.
    let fiber_norm2 = space.norm2(&jet.jac[k]).abs();
    let fiber_scale = fiber_norm2.sqrt();
    let e0 = &jet.jac[k] / fiber_scale;
    let eps0 = space.norm2(&e0).signum();

    // Horizontal parts of the u-columns, as combinations of jac columns.
    let mut h = Vec::with_capacity(k);
    let mut rows = Vec::with_capacity(k);
    for a in 0..k {
        let lam = space.inner_unchecked(&jet.jac[a], &jz) / zz;
        let mut v = jet.jac[a].clone();
        v.axpy(-lam, &jet.jac[k], 1.0);
        let mut row = vec![0.0; kpb];
        row[a] = 1.0;
        row[k] = -lam;
        h.push(v);
        rows.push(row);
    }
    check_conditioning(&h, &label)?;
    let (mut tangent, mut coeff_rows) = gram_schmidt(&space, &h, &rows, &label)?;
    let mut eps = vec![1.0; k];

    if !downstairs {
        let mut row0 = vec![0.0; kpb];
        row0[k] = 1.0 / fiber_scale;
        tangent.insert(0, e0.clone());
        coeff_rows.insert(0, row0);
        eps.insert(0, eps0);
    }

    // Normals are orthogonal to the position, the fiber and the horizontal
    // tangent directions in both views.
    let mut occupied: Vec<(DVector<f64>, f64)> = vec![
        (z / zz.abs().sqrt(), zz.signum()),
        (e0.clone(), eps0),
    ];
    let horiz_start = if downstairs { 0 } else { 1 };
    for e in &tangent[horiz_start..] {
        occupied.push((e.clone(), 1.0));
    }
    let m = space.coord_dim() - 2 - k;
    let normal = complete_normals(&space, &occupied, m, &label)?;

    let kt = tangent.len();
    let coeff = DMatrix::from_fn(kt, kpb, |i, a| coeff_rows[i][a]);
    Ok(FrameData {
        space,
        chart: if downstairs { Chart::TotalSpace } else { Chart::Pullback },
        point: jet.point.clone(),
        tangent,
        eps,
        normal,
        coeff,
        jet,
    })
}
