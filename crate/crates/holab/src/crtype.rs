//! Pointwise CR classification by principal angles.
//!
//! The holomorphic distribution D at a point is read off the singular
//! values of the cross-Gram matrix ⟨J e_i, e_j⟩ of an orthonormal tangent
//! basis; cosines near one are J-invariant pairs. The complement D⊥ must be
//! mapped into the normal space by J for the point to carry a CR structure
//! at all. The matrix is skew, so its singular values come in exactly equal
//! pairs and D has even dimension; a count that straddles the tolerance is
//! repaired by examining the nearest pair.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::immersion::Immersion;
use crate::linalg;
use crate::submanifold::frame_at;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrLabel {
    Complex,
    TotallyReal,
    Coisotropic,
    Lagrangian,
    GenericCR,
    NotCR,
}

impl std::fmt::Display for CrLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CrLabel::Complex => "Complex",
            CrLabel::TotallyReal => "TotallyReal",
            CrLabel::Coisotropic => "Coisotropic",
            CrLabel::Lagrangian => "Lagrangian",
            CrLabel::GenericCR => "GenericCR",
            CrLabel::NotCR => "NotCR",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct CRClassification {
    pub label: CrLabel,
    pub dim_d: usize,
    pub dim_dperp: usize,
    /// Principal angles between J(TM) and TM, ascending.
    pub angles: Vec<f64>,
    /// Largest principal angle of J(νM) against TM; zero means coisotropic.
    pub coisotropic_angle: f64,
    /// Largest principal angle of J(D⊥) against νM; the CR defect.
    pub anti_invariance_angle: f64,
    pub tol: f64,
}

impl CRClassification {
    pub fn is_coisotropic(&self) -> bool {
        self.coisotropic_angle < self.tol
    }

    pub fn is_totally_real(&self) -> bool {
        self.dim_d == 0
    }
}

/// Classify the submanifold point `u` with angle tolerance `tol` (radians).
pub fn classify(imm: &Immersion, u: &[f64], tol: f64) -> Result<CRClassification> {
    if !(tol > 0.0 && tol < std::f64::consts::FRAC_PI_4) {
        return Err(Error::InvalidTolerance(tol));
    }
    let frame = frame_at(imm, u)?;
    let space = frame.space;
    let k = frame.tangent_dim();
    let m = frame.nu_dim();

    // cross-Gram of J(TM) against TM; skew because J is an isometry
    let cross = DMatrix::from_fn(k, k, |i, j| {
        space.inner_unchecked(&space.apply_j(&frame.tangent[i]), &frame.tangent[j])
    });
    let svd = cross.clone().svd(true, false);
    let angles: Vec<f64> = svd
        .singular_values
        .iter()
        .map(|s| s.clamp(-1.0, 1.0).acos())
        .collect();
    // nalgebra returns singular values descending, hence angles ascending
    for w in angles.windows(2) {
        debug_assert!(w[0] <= w[1] + 1e-12);
    }

    let mut dim_d = angles.iter().filter(|a| **a < tol).count();
    if dim_d % 2 == 1 {
        // examine the closest pair above the tolerance
        if dim_d < k && angles[dim_d] < 2.0 * tol {
            dim_d += 1;
        } else {
            dim_d -= 1;
        }
    }
    // equal-pair structure of a skew matrix; a persistent mismatch means
    // the numerical D is not J-invariant
    let mut paired = true;
    let mut p = 0;
    while p + 1 < dim_d {
        if (angles[p] - angles[p + 1]).abs() > tol {
            paired = false;
        }
        p += 2;
    }

    let dim_dperp = k - dim_d;
    let u_mat = svd.u.as_ref().unwrap();

    // J(D⊥) must lie inside the normal space
    let anti_invariance_angle = if dim_dperp == 0 {
        0.0
    } else {
        let mut jdp = DMatrix::zeros(space.coord_dim(), dim_dperp);
        for (col, q) in (dim_d..k).enumerate() {
            let mut v = nalgebra::DVector::zeros(space.coord_dim());
            for i in 0..k {
                v.axpy(u_mat[(i, q)], &frame.tangent[i], 1.0);
            }
            jdp.set_column(col, &space.apply_j(&v));
        }
        linalg::containment_angle(&jdp, &frame.normal_matrix())
    };

    // coisotropy: J(νM) inside TM
    let coisotropic_angle = if m == 0 {
        0.0
    } else {
        let mut jnu = DMatrix::zeros(space.coord_dim(), m);
        for (col, x) in frame.normal.iter().enumerate() {
            jnu.set_column(col, &space.apply_j(x));
        }
        linalg::containment_angle(&jnu, &frame.tangent_matrix())
    };

    let coiso = coisotropic_angle < tol;
    let label = if !paired || anti_invariance_angle >= tol {
        CrLabel::NotCR
    } else if dim_d == k {
        CrLabel::Complex
    } else if dim_d == 0 && coiso && k == space.n {
        CrLabel::Lagrangian
    } else if dim_d == 0 && !coiso {
        CrLabel::TotallyReal
    } else if coiso {
        CrLabel::Coisotropic
    } else {
        CrLabel::GenericCR
    };

    Ok(CRClassification {
        label,
        dim_d,
        dim_dperp,
        angles,
        coisotropic_angle,
        anti_invariance_angle,
        tol,
    })
}
