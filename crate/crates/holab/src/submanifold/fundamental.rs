//! Second fundamental form, shape operators and normal-connection data.
//!
//! Everything is assembled from flat second derivatives of the working
//! chart followed by projection: α(X, Y) is the normal component of the
//! coordinate Hessian contracted with the frame coefficients, which removes
//! the position and fiber components on curved models. No metric is ever
//! differentiated.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::immersion::{Chart, Immersion};
use crate::linalg;
use crate::tol;

use super::frame::{frame_at, FrameData};

#[derive(Clone, Debug)]
pub struct FundamentalData {
    pub frame: FrameData,
    /// Bilinear components per normal direction a: alpha[a][(i, j)] =
    /// ⟨α(e_i, e_j), ξ_a⟩. Symmetric in (i, j).
    pub alpha: Vec<DMatrix<f64>>,
    /// Shape operators as operators on tangent-frame coordinates. In a
    /// pseudo-orthonormal frame the operator matrix is diag(ε)·alpha.
    pub shape: Vec<DMatrix<f64>>,
    /// Normal-connection coefficients per tangent direction i:
    /// gamma[i][(b, a)] = ⟨∇⊥_{e_i} ξ_a, ξ_b⟩, extracted in the locally
    /// aligned (Procrustes) gauge, which makes them skew and small.
    pub gamma: Vec<DMatrix<f64>>,
}

impl FundamentalData {
    pub fn nu_dim(&self) -> usize {
        self.frame.nu_dim()
    }

    pub fn tangent_dim(&self) -> usize {
        self.frame.tangent_dim()
    }

    /// α(v, w) as a vector of normal-frame coordinates, for tangent-frame
    /// coordinate vectors `v`, `w`.
    pub fn alpha_coords(&self, v: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.alpha.len(),
            self.alpha.iter().map(|a| (v.transpose() * a * w)[(0, 0)]),
        )
    }

    /// Shape operator for the normal direction with frame coordinates `c`.
    pub fn shape_for(&self, c: &DVector<f64>) -> DMatrix<f64> {
        let kt = self.tangent_dim();
        let mut m = DMatrix::zeros(kt, kt);
        for (a, s) in self.shape.iter().enumerate() {
            m += s * c[a];
        }
        m
    }

    /// Frobenius norm of the full second fundamental form.
    pub fn alpha_norm(&self) -> f64 {
        self.alpha.iter().map(|a| a.norm_squared()).sum::<f64>().sqrt()
    }

    /// Largest symmetry defect ‖αᵃ − (αᵃ)ᵀ‖∞ across normal directions.
    pub fn shape_symmetry_defect(&self) -> f64 {
        self.alpha
            .iter()
            .map(|a| (a - a.transpose()).amax())
            .fold(0.0, f64::max)
    }

    /// Largest skewness defect of the connection coefficients.
    pub fn gamma_skew_defect(&self) -> f64 {
        self.gamma
            .iter()
            .map(|g| (g + g.transpose()).amax())
            .fold(0.0, f64::max)
    }
}

/// Direction for differentiating fields given on the parameter domain: a
/// displacement of the base parameters plus the fiber component of the
/// corresponding lifted direction (zero on flat and pull-back charts,
/// where the chart parameters already tell the whole story).
#[derive(Clone, Debug)]
pub struct FieldDirection {
    pub du: Vec<f64>,
    pub dtheta: f64,
}

impl FieldDirection {
    /// The direction of the i-th frame vector of `frame`. The fields it
    /// will differentiate live on the frame's own parameter domain: the
    /// chart parameters for flat and pull-back frames, the downstairs
    /// parameters (the θ = 0 section) for total-space frames, where the
    /// fiber component of the lifted direction is kept separately.
    pub fn frame_direction(frame: &FrameData, i: usize) -> Self {
        let row: Vec<f64> = frame.coeff.row(i).iter().copied().collect();
        match frame.chart {
            Chart::TotalSpace => {
                let k = row.len() - 1;
                FieldDirection { du: row[..k].to_vec(), dtheta: row[k] }
            }
            _ => FieldDirection { du: row, dtheta: 0.0 },
        }
    }

    /// The direction of the a-th coordinate field. On total-space charts
    /// this is the horizontal lift of the projected coordinate field, whose
    /// fiber component is minus the gauge coefficient λ_a.
    pub fn coordinate_direction(frame: &FrameData, a: usize) -> Self {
        match frame.chart {
            Chart::TotalSpace => {
                let k = frame.jet.param_dim() - 1;
                let space = frame.space;
                let jz = space.apply_j(&frame.point);
                let lam = space.inner_unchecked(&frame.jet.jac[a], &jz)
                    / space.norm2(&frame.point);
                let mut du = vec![0.0; k];
                du[a] = 1.0;
                FieldDirection { du, dtheta: -lam }
            }
            _ => {
                let k = frame.jet.param_dim();
                let mut du = vec![0.0; k];
                du[a] = 1.0;
                FieldDirection { du, dtheta: 0.0 }
            }
        }
    }
}

/// Covariant derivative in the normal bundle of a smooth ambient-vector
/// field `field` (given on the base parameters of `imm`) along `dir`,
/// evaluated at `u` with the frame `frame` of that point.
///
/// The field is centrally differenced with step `delta`; on total-space
/// charts the fiber component of the direction contributes J·field, the
/// derivative of the circle-equivariant extension.
pub fn field_normal_derivative(
    frame: &FrameData,
    u: &[f64],
    field: &dyn Fn(&[f64]) -> DVector<f64>,
    dir: &FieldDirection,
    delta: f64,
) -> DVector<f64> {
    let shift = |s: f64| -> Vec<f64> {
        u.iter()
            .zip(dir.du.iter().chain(std::iter::repeat(&0.0)))
            .map(|(x, d)| x + s * delta * d)
            .collect()
    };
    let fp = field(&shift(1.0));
    let fm = field(&shift(-1.0));
    let mut d = (fp - fm) / (2.0 * delta);
    if frame.chart != Chart::Flat && dir.dtheta != 0.0 {
        let f0 = field(u);
        d.axpy(dir.dtheta, &frame.space.apply_j(&f0), 1.0);
    }
    frame.proj_normal(&d)
}

/// Frames at displaced parameters, normal part aligned to the center frame.
fn aligned_normal_frame(
    imm: &Immersion,
    center: &FrameData,
    u_shifted: &[f64],
) -> Result<DMatrix<f64>> {
    let f = frame_at(imm, u_shifted)?;
    Ok(linalg::procrustes_align(&center.normal_matrix(), &f.normal_matrix()))
}

/// Second fundamental form, shape operators and connection coefficients at
/// `u` (downstairs parameters for total-space charts).
pub fn fundamental_at(imm: &Immersion, u: &[f64]) -> Result<FundamentalData> {
    let frame = frame_at(imm, u)?;
    let kt = frame.tangent_dim();
    let m = frame.nu_dim();
    let kp = frame.jet.param_dim();
    let space = frame.space;

    // Normal projections of the coordinate Hessian, then frame contraction.
    let mut alpha = Vec::with_capacity(m);
    for a in 0..m {
        let xi = &frame.normal[a];
        let p = DMatrix::from_fn(kp, kp, |c, d| {
            space.inner_unchecked(&frame.jet.hess[c][d], xi)
        });
        let contracted = &frame.coeff * p * frame.coeff.transpose();
        alpha.push(0.5 * (&contracted + contracted.transpose()));
    }
    let eps_mat = DMatrix::from_fn(kt, kt, |i, j| if i == j { frame.eps[i] } else { 0.0 });
    let shape: Vec<DMatrix<f64>> = alpha.iter().map(|a| &eps_mat * a).collect();

    // Connection coefficients from Procrustes-aligned neighbor frames.
    let delta = tol::GAMMA_STEP;
    let mut gamma = Vec::with_capacity(kt);
    for i in 0..kt {
        let dir = FieldDirection::frame_direction(&frame, i);
        let shifted = |s: f64| -> Vec<f64> {
            u.iter()
                .zip(dir.du.iter().chain(std::iter::repeat(&0.0)))
                .map(|(x, d)| x + s * delta * d)
                .collect()
        };
        // On pull-back charts the frame direction may displace the fiber
        // angle as well; `u` already contains it, so the zip covers it.
        let plus = aligned_normal_frame(imm, &frame, &shifted(1.0))?;
        let minus = aligned_normal_frame(imm, &frame, &shifted(-1.0))?;
        let mut g = DMatrix::zeros(m, m);
        for a in 0..m {
            let mut d =
                (plus.column(a).clone_owned() - minus.column(a).clone_owned()) / (2.0 * delta);
            if frame.chart != Chart::Flat && dir.dtheta != 0.0 {
                d.axpy(dir.dtheta, &space.apply_j(&frame.normal[a]), 1.0);
            }
            for b in 0..m {
                g[(b, a)] = space.inner_unchecked(&d, &frame.normal[b]);
            }
        }
        gamma.push(g);
    }

    Ok(FundamentalData { frame, alpha, shape, gamma })
}

/// Weingarten duality defect max |⟨α(X,Y),ξ⟩ − ⟨A_ξ X, Y⟩| over the frame.
pub fn weingarten_defect(fd: &FundamentalData) -> f64 {
    let kt = fd.tangent_dim();
    let mut worst: f64 = 0.0;
    for a in 0..fd.nu_dim() {
        for i in 0..kt {
            for j in 0..kt {
                // ⟨A_ξ e_i, e_j⟩ = Σ_p shape[p][i] ⟨e_p, e_j⟩ = shape[j][i] ε_j
                let lhs = fd.alpha[a][(i, j)];
                let rhs = fd.shape[a][(j, i)] * fd.frame.eps[j];
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    worst
}
