//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Principal angles (radians, ascending) between the column spans of `a`
/// and `b`. Columns must be orthonormal. Returns `min(rank a, rank b)`
/// angles; the cosines are the singular values of `aᵀb` clamped to [0, 1].
pub fn principal_angles(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Vec<f64> {
    if a.ncols() == 0 || b.ncols() == 0 {
        return Vec::new();
    }
    let m = a.transpose() * b;
    let svd = m.svd(false, false);
    let mut angles: Vec<f64> = svd
        .singular_values
        .iter()
        .map(|s| s.clamp(-1.0, 1.0).acos())
        .collect();
    angles.sort_by(|x, y| x.partial_cmp(y).unwrap());
    angles.truncate(a.ncols().min(b.ncols()));
    angles
}

/// Largest principal angle of `a` against `b`; measures how far span(a) is
/// from being contained in span(b). Zero columns in `a` give zero.
pub fn containment_angle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let angles = principal_angles(a, b);
    if angles.len() < a.ncols() {
        // b has lower rank than a: containment impossible.
        return std::f64::consts::FRAC_PI_2;
    }
    angles.into_iter().fold(0.0, f64::max)
}

/// Orthogonal Procrustes alignment: the orthogonal `q` minimizing
/// `‖b q − a‖_F`, applied to `b`. Frames must have the same shape.
pub fn procrustes_align(target: &DMatrix<f64>, frame: &DMatrix<f64>) -> DMatrix<f64> {
    let m = frame.transpose() * target;
    let svd = m.svd(true, true);
    let q = svd.u.unwrap() * svd.v_t.unwrap();
    frame * q
}

/// Principal logarithm of a special-orthogonal matrix.
///
/// Works on the real Schur form: an orthogonal quasi-triangular matrix is
/// block diagonal with 1×1 blocks ±1 and 2×2 rotation blocks, so the log
/// is assembled from the rotation angles. Fails when an eigenvalue sits at
/// −1 (angle π), where the principal branch is ambiguous.
pub fn so_log(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = g.nrows();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let schur = g.clone().schur();
    let (q, t) = schur.unpack();
    let mut log_t = DMatrix::zeros(n, n);
    let mut i = 0;
    while i < n {
        let two_by_two = i + 1 < n && t[(i + 1, i)].abs() > 1e-12;
        if two_by_two {
            // Nearly a rotation block; extract the angle from the balanced
            // off-diagonal entries.
            let c = 0.5 * (t[(i, i)] + t[(i + 1, i + 1)]);
            let s = 0.5 * (t[(i + 1, i)] - t[(i, i + 1)]);
            let theta = s.atan2(c);
            if theta.abs() > std::f64::consts::PI - 1e-6 {
                return Err(Error::NonconvergentLog(format!(
                    "rotation angle {theta:.6} too close to the branch cut"
                )));
            }
            log_t[(i, i + 1)] = -theta;
            log_t[(i + 1, i)] = theta;
            i += 2;
        } else {
            if t[(i, i)] < 0.0 {
                return Err(Error::NonconvergentLog(
                    "eigenvalue -1 on the principal branch cut".into(),
                ));
            }
            i += 1;
        }
    }
    let log = &q * log_t * q.transpose();
    // Exact skew-symmetrization removes round-off from the similarity.
    Ok(0.5 * (&log - log.transpose()))
}

/// Row-major vectorization of the strictly lower triangle of a skew matrix;
/// an isometry up to the uniform factor √2 (irrelevant for span work).
pub fn skew_to_vec(m: &DMatrix<f64>) -> DVector<f64> {
    let n = m.nrows();
    let mut v = DVector::zeros(n * (n - 1) / 2);
    let mut idx = 0;
    for i in 1..n {
        for j in 0..i {
            v[idx] = m[(i, j)];
            idx += 1;
        }
    }
    v
}

pub fn vec_to_skew(v: &DVector<f64>, n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    let mut idx = 0;
    for i in 1..n {
        for j in 0..i {
            m[(i, j)] = v[idx];
            m[(j, i)] = -v[idx];
            idx += 1;
        }
    }
    m
}

/// Orthonormal basis for the span of `vectors`, with singular values and a
/// relative rank cutoff. Returns (basis columns, singular values kept).
pub fn span_basis(
    vectors: &[DVector<f64>],
    rel_tol: f64,
    abs_floor: f64,
) -> (DMatrix<f64>, Vec<f64>) {
    if vectors.is_empty() {
        return (DMatrix::zeros(0, 0), Vec::new());
    }
    let dim = vectors[0].len();
    let mut m = DMatrix::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    let svd = m.svd(true, false);
    let u = svd.u.unwrap();
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax < abs_floor {
        return (DMatrix::zeros(dim, 0), Vec::new());
    }
    let mut cols = Vec::new();
    let mut kept = Vec::new();
    for (j, s) in svd.singular_values.iter().enumerate() {
        if *s > rel_tol * smax {
            cols.push(u.column(j).clone_owned());
            kept.push(*s);
        }
    }
    let mut basis = DMatrix::zeros(dim, cols.len());
    for (j, c) in cols.iter().enumerate() {
        basis.set_column(j, c);
    }
    (basis, kept)
}

/// Solve the small symmetric (possibly indefinite) system `g x = b`.
pub fn gram_solve(g: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    g.clone().lu().solve(b).ok_or_else(|| Error::DegenerateImmersion {
        point: "gram system".into(),
        reason: "singular induced metric".into(),
    })
}

/// Condition number from singular values (∞ for rank-deficient input).
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Frobenius distance to the identity.
pub fn identity_defect(m: &DMatrix<f64>) -> f64 {
    (m - DMatrix::<f64>::identity(m.nrows(), m.ncols())).norm()
}

/// Frobenius defect of orthogonality `‖gᵀg − I‖`.
pub fn orthogonality_defect(g: &DMatrix<f64>) -> f64 {
    identity_defect(&(g.transpose() * g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rotation(n: usize, i: usize, j: usize, theta: f64) -> DMatrix<f64> {
        let mut m = DMatrix::identity(n, n);
        m[(i, i)] = theta.cos();
        m[(j, j)] = theta.cos();
        m[(i, j)] = -theta.sin();
        m[(j, i)] = theta.sin();
        m
    }

    #[test]
    fn so_log_recovers_rotation_angles() {
        let g = rotation(4, 0, 2, 0.7) * rotation(4, 1, 3, -1.2);
        let log = so_log(&g).unwrap();
        // exp(log) == g, checked through the series
        let mut e = DMatrix::identity(4, 4);
        let mut term = DMatrix::identity(4, 4);
        for k in 1..25 {
            term = &term * &log / k as f64;
            e += &term;
        }
        assert_relative_eq!(e, g, epsilon = 1e-12);
        assert_relative_eq!(log.clone(), -log.transpose(), epsilon = 1e-14);
    }

    #[test]
    fn so_log_rejects_branch_cut() {
        let g = rotation(2, 0, 1, std::f64::consts::PI);
        assert!(so_log(&g).is_err());
    }

    #[test]
    fn principal_angles_of_rotated_plane() {
        let mut a = DMatrix::zeros(4, 2);
        a[(0, 0)] = 1.0;
        a[(1, 1)] = 1.0;
        let theta: f64 = 0.3;
        let mut b = DMatrix::zeros(4, 2);
        b[(0, 0)] = theta.cos();
        b[(2, 0)] = theta.sin();
        b[(1, 1)] = 1.0;
        let angles = principal_angles(&a, &b);
        assert_relative_eq!(angles[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(angles[1], theta, epsilon = 1e-12);
    }

    #[test]
    fn procrustes_undoes_an_orthogonal_gauge() {
        let base = DMatrix::<f64>::from_fn(5, 3, |i, j| ((i * 3 + j) as f64 * 0.37).sin());
        let qr = base.qr();
        let a = qr.q();
        let q = rotation(3, 0, 2, 0.9);
        let b = &a * q;
        let aligned = procrustes_align(&a, &b);
        assert_relative_eq!(aligned, a, epsilon = 1e-12);
    }

    #[test]
    fn skew_vectorization_round_trip() {
        let v = DVector::from_vec(vec![1.0, -2.0, 3.0, 0.5, -0.25, 4.0]);
        let m = vec_to_skew(&v, 4);
        assert_relative_eq!(skew_to_vec(&m), v, epsilon = 0.0);
        assert_relative_eq!(m.clone(), -m.transpose(), epsilon = 0.0);
    }
}
