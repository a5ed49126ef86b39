//! The three standard complex space forms and their total spaces.
//!
//! Complex coordinates are stored interleaved, `[re_0, im_0, re_1, im_1, ...]`.
//! The flat model is Cⁿ ≅ ℝ^{2n}. The curved models are presented through
//! their total spaces: the sphere S^{2n+1} ⊂ ℂ^{n+1} for holomorphic
//! sectional curvature c = 4, and the anti-de-Sitter space H^{n+1}_1 inside
//! ℂ^{n+1} with a signature-2 scalar product for c = −4. In the Lorentzian
//! case the first complex coordinate pair carries weight −1.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Which of the three standard models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceForm {
    /// Cⁿ, c = 0.
    Flat,
    /// CPⁿ, c = 4.
    Projective,
    /// CHⁿ, c = −4.
    Hyperbolic,
}

/// A complex space form of complex dimension `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientSpace {
    pub form: SpaceForm,
    /// Complex dimension of the space form itself (not of the total space).
    pub n: usize,
}

impl AmbientSpace {
    pub fn flat(n: usize) -> Self {
        AmbientSpace { form: SpaceForm::Flat, n }
    }

    pub fn projective(n: usize) -> Self {
        AmbientSpace { form: SpaceForm::Projective, n }
    }

    pub fn hyperbolic(n: usize) -> Self {
        AmbientSpace { form: SpaceForm::Hyperbolic, n }
    }

    /// Build from the holomorphic sectional curvature; only the three
    /// standard values are admitted.
    pub fn from_c(c: f64, n: usize) -> Result<Self> {
        if c == 0.0 {
            Ok(Self::flat(n))
        } else if c == 4.0 {
            Ok(Self::projective(n))
        } else if c == -4.0 {
            Ok(Self::hyperbolic(n))
        } else {
            Err(Error::InvalidInput(format!(
                "holomorphic sectional curvature must be one of 0, 4, -4 (got {c})"
            )))
        }
    }

    /// Holomorphic sectional curvature.
    pub fn c(&self) -> f64 {
        match self.form {
            SpaceForm::Flat => 0.0,
            SpaceForm::Projective => 4.0,
            SpaceForm::Hyperbolic => -4.0,
        }
    }

    pub fn is_curved(&self) -> bool {
        self.form != SpaceForm::Flat
    }

    /// Real dimension of the coordinate space: 2n for the flat model,
    /// 2n + 2 for the curved models (total-space coordinates).
    pub fn coord_dim(&self) -> usize {
        match self.form {
            SpaceForm::Flat => 2 * self.n,
            _ => 2 * self.n + 2,
        }
    }

    /// Constant sectional curvature of the total space N̄_c (+1 for the
    /// sphere, −1 for the anti-de-Sitter space). Zero for the flat model,
    /// where there is no fibration.
    pub fn total_space_curvature_constant(&self) -> f64 {
        self.c() / 4.0
    }

    /// Metric weight of coordinate `i` (−1 on the first complex pair in the
    /// Lorentzian model, +1 otherwise).
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        if self.form == SpaceForm::Hyperbolic && i < 2 {
            -1.0
        } else {
            1.0
        }
    }

    /// Scalar product of the model: the Euclidean product for c ∈ {0, 4},
    /// the signature-2 product Re(−z₀w̄₀ + Σ_{i≥1} zᵢw̄ᵢ) for c = −4.
    pub fn inner(&self, v: &DVector<f64>, w: &DVector<f64>) -> Result<f64> {
        let dim = self.coord_dim();
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
        }
        if w.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: w.len() });
        }
        Ok(self.inner_unchecked(v, w))
    }

    /// Same as [`inner`](Self::inner) without the dimension check; for inner
    /// loops where dimensions are structurally correct.
    #[inline]
    pub fn inner_unchecked(&self, v: &DVector<f64>, w: &DVector<f64>) -> f64 {
        match self.form {
            SpaceForm::Hyperbolic => {
                -v[0] * w[0] - v[1] * w[1]
                    + v.iter().zip(w.iter()).skip(2).map(|(a, b)| a * b).sum::<f64>()
            }
            _ => v.dot(w),
        }
    }

    /// Squared norm under the model's scalar product (may be negative in
    /// the Lorentzian model).
    pub fn norm2(&self, v: &DVector<f64>) -> f64 {
        self.inner_unchecked(v, v)
    }

    /// Multiplication by i in the interleaved-real identification:
    /// (x, y) ↦ (−y, x) on every complex pair. An exact sparse operation.
    pub fn apply_j(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(v.len());
        for p in 0..v.len() / 2 {
            out[2 * p] = -v[2 * p + 1];
            out[2 * p + 1] = v[2 * p];
        }
        out
    }

    /// Wedge action (x ∧ y) z = ⟨y, z⟩ x − ⟨x, z⟩ y under the model inner
    /// product.
    pub fn wedge(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        z: &DVector<f64>,
    ) -> DVector<f64> {
        x * self.inner_unchecked(y, z) - y * self.inner_unchecked(x, z)
    }

    /// Curvature tensor of the space form,
    /// R(X,Y)Z = (c/4)[(X∧Y)Z + (JX∧JY)Z − 2⟨JX,Y⟩ JZ],
    /// evaluated on coordinates of a unitary frame (flat coordinates for
    /// c = 0, horizontal vectors at a total-space point for c = ±4).
    pub fn curvature_tensor(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        z: &DVector<f64>,
    ) -> DVector<f64> {
        let c4 = self.c() / 4.0;
        if c4 == 0.0 {
            return DVector::zeros(x.len());
        }
        let jx = self.apply_j(x);
        let jy = self.apply_j(y);
        let jz = self.apply_j(z);
        let mut out = self.wedge(x, y, z);
        out += self.wedge(&jx, &jy, z);
        out -= jz * (2.0 * self.inner_unchecked(&jx, y));
        out * c4
    }

    /// Curvature tensor of the total space N̄_c (a real space form of
    /// constant curvature c/4): R'(X,Y)Z = (c/4)(⟨Y,Z⟩X − ⟨X,Z⟩Y).
    pub fn total_space_curvature(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        z: &DVector<f64>,
    ) -> DVector<f64> {
        self.wedge(x, y, z) * self.total_space_curvature_constant()
    }
}

/// Rotate interleaved complex coordinates by e^{iθ}; an isometry of every
/// model inner product.
pub fn rotate_phase(v: &DVector<f64>, theta: f64) -> DVector<f64> {
    let (c, s) = (theta.cos(), theta.sin());
    let mut out = DVector::zeros(v.len());
    for p in 0..v.len() / 2 {
        out[2 * p] = c * v[2 * p] - s * v[2 * p + 1];
        out[2 * p + 1] = s * v[2 * p] + c * v[2 * p + 1];
    }
    out
}

/// A validated point of the total space N̄_c: ⟨z,z⟩ = 1 on the sphere,
/// ⟨z,z⟩₁ = −1 on the anti-de-Sitter space.
#[derive(Clone, Debug)]
pub struct TotalSpacePoint {
    space: AmbientSpace,
    z: DVector<f64>,
}

impl TotalSpacePoint {
    pub fn new(space: AmbientSpace, z: DVector<f64>) -> Result<Self> {
        if !space.is_curved() {
            return Err(Error::UnsupportedModel);
        }
        let target = if space.form == SpaceForm::Projective { 1.0 } else { -1.0 };
        let defect = (space.inner(&z, &z)? - target).abs();
        if defect > tol::REPRESENTATIVE_NORM {
            return Err(Error::InvalidRepresentative {
                point: format!("{:?}", z.as_slice()),
                defect,
            });
        }
        Ok(TotalSpacePoint { space, z })
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.z
    }

    /// The Hopf (fiber) direction Jη at this point.
    pub fn hopf_vector(&self) -> DVector<f64> {
        self.space.apply_j(&self.z)
    }

    pub fn space(&self) -> AmbientSpace {
        self.space
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn basis_vector(space: &AmbientSpace, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(space.coord_dim());
        v[i] = 1.0;
        v
    }

    #[test]
    fn inner_on_unit_basis_vectors() {
        let proj = AmbientSpace::projective(1); // coords in C^2 = R^4
        let e0 = basis_vector(&proj, 0);
        assert_relative_eq!(proj.inner(&e0, &e0).unwrap(), 1.0);

        let hyp = AmbientSpace::hyperbolic(1);
        let e0h = basis_vector(&hyp, 0);
        assert_relative_eq!(hyp.inner(&e0h, &e0h).unwrap(), -1.0);

        let flat = AmbientSpace::flat(2);
        let a = basis_vector(&flat, 0);
        let b = basis_vector(&flat, 2);
        assert_relative_eq!(flat.inner(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn inner_rejects_dimension_mismatch() {
        let space = AmbientSpace::flat(2);
        let v = DVector::zeros(3);
        let w = DVector::zeros(4);
        assert!(matches!(
            space.inner(&v, &w),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn j_is_multiplication_by_i() {
        let space = AmbientSpace::flat(1);
        let e0 = basis_vector(&space, 0);
        let j = space.apply_j(&e0);
        assert_relative_eq!(j[0], 0.0);
        assert_relative_eq!(j[1], 1.0);
    }

    #[test]
    fn flat_curvature_vanishes() {
        let space = AmbientSpace::flat(2);
        let x = DVector::from_vec(vec![1.0, 2.0, -1.0, 0.5]);
        let y = DVector::from_vec(vec![0.0, 1.0, 3.0, -2.0]);
        let z = DVector::from_vec(vec![2.0, -1.0, 0.0, 1.0]);
        assert_relative_eq!(space.curvature_tensor(&x, &y, &z).norm(), 0.0);
    }

    #[test]
    fn sectional_curvature_of_projective_planes() {
        // X, Y orthonormal with Y ⊥ JX spans a totally real plane: K = c/4.
        // Y = JX spans a holomorphic plane: K = c.
        let space = AmbientSpace::projective(2);
        let x = basis_vector(&space, 0);
        let y = basis_vector(&space, 2);
        let r = space.curvature_tensor(&x, &y, &y);
        assert_relative_eq!(
            space.inner(&r, &x).unwrap(),
            1.0, // c/4
            epsilon = crate::tol::ALGEBRA
        );
        // R(X,Y)Y = X for the totally real plane with c = 4.
        assert_relative_eq!((r - &x).norm(), 0.0, epsilon = crate::tol::ALGEBRA);

        let jx = space.apply_j(&x);
        let rh = space.curvature_tensor(&x, &jx, &jx);
        assert_relative_eq!(
            space.inner(&rh, &x).unwrap(),
            4.0, // c
            epsilon = crate::tol::ALGEBRA
        );
        // R(X,JX)JX = 4X for unit X.
        assert_relative_eq!((rh - &x * 4.0).norm(), 0.0, epsilon = crate::tol::ALGEBRA);
    }

    #[test]
    fn total_space_points_validate_norm() {
        let proj = AmbientSpace::projective(1);
        let mut z = DVector::zeros(4);
        z[0] = 1.0;
        assert!(TotalSpacePoint::new(proj, z.clone()).is_ok());
        z[0] = 1.1;
        assert!(TotalSpacePoint::new(proj, z).is_err());

        let hyp = AmbientSpace::hyperbolic(1);
        let mut w = DVector::zeros(4);
        w[0] = 1.0;
        assert!(TotalSpacePoint::new(hyp, w).is_ok());
    }

    proptest! {
        #[test]
        fn j_squares_to_minus_identity(seed in proptest::collection::vec(-5.0f64..5.0, 6)) {
            let space = AmbientSpace::flat(3);
            let v = DVector::from_vec(seed);
            let jj = space.apply_j(&space.apply_j(&v));
            prop_assert!((jj + &v).norm() < 1e-15);
        }

        #[test]
        fn j_preserves_all_three_inner_products(
            a in proptest::collection::vec(-5.0f64..5.0, 6),
            b in proptest::collection::vec(-5.0f64..5.0, 6),
        ) {
            for space in [
                AmbientSpace::flat(3),
                AmbientSpace::projective(2),
                AmbientSpace::hyperbolic(2),
            ] {
                let v = DVector::from_vec(a.clone());
                let w = DVector::from_vec(b.clone());
                let lhs = space.inner(&space.apply_j(&v), &space.apply_j(&w)).unwrap();
                let rhs = space.inner(&v, &w).unwrap();
                prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
                // skewness: <Jv, v> = 0
                let skew = space.inner(&space.apply_j(&v), &v).unwrap();
                prop_assert!(skew.abs() < 1e-12 * (1.0 + space.norm2(&v).abs()));
            }
        }

        #[test]
        fn first_bianchi_identity(
            a in proptest::collection::vec(-2.0f64..2.0, 6),
            b in proptest::collection::vec(-2.0f64..2.0, 6),
            c in proptest::collection::vec(-2.0f64..2.0, 6),
        ) {
            for space in [AmbientSpace::projective(2), AmbientSpace::hyperbolic(2)] {
                let x = DVector::from_vec(a.clone());
                let y = DVector::from_vec(b.clone());
                let z = DVector::from_vec(c.clone());
                let cyc = space.curvature_tensor(&x, &y, &z)
                    + space.curvature_tensor(&y, &z, &x)
                    + space.curvature_tensor(&z, &x, &y);
                prop_assert!(cyc.norm() < 1e-11);
            }
        }

        #[test]
        fn curvature_antisymmetry_and_pair_symmetry(
            a in proptest::collection::vec(-2.0f64..2.0, 6),
            b in proptest::collection::vec(-2.0f64..2.0, 6),
            c in proptest::collection::vec(-2.0f64..2.0, 6),
            d in proptest::collection::vec(-2.0f64..2.0, 6),
        ) {
            let space = AmbientSpace::projective(2);
            let x = DVector::from_vec(a);
            let y = DVector::from_vec(b);
            let z = DVector::from_vec(c);
            let w = DVector::from_vec(d);
            let r_xy = space.curvature_tensor(&x, &y, &z);
            let r_yx = space.curvature_tensor(&y, &x, &z);
            prop_assert!((&r_xy + &r_yx).norm() < 1e-11);
            let lhs = space.inner(&space.curvature_tensor(&x, &y, &z), &w).unwrap();
            let rhs = space.inner(&space.curvature_tensor(&z, &w, &x), &y).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10);
        }
    }
}
