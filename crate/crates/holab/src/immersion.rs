//! Parametric immersions and their two-jets.
//!
//! A chart is written once over the generic [`Scalar`] and evaluated in two
//! modes: `Analytic` propagates exact first and second derivatives through
//! the arithmetic; `FiniteDifference` uses central differences of the plain
//! `f64` evaluation (first derivatives by two-point stencils, second
//! derivatives by the 3/4-point stencils on each parameter pair).
//!
//! Immersions into the curved models are given by total-space
//! representatives u ↦ z(u) ∈ N̄_c in any smooth gauge; the geometry engine
//! works on the associated pull-back chart (u, θ) ↦ e^{iθ} z(u), where the
//! fiber angle θ is always the last parameter.

use std::sync::Arc;

use nalgebra::DVector;

use crate::ambient::AmbientSpace;
use crate::error::{Error, Result};
use crate::scalar::{Jet, Scalar};
use crate::tol;

/// A smooth map written generically over [`Scalar`].
///
/// Not object safe (generic method); use the [`SmoothFn`] bridge to store
/// charts behind a pointer.
pub trait CoordMap: Send + Sync {
    fn dim_in(&self) -> usize;
    fn dim_out(&self) -> usize;
    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S>;
}

/// Object-safe bridge over [`CoordMap`]: the two monomorphic instances the
/// engine needs.
pub trait SmoothFn: Send + Sync {
    fn dim_in(&self) -> usize;
    fn dim_out(&self) -> usize;
    fn eval_f64(&self, u: &[f64]) -> Vec<f64>;
    fn eval_jet(&self, u: &[Jet]) -> Vec<Jet>;
}

impl<T: CoordMap> SmoothFn for T {
    fn dim_in(&self) -> usize {
        CoordMap::dim_in(self)
    }
    fn dim_out(&self) -> usize {
        CoordMap::dim_out(self)
    }
    fn eval_f64(&self, u: &[f64]) -> Vec<f64> {
        self.apply(u)
    }
    fn eval_jet(&self, u: &[Jet]) -> Vec<Jet> {
        self.apply(u)
    }
}

/// How the representative is interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    /// Directly into the flat model ℝ^{2n}.
    Flat,
    /// Representatives z(u) on the total space N̄_c of a curved model; the
    /// immersed submanifold is the projection to the space form.
    TotalSpace,
    /// A pull-back chart (u, θ) ↦ e^{iθ} z(u) into N̄_c; the last parameter
    /// is the fiber angle.
    Pullback,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JetMode {
    Analytic,
    /// Central differences with step `h = step_scale · (1 + ‖u‖)`.
    FiniteDifference { step_scale: f64 },
}

impl JetMode {
    pub fn finite_difference() -> Self {
        JetMode::FiniteDifference { step_scale: tol::FD_STEP }
    }
}

/// Value, Jacobian and second derivatives of an immersion at a parameter.
#[derive(Clone, Debug)]
pub struct JetData {
    pub point: DVector<f64>,
    /// Jacobian columns ∂ψ/∂u_a.
    pub jac: Vec<DVector<f64>>,
    /// Symmetric array of second derivatives ∂²ψ/∂u_a∂u_b.
    pub hess: Vec<Vec<DVector<f64>>>,
}

impl JetData {
    pub fn param_dim(&self) -> usize {
        self.jac.len()
    }

    /// Linear combination of Jacobian columns.
    pub fn jac_combo(&self, v: &[f64]) -> DVector<f64> {
        let mut out = DVector::zeros(self.point.len());
        for (a, c) in v.iter().enumerate() {
            out.axpy(*c, &self.jac[a], 1.0);
        }
        out
    }

    /// Bilinear contraction Σ_ab v_a w_b ∂²ψ/∂u_a∂u_b.
    pub fn hess_contract(&self, v: &[f64], w: &[f64]) -> DVector<f64> {
        let mut out = DVector::zeros(self.point.len());
        for (a, va) in v.iter().enumerate() {
            for (b, wb) in w.iter().enumerate() {
                let c = va * wb;
                if c != 0.0 {
                    out.axpy(c, &self.hess[a][b], 1.0);
                }
            }
        }
        out
    }
}

/// A parametric immersion with a fixed jet mode.
#[derive(Clone)]
pub struct Immersion {
    space: AmbientSpace,
    k: usize,
    chart: Chart,
    map: Arc<dyn SmoothFn>,
    jet_mode: JetMode,
}

impl Immersion {
    pub fn new(
        space: AmbientSpace,
        chart: Chart,
        map: Arc<dyn SmoothFn>,
        jet_mode: JetMode,
    ) -> Result<Self> {
        let k = map.dim_in();
        let expected = space.coord_dim();
        if map.dim_out() != expected {
            return Err(Error::DimensionMismatch { expected, got: map.dim_out() });
        }
        match (chart, space.is_curved()) {
            (Chart::Flat, true) => {
                return Err(Error::InvalidInput(
                    "flat chart into a curved model".into(),
                ))
            }
            (Chart::TotalSpace | Chart::Pullback, false) => {
                return Err(Error::UnsupportedModel)
            }
            _ => {}
        }
        Ok(Immersion { space, k, chart, map, jet_mode })
    }

    pub fn space(&self) -> AmbientSpace {
        self.space
    }

    /// Parameter dimension of this chart (includes the fiber angle for
    /// pull-back charts).
    pub fn param_dim(&self) -> usize {
        self.k
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn jet_mode(&self) -> JetMode {
        self.jet_mode
    }

    pub fn with_jet_mode(&self, jet_mode: JetMode) -> Self {
        let mut out = self.clone();
        out.jet_mode = jet_mode;
        out
    }

    pub fn map(&self) -> &Arc<dyn SmoothFn> {
        &self.map
    }

    pub fn eval(&self, u: &[f64]) -> DVector<f64> {
        DVector::from_vec(self.map.eval_f64(u))
    }

    /// Two-jet at `u` in the current jet mode.
    pub fn jet(&self, u: &[f64]) -> JetData {
        assert_eq!(u.len(), self.k, "parameter dimension mismatch");
        match self.jet_mode {
            JetMode::Analytic => self.jet_analytic(u),
            JetMode::FiniteDifference { step_scale } => self.jet_fd(u, step_scale),
        }
    }

    fn jet_analytic(&self, u: &[f64]) -> JetData {
        let k = self.k;
        let vars: Vec<Jet> = u
            .iter()
            .enumerate()
            .map(|(i, &x)| Jet::variable(x, i, k))
            .collect();
        // Coordinates that are bare constants come back with no variables;
        // widen them so the readout below is uniform.
        let out: Vec<Jet> = self
            .map
            .eval_jet(&vars)
            .into_iter()
            .map(|j| if j.nvars() == k { j } else { Jet::constant(j.val, k) })
            .collect();
        let dim = out.len();
        let point = DVector::from_iterator(dim, out.iter().map(|j| j.val));
        let jac: Vec<DVector<f64>> = (0..k)
            .map(|a| DVector::from_iterator(dim, out.iter().map(|j| j.grad[a])))
            .collect();
        let hess: Vec<Vec<DVector<f64>>> = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| {
                        DVector::from_iterator(dim, out.iter().map(|j| j.hess_at(a, b)))
                    })
                    .collect()
            })
            .collect();
        JetData { point, jac, hess }
    }

    fn jet_fd(&self, u: &[f64], step_scale: f64) -> JetData {
        let k = self.k;
        let unorm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        let h = step_scale * (1.0 + unorm);
        let eval = |v: &[f64]| DVector::from_vec(self.map.eval_f64(v));
        let shift = |a: usize, s: f64, b: usize, t: f64| {
            let mut v = u.to_vec();
            v[a] += s * h;
            v[b] += t * h;
            eval(&v)
        };
        let point = eval(u);
        let mut jac = Vec::with_capacity(k);
        let mut plus = Vec::with_capacity(k);
        let mut minus = Vec::with_capacity(k);
        for a in 0..k {
            let p = shift(a, 1.0, a, 0.0);
            let m = shift(a, -1.0, a, 0.0);
            jac.push((&p - &m) / (2.0 * h));
            plus.push(p);
            minus.push(m);
        }
        let mut hess = vec![vec![DVector::zeros(point.len()); k]; k];
        #[allow(clippy::needless_range_loop)] // symmetric fill across two indices
        for a in 0..k {
            hess[a][a] = (&plus[a] - &point * 2.0 + &minus[a]) / (h * h);
            for b in 0..a {
                let pp = shift(a, 1.0, b, 1.0);
                let pm = shift(a, 1.0, b, -1.0);
                let mp = shift(a, -1.0, b, 1.0);
                let mm = shift(a, -1.0, b, -1.0);
                let d = (pp - pm - mp + mm) / (4.0 * h * h);
                hess[a][b] = d.clone();
                hess[b][a] = d;
            }
        }
        JetData { point, jac, hess }
    }
}

/// Rotate interleaved complex coordinates by the phase e^{iθ}.
pub(crate) fn rotate_by_phase<S: Scalar>(coords: &mut [S], theta: &S) {
    let c = theta.cos();
    let s = theta.sin();
    for p in 0..coords.len() / 2 {
        let x = coords[2 * p].clone();
        let y = coords[2 * p + 1].clone();
        coords[2 * p] = x.clone() * c.clone() - y.clone() * s.clone();
        coords[2 * p + 1] = x * s.clone() + y * c.clone();
    }
}

/// The pull-back chart (u, θ) ↦ e^{iθ} z(u) of a total-space map.
pub(crate) struct PullbackMap {
    pub inner: Arc<dyn SmoothFn>,
}

impl SmoothFn for PullbackMap {
    fn dim_in(&self) -> usize {
        self.inner.dim_in() + 1
    }
    fn dim_out(&self) -> usize {
        self.inner.dim_out()
    }
    fn eval_f64(&self, u: &[f64]) -> Vec<f64> {
        let k = self.inner.dim_in();
        let mut out = self.inner.eval_f64(&u[..k]);
        rotate_by_phase(&mut out, &u[k]);
        out
    }
    fn eval_jet(&self, u: &[Jet]) -> Vec<Jet> {
        let k = self.inner.dim_in();
        let mut out = self.inner.eval_jet(&u[..k]);
        rotate_by_phase(&mut out, &u[k]);
        out
    }
}
