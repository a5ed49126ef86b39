//! Immersions backed by sampled jets on a rectangular grid.
//!
//! User immersions enter the CLI as tables of values with first and second
//! derivatives on a parameter grid. Between nodes the chart is
//! reconstructed from the supplied two-jets: on one axis by the two-point
//! quintic Hermite interpolant, on two axes by blending the second-order
//! Taylor polynomials of the surrounding nodes with quintic
//! partition-of-unity weights (whose first and second derivatives vanish
//! at the nodes, so the interpolant reproduces the node jets exactly and
//! is C²). Off-node accuracy is O(h³) in the grid spacing; supply grids
//! fine enough for the finite-difference tolerance class. Supported for
//! one and two parameters (curves and surfaces).



use crate::ambient::AmbientSpace;
use crate::error::{Error, Result};
use crate::immersion::{Chart, CoordMap, Immersion, JetMode};
use crate::scalar::Scalar;

/// Sampled jets on a rectangular grid.
#[derive(Clone, Debug)]
pub struct GridData {
    pub space: AmbientSpace,
    pub chart: Chart,
    /// Strictly increasing node coordinates per axis (length k ∈ {1, 2}).
    pub axes: Vec<Vec<f64>>,
    /// Row-major node data: values[node][coord], node = i * n1 + j for two
    /// axes with n1 nodes on the second axis.
    pub values: Vec<Vec<f64>>,
    /// First derivatives per axis: d1[axis][node][coord].
    pub d1: Vec<Vec<Vec<f64>>>,
    /// Second derivatives per axis pair (a ≤ b, row-major upper triangle):
    /// d2[pair][node][coord] with pair order (0,0), (0,1), (1,1).
    pub d2: Vec<Vec<Vec<f64>>>,
}

impl GridData {
    fn k(&self) -> usize {
        self.axes.len()
    }

    fn node_count(&self) -> usize {
        self.axes.iter().map(|a| a.len()).product()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.k();
        if !(1..=2).contains(&k) {
            return Err(Error::InvalidInput(format!(
                "sampled grids support 1 or 2 parameters, got {k}"
            )));
        }
        for axis in &self.axes {
            if axis.len() < 2 {
                return Err(Error::InvalidInput("each axis needs at least 2 nodes".into()));
            }
            if !axis.windows(2).all(|w| w[1] > w[0]) {
                return Err(Error::InvalidInput("axis nodes must be strictly increasing".into()));
            }
        }
        let nodes = self.node_count();
        let dim = self.space.coord_dim();
        let pairs = k * (k + 1) / 2;
        if self.values.len() != nodes {
            return Err(Error::InvalidInput(format!(
                "expected {nodes} value rows, got {}",
                self.values.len()
            )));
        }
        if self.d1.len() != k || self.d2.len() != pairs {
            return Err(Error::InvalidInput(format!(
                "expected {k} first-derivative arrays and {pairs} second-derivative arrays"
            )));
        }
        let rows_ok = |rows: &Vec<Vec<f64>>| {
            rows.len() == nodes && rows.iter().all(|r| r.len() == dim)
        };
        if !rows_ok(&self.values)
            || !self.d1.iter().all(rows_ok)
            || !self.d2.iter().all(rows_ok)
        {
            return Err(Error::InvalidInput(
                "derivative arrays are not dimension-consistent with the grid".into(),
            ));
        }
        Ok(())
    }

    pub fn immersion(self) -> Result<Immersion> {
        self.validate()?;
        let space = self.space;
        let chart = self.chart;
        Immersion::new(space, chart, std::sync::Arc::new(self), JetMode::Analytic)
    }
}

/// Quintic Hermite basis on [0, 1]: weights of (f0, f0', f0'', f1, f1', f1'')
/// scaled for an interval of length h.
fn quintic_weights<S: Scalar>(t: &S, h: f64) -> [S; 6] {
    // H50(t) = 1 − 10t³ + 15t⁴ − 6t⁵ and friends.
    let c = |x: f64| S::constant(x);
    let t2 = t.clone() * t.clone();
    let t3 = t2.clone() * t.clone();
    let t4 = t3.clone() * t.clone();
    let t5 = t4.clone() * t.clone();
    let h0 = c(1.0) - t3.clone() * c(10.0) + t4.clone() * c(15.0) - t5.clone() * c(6.0);
    let h1 = t.clone() - t3.clone() * c(6.0) + t4.clone() * c(8.0) - t5.clone() * c(3.0);
    let h2 = t2.clone() * c(0.5) - t3.clone() * c(1.5) + t4.clone() * c(1.5)
        - t5.clone() * c(0.5);
    let h3 = t3.clone() * c(10.0) - t4.clone() * c(15.0) + t5.clone() * c(6.0);
    let h4 = -t3.clone() * c(4.0) + t4.clone() * c(7.0) - t5.clone() * c(3.0);
    let h5 = t3 * c(0.5) - t4 * c(1.0) + t5 * c(0.5);
    [
        h0,
        h1 * c(h),
        h2 * c(h * h),
        h3,
        h4 * c(h),
        h5 * c(h * h),
    ]
}

fn locate(axis: &[f64], x: f64) -> (usize, f64) {
    let n = axis.len();
    let mut cell = n - 2;
    for i in 0..n - 1 {
        if x < axis[i + 1] {
            cell = i;
            break;
        }
    }
    (cell, axis[cell + 1] - axis[cell])
}

impl GridData {
    fn node(&self, idx: &[usize]) -> usize {
        match self.k() {
            1 => idx[0],
            _ => idx[0] * self.axes[1].len() + idx[1],
        }
    }

    /// Two-point quintic Hermite reconstruction along a single axis.
    fn apply_curve<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        let dim = self.space.coord_dim();
        let (cell, h) = locate(&self.axes[0], u[0].value());
        let local = (u[0].clone() - S::constant(self.axes[0][cell])) * S::constant(1.0 / h);
        let w = quintic_weights(&local, h);
        let mut out = Vec::with_capacity(dim);
        for coord in 0..dim {
            let mut acc = S::constant(0.0);
            for side in 0..2 {
                let n = cell + side;
                let data = [
                    self.values[n][coord],
                    self.d1[0][n][coord],
                    self.d2[0][n][coord],
                ];
                for (order, d) in data.iter().enumerate() {
                    acc = acc + w[3 * side + order].clone() * S::constant(*d);
                }
            }
            out.push(acc);
        }
        out
    }

    /// Blend the four corner Taylor polynomials with quintic
    /// partition-of-unity weights.
    fn apply_surface<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        let dim = self.space.coord_dim();
        let (cx, hx) = locate(&self.axes[0], u[0].value());
        let (cy, hy) = locate(&self.axes[1], u[1].value());
        let tx = (u[0].clone() - S::constant(self.axes[0][cx])) * S::constant(1.0 / hx);
        let ty = (u[1].clone() - S::constant(self.axes[1][cy])) * S::constant(1.0 / hy);
        let wx = quintic_weights(&tx, hx);
        let wy = quintic_weights(&ty, hy);
        // H0 and H3 entries form the partition of unity along each axis
        let bump = |w: &[S; 6], side: usize| w[3 * side].clone();
        let mut out = vec![S::constant(0.0); dim];
        for sx in 0..2 {
            for sy in 0..2 {
                let n = self.node(&[cx + sx, cy + sy]);
                let dx = u[0].clone() - S::constant(self.axes[0][cx + sx]);
                let dy = u[1].clone() - S::constant(self.axes[1][cy + sy]);
                let w = bump(&wx, sx) * bump(&wy, sy);
                #[allow(clippy::needless_range_loop)] // shared (dx, dy) per corner
                for coord in 0..dim {
                    let taylor = S::constant(self.values[n][coord])
                        + dx.clone() * S::constant(self.d1[0][n][coord])
                        + dy.clone() * S::constant(self.d1[1][n][coord])
                        + dx.clone() * dx.clone() * S::constant(0.5 * self.d2[0][n][coord])
                        + dx.clone() * dy.clone() * S::constant(self.d2[1][n][coord])
                        + dy.clone() * dy.clone() * S::constant(0.5 * self.d2[2][n][coord]);
                    out[coord] = out[coord].clone() + w.clone() * taylor;
                }
            }
        }
        out
    }
}

impl CoordMap for GridData {
    fn dim_in(&self) -> usize {
        self.k()
    }
    fn dim_out(&self) -> usize {
        self.space.coord_dim()
    }

    fn apply<S: Scalar>(&self, u: &[S]) -> Vec<S> {
        match self.k() {
            1 => self.apply_curve(u),
            _ => self.apply_surface(u),
        }
    }
}
