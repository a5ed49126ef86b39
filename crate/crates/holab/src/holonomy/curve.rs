//! Piecewise-smooth curves in parameter space.

use std::sync::Arc;

/// A curve t ∈ [0,1] → parameter point. Polylines are the workhorse (loops,
/// plaquettes, spokes); smooth closures cover analytic test curves.
#[derive(Clone)]
pub enum ParamCurve {
    Polyline { points: Vec<Vec<f64>> },
    Smooth { f: Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync> },
}

impl ParamCurve {
    pub fn polyline(points: Vec<Vec<f64>>) -> Self {
        assert!(points.len() >= 2, "a polyline needs at least two vertices");
        ParamCurve::Polyline { points }
    }

    pub fn smooth(f: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        ParamCurve::Smooth { f: Arc::new(f) }
    }

    pub fn segment(a: &[f64], b: &[f64]) -> Self {
        Self::polyline(vec![a.to_vec(), b.to_vec()])
    }

    /// Counterclockwise rectangle in the (i, j) coordinate plane with the
    /// given corner, edge vectors scaled by `side`.
    pub fn rectangle_corner(corner: &[f64], i: usize, j: usize, side: f64) -> Self {
        let mut p1 = corner.to_vec();
        let mut p2 = corner.to_vec();
        let mut p3 = corner.to_vec();
        p1[i] += side;
        p2[i] += side;
        p2[j] += side;
        p3[j] += side;
        Self::polyline(vec![corner.to_vec(), p1, p2, p3, corner.to_vec()])
    }

    /// Counterclockwise parallelogram with the given corner and edge
    /// direction vectors (each scaled by `side`).
    pub fn parallelogram_corner(corner: &[f64], di: &[f64], dj: &[f64], side: f64) -> Self {
        let add = |base: &[f64], a: f64, b: f64| -> Vec<f64> {
            base.iter()
                .enumerate()
                .map(|(x, v)| v + side * (a * di[x] + b * dj[x]))
                .collect()
        };
        Self::polyline(vec![
            corner.to_vec(),
            add(corner, 1.0, 0.0),
            add(corner, 1.0, 1.0),
            add(corner, 0.0, 1.0),
            corner.to_vec(),
        ])
    }

    /// The loop traversed out along this curve and straight back.
    pub fn backtrack(&self) -> ParamCurve {
        match self {
            ParamCurve::Polyline { points } => {
                let mut pts = points.clone();
                pts.extend(points.iter().rev().skip(1).cloned());
                Self::polyline(pts)
            }
            ParamCurve::Smooth { f } => {
                let f = f.clone();
                Self::smooth(move |t| {
                    if t <= 0.5 {
                        f(2.0 * t)
                    } else {
                        f(2.0 - 2.0 * t)
                    }
                })
            }
        }
    }

    pub fn param_dim(&self) -> usize {
        match self {
            ParamCurve::Polyline { points } => points[0].len(),
            ParamCurve::Smooth { f } => f(0.0).len(),
        }
    }

    pub fn start(&self) -> Vec<f64> {
        self.eval(0.0)
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        match self {
            ParamCurve::Polyline { points } => {
                let nseg = points.len() - 1;
                if t >= 1.0 {
                    return points[nseg].clone();
                }
                let s = t.max(0.0) * nseg as f64;
                let seg = (s.floor() as usize).min(nseg - 1);
                let frac = s - seg as f64;
                points[seg]
                    .iter()
                    .zip(&points[seg + 1])
                    .map(|(a, b)| a + frac * (b - a))
                    .collect()
            }
            ParamCurve::Smooth { f } => f(t),
        }
    }

    /// Velocity du/dt; piecewise constant on polylines, central difference
    /// on smooth curves.
    pub fn velocity(&self, t: f64) -> Vec<f64> {
        let piece = match self {
            ParamCurve::Polyline { points } => {
                let nseg = points.len() - 1;
                ((t.clamp(0.0, 1.0) * nseg as f64).floor() as usize).min(nseg - 1)
            }
            ParamCurve::Smooth { .. } => 0,
        };
        self.piece_velocity(piece, t)
    }

    /// Velocity within a specific smooth piece (indexed as in
    /// [`breakpoints`](Self::breakpoints)); integrators use this so stage
    /// evaluations at a shared endpoint never read the adjacent piece.
    pub fn piece_velocity(&self, piece: usize, t: f64) -> Vec<f64> {
        match self {
            ParamCurve::Polyline { points } => {
                let nseg = points.len() - 1;
                let seg = piece.min(nseg - 1);
                points[seg]
                    .iter()
                    .zip(&points[seg + 1])
                    .map(|(a, b)| (b - a) * nseg as f64)
                    .collect()
            }
            ParamCurve::Smooth { f } => {
                let h = 1e-6;
                let (t0, t1) = if t < h {
                    (t, t + h)
                } else if t > 1.0 - h {
                    (t - h, t)
                } else {
                    (t - h, t + h)
                };
                f(t1)
                    .iter()
                    .zip(&f(t0))
                    .map(|(a, b)| (a - b) / (t1 - t0))
                    .collect()
            }
        }
    }

    /// Parameter values at which the curve may lose smoothness; integration
    /// is split there.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            ParamCurve::Polyline { points } => {
                let nseg = points.len() - 1;
                (0..=nseg).map(|i| i as f64 / nseg as f64).collect()
            }
            ParamCurve::Smooth { .. } => vec![0.0, 1.0],
        }
    }

    pub fn is_closed(&self, tolerance: f64) -> bool {
        let a = self.eval(0.0);
        let b = self.eval(1.0);
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
            < tolerance
    }
}
