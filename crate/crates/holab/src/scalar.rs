//! Second-order forward-mode scalars.
//!
//! Immersions are written once, generically over [`Scalar`], and evaluated
//! either with plain `f64` (values only, used by the finite-difference jet
//! mode) or with [`Jet`] (value, gradient and Hessian in one pass, used by
//! the analytic jet mode). A `Jet` carries truncated second-order Taylor
//! data with respect to `nvars` seed variables.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic interface shared by `f64` and [`Jet`].
///
/// Only the operations actually used by immersion charts are included;
/// everything here must propagate first and second derivatives exactly.
pub trait Scalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(x: f64) -> Self;
    fn value(&self) -> f64;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sinh(&self) -> Self;
    fn cosh(&self) -> Self;
    fn exp(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn recip(&self) -> Self;

    fn powi(&self, n: i32) -> Self {
        match n {
            0 => Self::constant(1.0),
            _ if n < 0 => self.recip().powi(-n),
            _ => {
                let mut acc = self.clone();
                for _ in 1..n {
                    acc = acc * self.clone();
                }
                acc
            }
        }
    }
}

impl Scalar for f64 {
    fn constant(x: f64) -> Self {
        x
    }
    fn value(&self) -> f64 {
        *self
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn recip(&self) -> Self {
        1.0 / *self
    }
}

/// Truncated second-order Taylor expansion in `nvars` variables.
///
/// `grad` has length `nvars`, `hess` is the dense symmetric `nvars × nvars`
/// matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub val: f64,
    pub grad: Vec<f64>,
    pub hess: Vec<f64>,
}

impl Jet {
    pub fn nvars(&self) -> usize {
        self.grad.len()
    }

    pub fn constant(x: f64, nvars: usize) -> Self {
        Jet {
            val: x,
            grad: vec![0.0; nvars],
            hess: vec![0.0; nvars * nvars],
        }
    }

    /// Seed the `index`-th independent variable.
    pub fn variable(x: f64, index: usize, nvars: usize) -> Self {
        let mut j = Jet::constant(x, nvars);
        j.grad[index] = 1.0;
        j
    }

    pub fn hess_at(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.nvars() + j]
    }

    /// Chain rule for a univariate function with derivatives `d1 = f'(val)`
    /// and `d2 = f''(val)`.
    fn compose(&self, f0: f64, d1: f64, d2: f64) -> Jet {
        let n = self.nvars();
        let mut out = Jet::constant(f0, n);
        for i in 0..n {
            out.grad[i] = d1 * self.grad[i];
        }
        for i in 0..n {
            for j in 0..n {
                out.hess[i * n + j] =
                    d1 * self.hess[i * n + j] + d2 * self.grad[i] * self.grad[j];
            }
        }
        out
    }
}

/// `S::constant` cannot know the ambient variable count, so constants are
/// created with zero variables and broadcast on first contact.
fn broadcast(a: Jet, b: Jet) -> (Jet, Jet) {
    match (a.nvars(), b.nvars()) {
        (x, y) if x == y => (a, b),
        (0, y) => (Jet::constant(a.val, y), b),
        (_, 0) => {
            let n = a.nvars();
            (a, Jet::constant(b.val, n))
        }
        (x, y) => panic!("jet variable counts differ: {x} vs {y}"),
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let (mut a, b) = broadcast(self, rhs);
        a.val += b.val;
        for (x, y) in a.grad.iter_mut().zip(&b.grad) {
            *x += y;
        }
        for (x, y) in a.hess.iter_mut().zip(&b.hess) {
            *x += y;
        }
        a
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let (mut a, b) = broadcast(self, rhs);
        a.val -= b.val;
        for (x, y) in a.grad.iter_mut().zip(&b.grad) {
            *x -= y;
        }
        for (x, y) in a.hess.iter_mut().zip(&b.hess) {
            *x -= y;
        }
        a
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let (lhs, rhs) = broadcast(self, rhs);
        let n = lhs.nvars();
        let mut out = Jet::constant(lhs.val * rhs.val, n);
        for i in 0..n {
            out.grad[i] = lhs.val * rhs.grad[i] + rhs.val * lhs.grad[i];
        }
        for i in 0..n {
            for j in 0..n {
                out.hess[i * n + j] = lhs.val * rhs.hess[i * n + j]
                    + rhs.val * lhs.hess[i * n + j]
                    + lhs.grad[i] * rhs.grad[j]
                    + rhs.grad[i] * lhs.grad[j];
            }
        }
        out
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)] // a/b as a * b^{-1}
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        self.val = -self.val;
        for a in self.grad.iter_mut() {
            *a = -*a;
        }
        for a in self.hess.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl Scalar for Jet {
    fn constant(x: f64) -> Self {
        // Variable count is unknown here; `broadcast` widens on first use.
        Jet::constant(x, 0)
    }
    fn value(&self) -> f64 {
        self.val
    }
    fn sin(&self) -> Self {
        self.compose(self.val.sin(), self.val.cos(), -self.val.sin())
    }
    fn cos(&self) -> Self {
        self.compose(self.val.cos(), -self.val.sin(), -self.val.cos())
    }
    fn sinh(&self) -> Self {
        self.compose(self.val.sinh(), self.val.cosh(), self.val.sinh())
    }
    fn cosh(&self) -> Self {
        self.compose(self.val.cosh(), self.val.sinh(), self.val.cosh())
    }
    fn exp(&self) -> Self {
        let e = self.val.exp();
        self.compose(e, e, e)
    }
    fn sqrt(&self) -> Self {
        let s = self.val.sqrt();
        self.compose(s, 0.5 / s, -0.25 / (s * s * s))
    }
    fn recip(&self) -> Self {
        let r = 1.0 / self.val;
        self.compose(r, -r * r, 2.0 * r * r * r)
    }
}

/// Complex number over a generic scalar, stored as (re, im).
///
/// Charts into complex space forms are written with `Cx` and flattened to
/// interleaved real coordinates at the end.
#[derive(Clone, Debug)]
pub struct Cx<S: Scalar> {
    pub re: S,
    pub im: S,
}

impl<S: Scalar> Cx<S> {
    pub fn new(re: S, im: S) -> Self {
        Cx { re, im }
    }

    pub fn real(re: S) -> Self {
        let im = S::constant(0.0);
        Cx { re, im }
    }

    /// e^{iθ} = (cos θ, sin θ).
    pub fn unit_circle(theta: &S) -> Self {
        Cx {
            re: theta.cos(),
            im: theta.sin(),
        }
    }

    pub fn mul(&self, other: &Cx<S>) -> Cx<S> {
        Cx {
            re: self.re.clone() * other.re.clone() - self.im.clone() * other.im.clone(),
            im: self.re.clone() * other.im.clone() + self.im.clone() * other.re.clone(),
        }
    }

    pub fn scale(&self, s: &S) -> Cx<S> {
        Cx {
            re: self.re.clone() * s.clone(),
            im: self.im.clone() * s.clone(),
        }
    }
}

/// Flatten complex coordinates to the interleaved real layout
/// `[re_0, im_0, re_1, im_1, ...]`.
pub fn flatten_cx<S: Scalar>(z: &[Cx<S>]) -> Vec<S> {
    let mut out = Vec::with_capacity(2 * z.len());
    for c in z {
        out.push(c.re.clone());
        out.push(c.im.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn jet_matches_finite_differences() {
        // f(x, y) = sin(x) * exp(y) + sqrt(x + 2) / cosh(y)
        fn f<S: Scalar>(x: S, y: S) -> S {
            x.sin() * y.exp() + (x + S::constant(2.0)).sqrt() / y.cosh()
        }
        let (x0, y0) = (0.7, -0.3);
        let x = Jet::variable(x0, 0, 2);
        let y = Jet::variable(y0, 1, 2);
        let j = f(x, y);

        let h = 1e-5;
        let fdx = (f(x0 + h, y0) - f(x0 - h, y0)) / (2.0 * h);
        let fdy = (f(x0, y0 + h) - f(x0, y0 - h)) / (2.0 * h);
        let fxx = (f(x0 + h, y0) - 2.0 * f(x0, y0) + f(x0 - h, y0)) / (h * h);
        let fxy = (f(x0 + h, y0 + h) - f(x0 + h, y0 - h) - f(x0 - h, y0 + h)
            + f(x0 - h, y0 - h))
            / (4.0 * h * h);

        assert!(close(j.val, f(x0, y0), 1e-14));
        assert!(close(j.grad[0], fdx, 1e-8));
        assert!(close(j.grad[1], fdy, 1e-8));
        assert!(close(j.hess_at(0, 0), fxx, 1e-5));
        assert!(close(j.hess_at(0, 1), fxy, 1e-5));
        assert!(close(j.hess_at(0, 1), j.hess_at(1, 0), 1e-14));
    }

    #[test]
    fn jet_division_and_powi() {
        let x = Jet::variable(1.3, 0, 1);
        let q = x.clone().powi(3) / x.clone();
        // q = x^2 -> q' = 2x, q'' = 2
        assert!(close(q.val, 1.3 * 1.3, 1e-14));
        assert!(close(q.grad[0], 2.6, 1e-12));
        assert!(close(q.hess_at(0, 0), 2.0, 1e-12));
    }

    #[test]
    fn complex_rotation_is_isometric() {
        let th = Jet::variable(0.4, 0, 1);
        let rot = Cx::unit_circle(&th);
        let z = Cx::new(Jet::constant(0.3, 1), Jet::constant(-0.8, 1));
        let w = rot.mul(&z);
        let norm2 = w.re.clone() * w.re.clone() + w.im.clone() * w.im.clone();
        assert!(close(norm2.val, 0.3f64.powi(2) + 0.8f64.powi(2), 1e-14));
        assert!(close(norm2.grad[0], 0.0, 1e-14));
        assert!(close(norm2.hess_at(0, 0), 0.0, 1e-13));
    }
}
