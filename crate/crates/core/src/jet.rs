//! Second-order forward-mode differentiation.
//!
//! A [`Jet2`] carries a value, the gradient with respect to the chart
//! parameters, and the full Hessian, propagated through arithmetic by
//! truncated second-order Taylor algebra. Every chart in the catalog is
//! written against jets, so first and second derivatives of immersions
//! come out exact to machine precision; finite differences survive only
//! as an independent test oracle.
//!
//! The Hessian is stored packed lower-triangular: `(i, j)` and `(j, i)`
//! are the same cell, so symmetry is exact by construction.

use crate::error::GeomError;
use crate::scalar::Real;

/// Value, gradient and Hessian of a scalar function of `n` parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2<F> {
    pub val: F,
    pub grad: Vec<F>,
    hess: Vec<F>,
}

#[inline]
fn pidx(i: usize, j: usize) -> usize {
    let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
    hi * (hi + 1) / 2 + lo
}

impl<F: Real> Jet2<F> {
    pub fn constant(val: F, n: usize) -> Self {
        Jet2 {
            val,
            grad: vec![F::zero(); n],
            hess: vec![F::zero(); n * (n + 1) / 2],
        }
    }

    /// Seed the `i`-th parameter: value `u[i]`, gradient `e_i`, zero Hessian.
    pub fn seed(u: &[F], i: usize) -> Result<Self, GeomError> {
        if i >= u.len() {
            return Err(GeomError::IndexOutOfRange { index: i, n: u.len() });
        }
        let mut j = Self::constant(u[i], u.len());
        j.grad[i] = F::one();
        Ok(j)
    }

    pub fn n_params(&self) -> usize {
        self.grad.len()
    }

    #[inline]
    pub fn hess(&self, i: usize, j: usize) -> F {
        self.hess[pidx(i, j)]
    }

    /// Chain rule for a unary map with derivatives `d1 = phi'(val)` and
    /// `d2 = phi''(val)`.
    fn chain(&self, val: F, d1: F, d2: F) -> Self {
        let n = self.n_params();
        let mut out = Self::constant(val, n);
        for i in 0..n {
            out.grad[i] = d1 * self.grad[i];
        }
        for i in 0..n {
            for j in 0..=i {
                out.hess[pidx(i, j)] = d1 * self.hess[pidx(i, j)] + d2 * self.grad[i] * self.grad[j];
            }
        }
        out
    }

    pub fn sin(&self) -> Self {
        let (s, c) = (self.val.sin(), self.val.cos());
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = (self.val.sin(), self.val.cos());
        self.chain(c, -s, -c)
    }

    pub fn sinh(&self) -> Self {
        let (s, c) = (self.val.sinh(), self.val.cosh());
        self.chain(s, c, s)
    }

    pub fn cosh(&self) -> Self {
        let (s, c) = (self.val.sinh(), self.val.cosh());
        self.chain(c, s, c)
    }

    pub fn exp(&self) -> Self {
        let e = self.val.exp();
        self.chain(e, e, e)
    }

    pub fn ln(&self) -> Result<Self, GeomError> {
        if self.val <= F::zero() {
            return Err(GeomError::DomainViolation {
                func: "ln",
                value: self.val.to_f64().unwrap_or(f64::NAN),
            });
        }
        let inv = F::one() / self.val;
        Ok(self.chain(self.val.ln(), inv, -inv * inv))
    }

    pub fn sqrt(&self) -> Result<Self, GeomError> {
        if self.val <= F::zero() {
            return Err(GeomError::DomainViolation {
                func: "sqrt",
                value: self.val.to_f64().unwrap_or(f64::NAN),
            });
        }
        let r = self.val.sqrt();
        let d1 = F::half() / r;
        let d2 = -F::of(0.25) / (r * self.val);
        Ok(self.chain(r, d1, d2))
    }

    pub fn acos(&self) -> Result<Self, GeomError> {
        let x = self.val;
        if x <= -F::one() || x >= F::one() {
            return Err(GeomError::DomainViolation {
                func: "arccos",
                value: x.to_f64().unwrap_or(f64::NAN),
            });
        }
        let w = F::one() - x * x;
        let d1 = -F::one() / w.sqrt();
        let d2 = -x / (w * w.sqrt());
        Ok(self.chain(x.acos(), d1, d2))
    }

    pub fn asinh(&self) -> Self {
        let x = self.val;
        let w = F::one() + x * x;
        let d1 = F::one() / w.sqrt();
        let d2 = -x / (w * w.sqrt());
        self.chain(x.asinh(), d1, d2)
    }

    pub fn acosh(&self) -> Result<Self, GeomError> {
        let x = self.val;
        if x <= F::one() {
            return Err(GeomError::DomainViolation {
                func: "arccosh",
                value: x.to_f64().unwrap_or(f64::NAN),
            });
        }
        let w = x * x - F::one();
        let d1 = F::one() / w.sqrt();
        let d2 = -x / (w * w.sqrt());
        Ok(self.chain(x.acosh(), d1, d2))
    }

    pub fn atan(&self) -> Self {
        let x = self.val;
        let w = F::one() + x * x;
        let d1 = F::one() / w;
        let d2 = -F::two() * x / (w * w);
        self.chain(x.atan(), d1, d2)
    }

    pub fn recip(&self) -> Result<Self, GeomError> {
        if self.val == F::zero() {
            return Err(GeomError::DomainViolation {
                func: "recip",
                value: 0.0,
            });
        }
        let inv = F::one() / self.val;
        Ok(self.chain(inv, -inv * inv, F::two() * inv * inv * inv))
    }

    pub fn powi(&self, p: i32) -> Self {
        let x = self.val;
        let fp = F::of(p as f64);
        self.chain(
            x.powi(p),
            fp * x.powi(p - 1),
            fp * F::of((p - 1) as f64) * x.powi(p - 2),
        )
    }

    pub fn scale(&self, c: F) -> Self {
        self.chain(c * self.val, c, F::zero())
    }

    pub fn add_const(&self, c: F) -> Self {
        self.chain(self.val + c, F::one(), F::zero())
    }
}

impl<F: Real> std::ops::Add for &Jet2<F> {
    type Output = Jet2<F>;
    fn add(self, rhs: &Jet2<F>) -> Jet2<F> {
        debug_assert_eq!(self.n_params(), rhs.n_params());
        Jet2 {
            val: self.val + rhs.val,
            grad: self.grad.iter().zip(&rhs.grad).map(|(a, b)| *a + *b).collect(),
            hess: self.hess.iter().zip(&rhs.hess).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<F: Real> std::ops::Sub for &Jet2<F> {
    type Output = Jet2<F>;
    fn sub(self, rhs: &Jet2<F>) -> Jet2<F> {
        debug_assert_eq!(self.n_params(), rhs.n_params());
        Jet2 {
            val: self.val - rhs.val,
            grad: self.grad.iter().zip(&rhs.grad).map(|(a, b)| *a - *b).collect(),
            hess: self.hess.iter().zip(&rhs.hess).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<F: Real> std::ops::Mul for &Jet2<F> {
    type Output = Jet2<F>;
    fn mul(self, rhs: &Jet2<F>) -> Jet2<F> {
        let n = self.n_params();
        debug_assert_eq!(n, rhs.n_params());
        let mut out = Jet2::constant(self.val * rhs.val, n);
        for i in 0..n {
            out.grad[i] = self.grad[i] * rhs.val + self.val * rhs.grad[i];
        }
        for i in 0..n {
            for j in 0..=i {
                out.hess[pidx(i, j)] = self.hess(i, j) * rhs.val
                    + self.val * rhs.hess(i, j)
                    + self.grad[i] * rhs.grad[j]
                    + self.grad[j] * rhs.grad[i];
            }
        }
        out
    }
}

impl<F: Real> std::ops::Neg for &Jet2<F> {
    type Output = Jet2<F>;
    fn neg(self) -> Jet2<F> {
        self.scale(-F::one())
    }
}

/// Immersion value: one jet per ambient coordinate, all sharing the same
/// parameter count.
pub type Jet2Point<F> = Vec<Jet2<F>>;
