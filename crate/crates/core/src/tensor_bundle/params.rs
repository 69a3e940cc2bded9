use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::scalar::{Dual, Real, Scalar};

/// The pair of fiber weights `a(τ)`, `b(τ)` of the lifted metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CGParams<T> {
    /// `a = 1`, `b = 0`.
    Sasaki,
    /// `a = b = 1 / (1 + τ)`.
    Classic,
    /// `a = 1`, `b = 1`.
    Unit,
    /// Polynomials in `τ`, coefficients in increasing degree.
    Polynomial { a: Vec<T>, b: Vec<T> },
}

/// `a`, `b`, their derivatives and the derived connection scalars at one `τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamValues<T> {
    pub tau: T,
    pub a: T,
    pub b: T,
    pub da: T,
    pub db: T,
    /// `a′ / a`
    pub l: T,
    /// `(b − a′) / (a + bτ)`
    pub m: T,
    /// `(b′a − 2a′b) / (a(a + bτ))`
    pub n: T,
}

fn horner<S: Scalar>(c: &[S::Real], tau: S) -> S {
    c.iter().rev().fold(S::zero(), |acc, k| acc * tau + S::cst(*k))
}

impl<T: Real> CGParams<T> {
    pub fn a<S: Scalar<Real = T>>(&self, tau: S) -> S {
        match self {
            CGParams::Sasaki | CGParams::Unit => S::one(),
            CGParams::Classic => S::one() / (S::one() + tau),
            CGParams::Polynomial { a, .. } => horner(a, tau),
        }
    }

    pub fn b<S: Scalar<Real = T>>(&self, tau: S) -> S {
        match self {
            CGParams::Sasaki => S::zero(),
            CGParams::Unit => S::one(),
            CGParams::Classic => S::one() / (S::one() + tau),
            CGParams::Polynomial { b, .. } => horner(b, tau),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CGParams::Sasaki => "sasaki",
            CGParams::Classic => "classic",
            CGParams::Unit => "unit",
            CGParams::Polynomial { .. } => "polynomial",
        }
    }

    pub fn values(&self, tau: T) -> ParamValues<T> {
        let ta = self.a(Dual::new(tau, T::one()));
        let tb = self.b(Dual::new(tau, T::one()));
        let (a, da, b, db) = (ta.re, ta.du, tb.re, tb.du);
        let s = a + b * tau;
        ParamValues { tau, a, b, da, db, l: da / a, m: (b - da) / s, n: (db * a - T::lit(2.0) * da * b) / (a * s) }
    }

    /// Enforces `a > 0` and `a + bτ > 0`.
    pub fn check(&self, tau: T) -> Result<ParamValues<T>> {
        let v = self.values(tau);
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        if !(v.a > T::zero()) {
            return Err(GeometryError::ParameterConstraint { constraint: "a > 0", a: f(v.a), b: f(v.b), tau: f(tau) });
        }
        if !(v.a + v.b * tau > T::zero()) {
            return Err(GeometryError::ParameterConstraint {
                constraint: "a + b*tau > 0",
                a: f(v.a),
                b: f(v.b),
                tau: f(tau),
            });
        }
        Ok(v)
    }
}

impl<T: Real> ParamValues<T> {
    /// The coefficient of `G(A, B) t` as it appears in the printed connection table.
    pub fn m_printed(&self) -> T {
        (T::lit(2.0) * self.b - self.da) / (self.a + self.b * self.tau)
    }
}
