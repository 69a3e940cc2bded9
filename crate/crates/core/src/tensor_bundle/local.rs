//! Base data frozen at one point, with the fiber algebra used by the closed-form tables.

use ndarray::{Array2, Array3, Array4, Array5};

use super::point::{commutator, pairing};
use crate::base_geometry::Chart;
use crate::error::Result;
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct LocalGeometry<T> {
    pub n: usize,
    pub g: Array2<T>,
    pub g_inv: Array2<T>,
    pub gamma: Array3<T>,
    pub r: Array4<T>,
    pub nabla_r: Array5<T>,
}

impl<T: Real> LocalGeometry<T> {
    pub fn at(chart: &Chart<T>, x: &[T]) -> Result<Self> {
        let jet = chart.metric_at(x)?;
        let gamma = chart.christoffel_at(x)?.gamma;
        let curv = chart.curvature_at(x)?;
        Ok(Self { n: chart.dim(), g: jet.g, g_inv: jet.g_inv, gamma, r: curv.r, nabla_r: curv.nabla_r })
    }

    pub fn unit(&self, k: usize) -> Vec<T> {
        (0..self.n).map(|i| if i == k { T::one() } else { T::zero() }).collect()
    }

    pub fn pair(&self, a: &Array2<T>, b: &Array2<T>) -> T {
        pairing(&self.g, &self.g_inv, a, b)
    }

    pub fn inner(&self, x: &[T], y: &[T]) -> T {
        let mut s = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                s = s + self.g[[i, j]] * x[i] * y[j];
            }
        }
        s
    }

    pub fn raise(&self, c: &[T]) -> Vec<T> {
        (0..self.n).map(|i| (0..self.n).fold(T::zero(), |acc, j| acc + self.g_inv[[i, j]] * c[j])).collect()
    }

    /// `(∇_Y R)` as a four-index array, or `R` itself when `dir` is `None`.
    pub fn curvature_along(&self, dir: Option<&[T]>) -> Array4<T> {
        let n = self.n;
        match dir {
            None => self.r.clone(),
            Some(y) => Array4::from_shape_fn((n, n, n, n), |(l, j, r, s)| {
                (0..n).fold(T::zero(), |acc, m| acc + y[m] * self.nabla_r[[m, l, j, r, s]])
            }),
        }
    }

    /// Endomorphism `R(X, Y)` as a matrix `[s][r] = X^l Y^j R_ljr^s`.
    pub fn endo(&self, rr: &Array4<T>, x: &[T], y: &[T]) -> Array2<T> {
        let n = self.n;
        Array2::from_shape_fn((n, n), |(s, r)| {
            let mut v = T::zero();
            for l in 0..n {
                if x[l] == T::zero() {
                    continue;
                }
                for j in 0..n {
                    v = v + x[l] * y[j] * rr[[l, j, r, s]];
                }
            }
            v
        })
    }

    /// `R(X, Y)Z` as a vector.
    pub fn apply(&self, rr: &Array4<T>, x: &[T], y: &[T], z: &[T]) -> Vec<T> {
        let m = self.endo(rr, x, y);
        (0..self.n).map(|s| (0..self.n).fold(T::zero(), |acc, r| acc + m[[s, r]] * z[r])).collect()
    }

    /// The vector `S` with `g(S, W) = −(a/2) G([B, RR(X, W)], F)` for all `W`.
    pub fn s_op(&self, a: T, rr: &Array4<T>, b: &Array2<T>, f: &Array2<T>, x: &[T]) -> Vec<T> {
        let half_a = a / T::lit(2.0);
        let cov: Vec<T> = (0..self.n)
            .map(|w| {
                let ew = self.unit(w);
                let q = commutator(b, &self.endo(rr, x, &ew));
                -half_a * self.pair(&q, f)
            })
            .collect();
        self.raise(&cov)
    }

    /// `(∇_X A)^i_j = ∂_X A^i_j + Γ^i_{km} X^k A^m_j − Γ^m_{kj} X^k A^i_m` for constant `A`.
    pub fn gamma_action(&self, x: &[T], a: &Array2<T>) -> Array2<T> {
        let n = self.n;
        Array2::from_shape_fn((n, n), |(i, j)| {
            let mut s = T::zero();
            for k in 0..n {
                if x[k] == T::zero() {
                    continue;
                }
                for m in 0..n {
                    s = s + x[k] * (self.gamma[[i, k, m]] * a[[m, j]] - self.gamma[[m, k, j]] * a[[i, m]]);
                }
            }
            s
        })
    }
}
