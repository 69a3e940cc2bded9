use ndarray::Array2;

use crate::base_geometry::Chart;
use crate::error::{GeometryError, Result};
use crate::linalg::{inverse, matmul};
use crate::scalar::{Real, Scalar};

/// A point `(x, t)` of the (1,1)-tensor bundle; `t[[i, j]] = t^i_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BundlePoint<T> {
    pub x: Vec<T>,
    pub t: Array2<T>,
}

impl<T: Real> BundlePoint<T> {
    pub fn new(x: Vec<T>, t: Array2<T>) -> Result<Self> {
        let n = x.len();
        if t.dim() != (n, n) {
            return Err(GeometryError::InvalidDimension { got: t.nrows(), reason: "fiber matrix must be n x n" });
        }
        Ok(Self { x, t })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Bundle coordinates `(x^1..x^n, t^1_1, t^1_2, ..)`, fiber part row-major.
    pub fn coords(&self) -> Vec<T> {
        let mut z = self.x.clone();
        z.extend(self.t.iter().copied());
        z
    }

    pub fn from_coords(z: &[T], n: usize) -> Self {
        let (x, t) = split(z, n);
        Self { x, t }
    }
}

/// Index of the vertical pair `(i, j)` inside an adapted or coordinate vector.
#[inline]
pub fn vidx(n: usize, i: usize, j: usize) -> usize {
    n + i * n + j
}

pub fn split<S: Scalar>(z: &[S], n: usize) -> (Vec<S>, Array2<S>) {
    let x = z[..n].to_vec();
    let t = Array2::from_shape_vec((n, n), z[n..n + n * n].to_vec()).expect("n + n^2 coordinates");
    (x, t)
}

/// `g A g^{-1}`; for `A = t` its `(i, j)` entry is `t̄^j_i`.
pub fn weighted<S: Scalar>(g: &Array2<S>, a: &Array2<S>, g_inv: &Array2<S>) -> Array2<S> {
    matmul(&matmul(g, a), g_inv)
}

/// Fiber inner product `G(A, B) = g_it g^jl A^i_j B^t_l`.
pub fn pairing<S: Scalar>(g: &Array2<S>, g_inv: &Array2<S>, a: &Array2<S>, b: &Array2<S>) -> S {
    let w = weighted(g, a, g_inv);
    contract(&w, b)
}

/// Entrywise contraction `Σ A[i][j] B[i][j]`.
pub fn contract<S: Scalar>(a: &Array2<S>, b: &Array2<S>) -> S {
    let mut s = S::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        s += *x * *y;
    }
    s
}

/// Commutator `AB − BA`.
pub fn commutator<S: Scalar>(a: &Array2<S>, b: &Array2<S>) -> Array2<S> {
    matmul(a, b) - &matmul(b, a)
}

/// Energy density `τ = G(t, t)` at a bundle point.
pub fn tau<T: Real>(chart: &Chart<T>, p: &BundlePoint<T>) -> Result<T> {
    let jet = chart.metric_at(&p.x)?;
    Ok(pairing(&jet.g, &jet.g_inv, &p.t, &p.t))
}

/// `t̄` with `tbar[[j, t]] = t̄^j_t = g^{jh} g_{tk} t^k_h`.
pub fn tbar<T: Real>(chart: &Chart<T>, p: &BundlePoint<T>) -> Result<Array2<T>> {
    let jet = chart.metric_at(&p.x)?;
    Ok(weighted(&jet.g, &p.t, &jet.g_inv).t().to_owned())
}

/// `ια = α^j_i t^i_j`, with `alpha[[j, i]] = α^j_i`.
pub fn iota<T: Real>(alpha: &Array2<T>, p: &BundlePoint<T>) -> T {
    let n = p.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            s = s + alpha[[j, i]] * p.t[[i, j]];
        }
    }
    s
}

/// Metric and inverse at a scalar point, shared by the generic frame code.
pub(crate) fn metric_pair<T: Real, S: Scalar<Real = T>>(chart: &Chart<T>, x: &[S]) -> (Array2<S>, Array2<S>) {
    let g = chart.metric_s(x);
    let g_inv = inverse(&g).expect("metric invertible inside the chart");
    (g, g_inv)
}
