use ndarray::Array2;

use super::metric::{adapted_gram, coords_to_adapted, horizontal_offset};
use super::params::CGParams;
use super::point::{contract, metric_pair, split, vidx, weighted, BundlePoint};
use crate::base_geometry::Chart;
use crate::koszul::FrameSystem;
use crate::linalg::matmul;
use crate::scalar::{Real, Scalar};

/// The adapted frame `{e_j, e_(i,j)}` of the tensor bundle with the lifted metric.
pub struct TensorBundleFrame<'a, T: Real> {
    pub chart: &'a Chart<T>,
    pub params: &'a CGParams<T>,
    pub point: BundlePoint<T>,
}

impl<'a, T: Real> TensorBundleFrame<'a, T> {
    pub fn new(chart: &'a Chart<T>, params: &'a CGParams<T>, point: BundlePoint<T>) -> Self {
        Self { chart, params, point }
    }

    fn n(&self) -> usize {
        self.chart.dim()
    }
}

/// Coordinate expressions of `e_1..e_n` followed by the coordinate fields `∂_(i,j)`.
pub(crate) fn horizontal_frame<T: Real, S: Scalar<Real = T>>(chart: &Chart<T>, z: &[S]) -> Vec<Vec<S>> {
    let n = chart.dim();
    let d = n + n * n;
    let (x, t) = split(z, n);
    let gamma = chart.christoffel_s(&x);
    let mut out = Vec::with_capacity(d);
    for l in 0..n {
        let mut e = vec![S::zero(); d];
        e[l] = S::one();
        let off = horizontal_offset(&gamma, &t, l);
        for i in 0..n {
            for j in 0..n {
                e[vidx(n, i, j)] = off[[i, j]];
            }
        }
        out.push(e);
    }
    out
}

impl<T: Real> FrameSystem<T> for TensorBundleFrame<'_, T> {
    fn size(&self) -> usize {
        let n = self.n();
        n + n * n
    }

    fn point(&self) -> Vec<T> {
        self.point.coords()
    }

    fn frame<S: Scalar<Real = T>>(&self, z: &[S]) -> Vec<Vec<S>> {
        let d = self.size();
        let mut out = horizontal_frame(self.chart, z);
        for k in self.n()..d {
            let mut e = vec![S::zero(); d];
            e[k] = S::one();
            out.push(e);
        }
        out
    }

    fn gram<S: Scalar<Real = T>>(&self, z: &[S]) -> Array2<S> {
        let n = self.n();
        let (x, t) = split(z, n);
        let (g, g_inv) = metric_pair(self.chart, &x);
        let w = weighted(&g, &t, &g_inv);
        let tau = contract(&w, &t);
        let a = self.params.a(tau);
        let b = self.params.b(tau);
        adapted_gram(&g, &g_inv, &t, a, b)
    }

    fn to_frame<S: Scalar<Real = T>>(&self, z: &[S], coords: &[S]) -> Vec<S> {
        let (x, t) = split(z, self.n());
        let gamma = self.chart.christoffel_s(&x);
        coords_to_adapted(&gamma, &t, coords)
    }

    fn raise<S: Scalar<Real = T>>(&self, z: &[S], cov: &[S]) -> Vec<S> {
        let n = self.n();
        let (x, t) = split(z, n);
        let (g, g_inv) = metric_pair(self.chart, &x);
        let w = weighted(&g, &t, &g_inv);
        let tau = contract(&w, &t);
        let a = self.params.a(tau);
        let b = self.params.b(tau);
        let mut out = vec![S::zero(); n + n * n];
        for i in 0..n {
            for j in 0..n {
                out[i] += g_inv[[i, j]] * cov[j];
            }
        }
        let k = Array2::from_shape_fn((n, n), |(i, j)| cov[vidx(n, i, j)]);
        let raised = matmul(&matmul(&g_inv, &k), &g);
        let c = b / (a * (a + b * tau)) * contract(&t, &k);
        for i in 0..n {
            for j in 0..n {
                out[vidx(n, i, j)] = raised[[i, j]] / a - c * t[[i, j]];
            }
        }
        out
    }
}
