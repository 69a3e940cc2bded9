use ndarray::Array2;

use super::point::{project, SpherePoint};
use crate::base_geometry::Chart;
use crate::koszul::FrameSystem;
use crate::linalg::matmul;
use crate::scalar::{Real, Scalar};
use crate::tensor_bundle::frame::horizontal_frame;
use crate::tensor_bundle::metric::coords_to_adapted;
use crate::tensor_bundle::point::{metric_pair, pairing, split, vidx, weighted};

/// The overcomplete frame `{e_l, e_(i,j)^T}` of the sphere bundle with the induced metric.
///
/// Coefficient vectors are canonical: the vertical part satisfies `G(t, v) = 0`.
pub struct SphereFrame<'a, T: Real> {
    pub chart: &'a Chart<T>,
    pub a: T,
    pub point: SpherePoint<T>,
}

impl<'a, T: Real> SphereFrame<'a, T> {
    pub fn new(chart: &'a Chart<T>, a: T, point: SpherePoint<T>) -> Self {
        Self { chart, a, point }
    }

    fn n(&self) -> usize {
        self.chart.dim()
    }

    fn project_vertical<S: Scalar<Real = T>>(&self, z: &[S], c: &mut [S]) {
        let n = self.n();
        let (x, t) = split(z, n);
        let (g, g_inv) = metric_pair(self.chart, &x);
        let v = Array2::from_shape_fn((n, n), |(i, j)| c[vidx(n, i, j)]);
        let pv = project(&g, &g_inv, &t, &v);
        for ((i, j), e) in pv.indexed_iter() {
            c[vidx(n, i, j)] = *e;
        }
    }
}

impl<T: Real> FrameSystem<T> for SphereFrame<'_, T> {
    fn size(&self) -> usize {
        let n = self.n();
        n + n * n
    }

    fn point(&self) -> Vec<T> {
        self.point.bundle_point().coords()
    }

    fn frame<S: Scalar<Real = T>>(&self, z: &[S]) -> Vec<Vec<S>> {
        let n = self.n();
        let d = self.size();
        let (x, t) = split(z, n);
        let (g, g_inv) = metric_pair(self.chart, &x);
        let w = weighted(&g, &t, &g_inv);
        let tau = pairing(&g, &g_inv, &t, &t);
        let mut out = horizontal_frame(self.chart, z);
        for i in 0..n {
            for j in 0..n {
                let c = w[[i, j]] / tau;
                let mut e = vec![S::zero(); d];
                for p in 0..n {
                    for q in 0..n {
                        e[vidx(n, p, q)] = -c * t[[p, q]];
                    }
                }
                e[vidx(n, i, j)] += S::one();
                out.push(e);
            }
        }
        out
    }

    fn gram<S: Scalar<Real = T>>(&self, z: &[S]) -> Array2<S> {
        let n = self.n();
        let d = self.size();
        let (x, t) = split(z, n);
        let (g, g_inv) = metric_pair(self.chart, &x);
        let w = weighted(&g, &t, &g_inv);
        let tau = pairing(&g, &g_inv, &t, &t);
        let a = S::cst(self.a);
        let mut m = Array2::from_elem((d, d), S::zero());
        for j in 0..n {
            for l in 0..n {
                m[[j, l]] = g[[j, l]];
            }
        }
        for i in 0..n {
            for j in 0..n {
                for tt in 0..n {
                    for l in 0..n {
                        m[[vidx(n, i, j), vidx(n, tt, l)]] =
                            a * (g[[i, tt]] * g_inv[[j, l]] - w[[i, j]] * w[[tt, l]] / tau);
                    }
                }
            }
        }
        m
    }

    fn to_frame<S: Scalar<Real = T>>(&self, z: &[S], coords: &[S]) -> Vec<S> {
        let (x, t) = split(z, self.n());
        let gamma = self.chart.christoffel_s(&x);
        let mut c = coords_to_adapted(&gamma, &t, coords);
        self.project_vertical(z, &mut c);
        c
    }

    fn raise<S: Scalar<Real = T>>(&self, z: &[S], cov: &[S]) -> Vec<S> {
        let n = self.n();
        let (x, _) = split(z, n);
        let (g, g_inv) = metric_pair(self.chart, &x);
        let mut out = vec![S::zero(); n + n * n];
        for i in 0..n {
            for j in 0..n {
                out[i] += g_inv[[i, j]] * cov[j];
            }
        }
        let k = Array2::from_shape_fn((n, n), |(i, j)| cov[vidx(n, i, j)]);
        let raised = matmul(&matmul(&g_inv, &k), &g);
        let inv_a = S::cst(T::one() / self.a);
        for i in 0..n {
            for j in 0..n {
                out[vidx(n, i, j)] = raised[[i, j]] * inv_a;
            }
        }
        self.project_vertical(z, &mut out);
        out
    }

    fn combine<S: Scalar<Real = T>>(&self, z: &[S], coeff: &[S]) -> Vec<S> {
        let mut c = coeff.to_vec();
        self.project_vertical(z, &mut c);
        c
    }
}
