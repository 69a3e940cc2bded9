//! Base manifold charts: metric, Christoffel symbols, curvature and its covariant derivative.
//!
//! Every quantity is evaluated generically over [`Scalar`], so derivatives of any order come
//! from nesting [`Dual`] numbers rather than from finite differences. User supplied charts
//! only provide `f64`-style metric samples and fall back to central differences.

use std::fmt;
use std::sync::Arc;

use ndarray::{Array2, Array3, Array4, Array5};

use crate::error::{GeometryError, Result};
use crate::linalg::{self, inverse};
use crate::scalar::{Dual, Real, Scalar};

pub type MetricFn<T> = Arc<dyn Fn(&[T]) -> Vec<T> + Send + Sync>;
pub type DomainFn<T> = Arc<dyn Fn(&[T]) -> bool + Send + Sync>;

#[derive(Clone)]
enum ChartKind<T: Real> {
    Euclidean,
    /// `g = δ / (1 + k|x|²/4)²`, curvature `k`, identity at the origin.
    ConstantCurvature {
        k: T,
    },
    Custom {
        metric: MetricFn<T>,
        domain: DomainFn<T>,
    },
}

/// A coordinate patch carrying a Riemannian metric.
#[derive(Clone)]
pub struct Chart<T: Real> {
    dim: usize,
    kind: ChartKind<T>,
}

impl<T: Real> fmt::Debug for Chart<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ChartKind::Euclidean => write!(f, "Chart::Euclidean(n={})", self.dim),
            ChartKind::ConstantCurvature { k } => {
                write!(f, "Chart::ConstantCurvature(n={}, k={})", self.dim, k)
            }
            ChartKind::Custom { .. } => write!(f, "Chart::Custom(n={})", self.dim),
        }
    }
}

/// Metric with its coordinate derivatives up to order three.
#[derive(Debug, Clone)]
pub struct MetricJet<T> {
    pub g: Array2<T>,
    pub g_inv: Array2<T>,
    /// `d1[[k, i, j]] = ∂_k g_ij`
    pub d1: Array3<T>,
    /// `d2[[k, l, i, j]] = ∂_k ∂_l g_ij`
    pub d2: Array4<T>,
    /// `d3[[k, l, m, i, j]] = ∂_k ∂_l ∂_m g_ij`
    pub d3: Array5<T>,
}

/// `gamma[[k, i, j]] = Γ^k_ij` with first and second coordinate derivatives.
#[derive(Debug, Clone)]
pub struct ChristoffelField<T> {
    pub gamma: Array3<T>,
    /// `d_gamma[[m, k, i, j]] = ∂_m Γ^k_ij`
    pub d_gamma: Array4<T>,
    /// `dd_gamma[[p, m, k, i, j]] = ∂_p ∂_m Γ^k_ij`
    pub dd_gamma: Array5<T>,
}

/// `r[[l, j, r, s]] = R_ljr^s`, meaning `R(∂_l, ∂_j)∂_r = R_ljr^s ∂_s`.
#[derive(Debug, Clone)]
pub struct CurvatureField<T> {
    pub r: Array4<T>,
    /// `nabla_r[[m, l, j, r, s]] = ∇_m R_ljr^s`
    pub nabla_r: Array5<T>,
}

impl<T: Real> Chart<T> {
    pub fn euclidean(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GeometryError::InvalidDimension { got: n, reason: "chart dimension must be positive" });
        }
        Ok(Self { dim: n, kind: ChartKind::Euclidean })
    }

    /// Conformally flat chart of constant sectional curvature `k`; `k = 0` is Euclidean.
    pub fn constant_curvature(k: T, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(GeometryError::InvalidDimension { got: n, reason: "constant curvature charts need n >= 2" });
        }
        if k == T::zero() {
            return Self::euclidean(n);
        }
        Ok(Self { dim: n, kind: ChartKind::ConstantCurvature { k } })
    }

    /// Chart from a metric sampler returning `g_ij` row-major. Derivatives use central
    /// differences with step `ε^{1/4}`.
    pub fn custom(n: usize, metric: MetricFn<T>, domain: DomainFn<T>) -> Result<Self> {
        if n == 0 {
            return Err(GeometryError::InvalidDimension { got: n, reason: "chart dimension must be positive" });
        }
        Ok(Self { dim: n, kind: ChartKind::Custom { metric, domain } })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Curvature constant for built-in charts (`Some(0)` for Euclidean), `None` for custom.
    pub fn curvature_constant(&self) -> Option<T> {
        match &self.kind {
            ChartKind::Euclidean => Some(T::zero()),
            ChartKind::ConstantCurvature { k } => Some(*k),
            ChartKind::Custom { .. } => None,
        }
    }

    pub fn is_flat(&self) -> bool {
        matches!(self.kind, ChartKind::Euclidean)
    }

    pub fn has_exact_jets(&self) -> bool {
        !matches!(self.kind, ChartKind::Custom { .. })
    }

    pub fn contains(&self, x: &[T]) -> bool {
        if x.len() != self.dim || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match &self.kind {
            ChartKind::Euclidean => true,
            ChartKind::ConstantCurvature { k } => {
                *k > T::zero() || {
                    let r2: T = x.iter().map(|v| *v * *v).sum();
                    r2 * k.abs() < T::lit(4.0)
                }
            }
            ChartKind::Custom { domain, .. } => domain(x),
        }
    }

    fn check(&self, x: &[T]) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(GeometryError::OutOfDomain { point: to_f64(x) })
        }
    }

    /// Metric components at a (possibly infinitesimally perturbed) point.
    pub fn metric_s<S: Scalar<Real = T>>(&self, x: &[S]) -> Array2<S> {
        let n = self.dim;
        match &self.kind {
            ChartKind::Euclidean => linalg::identity(n),
            ChartKind::ConstantCurvature { k } => {
                let mut r2 = S::zero();
                for v in x {
                    r2 += *v * *v;
                }
                let sigma = S::one() + r2.scale(*k / T::lit(4.0));
                let c = S::one() / (sigma * sigma);
                Array2::from_shape_fn((n, n), |(i, j)| if i == j { c } else { S::zero() })
            }
            ChartKind::Custom { metric, .. } => {
                let h = T::epsilon().powf(T::lit(0.25));
                let flat = S::lift_fd(x, &|y: &[T]| metric(y), h);
                Array2::from_shape_vec((n, n), flat).expect("custom metric returns n*n entries")
            }
        }
    }

    /// Inverse metric at a scalar point.
    pub fn metric_inv_s<S: Scalar<Real = T>>(&self, x: &[S]) -> Array2<S> {
        let g = self.metric_s(x);
        match &self.kind {
            ChartKind::Euclidean => g,
            ChartKind::ConstantCurvature { .. } => {
                g.mapv(|v| if v.re() == T::zero() { S::zero() } else { S::one() / v })
            }
            ChartKind::Custom { .. } => inverse(&g).unwrap_or(g),
        }
    }

    /// `Γ^k_ij` at a scalar point.
    pub fn christoffel_s<S: Scalar<Real = T>>(&self, x: &[S]) -> Array3<S> {
        let n = self.dim;
        if self.is_flat() {
            return Array3::from_elem((n, n, n), S::zero());
        }
        let g_inv = self.metric_inv_s(x);
        // dg[[m, i, j]] = ∂_m g_ij
        let mut dg = Array3::from_elem((n, n, n), S::zero());
        for m in 0..n {
            let xd = Dual::seed_axis(x, m);
            let gd = self.metric_s(&xd);
            for i in 0..n {
                for j in 0..n {
                    dg[[m, i, j]] = gd[[i, j]].du;
                }
            }
        }
        let half = T::lit(0.5);
        Array3::from_shape_fn((n, n, n), |(k, i, j)| {
            let mut s = S::zero();
            for m in 0..n {
                s += g_inv[[k, m]] * (dg[[i, m, j]] + dg[[j, m, i]] - dg[[m, i, j]]);
            }
            s.scale(half)
        })
    }

    /// `R_ljr^s` at a scalar point.
    pub fn riemann_s<S: Scalar<Real = T>>(&self, x: &[S]) -> Array4<S> {
        let n = self.dim;
        if self.is_flat() {
            return Array4::from_elem((n, n, n, n), S::zero());
        }
        let gam = self.christoffel_s(x);
        let mut dgam = Array4::from_elem((n, n, n, n), S::zero());
        for m in 0..n {
            let gd = self.christoffel_s(&Dual::seed_axis(x, m));
            for (idx, v) in gd.indexed_iter() {
                dgam[[m, idx.0, idx.1, idx.2]] = v.du;
            }
        }
        riemann_from(&gam, &dgam)
    }

    pub fn metric_at(&self, x: &[T]) -> Result<MetricJet<T>> {
        self.check(x)?;
        let n = self.dim;
        let g = self.metric_s(x);
        debug_assert!(linalg::is_positive_definite(&g), "metric not positive definite");
        if g.iter().any(|v| !v.is_finite()) || !linalg::is_positive_definite(&g) {
            return Err(GeometryError::NotPositiveDefinite { point: to_f64(x) });
        }
        let g_inv = inverse(&g)?;
        let mut d1 = Array3::zeros((n, n, n));
        let mut d2 = Array4::zeros((n, n, n, n));
        let mut d3 = Array5::zeros((n, n, n, n, n));
        if !self.is_flat() {
            for k in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        let xs: Vec<Dual<Dual<Dual<T>>>> = (0..n)
                            .map(|i| {
                                let e = |a: usize| if a == i { T::one() } else { T::zero() };
                                Dual::new(
                                    Dual::new(Dual::new(x[i], e(m)), Dual::new(e(l), T::zero())),
                                    Dual::new(Dual::new(e(k), T::zero()), Dual::new(T::zero(), T::zero())),
                                )
                            })
                            .collect();
                        let gd = self.metric_s(&xs);
                        for i in 0..n {
                            for j in 0..n {
                                let v = gd[[i, j]];
                                d1[[m, i, j]] = v.re.re.du;
                                d2[[l, m, i, j]] = v.re.du.du;
                                d3[[k, l, m, i, j]] = v.du.du.du;
                            }
                        }
                    }
                }
            }
        }
        Ok(MetricJet { g, g_inv, d1, d2, d3 })
    }

    pub fn christoffel_at(&self, x: &[T]) -> Result<ChristoffelField<T>> {
        self.check(x)?;
        let n = self.dim;
        let gamma = self.christoffel_s(x);
        let mut d_gamma = Array4::zeros((n, n, n, n));
        let mut dd_gamma = Array5::zeros((n, n, n, n, n));
        if !self.is_flat() {
            for p in 0..n {
                for m in 0..n {
                    let xs: Vec<Dual<Dual<T>>> = (0..n)
                        .map(|i| {
                            let e = |a: usize| if a == i { T::one() } else { T::zero() };
                            Dual::new(Dual::new(x[i], e(m)), Dual::new(e(p), T::zero()))
                        })
                        .collect();
                    let gd = self.christoffel_s(&xs);
                    for (idx, v) in gd.indexed_iter() {
                        d_gamma[[m, idx.0, idx.1, idx.2]] = v.re.du;
                        dd_gamma[[p, m, idx.0, idx.1, idx.2]] = v.du.du;
                    }
                }
            }
        }
        Ok(ChristoffelField { gamma, d_gamma, dd_gamma })
    }

    pub fn curvature_at(&self, x: &[T]) -> Result<CurvatureField<T>> {
        self.check(x)?;
        let n = self.dim;
        if self.is_flat() {
            return Ok(CurvatureField { r: Array4::zeros((n, n, n, n)), nabla_r: Array5::zeros((n, n, n, n, n)) });
        }
        let r = self.riemann_s(x);
        let gam = self.christoffel_s(x);
        let mut dr = Array5::zeros((n, n, n, n, n));
        for m in 0..n {
            let rd = self.riemann_s(&Dual::seed_axis(x, m));
            for (idx, v) in rd.indexed_iter() {
                dr[[m, idx.0, idx.1, idx.2, idx.3]] = v.du;
            }
        }
        let nabla_r = covariant_derivative_of_curvature(&r, &dr, &gam);
        Ok(CurvatureField { r, nabla_r })
    }
}

/// `R_ljr^s = ∂_l Γ^s_jr − ∂_j Γ^s_lr + Γ^p_jr Γ^s_lp − Γ^p_lr Γ^s_jp`.
pub fn riemann_from<S: Scalar>(gam: &Array3<S>, dgam: &Array4<S>) -> Array4<S> {
    let n = gam.dim().0;
    Array4::from_shape_fn((n, n, n, n), |(l, j, r, s)| {
        let mut v = dgam[[l, s, j, r]] - dgam[[j, s, l, r]];
        for p in 0..n {
            v += gam[[p, j, r]] * gam[[s, l, p]] - gam[[p, l, r]] * gam[[s, j, p]];
        }
        v
    })
}

fn covariant_derivative_of_curvature<T: Real>(r: &Array4<T>, dr: &Array5<T>, gam: &Array3<T>) -> Array5<T> {
    let n = gam.dim().0;
    Array5::from_shape_fn((n, n, n, n, n), |(m, l, j, rr, s)| {
        let mut v = dr[[m, l, j, rr, s]];
        for p in 0..n {
            v = v
                - gam[[p, m, l]] * r[[p, j, rr, s]]
                - gam[[p, m, j]] * r[[l, p, rr, s]]
                - gam[[p, m, rr]] * r[[l, j, p, s]]
                + gam[[s, m, p]] * r[[l, j, rr, p]];
        }
        v
    })
}

/// Fully covariant `R_abcd = R_abc^e g_ed`.
pub fn lower_curvature<T: Real>(r: &Array4<T>, g: &Array2<T>) -> Array4<T> {
    let n = g.nrows();
    Array4::from_shape_fn((n, n, n, n), |(a, b, c, d)| {
        (0..n).fold(T::zero(), |acc, e| acc + r[[a, b, c, e]] * g[[e, d]])
    })
}

/// Sectional curvature of the plane spanned by `u`, `v` at a base point.
pub fn base_sectional_curvature<T: Real>(r: &Array4<T>, g: &Array2<T>, u: &[T], v: &[T]) -> Result<T> {
    let n = g.nrows();
    let ip = |a: &[T], b: &[T]| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                s = s + g[[i, j]] * a[i] * b[j];
            }
        }
        s
    };
    let mut rvv = vec![T::zero(); n];
    for l in 0..n {
        for j in 0..n {
            for rr in 0..n {
                for s in 0..n {
                    rvv[s] = rvv[s] + u[l] * v[j] * v[rr] * r[[l, j, rr, s]];
                }
            }
        }
    }
    let den = ip(u, u) * ip(v, v) - ip(u, v) * ip(u, v);
    if den.abs() <= T::lit(1e-12) {
        return Err(GeometryError::DegeneratePlane { gram_det: to_f64(&[den])[0] });
    }
    Ok(ip(&rvv, u) / den)
}

pub(crate) fn to_f64<T: Real>(x: &[T]) -> Vec<f64> {
    x.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere2() -> Chart<f64> {
        Chart::constant_curvature(1.0, 2).unwrap()
    }

    #[test]
    fn euclidean_metric_is_identity_with_zero_jets() {
        let c = Chart::<f64>::euclidean(2).unwrap();
        let j = c.metric_at(&[0.3, -1.2]).unwrap();
        assert_eq!(j.g, linalg::identity::<f64>(2));
        assert!(j.d1.iter().chain(j.d2.iter()).chain(j.d3.iter()).all(|v| *v == 0.0));
        let ch = c.christoffel_at(&[0.3, -1.2]).unwrap();
        assert!(ch.gamma.iter().all(|v| *v == 0.0));
        let cu = c.curvature_at(&[0.3, -1.2]).unwrap();
        assert!(cu.r.iter().chain(cu.nabla_r.iter()).all(|v| *v == 0.0));
    }

    #[test]
    fn curved_chart_is_identity_at_center() {
        let j = sphere2().metric_at(&[0.0, 0.0]).unwrap();
        assert_eq!(j.g, linalg::identity::<f64>(2));
    }

    #[test]
    fn zero_curvature_gives_euclidean() {
        let c = Chart::constant_curvature(0.0, 3).unwrap();
        assert!(c.is_flat());
        assert_eq!(c.dim(), 3);
    }

    #[test]
    fn dimension_below_two_rejected() {
        assert!(matches!(Chart::constant_curvature(1.0_f64, 1), Err(GeometryError::InvalidDimension { .. })));
    }

    #[test]
    fn hyperbolic_domain_enforced() {
        let c = Chart::constant_curvature(-1.0_f64, 2).unwrap();
        assert!(c.contains(&[1.0, 1.0]));
        assert!(!c.contains(&[1.5, 1.5]));
        assert!(matches!(c.metric_at(&[1.5, 1.5]), Err(GeometryError::OutOfDomain { .. })));
    }

    #[test]
    fn hyperbolic_coordinate_plane_has_curvature_minus_one() {
        let c = Chart::constant_curvature(-1.0_f64, 2).unwrap();
        let x = [0.2, -0.4];
        let j = c.metric_at(&x).unwrap();
        let cu = c.curvature_at(&x).unwrap();
        let k = base_sectional_curvature(&cu.r, &j.g, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((k + 1.0).abs() < 1e-12);
    }

    #[test]
    fn jets_match_central_differences() {
        let c = Chart::constant_curvature(0.7_f64, 3).unwrap();
        let x = [0.3, -0.2, 0.5];
        let j = c.metric_at(&x).unwrap();
        let h = 1e-4;
        for k in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            let gp = c.metric_at(&xp).unwrap();
            let gm = c.metric_at(&xm).unwrap();
            for i in 0..3 {
                for jj in 0..3 {
                    let fd = (gp.g[[i, jj]] - gm.g[[i, jj]]) / (2.0 * h);
                    let an = j.d1[[k, i, jj]];
                    assert!((fd - an).abs() <= 1e-5 * an.abs().max(1e-3));
                    for l in 0..3 {
                        let fd2 = (gp.d1[[l, i, jj]] - gm.d1[[l, i, jj]]) / (2.0 * h);
                        assert!((fd2 - j.d2[[k, l, i, jj]]).abs() <= 1e-5 * fd2.abs().max(1e-3));
                        for m in 0..3 {
                            let fd3 = (gp.d2[[l, m, i, jj]] - gm.d2[[l, m, i, jj]]) / (2.0 * h);
                            assert!((fd3 - j.d3[[k, l, m, i, jj]]).abs() <= 1e-5 * fd3.abs().max(1e-2));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn christoffel_matches_finite_difference_koszul() {
        let c = sphere2();
        let x = [0.4, -0.3];
        let ch = c.christoffel_at(&x).unwrap();
        let jet = c.metric_at(&x).unwrap();
        let h = 1e-5;
        let dg = |m: usize, i: usize, j: usize| {
            let mut xp = x;
            let mut xm = x;
            xp[m] += h;
            xm[m] -= h;
            (c.metric_s(&xp)[[i, j]] - c.metric_s(&xm)[[i, j]]) / (2.0 * h)
        };
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let mut v = 0.0;
                    for m in 0..2 {
                        v += 0.5 * jet.g_inv[[k, m]] * (dg(i, m, j) + dg(j, m, i) - dg(m, i, j));
                    }
                    assert!((v - ch.gamma[[k, i, j]]).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn custom_chart_matches_closed_form() {
        let k = 1.0_f64;
        let metric: MetricFn<f64> = Arc::new(move |x: &[f64]| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            let c = 1.0 / (1.0 + k * r2 / 4.0).powi(2);
            vec![c, 0.0, 0.0, c]
        });
        let custom = Chart::custom(2, metric, Arc::new(|_: &[f64]| true)).unwrap();
        let exact = sphere2();
        let x = [0.3, 0.1];
        let a = custom.curvature_at(&x).unwrap();
        let b = exact.curvature_at(&x).unwrap();
        for (u, v) in a.r.iter().zip(b.r.iter()) {
            assert!((u - v).abs() < 1e-3);
        }
        let ca = custom.christoffel_at(&x).unwrap();
        let cb = exact.christoffel_at(&x).unwrap();
        for (u, v) in ca.gamma.iter().zip(cb.gamma.iter()) {
            assert!((u - v).abs() < 1e-5);
        }
    }

    #[test]
    fn generic_over_f32() {
        let c = Chart::<f32>::constant_curvature(1.0, 2).unwrap();
        let cu = c.curvature_at(&[0.1, 0.2]).unwrap();
        let j = c.metric_at(&[0.1, 0.2]).unwrap();
        let k = base_sectional_curvature(&cu.r, &j.g, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((k - 1.0).abs() < 1e-4);
    }
}
