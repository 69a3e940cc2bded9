//! Lifts, the adapted frame and the Cheeger-Gromoll type metric in that frame.

use ndarray::{Array2, Array3};

use super::params::{CGParams, ParamValues};
use super::point::{pairing, vidx, weighted, BundlePoint};
use crate::base_geometry::Chart;
use crate::error::Result;
use crate::fields::{TensorField, VectorField};
use crate::scalar::{Real, Scalar};

/// Tangent vector of the bundle in the adapted frame: `h^j e_j + v^i_j e_(i,j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedVector<T> {
    pub h: Vec<T>,
    pub v: Array2<T>,
}

impl<T: Real> AdaptedVector<T> {
    pub fn zero(n: usize) -> Self {
        Self { h: vec![T::zero(); n], v: Array2::zeros((n, n)) }
    }

    pub fn horizontal(h: Vec<T>) -> Self {
        let n = h.len();
        Self { h, v: Array2::zeros((n, n)) }
    }

    pub fn vertical(v: Array2<T>) -> Self {
        Self { h: vec![T::zero(); v.nrows()], v }
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }

    pub fn flat(&self) -> Vec<T> {
        let mut out = self.h.clone();
        out.extend(self.v.iter().copied());
        out
    }

    pub fn from_flat(f: &[T], n: usize) -> Self {
        Self {
            h: f[..n].to_vec(),
            v: Array2::from_shape_vec((n, n), f[n..n + n * n].to_vec()).expect("n + n^2 entries"),
        }
    }
}

/// Vertical part of the coordinate expression of `e_l`:
/// `Γ^m_lj t^i_m − Γ^i_lm t^m_j` at `(i, j)`.
pub fn horizontal_offset<S: Scalar>(gamma: &Array3<S>, t: &Array2<S>, l: usize) -> Array2<S> {
    let n = t.nrows();
    Array2::from_shape_fn((n, n), |(i, j)| {
        let mut s = S::zero();
        for m in 0..n {
            s += gamma[[m, l, j]] * t[[i, m]] - gamma[[i, l, m]] * t[[m, j]];
        }
        s
    })
}

/// Coordinate components → adapted components.
pub fn coords_to_adapted<S: Scalar>(gamma: &Array3<S>, t: &Array2<S>, c: &[S]) -> Vec<S> {
    let n = t.nrows();
    let mut out = c.to_vec();
    for l in 0..n {
        let off = horizontal_offset(gamma, t, l);
        for i in 0..n {
            for j in 0..n {
                out[vidx(n, i, j)] -= c[l] * off[[i, j]];
            }
        }
    }
    out
}

/// Adapted components → coordinate components.
pub fn adapted_to_coords<S: Scalar>(gamma: &Array3<S>, t: &Array2<S>, a: &[S]) -> Vec<S> {
    let n = t.nrows();
    let mut out = a.to_vec();
    for l in 0..n {
        let off = horizontal_offset(gamma, t, l);
        for i in 0..n {
            for j in 0..n {
                out[vidx(n, i, j)] += a[l] * off[[i, j]];
            }
        }
    }
    out
}

/// Columns are the coordinate expressions of `e_1..e_n, e_(1,1)..e_(n,n)`.
pub fn frame_matrix<T: Real>(chart: &Chart<T>, p: &BundlePoint<T>) -> Result<Array2<T>> {
    let n = p.dim();
    let d = n + n * n;
    let gamma = chart.christoffel_at(&p.x)?.gamma;
    let mut m = Array2::eye(d);
    for l in 0..n {
        let off = horizontal_offset(&gamma, &p.t, l);
        for i in 0..n {
            for j in 0..n {
                m[[vidx(n, i, j), l]] = off[[i, j]];
            }
        }
    }
    Ok(m)
}

pub fn to_adapted<T: Real>(chart: &Chart<T>, p: &BundlePoint<T>, c: &[T]) -> Result<AdaptedVector<T>> {
    let gamma = chart.christoffel_at(&p.x)?.gamma;
    Ok(AdaptedVector::from_flat(&coords_to_adapted(&gamma, &p.t, c), p.dim()))
}

pub fn to_coords<T: Real>(chart: &Chart<T>, p: &BundlePoint<T>, a: &AdaptedVector<T>) -> Result<Vec<T>> {
    let gamma = chart.christoffel_at(&p.x)?.gamma;
    Ok(adapted_to_coords(&gamma, &p.t, &a.flat()))
}

pub fn vertical_lift<T: Real>(chart: &Chart<T>, a: &TensorField<T>, p: &BundlePoint<T>) -> Result<AdaptedVector<T>> {
    chart.metric_at(&p.x)?;
    Ok(AdaptedVector::vertical(a.eval(&p.x)))
}

pub fn horizontal_lift<T: Real>(chart: &Chart<T>, x: &VectorField<T>, p: &BundlePoint<T>) -> Result<AdaptedVector<T>> {
    chart.metric_at(&p.x)?;
    Ok(AdaptedVector::horizontal(x.eval(&p.x)))
}

/// Complete lift in bundle coordinates: `(V^j, t^m_j ∂_m V^i − t^i_m ∂_j V^m)`.
pub fn complete_lift<T: Real>(chart: &Chart<T>, v: &VectorField<T>, p: &BundlePoint<T>) -> Result<Vec<T>> {
    chart.metric_at(&p.x)?;
    let n = p.dim();
    let val = v.eval(&p.x);
    let jac = v.jacobian(n);
    let mut out = val;
    for i in 0..n {
        for j in 0..n {
            let mut s = T::zero();
            for m in 0..n {
                s = s + p.t[[m, j]] * jac[[i, m]] - p.t[[i, m]] * jac[[m, j]];
            }
            out.push(s);
        }
    }
    Ok(out)
}

/// Adapted-frame metric matrix at a scalar point, given `a`, `b` evaluated at `τ`.
pub fn adapted_gram<S: Scalar>(g: &Array2<S>, g_inv: &Array2<S>, t: &Array2<S>, a: S, b: S) -> Array2<S> {
    let n = g.nrows();
    let d = n + n * n;
    let w = weighted(g, t, g_inv);
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
                    m[[vidx(n, i, j), vidx(n, tt, l)]] = a * g[[i, tt]] * g_inv[[j, l]] + b * w[[i, j]] * w[[tt, l]];
                }
            }
        }
    }
    m
}

/// Closed-form inverse of [`adapted_gram`].
pub fn adapted_gram_inverse<S: Scalar>(
    g: &Array2<S>,
    g_inv: &Array2<S>,
    t: &Array2<S>,
    a: S,
    b: S,
    tau: S,
) -> Array2<S> {
    let n = g.nrows();
    let d = n + n * n;
    let c = b / (a * (a + b * tau));
    let mut m = Array2::from_elem((d, d), S::zero());
    for j in 0..n {
        for l in 0..n {
            m[[j, l]] = g_inv[[j, l]];
        }
    }
    for i in 0..n {
        for j in 0..n {
            for tt in 0..n {
                for l in 0..n {
                    m[[vidx(n, i, j), vidx(n, tt, l)]] = g_inv[[i, tt]] * g[[j, l]] / a - c * t[[i, j]] * t[[tt, l]];
                }
            }
        }
    }
    m
}

/// Metric matrix of the lifted metric in the adapted frame and its closed-form inverse.
pub fn cg_metric_matrices<T: Real>(
    chart: &Chart<T>,
    params: &CGParams<T>,
    p: &BundlePoint<T>,
) -> Result<(Array2<T>, Array2<T>)> {
    let jet = chart.metric_at(&p.x)?;
    let tau = pairing(&jet.g, &jet.g_inv, &p.t, &p.t);
    let v = params.check(tau)?;
    Ok((
        adapted_gram(&jet.g, &jet.g_inv, &p.t, v.a, v.b),
        adapted_gram_inverse(&jet.g, &jet.g_inv, &p.t, v.a, v.b, tau),
    ))
}

/// Lifted metric evaluated on two adapted vectors.
pub fn cg_inner<T: Real>(
    chart: &Chart<T>,
    params: &CGParams<T>,
    p: &BundlePoint<T>,
    u: &AdaptedVector<T>,
    w: &AdaptedVector<T>,
) -> Result<T> {
    let jet = chart.metric_at(&p.x)?;
    let tau = pairing(&jet.g, &jet.g_inv, &p.t, &p.t);
    let pv = params.check(tau)?;
    Ok(cg_inner_with(&jet.g, &jet.g_inv, &p.t, &pv, u, w))
}

pub(crate) fn cg_inner_with<T: Real>(
    g: &Array2<T>,
    g_inv: &Array2<T>,
    t: &Array2<T>,
    pv: &ParamValues<T>,
    u: &AdaptedVector<T>,
    w: &AdaptedVector<T>,
) -> T {
    let n = g.nrows();
    let mut h = T::zero();
    for i in 0..n {
        for j in 0..n {
            h = h + g[[i, j]] * u.h[i] * w.h[j];
        }
    }
    let gt_u = pairing(g, g_inv, t, &u.v);
    let gt_w = pairing(g, g_inv, t, &w.v);
    h + pv.a * pairing(g, g_inv, &u.v, &w.v) + pv.b * gt_u * gt_w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, matmul};
    use ndarray::array;

    #[test]
    fn metric_times_inverse_unit_preset_identity_fiber() {
        let c = Chart::<f64>::euclidean(2).unwrap();
        let p = BundlePoint::new(vec![0.0, 0.0], Array2::eye(2)).unwrap();
        let (m, mi) = cg_metric_matrices(&c, &CGParams::Unit, &p).unwrap();
        let prod = matmul(&m, &mi);
        let id = identity::<f64>(6);
        assert!(prod.iter().zip(id.iter()).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn sasaki_vertical_block_is_g_tensor_g_inverse() {
        let c = Chart::<f64>::constant_curvature(1.0, 2).unwrap();
        let x = vec![0.3, 0.2];
        let p = BundlePoint::new(x.clone(), array![[1.0, 0.3], [-0.2, 0.5]]).unwrap();
        let (m, _) = cg_metric_matrices(&c, &CGParams::Sasaki, &p).unwrap();
        let jet = c.metric_at(&x).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for t in 0..2 {
                    for l in 0..2 {
                        let e = jet.g[[i, t]] * jet.g_inv[[j, l]];
                        assert!((m[[vidx(2, i, j), vidx(2, t, l)]] - e).abs() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn complete_lift_of_linear_field() {
        let c = Chart::<f64>::euclidean(2).unwrap();
        let t = array![[1.0, 2.0], [3.0, 4.0]];
        let p = BundlePoint::new(vec![0.5, -0.5], t.clone()).unwrap();
        let v = VectorField::Affine { offset: vec![0.0, 0.0], linear: array![[1.0, 0.0], [0.0, 0.0]] };
        let cl = complete_lift(&c, &v, &p).unwrap();
        assert_eq!(cl[0], 0.5);
        for i in 0..2 {
            for j in 0..2 {
                let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
                let e = t[[0, j]] * d(i, 0) - t[[i, 0]] * d(0, j);
                assert_eq!(cl[vidx(2, i, j)], e);
            }
        }
    }

    #[test]
    fn horizontal_lift_coordinates_on_sphere() {
        let c = Chart::<f64>::constant_curvature(1.0, 2).unwrap();
        let t = array![[0.4, -1.0], [0.7, 0.2]];
        let p = BundlePoint::new(vec![0.2, -0.6], t.clone()).unwrap();
        let x = VectorField::Constant(vec![1.0, 0.0]);
        let h = horizontal_lift(&c, &x, &p).unwrap();
        let coords = to_coords(&c, &p, &h).unwrap();
        let gam = c.christoffel_at(&p.x).unwrap().gamma;
        for i in 0..2 {
            for j in 0..2 {
                let mut e = 0.0;
                for m in 0..2 {
                    e += gam[[m, 0, j]] * t[[i, m]] - gam[[i, 0, m]] * t[[m, j]];
                }
                assert!((coords[vidx(2, i, j)] - e).abs() < 1e-15);
            }
        }
    }
}
