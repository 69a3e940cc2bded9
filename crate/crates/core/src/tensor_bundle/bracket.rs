use ndarray::Array2;

use super::local::LocalGeometry;
use super::metric::AdaptedVector;
use super::point::{commutator, BundlePoint};
use crate::base_geometry::Chart;
use crate::error::{GeometryError, Result};
use crate::fields::{TensorField, VectorField};
use crate::scalar::Real;

/// A lifted field on the tensor bundle.
#[derive(Debug, Clone, PartialEq)]
pub enum Lifted<T> {
    Vertical(TensorField<T>),
    Horizontal(VectorField<T>),
    /// Complete lifts are representable but not bracketed here.
    Complete(VectorField<T>),
}

/// `∇_X A` for a tensor field `A` at `x`.
pub fn covariant_derivative<T: Real>(geo: &LocalGeometry<T>, x: &[T], xv: &[T], a: &TensorField<T>) -> Array2<T> {
    let n = geo.n;
    let av = a.eval(x);
    let da = a.derivative(n);
    let mut out = geo.gamma_action(xv, &av);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[[i, j]] = out[[i, j]] + xv[k] * da[[k, i, j]];
            }
        }
    }
    out
}

/// Lie bracket of lifted fields at a bundle point, in adapted components.
pub fn bracket<T: Real>(
    chart: &Chart<T>,
    lhs: &Lifted<T>,
    rhs: &Lifted<T>,
    p: &BundlePoint<T>,
) -> Result<AdaptedVector<T>> {
    let geo = LocalGeometry::at(chart, &p.x)?;
    let n = geo.n;
    match (lhs, rhs) {
        (Lifted::Vertical(_), Lifted::Vertical(_)) => Ok(AdaptedVector::zero(n)),
        (Lifted::Horizontal(xf), Lifted::Vertical(af)) => {
            let xv = xf.eval(&p.x);
            Ok(AdaptedVector::vertical(covariant_derivative(&geo, &p.x, &xv, af)))
        }
        (Lifted::Vertical(_), Lifted::Horizontal(_)) => {
            let mut v = bracket(chart, rhs, lhs, p)?;
            v.v.mapv_inplace(|e| -e);
            Ok(v)
        }
        (Lifted::Horizontal(xf), Lifted::Horizontal(yf)) => {
            let xv = xf.eval(&p.x);
            let yv = yf.eval(&p.x);
            let jx = xf.jacobian(n);
            let jy = yf.jacobian(n);
            let h: Vec<T> = (0..n)
                .map(|i| (0..n).fold(T::zero(), |acc, k| acc + xv[k] * jy[[i, k]] - yv[k] * jx[[i, k]]))
                .collect();
            let phi = geo.endo(&geo.r, &xv, &yv);
            Ok(AdaptedVector { h, v: commutator(&p.t, &phi) })
        }
        _ => Err(GeometryError::UnsupportedOperands("complete lifts are not bracketed")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn vertical_pair_commutes() {
        let c = Chart::<f64>::constant_curvature(1.0, 2).unwrap();
        let p = BundlePoint::new(vec![0.1, 0.2], array![[1.0, 0.0], [0.5, 1.0]]).unwrap();
        let a = Lifted::Vertical(TensorField::Constant(array![[1.0, 2.0], [0.0, 1.0]]));
        let b = Lifted::Vertical(TensorField::Constant(array![[0.0, 1.0], [3.0, 1.0]]));
        let r = bracket(&c, &a, &b, &p).unwrap();
        assert_eq!(r, AdaptedVector::zero(2));
    }

    #[test]
    fn flat_coordinate_fields_commute() {
        let c = Chart::<f64>::euclidean(2).unwrap();
        let p = BundlePoint::new(vec![0.1, 0.2], array![[1.0, 0.0], [0.5, 1.0]]).unwrap();
        let x = Lifted::Horizontal(VectorField::Constant(vec![1.0, 0.0]));
        let y = Lifted::Horizontal(VectorField::Constant(vec![0.0, 1.0]));
        let r = bracket(&c, &x, &y, &p).unwrap();
        assert_eq!(r, AdaptedVector::zero(2));
    }

    #[test]
    fn complete_lift_rejected() {
        let c = Chart::<f64>::euclidean(2).unwrap();
        let p = BundlePoint::new(vec![0.0, 0.0], Array2::eye(2)).unwrap();
        let x = Lifted::Complete(VectorField::Constant(vec![1.0, 0.0]));
        assert!(matches!(bracket(&c, &x, &x, &p), Err(GeometryError::UnsupportedOperands(_))));
    }
}
