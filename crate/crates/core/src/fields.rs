//! Simple vector and (1,1)-tensor fields on a chart, evaluable at dual points.

use ndarray::{Array2, Array3};

use crate::scalar::{Real, Scalar};

/// A vector field `X^i(x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum VectorField<T> {
    Constant(Vec<T>),
    /// `X^i(x) = offset^i + linear[[i, k]] x^k`
    Affine {
        offset: Vec<T>,
        linear: Array2<T>,
    },
}

impl<T: Real> VectorField<T> {
    pub fn eval<S: Scalar<Real = T>>(&self, x: &[S]) -> Vec<S> {
        match self {
            VectorField::Constant(v) => v.iter().map(|c| S::cst(*c)).collect(),
            VectorField::Affine { offset, linear } => offset
                .iter()
                .enumerate()
                .map(|(i, o)| {
                    let mut s = S::cst(*o);
                    for (k, xk) in x.iter().enumerate() {
                        s += xk.scale(linear[[i, k]]);
                    }
                    s
                })
                .collect(),
        }
    }

    /// `jac[[i, k]] = ∂_k X^i`.
    pub fn jacobian(&self, n: usize) -> Array2<T> {
        match self {
            VectorField::Constant(_) => Array2::zeros((n, n)),
            VectorField::Affine { linear, .. } => linear.clone(),
        }
    }
}

/// A (1,1)-tensor field `A^i_j(x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum TensorField<T> {
    Constant(Array2<T>),
    /// `A^i_j(x) = offset[[i, j]] + linear[[i, j, k]] x^k`
    Affine {
        offset: Array2<T>,
        linear: Array3<T>,
    },
}

impl<T: Real> TensorField<T> {
    pub fn eval<S: Scalar<Real = T>>(&self, x: &[S]) -> Array2<S> {
        match self {
            TensorField::Constant(a) => a.mapv(S::cst),
            TensorField::Affine { offset, linear } => Array2::from_shape_fn(offset.dim(), |(i, j)| {
                let mut s = S::cst(offset[[i, j]]);
                for (k, xk) in x.iter().enumerate() {
                    s += xk.scale(linear[[i, j, k]]);
                }
                s
            }),
        }
    }

    /// `d[[k, i, j]] = ∂_k A^i_j`.
    pub fn derivative(&self, n: usize) -> Array3<T> {
        match self {
            TensorField::Constant(_) => Array3::zeros((n, n, n)),
            TensorField::Affine { linear, .. } => Array3::from_shape_fn((n, n, n), |(k, i, j)| linear[[i, j, k]]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Dual;

    #[test]
    fn affine_vector_field_derivative_via_dual() {
        let f = VectorField::Affine { offset: vec![1.0, 2.0], linear: ndarray::array![[0.5, -1.0], [2.0, 0.0]] };
        let x = Dual::seed_axis(&[0.3, 0.4], 1);
        let v = f.eval(&x);
        assert_eq!(v[0].du, -1.0);
        assert_eq!(v[1].du, 0.0);
        assert_eq!(f.jacobian(2)[[0, 1]], -1.0);
    }
}
