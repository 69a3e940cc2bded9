//! Small dense linear algebra over [`Scalar`], enough for frame-sized problems.

use ndarray::{Array1, Array2};
use num_traits::{Float, Zero};

use crate::error::{GeometryError, Result};
use crate::scalar::{Real, Scalar};

pub fn identity<S: Scalar>(n: usize) -> Array2<S> {
    Array2::from_shape_fn((n, n), |(i, j)| if i == j { S::one() } else { S::zero() })
}

pub fn matmul<S: Scalar>(a: &Array2<S>, b: &Array2<S>) -> Array2<S> {
    let (n, k) = a.dim();
    let m = b.ncols();
    debug_assert_eq!(k, b.nrows());
    let mut out = Array2::from_elem((n, m), S::zero());
    for i in 0..n {
        for p in 0..k {
            let aip = a[[i, p]];
            for j in 0..m {
                out[[i, j]] += aip * b[[p, j]];
            }
        }
    }
    out
}

pub fn matvec<S: Scalar>(a: &Array2<S>, x: &[S]) -> Vec<S> {
    let (n, k) = a.dim();
    debug_assert_eq!(k, x.len());
    (0..n)
        .map(|i| {
            let mut s = S::zero();
            for p in 0..k {
                s += a[[i, p]] * x[p];
            }
            s
        })
        .collect()
}

pub fn dot<S: Scalar>(x: &[S], y: &[S]) -> S {
    let mut s = S::zero();
    for (a, b) in x.iter().zip(y) {
        s += *a * *b;
    }
    s
}

/// Gauss-Jordan inverse with partial pivoting on the primal part.
pub fn inverse<S: Scalar>(a: &Array2<S>) -> Result<Array2<S>> {
    let n = a.nrows();
    let mut m = a.clone();
    let mut inv = identity::<S>(n);
    let scale = a.iter().fold(<S::Real as Zero>::zero(), |acc, v| acc.max(v.re().abs()));
    let tiny = scale * S::Real::epsilon() * S::Real::lit(n as f64);
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[[r, col]].re().abs() > m[[piv, col]].re().abs() {
                piv = r;
            }
        }
        if !(m[[piv, col]].re().abs() > tiny) {
            return Err(GeometryError::Singular);
        }
        if piv != col {
            for j in 0..n {
                m.swap([piv, j], [col, j]);
                inv.swap([piv, j], [col, j]);
            }
        }
        let d = S::one() / m[[col, col]];
        for j in 0..n {
            m[[col, j]] *= d;
            inv[[col, j]] *= d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[[r, col]];
            if f.re() == <S::Real as Zero>::zero() && f.is_zero() {
                continue;
            }
            for j in 0..n {
                let mv = m[[col, j]];
                let iv = inv[[col, j]];
                m[[r, j]] -= f * mv;
                inv[[r, j]] -= f * iv;
            }
        }
    }
    Ok(inv)
}

/// Cholesky factorisation succeeds iff the symmetric matrix is positive definite.
pub fn is_positive_definite<T: Real>(a: &Array2<T>) -> bool {
    let n = a.nrows();
    let mut l = Array2::<T>::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[[i, j]];
            for k in 0..j {
                s = s - l[[i, k]] * l[[j, k]];
            }
            if i == j {
                if !(s > T::zero()) {
                    return false;
                }
                l[[i, i]] = s.sqrt();
            } else {
                l[[i, j]] = s / l[[j, j]];
            }
        }
    }
    true
}

/// Singular values in descending order, by one-sided Jacobi rotations.
pub fn singular_values<T: Real>(a: &Array2<T>) -> Vec<T> {
    let (rows, cols) = a.dim();
    // work on the orientation with fewer columns
    let mut u = if cols <= rows { a.clone() } else { a.t().to_owned() };
    let (m, n) = u.dim();
    let eps = T::epsilon();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = T::zero();
                for i in 0..m {
                    alpha = alpha + u[[i, p]] * u[[i, p]];
                    beta = beta + u[[i, q]] * u[[i, q]];
                    gamma = gamma + u[[i, p]] * u[[i, q]];
                }
                if gamma.abs() <= eps * (alpha * beta).sqrt() || gamma == T::zero() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let up = u[[i, p]];
                    let uq = u[[i, q]];
                    u[[i, p]] = c * up - s * uq;
                    u[[i, q]] = s * up + c * uq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<T> = (0..n)
        .map(|j| {
            let col: Array1<T> = u.column(j).to_owned();
            col.iter().fold(T::zero(), |acc, v| acc + *v * *v).sqrt()
        })
        .collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// Numerical rank: singular values above `rel_tol` times the largest.
pub fn numerical_rank<T: Real>(a: &Array2<T>, rel_tol: T) -> usize {
    let sv = singular_values(a);
    let top = sv.first().copied().unwrap_or_else(T::zero);
    if top == T::zero() {
        return 0;
    }
    sv.iter().filter(|s| **s > rel_tol * top).count()
}

pub fn max_abs<T: Real>(it: impl IntoIterator<Item = T>) -> T {
    it.into_iter().fold(T::zero(), |acc, v| if v.is_nan() || acc.is_nan() { T::nan() } else { acc.max(v.abs()) })
}

pub fn outer<S: Scalar>(x: &[S], y: &[S]) -> Array2<S> {
    Array2::from_shape_fn((x.len(), y.len()), |(i, j)| x[i] * y[j])
}

pub fn transpose<S: Scalar>(a: &Array2<S>) -> Array2<S> {
    a.t().to_owned()
}

pub fn frobenius<T: Real>(a: &Array2<T>) -> T {
    a.iter().fold(T::zero(), |acc, v| acc + *v * *v).sqrt()
}

/// The `n × n` matrix with a single unit entry at `(i, j)`.
pub fn unit_matrix<S: Scalar>(n: usize, i: usize, j: usize) -> Array2<S> {
    let mut m = Array2::from_elem((n, n), S::zero());
    m[[i, j]] = S::one();
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Dual;
    use ndarray::array;

    #[test]
    fn inverse_roundtrip() {
        let a = array![[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]];
        let inv = inverse(&a).unwrap();
        let p = matmul(&a, &inv);
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((p[[i, j]] - e).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn inverse_propagates_duals() {
        // d/ds (1 + s)^-1 at s = 1 is -1/4
        let a = Array2::from_elem((1, 1), Dual::new(2.0_f64, 1.0));
        let inv = inverse(&a).unwrap();
        assert!((inv[[0, 0]].du + 0.25).abs() < 1e-15);
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = array![[1.0, 2.0], [2.0, 4.0]];
        assert_eq!(inverse(&a), Err(GeometryError::Singular));
    }

    #[test]
    fn svd_of_diagonal_and_rank() {
        let a = array![[3.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, -2.0], [0.0, 0.0, 0.0]];
        let sv = singular_values(&a);
        assert!((sv[0] - 3.0).abs() < 1e-14);
        assert!((sv[1] - 2.0).abs() < 1e-14);
        assert!(sv[2].abs() < 1e-14);
        assert_eq!(numerical_rank(&a, 1e-10), 2);
        assert_eq!(numerical_rank(&a.t().to_owned(), 1e-10), 2);
    }

    #[test]
    fn cholesky_detects_indefinite() {
        assert!(is_positive_definite(&array![[2.0, 1.0], [1.0, 2.0]]));
        assert!(!is_positive_definite(&array![[1.0, 2.0], [2.0, 1.0]]));
    }
}
