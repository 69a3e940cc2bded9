//! Levi-Civita connection and curvature of a frame from the Koszul formula.
//!
//! A [`FrameSystem`] describes a local frame `E_a` by its coordinate expressions, its Gram
//! matrix and how to turn covectors into vectors. Directional derivatives and brackets come
//! from evaluating those expressions at dual points, so the result is exact up to rounding.
//! Frames may be overcomplete (tangent frames of a hypersurface); vectors are then carried
//! as canonical coefficient vectors produced by [`FrameSystem::raise`] and
//! [`FrameSystem::combine`].

use ndarray::{Array2, Array3, Array4};

use crate::scalar::{Dual, Real, Scalar};

pub trait FrameSystem<T: Real>: Sync {
    /// Number of frame fields, equal to the ambient coordinate dimension.
    fn size(&self) -> usize;

    /// Coordinates of the base point of the evaluation.
    fn point(&self) -> Vec<T>;

    /// `frame[a]` = coordinate components of `E_a` at `z`.
    fn frame<S: Scalar<Real = T>>(&self, z: &[S]) -> Vec<Vec<S>>;

    /// `gram[[a, b]] = g(E_a, E_b)` at `z`.
    fn gram<S: Scalar<Real = T>>(&self, z: &[S]) -> Array2<S>;

    /// Coordinate components → canonical frame coefficients.
    fn to_frame<S: Scalar<Real = T>>(&self, z: &[S], coords: &[S]) -> Vec<S>;

    /// The vector `Y` with `g(Y, E_c) = cov[c]`, as canonical coefficients.
    fn raise<S: Scalar<Real = T>>(&self, z: &[S], cov: &[S]) -> Vec<S>;

    /// Arbitrary coefficients `c^d` of `Σ c^d E_d` → canonical coefficients.
    fn combine<S: Scalar<Real = T>>(&self, _z: &[S], coeff: &[S]) -> Vec<S> {
        coeff.to_vec()
    }
}

/// Connection data at one point: `conn[[a, b, c]]` is component `c` of `∇_{E_a} E_b`.
#[derive(Debug, Clone)]
pub struct KoszulData<S> {
    pub conn: Array3<S>,
    /// `bracket[[a, b, c]]`: component `c` of `[E_a, E_b]`.
    pub bracket: Array3<S>,
    /// `dgram[[a, b, c]] = E_a(g(E_b, E_c))`.
    pub dgram: Array3<S>,
    pub gram: Array2<S>,
}

pub fn koszul<T: Real, F: FrameSystem<T>, S: Scalar<Real = T>>(sys: &F, z: &[S]) -> KoszulData<S> {
    let d = sys.size();
    let frame = sys.frame(z);
    let gram = sys.gram(z);
    let mut dgram = Array3::from_elem((d, d, d), S::zero());
    // deriv[a][b] = D_{E_a} E_b in coordinates
    let mut deriv = vec![vec![vec![S::zero(); d]; d]; d];
    for a in 0..d {
        let zd = Dual::seed(z, &frame[a]);
        let gd = sys.gram(&zd);
        for b in 0..d {
            for c in 0..d {
                dgram[[a, b, c]] = gd[[b, c]].du;
            }
        }
        let fd = sys.frame(&zd);
        for b in 0..d {
            deriv[a][b] = fd[b].iter().map(|v| v.du).collect();
        }
    }
    let mut bracket = Array3::from_elem((d, d, d), S::zero());
    for a in 0..d {
        for b in 0..d {
            if b < a {
                for c in 0..d {
                    bracket[[a, b, c]] = -bracket[[b, a, c]];
                }
                continue;
            }
            let coords: Vec<S> = (0..d).map(|c| deriv[a][b][c] - deriv[b][a][c]).collect();
            let f = sys.to_frame(z, &coords);
            for c in 0..d {
                bracket[[a, b, c]] = f[c];
            }
        }
    }
    // lb[[a, b, c]] = g([E_a, E_b], E_c)
    let mut lb = Array3::from_elem((d, d, d), S::zero());
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let mut s = S::zero();
                for e in 0..d {
                    s += bracket[[a, b, e]] * gram[[e, c]];
                }
                lb[[a, b, c]] = s;
            }
        }
    }
    let half = T::lit(0.5);
    let mut conn = Array3::from_elem((d, d, d), S::zero());
    let mut cov = vec![S::zero(); d];
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                cov[c] = (dgram[[a, b, c]] + dgram[[b, a, c]] - dgram[[c, a, b]] + lb[[a, b, c]]
                    - lb[[a, c, b]]
                    - lb[[b, c, a]])
                .scale(half);
            }
            let v = sys.raise(z, &cov);
            for c in 0..d {
                conn[[a, b, c]] = v[c];
            }
        }
    }
    KoszulData { conn, bracket, dgram, gram }
}

/// Max residual of `∇_a E_b − ∇_b E_a − [E_a, E_b]`.
pub fn torsion_residual<T: Real>(k: &KoszulData<T>) -> T {
    let d = k.gram.nrows();
    let mut m = T::zero();
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let r = k.conn[[a, b, c]] - k.conn[[b, a, c]] - k.bracket[[a, b, c]];
                m = m.max(r.abs());
            }
        }
    }
    m
}

/// Max residual of `E_a g(E_b, E_c) − g(∇_a E_b, E_c) − g(E_b, ∇_a E_c)`.
pub fn metric_residual<T: Real>(k: &KoszulData<T>) -> T {
    let d = k.gram.nrows();
    let mut m = T::zero();
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let mut r = k.dgram[[a, b, c]];
                for e in 0..d {
                    r = r - k.conn[[a, b, e]] * k.gram[[e, c]] - k.conn[[a, c, e]] * k.gram[[e, b]];
                }
                m = m.max(r.abs());
            }
        }
    }
    m
}

/// `curv[[a, b, c, e]]`: component `e` of `R(E_a, E_b) E_c` from differentiating the
/// Koszul connection along the frame.
pub fn curvature<T: Real, F: FrameSystem<T>>(sys: &F) -> (KoszulData<T>, Array4<T>) {
    let z = sys.point();
    let d = sys.size();
    let base = koszul::<T, F, T>(sys, &z);
    let frame = sys.frame(&z);
    // dconn[[a, b, c, e]] = E_a(conn[[b, c, e]])
    let mut dconn = Array4::<T>::zeros((d, d, d, d));
    for a in 0..d {
        let zd = Dual::seed(&z, &frame[a]);
        let kd = koszul::<T, F, Dual<T>>(sys, &zd);
        for ((b, c, e), v) in kd.conn.indexed_iter() {
            dconn[[a, b, c, e]] = v.du;
        }
    }
    let conn = &base.conn;
    let mut curv = Array4::<T>::zeros((d, d, d, d));
    for a in 0..d {
        for b in 0..d {
            if b < a {
                for c in 0..d {
                    for e in 0..d {
                        curv[[a, b, c, e]] = -curv[[b, a, c, e]];
                    }
                }
                continue;
            }
            for c in 0..d {
                let raw: Vec<T> = (0..d).map(|e| dconn[[a, b, c, e]] - dconn[[b, a, c, e]]).collect();
                let mut v = sys.combine(&z, &raw);
                for dd in 0..d {
                    let cb = conn[[b, c, dd]];
                    let ca = conn[[a, c, dd]];
                    let br = base.bracket[[a, b, dd]];
                    for e in 0..d {
                        v[e] = v[e] + cb * conn[[a, dd, e]] - ca * conn[[b, dd, e]] - br * conn[[dd, c, e]];
                    }
                }
                for e in 0..d {
                    curv[[a, b, c, e]] = v[e];
                }
            }
        }
    }
    (base, curv)
}

/// `g(U, W)` for canonical coefficient vectors.
pub fn inner<T: Real>(gram: &Array2<T>, u: &[T], w: &[T]) -> T {
    let d = gram.nrows();
    let mut s = T::zero();
    for a in 0..d {
        for b in 0..d {
            s = s + u[a] * gram[[a, b]] * w[b];
        }
    }
    s
}
