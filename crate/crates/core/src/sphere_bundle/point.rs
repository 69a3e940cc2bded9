use ndarray::Array2;

use crate::base_geometry::Chart;
use crate::error::{GeometryError, Result};
use crate::scalar::{Real, Scalar};
use crate::tensor_bundle::metric::{cg_inner_with, AdaptedVector};
use crate::tensor_bundle::params::CGParams;
use crate::tensor_bundle::point::{pairing, BundlePoint};

/// Tangent vector of the sphere bundle: horizontal part and a vertical part with `G(t, v) = 0`.
pub type TangentialVector<T> = AdaptedVector<T>;

/// A point `(x, t)` with `G_x(t, t) = r²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint<T> {
    pub x: Vec<T>,
    pub t: Array2<T>,
    pub r: T,
}

impl<T: Real> SpherePoint<T> {
    /// Rescales `t` onto the sphere of radius `r` over `x`.
    pub fn new(chart: &Chart<T>, x: Vec<T>, t: Array2<T>, r: T) -> Result<Self> {
        if !(r > T::zero()) {
            return Err(GeometryError::InvalidDimension { got: 0, reason: "radius must be positive" });
        }
        let p = BundlePoint::new(x, t)?;
        let jet = chart.metric_at(&p.x)?;
        let tau = pairing(&jet.g, &jet.g_inv, &p.t, &p.t);
        if !(tau > T::zero()) {
            return Err(GeometryError::DegenerateField("t = 0 has no direction to rescale"));
        }
        let s = r / tau.sqrt();
        Ok(Self { x: p.x, t: p.t.mapv(|v| v * s), r })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn bundle_point(&self) -> BundlePoint<T> {
        BundlePoint { x: self.x.clone(), t: self.t.clone() }
    }

    pub fn r2(&self) -> T {
        self.r * self.r
    }
}

/// `Π v = v − (G(t, v)/G(t, t)) t`.
pub fn project<S: Scalar>(g: &Array2<S>, g_inv: &Array2<S>, t: &Array2<S>, v: &Array2<S>) -> Array2<S> {
    let tau = pairing(g, g_inv, t, t);
    let c = pairing(g, g_inv, t, v) / tau;
    Array2::from_shape_fn(v.dim(), |(i, j)| v[[i, j]] - c * t[[i, j]])
}

/// `A^T = ^V A − (1/r²) G(A, t) N`.
pub fn tangential_lift<T: Real>(chart: &Chart<T>, a: &Array2<T>, sp: &SpherePoint<T>) -> Result<TangentialVector<T>> {
    let jet = chart.metric_at(&sp.x)?;
    Ok(AdaptedVector::vertical(project(&jet.g, &jet.g_inv, &sp.t, a)))
}

/// Induced metric with constant fiber weight `a`.
pub fn induced_metric<T: Real>(
    chart: &Chart<T>,
    sp: &SpherePoint<T>,
    u: &TangentialVector<T>,
    w: &TangentialVector<T>,
    a: T,
) -> Result<T> {
    let jet = chart.metric_at(&sp.x)?;
    let (g, gi) = (&jet.g, &jet.g_inv);
    let mut h = T::zero();
    for i in 0..sp.dim() {
        for j in 0..sp.dim() {
            h = h + g[[i, j]] * u.h[i] * w.h[j];
        }
    }
    let r2 = sp.r2();
    let v = pairing(g, gi, &u.v, &w.v) - pairing(g, gi, &sp.t, &u.v) * pairing(g, gi, &sp.t, &w.v) / r2;
    Ok(h + a * v)
}

/// The lifted metric of the ambient tensor bundle evaluated on the same vectors.
pub fn upstairs_inner<T: Real>(
    chart: &Chart<T>,
    params: &CGParams<T>,
    sp: &SpherePoint<T>,
    u: &AdaptedVector<T>,
    w: &AdaptedVector<T>,
) -> Result<T> {
    let jet = chart.metric_at(&sp.x)?;
    let pv = params.check(pairing(&jet.g, &jet.g_inv, &sp.t, &sp.t))?;
    Ok(cg_inner_with(&jet.g, &jet.g_inv, &sp.t, &pv, u, w))
}

/// `max |G(t, v)|` of a vertical part, zero for tangential vectors.
pub fn radial_component<T: Real>(chart: &Chart<T>, sp: &SpherePoint<T>, u: &TangentialVector<T>) -> Result<T> {
    let jet = chart.metric_at(&sp.x)?;
    Ok(pairing(&jet.g, &jet.g_inv, &sp.t, &u.v).abs())
}
