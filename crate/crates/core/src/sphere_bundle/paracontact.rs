//! The framed structure restricted to the sphere bundle: `ξ = ξ1`, `η = η¹`, `p` restricted.

use super::point::SpherePoint;
use crate::base_geometry::Chart;
use crate::error::Result;
use crate::fields::VectorField;
use crate::framed_structures::{build_frame_fields, build_p, StructureCoefficients, StructureContext};
use crate::linalg::{dot, matvec};
use crate::scalar::Real;
use crate::tensor_bundle::metric::AdaptedVector;
use crate::tensor_bundle::params::CGParams;

/// Residuals of the almost (metrical) paracontact identities over a set of tangent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ParacontactReport<T> {
    /// `max |g(ξ2, T)| / |T|`
    pub xi2_normality: T,
    /// `max |g(ξ3, T)| / |T|`
    pub xi3_normality: T,
    /// `|g(ξ1, N)|`, zero when `ξ` is tangent
    pub xi_tangency: T,
    /// `max |η²(T)|, |η³(T)|` relative to `|T|`
    pub restricted_forms: T,
    pub eta_xi: T,
    pub p_xi: T,
    pub eta_p: T,
    /// `max |p²T − T + η(T)ξ|`
    pub p_squared: T,
    /// `max |g(pT, pT') − g(T, T') + η(T)η(T')|`
    pub metric: T,
}

impl<T: Real> ParacontactReport<T> {
    pub fn structure_max(&self) -> T {
        [self.eta_xi, self.p_xi, self.eta_p, self.p_squared, self.metric].into_iter().fold(T::zero(), |m, v| m.max(v))
    }
}

pub fn paracontact_verify<T: Real>(
    chart: &Chart<T>,
    params: &CGParams<T>,
    coeffs: Option<StructureCoefficients<T>>,
    sp: &SpherePoint<T>,
    e: &VectorField<T>,
    tangents: &[AdaptedVector<T>],
) -> Result<ParacontactReport<T>> {
    let ctx = StructureContext::new(chart, params, &sp.bundle_point(), e)?;
    let c = match coeffs {
        Some(c) => c,
        None => ctx.canonical()?,
    };
    let g = ctx.metric();
    let f = build_frame_fields(&ctx, &c);
    let p = build_p(&ctx, &c);
    let cg = |u: &[T], w: &[T]| dot(u, &matvec(&g, w));
    let norm = |u: &[T]| cg(u, u).sqrt();
    let flats: Vec<Vec<T>> = tangents.iter().map(|t| t.flat()).collect();
    let (xi, eta) = (&f.xi[0], &f.eta[0]);
    let normal = AdaptedVector::vertical(sp.t.clone()).flat();
    let mut rep = ParacontactReport {
        xi2_normality: T::zero(),
        xi3_normality: T::zero(),
        xi_tangency: cg(xi, &normal).abs(),
        restricted_forms: T::zero(),
        eta_xi: (dot(eta, xi) - T::one()).abs(),
        p_xi: matvec(&p, xi).into_iter().fold(T::zero(), |m, v| m.max(v.abs())),
        eta_p: T::zero(),
        p_squared: T::zero(),
        metric: T::zero(),
    };
    let images: Vec<Vec<T>> = flats.iter().map(|u| matvec(&p, u)).collect();
    for (u, pu) in flats.iter().zip(&images) {
        let nu = norm(u);
        rep.xi2_normality = rep.xi2_normality.max(cg(&f.xi[1], u).abs() / nu);
        rep.xi3_normality = rep.xi3_normality.max(cg(&f.xi[2], u).abs() / nu);
        rep.restricted_forms = rep.restricted_forms.max(dot(&f.eta[1], u).abs() / nu).max(dot(&f.eta[2], u).abs() / nu);
        rep.eta_p = rep.eta_p.max(dot(eta, pu).abs());
        let ppu = matvec(&p, pu);
        let eu = dot(eta, u);
        for k in 0..u.len() {
            rep.p_squared = rep.p_squared.max((ppu[k] - u[k] + eu * xi[k]).abs());
        }
    }
    for (u, pu) in flats.iter().zip(&images) {
        for (w, pw) in flats.iter().zip(&images) {
            let d = cg(pu, pw) - cg(u, w) + dot(eta, u) * dot(eta, w);
            rep.metric = rep.metric.max(d.abs());
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framed_structures::project_to_locus;
    use crate::sphere_bundle::point::tangential_lift;
    use ndarray::{array, Array2};

    #[test]
    fn second_field_is_not_normal_but_third_is() {
        let chart = Chart::<f64>::euclidean(2).unwrap();
        let e = VectorField::Constant(vec![0.8, -0.3]);
        let raw = crate::tensor_bundle::BundlePoint::new(vec![0.1, 0.2], array![[0.4, 1.1], [-0.6, 0.3]]).unwrap();
        let on = project_to_locus(&chart, &raw, &e).unwrap();
        let sp = SpherePoint::new(&chart, on.x, on.t, 1.0).unwrap();
        let mut tangents = vec![AdaptedVector::horizontal(vec![0.3, -1.0])];
        for a in [array![[1.0, 0.2], [0.0, -0.5]], array![[0.1, -0.7], [0.9, 0.4]], Array2::eye(2)] {
            tangents.push(tangential_lift(&chart, &a, &sp).unwrap());
        }
        let rep = paracontact_verify(&chart, &CGParams::Sasaki, None, &sp, &e, &tangents).unwrap();
        assert!(rep.xi3_normality < 1e-12);
        assert!(rep.xi_tangency < 1e-12);
        assert!(rep.eta_xi < 1e-12 && rep.p_xi < 1e-12 && rep.eta_p < 1e-12);
        assert!(rep.xi2_normality > 1e-3);
        assert!(rep.p_squared > 1e-3);
    }
}
