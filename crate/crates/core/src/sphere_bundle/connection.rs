//! Brackets and Levi-Civita connection of the sphere bundle frame.

use ndarray::{Array2, Array3};

use super::frame::SphereFrame;
use super::point::{project, SpherePoint};
use crate::base_geometry::Chart;
use crate::error::Result;
use crate::koszul::{koszul, metric_residual, torsion_residual};
use crate::linalg::unit_matrix;
use crate::scalar::Real;
use crate::tensor_bundle::connection::{
    mixed_horizontal, raised_curvature, ConnectionCoefficients, OracleConnection, TableReading,
};
use crate::tensor_bundle::local::LocalGeometry;
use crate::tensor_bundle::metric::AdaptedVector;
use crate::tensor_bundle::point::{commutator, vidx, weighted};

/// A member of the frame `{e_l, e_(i,j)^T}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereField {
    Horizontal(usize),
    Tangential(usize, usize),
}

impl SphereField {
    pub fn index(self, n: usize) -> usize {
        match self {
            SphereField::Horizontal(l) => l,
            SphereField::Tangential(i, j) => vidx(n, i, j),
        }
    }

    pub fn from_index(k: usize, n: usize) -> Self {
        if k < n {
            SphereField::Horizontal(k)
        } else {
            SphereField::Tangential((k - n) / n, (k - n) % n)
        }
    }
}

/// Closed-form bracket of two frame fields, as a canonical tangential vector.
pub fn sphere_bracket<T: Real>(
    chart: &Chart<T>,
    lhs: SphereField,
    rhs: SphereField,
    sp: &SpherePoint<T>,
) -> Result<AdaptedVector<T>> {
    let geo = LocalGeometry::at(chart, &sp.x)?;
    let n = geo.n;
    let proj = |v: &Array2<T>| project(&geo.g, &geo.g_inv, &sp.t, v);
    let w = weighted(&geo.g, &sp.t, &geo.g_inv);
    let r2 = sp.r2();
    Ok(match (lhs, rhs) {
        (SphereField::Horizontal(l), SphereField::Horizontal(j)) => {
            let phi = geo.endo(&geo.r, &geo.unit(l), &geo.unit(j));
            AdaptedVector::vertical(proj(&commutator(&sp.t, &phi)))
        }
        (SphereField::Horizontal(l), SphereField::Tangential(i, j)) => {
            AdaptedVector::vertical(proj(&geo.gamma_action(&geo.unit(l), &unit_matrix(n, i, j))))
        }
        (SphereField::Tangential(i, j), SphereField::Horizontal(l)) => {
            let v = geo.gamma_action(&geo.unit(l), &unit_matrix(n, i, j));
            AdaptedVector::vertical(proj(&v).mapv(|x| -x))
        }
        (SphereField::Tangential(p, q), SphereField::Tangential(i, j)) => {
            let a = proj(&unit_matrix(n, p, q));
            let b = proj(&unit_matrix(n, i, j));
            AdaptedVector::vertical((b.mapv(|x| x * w[[p, q]]) - &a.mapv(|x| x * w[[i, j]])).mapv(|x| x / r2))
        }
    })
}

/// Koszul-formula connection of the induced metric in the overcomplete tangential frame.
pub fn sphere_connection_koszul<T: Real>(chart: &Chart<T>, sp: &SpherePoint<T>, a: T) -> Result<OracleConnection<T>> {
    chart.metric_at(&sp.x)?;
    let sys = SphereFrame::new(chart, a, sp.clone());
    let k = koszul::<T, _, T>(&sys, &sp.bundle_point().coords());
    Ok(OracleConnection {
        torsion_residual: torsion_residual(&k),
        metric_residual: metric_residual(&k),
        coefficients: ConnectionCoefficients { n: sp.dim(), conn: k.conn },
        bracket: k.bracket,
    })
}

/// Closed-form connection table, vertical parts projected to canonical form.
pub fn sphere_connection_closed<T: Real>(
    chart: &Chart<T>,
    sp: &SpherePoint<T>,
    a: T,
    reading: TableReading,
) -> Result<ConnectionCoefficients<T>> {
    let geo = LocalGeometry::at(chart, &sp.x)?;
    let n = geo.n;
    let d = n + n * n;
    let t = &sp.t;
    let w = weighted(&geo.g, t, &geo.g_inv);
    let proj = |v: &Array2<T>| project(&geo.g, &geo.g_inv, t, v);
    let raised = raised_curvature(&geo, &geo.r, reading);
    let r2 = sp.r2();
    let half = T::lit(0.5);
    let mut conn = Array3::zeros((d, d, d));
    let mut put = |a: usize, b: usize, v: AdaptedVector<T>| {
        for (c, x) in v.flat().into_iter().enumerate() {
            conn[[a, b, c]] = x;
        }
    };
    for l in 0..n {
        for j in 0..n {
            let h: Vec<T> = (0..n).map(|r| geo.gamma[[r, l, j]]).collect();
            let phi = geo.endo(&geo.r, &geo.unit(l), &geo.unit(j));
            put(l, j, AdaptedVector { h, v: proj(&commutator(t, &phi).mapv(|e| e * half)) });
        }
    }
    for tt in 0..n {
        for l in 0..n {
            for j in 0..n {
                let h = mixed_horizontal(&geo, &raised, &geo.r, t, a, (tt, l), j);
                put(vidx(n, tt, l), j, AdaptedVector::horizontal(h));
            }
        }
    }
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                let h = mixed_horizontal(&geo, &raised, &geo.r, t, a, (i, j), l);
                let v = proj(&geo.gamma_action(&geo.unit(l), &unit_matrix(n, i, j)));
                put(l, vidx(n, i, j), AdaptedVector { h, v });
            }
        }
    }
    for tt in 0..n {
        for l in 0..n {
            let ea = proj(&unit_matrix(n, tt, l));
            for i in 0..n {
                for j in 0..n {
                    let c = -w[[i, j]] / r2;
                    put(vidx(n, tt, l), vidx(n, i, j), AdaptedVector::vertical(ea.mapv(|x| x * c)));
                }
            }
        }
    }
    Ok(ConnectionCoefficients { n, conn })
}
