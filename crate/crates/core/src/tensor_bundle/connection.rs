//! Levi-Civita connection of the lifted metric in the adapted frame.

use ndarray::{Array2, Array3, Array4};

use super::frame::TensorBundleFrame;
use super::local::LocalGeometry;
use super::metric::AdaptedVector;
use super::params::{CGParams, ParamValues};
use super::point::{commutator, vidx, weighted, BundlePoint};
use crate::base_geometry::Chart;
use crate::error::Result;
use crate::koszul::{koszul, metric_residual, torsion_residual};
use crate::linalg::unit_matrix;
use crate::scalar::Real;

/// Which index assignment of the printed closed-form table to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableReading {
    /// Raised curvature read with the free lower index in the first slot, the `L` term
    /// with `t̄^j_t`, and the `G(A, B) t` coefficient `(2b − a′)/(a + bτ)`.
    AsPrinted,
    /// Raised curvature read in the third slot, `t̄^l_t`, and `(b − a′)/(a + bτ)`.
    Rectified,
}

/// `conn[[a, b, c]]` = component `c` of `∇_{E_a} E_b`; horizontal indices first, then the
/// vertical pairs `(i, j)` at `n + i·n + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionCoefficients<T> {
    pub n: usize,
    pub conn: Array3<T>,
}

impl<T: Real> ConnectionCoefficients<T> {
    pub fn get(&self, a: usize, b: usize) -> AdaptedVector<T> {
        let d = self.conn.dim().0;
        let f: Vec<T> = (0..d).map(|c| self.conn[[a, b, c]]).collect();
        AdaptedVector::from_flat(&f, self.n)
    }

    /// `∇_{e_l} e_j`
    pub fn hh(&self, l: usize, j: usize) -> AdaptedVector<T> {
        self.get(l, j)
    }

    /// `∇_{e_l} e_(i,j)`
    pub fn hv(&self, l: usize, i: usize, j: usize) -> AdaptedVector<T> {
        self.get(l, vidx(self.n, i, j))
    }

    /// `∇_{e_(t,l)} e_j`
    pub fn vh(&self, t: usize, l: usize, j: usize) -> AdaptedVector<T> {
        self.get(vidx(self.n, t, l), j)
    }

    /// `∇_{e_(t,l)} e_(i,j)`
    pub fn vv(&self, t: usize, l: usize, i: usize, j: usize) -> AdaptedVector<T> {
        self.get(vidx(self.n, t, l), vidx(self.n, i, j))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.conn.iter().zip(other.conn.iter()).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }

    pub fn max_abs(&self) -> T {
        self.conn.iter().fold(T::zero(), |m, a| m.max(a.abs()))
    }
}

/// Oracle connection with its defining-property residuals.
#[derive(Debug, Clone)]
pub struct OracleConnection<T> {
    pub coefficients: ConnectionCoefficients<T>,
    pub torsion_residual: T,
    pub metric_residual: T,
    /// `bracket[[a, b, c]]` of the adapted frame, from coordinate jets.
    pub bracket: Array3<T>,
}

/// Connection from the Koszul formula applied to the adapted frame.
pub fn cg_connection_koszul<T: Real>(
    chart: &Chart<T>,
    params: &CGParams<T>,
    p: &BundlePoint<T>,
) -> Result<OracleConnection<T>> {
    let tau = super::point::tau(chart, p)?;
    params.check(tau)?;
    let sys = TensorBundleFrame::new(chart, params, p.clone());
    let k = koszul::<T, _, T>(&sys, &p.coords());
    Ok(OracleConnection {
        torsion_residual: torsion_residual(&k),
        metric_residual: metric_residual(&k),
        coefficients: ConnectionCoefficients { n: p.dim(), conn: k.conn },
        bracket: k.bracket,
    })
}

/// `RR[[s, l, j, r]] = g^{sσ} g^{lλ} R_{σλj}^r` (rectified) or `g^{sσ} g^{lλ} R_{jσλ}^r`.
pub(crate) fn raised_curvature<T: Real>(geo: &LocalGeometry<T>, rr: &Array4<T>, reading: TableReading) -> Array4<T> {
    let n = geo.n;
    Array4::from_shape_fn((n, n, n, n), |(s, l, j, r)| {
        let mut v = T::zero();
        for a in 0..n {
            for b in 0..n {
                let c = geo.g_inv[[s, a]] * geo.g_inv[[l, b]];
                v = v + c * match reading {
                    TableReading::Rectified => rr[[a, b, j, r]],
                    TableReading::AsPrinted => rr[[j, a, b, r]],
                };
            }
        }
        v
    })
}

/// `(a/2)(g_{ta} RR^{sl}_j^r t^a_s − g^{lb} R_{tsj}^r t^s_b)`, the horizontal part of
/// `∇_{e_(t,l)} e_j`, for every output index `r`.
pub(crate) fn mixed_horizontal<T: Real>(
    geo: &LocalGeometry<T>,
    raised: &Array4<T>,
    rr: &Array4<T>,
    t: &Array2<T>,
    a: T,
    (tt, l): (usize, usize),
    j: usize,
) -> Vec<T> {
    let n = geo.n;
    let half_a = a / T::lit(2.0);
    (0..n)
        .map(|r| {
            let mut first = T::zero();
            let mut second = T::zero();
            for s in 0..n {
                for q in 0..n {
                    first = first + geo.g[[tt, q]] * raised[[s, l, j, r]] * t[[q, s]];
                    second = second + geo.g_inv[[l, q]] * rr[[tt, s, j, r]] * t[[s, q]];
                }
            }
            half_a * (first - second)
        })
        .collect()
}

/// Vertical-vertical block: component `(v, r)` of `∇_{e_(t,l)} e_(i,j)`.
fn vertical_block<T: Real>(
    w: &Array2<T>,
    t: &Array2<T>,
    geo: &LocalGeometry<T>,
    pv: &ParamValues<T>,
    reading: TableReading,
    (tt, l): (usize, usize),
    (i, j): (usize, usize),
) -> Array2<T> {
    let n = geo.n;
    let m = match reading {
        TableReading::Rectified => pv.m,
        TableReading::AsPrinted => pv.m_printed(),
    };
    let gab = geo.g[[tt, i]] * geo.g_inv[[l, j]];
    let d = |a: usize, b: usize| if a == b { T::one() } else { T::zero() };
    Array2::from_shape_fn((n, n), |(v, r)| {
        let first = match reading {
            TableReading::Rectified => w[[tt, l]] * d(j, r) * d(v, i),
            TableReading::AsPrinted => w[[tt, j]] * d(j, r) * d(v, i),
        };
        pv.l * (first + w[[i, j]] * d(l, r) * d(v, tt))
            + m * gab * t[[v, r]]
            + pv.n * w[[tt, l]] * w[[i, j]] * t[[v, r]]
    })
}

/// Closed-form connection table evaluated under the chosen index reading.
pub fn cg_connection_closed<T: Real>(
    chart: &Chart<T>,
    params: &CGParams<T>,
    p: &BundlePoint<T>,
    reading: TableReading,
) -> Result<ConnectionCoefficients<T>> {
    let geo = LocalGeometry::at(chart, &p.x)?;
    let n = geo.n;
    let d = n + n * n;
    let w = weighted(&geo.g, &p.t, &geo.g_inv);
    let tau = geo.pair(&p.t, &p.t);
    let pv = params.check(tau)?;
    let raised = raised_curvature(&geo, &geo.r, reading);
    let mut conn = Array3::zeros((d, d, d));
    let mut put = |a: usize, b: usize, v: &AdaptedVector<T>| {
        for (c, x) in v.flat().into_iter().enumerate() {
            conn[[a, b, c]] = x;
        }
    };
    let half = T::lit(0.5);
    for l in 0..n {
        for j in 0..n {
            let h: Vec<T> = (0..n).map(|r| geo.gamma[[r, l, j]]).collect();
            let phi = geo.endo(&geo.r, &geo.unit(l), &geo.unit(j));
            let v = commutator(&p.t, &phi).mapv(|e| e * half);
            put(l, j, &AdaptedVector { h, v });
        }
    }
    for tt in 0..n {
        for l in 0..n {
            for j in 0..n {
                let h = mixed_horizontal(&geo, &raised, &geo.r, &p.t, pv.a, (tt, l), j);
                put(vidx(n, tt, l), j, &AdaptedVector::horizontal(h));
            }
        }
    }
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                // same table with (t, l, j) → (i, j, l)
                let h = mixed_horizontal(&geo, &raised, &geo.r, &p.t, pv.a, (i, j), l);
                let v = geo.gamma_action(&geo.unit(l), &unit_matrix(n, i, j));
                put(l, vidx(n, i, j), &AdaptedVector { h, v });
            }
        }
    }
    for tt in 0..n {
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let v = vertical_block(&w, &p.t, &geo, &pv, reading, (tt, l), (i, j));
                    put(vidx(n, tt, l), vidx(n, i, j), &AdaptedVector::vertical(v));
                }
            }
        }
    }
    Ok(ConnectionCoefficients { n, conn })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn point() -> BundlePoint<f64> {
        BundlePoint::new(vec![0.3, -0.2], array![[0.8, -0.4], [0.3, 1.1]]).unwrap()
    }

    #[test]
    fn flat_sasaki_vanishes_both_ways() {
        let c = Chart::<f64>::euclidean(2).unwrap();
        let closed = cg_connection_closed(&c, &CGParams::Sasaki, &point(), TableReading::Rectified).unwrap();
        assert_eq!(closed.max_abs(), 0.0);
        let oracle = cg_connection_koszul(&c, &CGParams::Sasaki, &point()).unwrap();
        assert!(oracle.coefficients.max_abs() < 1e-14);
    }

    #[test]
    fn rectified_matches_oracle_on_sphere_unit_preset() {
        let c = Chart::<f64>::constant_curvature(1.0, 2).unwrap();
        let closed = cg_connection_closed(&c, &CGParams::Unit, &point(), TableReading::Rectified).unwrap();
        let oracle = cg_connection_koszul(&c, &CGParams::Unit, &point()).unwrap();
        assert!(oracle.torsion_residual < 1e-10);
        assert!(oracle.metric_residual < 1e-10);
        let diff = closed.max_abs_diff(&oracle.coefficients);
        assert!(diff < 1e-10, "diff {diff}");
    }

    #[test]
    fn printed_reading_differs_for_unit_preset() {
        let c = Chart::<f64>::euclidean(2).unwrap();
        let printed = cg_connection_closed(&c, &CGParams::Unit, &point(), TableReading::AsPrinted).unwrap();
        let oracle = cg_connection_koszul(&c, &CGParams::Unit, &point()).unwrap();
        assert!(printed.max_abs_diff(&oracle.coefficients) > 1e-3);
    }
}
