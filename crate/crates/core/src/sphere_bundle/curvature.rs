//! Curvature of the sphere bundle: closed-form blocks, the Koszul oracle, sectional
//! curvature and the space-form defect.

use ndarray::{Array2, Array4};

use super::frame::SphereFrame;
use super::point::{project, SpherePoint};
use crate::base_geometry::Chart;
use crate::error::{GeometryError, Result};
use crate::koszul::{curvature, inner, FrameSystem};
use crate::linalg::{singular_values, unit_matrix};
use crate::scalar::Real;
use crate::tensor_bundle::local::LocalGeometry;
use crate::tensor_bundle::point::{commutator, vidx, weighted};

/// Which version of the displayed block formulas to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockReading {
    /// Literal transcription: unprojected `B` in the mixed vertical term, `S^B` and `S^A`
    /// in place of `S^{B^T}` and `S^{A^T}`, no `1/r²` terms in the `(T, T, H)` block and
    /// `δ^m_r δ^v_n` in the last tangential term.
    AsPrinted,
    Rectified,
}

/// Argument types `(U, V, W)` of `R̃(U, V)W`; the output type is implied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    Hhh,
    Hht,
    Hth,
    Htt,
    Tth,
    Ttt,
}

impl Block {
    pub const ALL: [Block; 6] = [Block::Hhh, Block::Hht, Block::Hth, Block::Htt, Block::Tth, Block::Ttt];

    pub fn label(self) -> &'static str {
        match self {
            Block::Hhh => "HHH",
            Block::Hht => "HHT",
            Block::Hth => "HTH",
            Block::Htt => "HTT",
            Block::Tth => "TTH",
            Block::Ttt => "TTT",
        }
    }

    /// Block of a frame triple, or `None` for the `(T, H, ·)` orderings that follow by
    /// antisymmetry.
    pub fn of(n: usize, a: usize, b: usize, c: usize) -> Option<Block> {
        match (a < n, b < n, c < n) {
            (true, true, true) => Some(Block::Hhh),
            (true, true, false) => Some(Block::Hht),
            (true, false, true) => Some(Block::Hth),
            (true, false, false) => Some(Block::Htt),
            (false, false, true) => Some(Block::Tth),
            (false, false, false) => Some(Block::Ttt),
            _ => None,
        }
    }
}

/// `r[[a, b, c, e]]`: canonical component `e` of `R̃(E_a, E_b)E_c` over the frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureBlocks<T> {
    pub n: usize,
    pub r: Array4<T>,
}

impl<T: Real> CurvatureBlocks<T> {
    pub fn size(&self) -> usize {
        self.n + self.n * self.n
    }

    pub fn apply(&self, u: &[T], v: &[T], w: &[T]) -> Vec<T> {
        let d = self.size();
        let mut out = vec![T::zero(); d];
        for a in 0..d {
            if u[a] == T::zero() {
                continue;
            }
            for b in 0..d {
                if v[b] == T::zero() {
                    continue;
                }
                for c in 0..d {
                    let s = u[a] * v[b] * w[c];
                    if s == T::zero() {
                        continue;
                    }
                    for e in 0..d {
                        out[e] = out[e] + s * self.r[[a, b, c, e]];
                    }
                }
            }
        }
        out
    }

    /// Max entry of one block.
    pub fn block_max(&self, block: Block) -> T {
        let d = self.size();
        let mut m = T::zero();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    if Block::of(self.n, a, b, c) == Some(block) {
                        for e in 0..d {
                            m = m.max(self.r[[a, b, c, e]].abs());
                        }
                    }
                }
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.r.iter().zip(other.r.iter()).fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs()))
    }

    /// Max difference restricted to one block.
    pub fn block_diff(&self, other: &Self, block: Block) -> T {
        let d = self.size();
        let mut m = T::zero();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    if Block::of(self.n, a, b, c) == Some(block) {
                        for e in 0..d {
                            m = m.max((self.r[[a, b, c, e]] - other.r[[a, b, c, e]]).abs());
                        }
                    }
                }
            }
        }
        m
    }
}

struct BlockContext<'a, T: Real> {
    geo: LocalGeometry<T>,
    sp: &'a SpherePoint<T>,
    a: T,
    reading: BlockReading,
}

impl<T: Real> BlockContext<'_, T> {
    fn proj(&self, v: &Array2<T>) -> Array2<T> {
        project(&self.geo.g, &self.geo.g_inv, &self.sp.t, v)
    }

    fn gt(&self, a: &Array2<T>) -> T {
        self.geo.pair(&self.sp.t, a)
    }

    /// `S(C, X)`: `g(S, W) = −(a/2) G([t, R(X, W)], C)`.
    fn s(&self, c: &Array2<T>, x: &[T]) -> Vec<T> {
        self.geo.s_op(self.a, &self.geo.r, &self.sp.t, c, x)
    }

    /// `S^B(C, X)`: `g(S, W) = −(a/2) G([B, R(X, W)], C)`.
    fn s_with(&self, b: &Array2<T>, c: &Array2<T>, x: &[T]) -> Vec<T> {
        self.geo.s_op(self.a, &self.geo.r, b, c, x)
    }

    /// `S` built from `∇_Y R`.
    fn s_nabla(&self, y: &[T], c: &Array2<T>, x: &[T]) -> Vec<T> {
        let nr = self.geo.curvature_along(Some(y));
        self.geo.s_op(self.a, &nr, &self.sp.t, c, x)
    }

    fn q(&self, x: &[T], y: &[T]) -> Array2<T> {
        commutator(&self.sp.t, &self.geo.endo(&self.geo.r, x, y))
    }

    fn rxy(&self, x: &[T], y: &[T]) -> Array2<T> {
        self.geo.endo(&self.geo.r, x, y)
    }

    fn hhh(&self, x: &[T], y: &[T], z: &[T]) -> (Vec<T>, Array2<T>) {
        let n = self.geo.n;
        let half = T::lit(0.5);
        let base = self.geo.apply(&self.geo.r, x, y, z);
        let s1 = self.s(&self.q(y, z), x);
        let s2 = self.s(&self.q(x, z), y);
        let s3 = self.s(&self.q(x, y), z);
        let h = (0..n).map(|r| base[r] + half * (s1[r] - s2[r]) - s3[r]).collect();
        let nx = self.geo.curvature_along(Some(x));
        let ny = self.geo.curvature_along(Some(y));
        let m = self.geo.endo(&nx, y, z) - &self.geo.endo(&ny, x, z);
        (h, self.proj(&commutator(&self.sp.t, &m).mapv(|e| e * half)))
    }

    fn hht(&self, x: &[T], y: &[T], a: &Array2<T>) -> (Vec<T>, Array2<T>) {
        let n = self.geo.n;
        let half = T::lit(0.5);
        let h1 = self.s_nabla(x, a, y);
        let h2 = self.s_nabla(y, a, x);
        let h = (0..n).map(|r| h1[r] - h2[r]).collect();
        let t = &self.sp.t;
        let v = commutator(&self.rxy(x, y), a) + &commutator(t, &self.rxy(x, &self.s(a, y))).mapv(|e| e * half)
            - &commutator(t, &self.rxy(y, &self.s(a, x))).mapv(|e| e * half)
            + &self.q(x, y).mapv(|e| e * self.gt(a) / self.sp.r2());
        (h, self.proj(&v))
    }

    fn hth(&self, x: &[T], b: &Array2<T>, z: &[T]) -> (Vec<T>, Array2<T>) {
        let half = T::lit(0.5);
        let h = self.s_nabla(x, b, z);
        let bb = match self.reading {
            BlockReading::Rectified => self.proj(b),
            BlockReading::AsPrinted => b.clone(),
        };
        let v = commutator(&self.sp.t, &self.rxy(x, &self.s(b, z))).mapv(|e| e * half)
            - &commutator(&bb, &self.rxy(x, z)).mapv(|e| e * half);
        (h, self.proj(&v))
    }

    fn htt(&self, x: &[T], b: &Array2<T>, c: &Array2<T>) -> Vec<T> {
        let n = self.geo.n;
        let first = self.s(b, x);
        let inner_s = self.s(b, &self.s(c, x));
        let (k, second) = match self.reading {
            BlockReading::Rectified => (self.gt(c) / self.sp.r2(), self.s_with(&self.proj(b), c, x)),
            BlockReading::AsPrinted => (self.gt(c) / self.sp.r2(), self.s_with(b, c, x)),
        };
        (0..n).map(|r| -k * first[r] - second[r] - inner_s[r]).collect()
    }

    fn tth(&self, a: &Array2<T>, b: &Array2<T>, z: &[T]) -> Vec<T> {
        let n = self.geo.n;
        let (pa, pb) = match self.reading {
            BlockReading::Rectified => (self.proj(a), self.proj(b)),
            BlockReading::AsPrinted => (a.clone(), b.clone()),
        };
        let s1 = self.s_with(&pa, b, z);
        let s2 = self.s_with(&pb, a, z);
        let s3 = self.s(a, &self.s(b, z));
        let s4 = self.s(b, &self.s(a, z));
        let saz = self.s(a, z);
        let sbz = self.s(b, z);
        let r2 = self.sp.r2();
        let (ka, kb) = match self.reading {
            BlockReading::Rectified => (self.gt(a) / r2, self.gt(b) / r2),
            BlockReading::AsPrinted => (T::zero(), T::zero()),
        };
        (0..n).map(|r| s1[r] - s2[r] + s3[r] - s4[r] + kb * saz[r] - ka * sbz[r]).collect()
    }

    /// `(A, B, C) = (E_(nn,m), E_(t,l), E_(i,j))`.
    fn ttt(&self, (nn, m): (usize, usize), (tt, l): (usize, usize), (i, j): (usize, usize)) -> Array2<T> {
        let n = self.geo.n;
        let g = &self.geo.g;
        let gi = &self.geo.g_inv;
        let w = weighted(g, &self.sp.t, gi);
        let r2 = self.sp.r2();
        let r4 = r2 * r2;
        let d = |p: usize, q: usize| if p == q { T::one() } else { T::zero() };
        let raw = Array2::from_shape_fn((n, n), |(v, r)| {
            let quartic =
                (w[[nn, m]] * w[[i, j]] * d(l, r) * d(v, tt) - w[[tt, l]] * w[[i, j]] * d(m, r) * d(v, nn)) / r4;
            let last = match self.reading {
                BlockReading::Rectified => d(l, r) * d(v, tt),
                BlockReading::AsPrinted => d(m, r) * d(v, nn),
            };
            quartic + (gi[[l, j]] * g[[tt, i]] * d(m, r) * d(v, nn) - gi[[m, j]] * g[[nn, i]] * last) / r2
        });
        self.proj(&raw)
    }
}

/// Closed-form curvature over the whole frame.
pub fn curvature_blocks<T: Real>(
    chart: &Chart<T>,
    sp: &SpherePoint<T>,
    a: T,
    reading: BlockReading,
) -> Result<CurvatureBlocks<T>> {
    let geo = LocalGeometry::at(chart, &sp.x)?;
    let n = geo.n;
    let d = n + n * n;
    let ctx = BlockContext { geo, sp, a, reading };
    let mut r = Array4::<T>::zeros((d, d, d, d));
    let pair = |k: usize| ((k - n) / n, (k - n) % n);
    let unit = |k: usize| ctx.geo.unit(k);
    let mat = |k: usize| {
        let (i, j) = pair(k);
        unit_matrix::<T>(n, i, j)
    };
    let mut put = |a: usize, b: usize, c: usize, h: Option<&[T]>, v: Option<&Array2<T>>| {
        if let Some(h) = h {
            for (e, x) in h.iter().enumerate() {
                r[[a, b, c, e]] = *x;
                r[[b, a, c, e]] = -*x;
            }
        }
        if let Some(v) = v {
            for ((i, j), x) in v.indexed_iter() {
                r[[a, b, c, vidx(n, i, j)]] = *x;
                r[[b, a, c, vidx(n, i, j)]] = -*x;
            }
        }
    };
    for p in 0..d {
        for q in 0..d {
            if q < p && (p < n) == (q < n) {
                continue;
            }
            for c in 0..d {
                match Block::of(n, p, q, c) {
                    Some(Block::Hhh) => {
                        let (h, v) = ctx.hhh(&unit(p), &unit(q), &unit(c));
                        put(p, q, c, Some(&h), Some(&v));
                    }
                    Some(Block::Hht) => {
                        let (h, v) = ctx.hht(&unit(p), &unit(q), &mat(c));
                        put(p, q, c, Some(&h), Some(&v));
                    }
                    Some(Block::Hth) => {
                        let (h, v) = ctx.hth(&unit(p), &mat(q), &unit(c));
                        put(p, q, c, Some(&h), Some(&v));
                    }
                    Some(Block::Htt) => {
                        let h = ctx.htt(&unit(p), &mat(q), &mat(c));
                        put(p, q, c, Some(&h), None);
                    }
                    Some(Block::Tth) => {
                        let h = ctx.tth(&mat(p), &mat(q), &unit(c));
                        put(p, q, c, Some(&h), None);
                    }
                    Some(Block::Ttt) => {
                        let v = ctx.ttt(pair(p), pair(q), pair(c));
                        put(p, q, c, None, Some(&v));
                    }
                    None => {}
                }
            }
        }
    }
    Ok(CurvatureBlocks { n, r })
}

/// Oracle curvature with the residuals of its standard symmetries.
#[derive(Debug, Clone)]
pub struct OracleCurvature<T> {
    pub blocks: CurvatureBlocks<T>,
    pub gram: Array2<T>,
    /// `max |R̃(U, V)W + R̃(V, U)W|`
    pub antisymmetry: T,
    /// `max |g̃(R̃(U, V)W, Z) − g̃(R̃(W, Z)U, V)|`
    pub pair_symmetry: T,
    pub torsion_residual: T,
    pub metric_residual: T,
}

/// Curvature from differentiating the Koszul connection along the frame.
pub fn curvature_oracle<T: Real>(chart: &Chart<T>, sp: &SpherePoint<T>, a: T) -> Result<OracleCurvature<T>> {
    chart.metric_at(&sp.x)?;
    let sys = SphereFrame::new(chart, a, sp.clone());
    let (k, curv) = curvature(&sys);
    let d = sys.size();
    let mut anti = T::zero();
    let mut pair = T::zero();
    // lowered[[a, b, c, e]] = g̃(R̃(E_a, E_b)E_c, E_e)
    let mut lowered = Array4::<T>::zeros((d, d, d, d));
    for p in 0..d {
        for q in 0..d {
            for c in 0..d {
                for e in 0..d {
                    anti = anti.max((curv[[p, q, c, e]] + curv[[q, p, c, e]]).abs());
                    let mut s = T::zero();
                    for f in 0..d {
                        s = s + curv[[p, q, c, f]] * k.gram[[f, e]];
                    }
                    lowered[[p, q, c, e]] = s;
                }
            }
        }
    }
    for p in 0..d {
        for q in 0..d {
            for c in 0..d {
                for e in 0..d {
                    pair = pair.max((lowered[[p, q, c, e]] - lowered[[c, e, p, q]]).abs());
                }
            }
        }
    }
    Ok(OracleCurvature {
        blocks: CurvatureBlocks { n: sp.dim(), r: curv },
        gram: k.gram.clone(),
        antisymmetry: anti,
        pair_symmetry: pair,
        torsion_residual: crate::koszul::torsion_residual(&k),
        metric_residual: crate::koszul::metric_residual(&k),
    })
}

/// Gram matrix of the frame at the point.
pub fn frame_gram<T: Real>(chart: &Chart<T>, sp: &SpherePoint<T>, a: T) -> Result<Array2<T>> {
    chart.metric_at(&sp.x)?;
    let sys = SphereFrame::new(chart, a, sp.clone());
    Ok(sys.gram(&sp.bundle_point().coords()))
}

/// Canonical coefficients of the frame field `E_k`.
pub fn frame_vector<T: Real>(chart: &Chart<T>, sp: &SpherePoint<T>, k: usize) -> Vec<T> {
    let sys = SphereFrame::new(chart, T::one(), sp.clone());
    let mut e = vec![T::zero(); sys.size()];
    e[k] = T::one();
    sys.combine(&sp.bundle_point().coords(), &e)
}

/// `K(U, V) = g̃(R̃(U, V)V, U) / (g̃(U, U) g̃(V, V) − g̃(U, V)²)`.
pub fn sectional_curvature<T: Real>(blocks: &CurvatureBlocks<T>, gram: &Array2<T>, u: &[T], v: &[T]) -> Result<T> {
    let uu = inner(gram, u, u);
    let vv = inner(gram, v, v);
    let uv = inner(gram, u, v);
    let det = uu * vv - uv * uv;
    let scale = uu * vv;
    if !(det > T::lit(1e-8) * scale.max(T::one())) {
        return Err(GeometryError::DegeneratePlane { gram_det: det.to_f64().unwrap_or(f64::NAN) });
    }
    let ruvv = blocks.apply(u, v, v);
    Ok(inner(gram, &ruvv, u) / det)
}

/// Blockwise maxima of `R̃(U, V)W − k(g̃(V, W)U − g̃(U, W)V)` over frame triples.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport<T> {
    pub k: T,
    pub per_block: Vec<(Block, T)>,
}

impl<T: Real> DefectReport<T> {
    pub fn max(&self) -> T {
        self.per_block.iter().fold(T::zero(), |m, (_, v)| m.max(*v))
    }

    pub fn get(&self, block: Block) -> T {
        self.per_block.iter().find(|(b, _)| *b == block).map(|(_, v)| *v).unwrap_or_else(T::zero)
    }
}

/// Frame data reused across a scan over `k`.
#[derive(Debug, Clone)]
pub struct DefectBasis<T> {
    pub blocks: CurvatureBlocks<T>,
    pub gram: Array2<T>,
    /// canonical coefficients of every frame field
    pub frame: Vec<Vec<T>>,
}

impl<T: Real> DefectBasis<T> {
    pub fn new(chart: &Chart<T>, sp: &SpherePoint<T>, blocks: CurvatureBlocks<T>, a: T) -> Result<Self> {
        let gram = frame_gram(chart, sp, a)?;
        let frame = (0..blocks.size()).map(|k| frame_vector(chart, sp, k)).collect();
        Ok(Self { blocks, gram, frame })
    }

    /// Defect is affine in `k`: `D(k) = R − k Λ`; each block max is evaluated exactly.
    pub fn defect(&self, k: T) -> DefectReport<T> {
        let n = self.blocks.n;
        let d = self.blocks.size();
        let mut per = Block::ALL.map(|b| (b, T::zero())).to_vec();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let Some(block) = Block::of(n, a, b, c) else { continue };
                    let slot = Block::ALL.iter().position(|x| *x == block).expect("listed");
                    let gbc = self.gram[[b, c]];
                    let gac = self.gram[[a, c]];
                    for e in 0..d {
                        let model = gbc * self.frame[a][e] - gac * self.frame[b][e];
                        let v = (self.blocks.r[[a, b, c, e]] - k * model).abs();
                        per[slot].1 = per[slot].1.max(v);
                    }
                }
            }
        }
        DefectReport { k, per_block: per }
    }
}

pub fn space_form_defect<T: Real>(
    chart: &Chart<T>,
    sp: &SpherePoint<T>,
    a: T,
    k: T,
    reading: BlockReading,
) -> Result<DefectReport<T>> {
    let blocks = curvature_blocks(chart, sp, a, reading)?;
    Ok(DefectBasis::new(chart, sp, blocks, a)?.defect(k))
}

/// The proof's terminal identity at `t = (r/√n) δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminalIdentity<T> {
    /// Max of the simplified displayed left-hand side.
    pub literal: T,
    /// Max defect of the `(H, T, T)` relation with `k` the base curvature and `a = 1/(k r²)`.
    pub block_defect: T,
    pub a: T,
}

pub fn terminal_identity<T: Real>(chart: &Chart<T>, x: &[T], r: T) -> Result<TerminalIdentity<T>> {
    let n = chart.dim();
    let k0 = chart
        .curvature_constant()
        .filter(|k| *k != T::zero())
        .ok_or(GeometryError::Infeasible("the identity needs a nonflat space-form base"))?;
    let r2 = r * r;
    let a = T::one() / (k0 * r2);
    if !(a > T::zero()) {
        return Err(GeometryError::Infeasible("a = 1/(k r^2) must be positive"));
    }
    let scale = r / T::lit(n as f64).sqrt();
    let t = Array2::from_shape_fn((n, n), |(i, j)| if i == j { scale } else { T::zero() });
    let sp = SpherePoint::new(chart, x.to_vec(), t, r)?;
    let jet = chart.metric_at(x)?;
    let (g, gi) = (&jet.g, &jet.g_inv);
    let d = |p: usize, q: usize| if p == q { T::one() } else { T::zero() };
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let mut literal = T::zero();
    for m in 0..n {
        for tt in 0..n {
            for l in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        for rr in 0..n {
                            let first = gi[[j, l]]
                                * (g[[tt, m]] * d(i, rr) - g[[i, m]] * d(tt, rr) + two * g[[i, tt]] * d(m, rr))
                                + g[[i, tt]] * (gi[[j, rr]] * d(l, m) - gi[[l, rr]] * d(j, m));
                            let v = -half / r2 * first + d(rr, m) * d(tt, l) * d(i, j) / (r2 * r2);
                            literal = literal.max(v.abs());
                        }
                    }
                }
            }
        }
    }
    let blocks = curvature_blocks(chart, &sp, a, BlockReading::Rectified)?;
    let report = DefectBasis::new(chart, &sp, blocks, a)?.defect(k0);
    Ok(TerminalIdentity { literal, block_defect: report.get(Block::Htt), a })
}

/// Numerical independence of the four tensors in the combination used for the tangential
/// block.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceReport<T> {
    pub rank: usize,
    /// rank of the two `t̄ t̄` tensors alone
    pub tail_rank: usize,
    pub singular_values: Vec<T>,
}

pub fn tensor_independence<T: Real>(chart: &Chart<T>, x: &[T], t: &Array2<T>) -> Result<IndependenceReport<T>> {
    let n = chart.dim();
    let jet = chart.metric_at(x)?;
    let (g, gi) = (&jet.g, &jet.g_inv);
    let w = weighted(g, t, gi);
    let d = |p: usize, q: usize| if p == q { T::one() } else { T::zero() };
    let len = n.pow(8);
    let mut m = Array2::<T>::zeros((4, len));
    let mut col = 0;
    for nn in 0..n {
        for mm in 0..n {
            for tt in 0..n {
                for l in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            for v in 0..n {
                                for r in 0..n {
                                    m[[0, col]] = g[[tt, i]] * gi[[l, j]] * d(mm, r) * d(nn, v);
                                    m[[1, col]] = g[[nn, i]] * gi[[mm, j]] * d(l, r) * d(tt, v);
                                    m[[2, col]] = w[[nn, mm]] * w[[i, j]] * d(l, r) * d(tt, v);
                                    m[[3, col]] = w[[tt, l]] * w[[i, j]] * d(mm, r) * d(nn, v);
                                    col += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let sv = singular_values(&m);
    let rel = T::lit(1e-10);
    let rank_of = |s: &[T]| {
        let top = s.first().copied().unwrap_or_else(T::zero);
        s.iter().filter(|x| top > T::zero() && **x > rel * top).count()
    };
    let tail = m.slice(ndarray::s![2..4, ..]).to_owned();
    Ok(IndependenceReport { rank: rank_of(&sv), tail_rank: rank_of(&singular_values(&tail)), singular_values: sv })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn setup(k: f64, n: usize) -> (Chart<f64>, SpherePoint<f64>) {
        let c = if k == 0.0 { Chart::euclidean(n).unwrap() } else { Chart::constant_curvature(k, n).unwrap() };
        let x: Vec<f64> = (0..n).map(|i| 0.2 - 0.15 * i as f64).collect();
        let t = Array2::from_shape_fn((n, n), |(i, j)| {
            0.4 + 0.7 * i as f64 - 0.5 * j as f64 + if i == j { 0.3 } else { 0.0 }
        });
        let sp = SpherePoint::new(&c, x, t, 1.0).unwrap();
        (c, sp)
    }

    #[test]
    fn rectified_blocks_match_oracle() {
        for k in [0.0, 1.0, -1.0] {
            let (c, sp) = setup(k, 2);
            let o = curvature_oracle(&c, &sp, 0.8).unwrap();
            assert!(o.antisymmetry < 1e-9 && o.pair_symmetry < 1e-8, "{} {}", o.antisymmetry, o.pair_symmetry);
            let closed = curvature_blocks(&c, &sp, 0.8, BlockReading::Rectified).unwrap();
            for b in Block::ALL {
                let diff = closed.block_diff(&o.blocks, b);
                assert!(diff < 1e-8, "k {k} block {}: {diff}", b.label());
            }
        }
    }

    #[test]
    fn flat_base_only_tangential_block_survives() {
        let (c, sp) = setup(0.0, 2);
        let closed = curvature_blocks(&c, &sp, 1.3, BlockReading::Rectified).unwrap();
        for b in [Block::Hhh, Block::Hht, Block::Hth, Block::Htt, Block::Tth] {
            assert_eq!(closed.block_max(b), 0.0);
        }
        assert!(closed.block_max(Block::Ttt) > 1e-3);
    }

    #[test]
    fn flat_vertical_sectional_curvature() {
        let (c, sp) = setup(0.0, 2);
        let a = 0.6;
        let blocks = curvature_blocks(&c, &sp, a, BlockReading::Rectified).unwrap();
        let gram = frame_gram(&c, &sp, a).unwrap();
        let u = frame_vector(&c, &sp, vidx(2, 0, 1));
        let v = frame_vector(&c, &sp, vidx(2, 1, 1));
        let k = sectional_curvature(&blocks, &gram, &u, &v).unwrap();
        assert!((k - 1.0 / a).abs() < 1e-10);
        let h = frame_vector(&c, &sp, 0);
        assert!(sectional_curvature(&blocks, &gram, &h, &u).unwrap().abs() < 1e-12);
    }

    #[test]
    fn tangential_defect_vanishes_at_model_curvature() {
        let (c, sp) = setup(0.0, 2);
        let a = 0.5;
        let rep = space_form_defect(&c, &sp, a, 1.0 / a, BlockReading::Rectified).unwrap();
        assert!(rep.get(Block::Ttt) < 1e-12);
        assert!(rep.get(Block::Hth) > 1e-3);
    }

    #[test]
    fn independence_rank_generic() {
        let c = Chart::<f64>::euclidean(2).unwrap();
        let rep = tensor_independence(&c, &[0.0, 0.0], &array![[0.3, 1.2], [-0.7, 0.5]]).unwrap();
        assert_eq!(rep.rank, 4);
        assert_eq!(rep.tail_rank, 2);
    }

    #[test]
    fn three_dimensional_blocks_match_oracle() {
        let (c, sp) = setup(1.0, 3);
        let o = curvature_oracle(&c, &sp, 1.2).unwrap();
        let closed = curvature_blocks(&c, &sp, 1.2, BlockReading::Rectified).unwrap();
        assert!(closed.max_abs_diff(&o.blocks) < 1e-8, "{}", closed.max_abs_diff(&o.blocks));
    }

    #[test]
    fn printed_reading_departs_from_oracle() {
        let (c, sp) = setup(0.0, 2);
        let o = curvature_oracle(&c, &sp, 0.8).unwrap();
        let printed = curvature_blocks(&c, &sp, 0.8, BlockReading::AsPrinted).unwrap();
        assert!(printed.block_diff(&o.blocks, Block::Ttt) > 1e-3);
        let (c, sp) = setup(1.0, 2);
        let o = curvature_oracle(&c, &sp, 0.8).unwrap();
        let printed = curvature_blocks(&c, &sp, 0.8, BlockReading::AsPrinted).unwrap();
        for b in [Block::Htt, Block::Tth] {
            assert!(printed.block_diff(&o.blocks, b) > 1e-3, "{}", b.label());
        }
    }
}
