//! Almost product structure `P`, the frame fields `ξ_k`, forms `η^k` and the tensor `p`
//! on the tensor bundle, with residual checks of the framed f(3,−1) identities.
//!
//! All endomorphisms act on adapted components (`n` horizontal then `n²` vertical).
//! Covectors `η^k` are rows in the same basis, so `η^k(X) = Σ η^k[c] X[c]`.

use ndarray::Array2;

use crate::base_geometry::Chart;
use crate::error::{GeometryError, Result};
use crate::fields::VectorField;
use crate::linalg::{identity, inverse, matmul, max_abs, outer, singular_values};
use crate::scalar::Real;
use crate::tensor_bundle::metric::adapted_gram;
use crate::tensor_bundle::params::{CGParams, ParamValues};
use crate::tensor_bundle::point::{pairing, vidx, weighted, BundlePoint};

/// Coefficients of `P`, the scales of `ξ_k` and of `η^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureCoefficients<T> {
    pub c1: T,
    pub c2: T,
    pub d1: T,
    pub d2: T,
    pub alpha: T,
    pub beta: T,
    pub kappa: T,
    pub gamma: T,
    pub lambda: T,
    pub rho: T,
}

/// Sign branch of the canonical solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    PositiveBeta,
    Mirrored,
}

/// `P` coefficients making the lifted metric `P`-invariant.
pub fn isometric_p_coeffs<T: Real>(a: T, norm_e: T) -> (T, T, T, T) {
    let sa = a.sqrt();
    let two = T::lit(2.0);
    (T::one() / (sa * norm_e), sa * norm_e, -two / (sa * norm_e * norm_e * norm_e), -two * sa / norm_e)
}

/// Coefficients satisfying the isometry, framed f(3,−1) and metricity conditions at once.
pub fn canonical_coeffs<T: Real>(a: T, norm_e: T, tau: T, b_tau: T) -> Result<StructureCoefficients<T>> {
    canonical_coeffs_branch(a, norm_e, tau, b_tau, Branch::PositiveBeta)
}

pub fn canonical_coeffs_branch<T: Real>(
    a: T,
    norm_e: T,
    tau: T,
    b_tau: T,
    branch: Branch,
) -> Result<StructureCoefficients<T>> {
    if !(a > T::zero()) {
        return Err(GeometryError::Infeasible("a must be positive"));
    }
    if !(norm_e > T::zero()) {
        return Err(GeometryError::DegenerateField("E vanishes"));
    }
    if !(tau > T::zero()) {
        return Err(GeometryError::Infeasible("kappa*rho*tau = 1 has no solution at tau = 0"));
    }
    let s = a + b_tau;
    if !(s > T::zero()) {
        return Err(GeometryError::Infeasible("a + b*tau must be positive"));
    }
    let (c1, c2, d1, d2) = isometric_p_coeffs(a, norm_e);
    let sign = match branch {
        Branch::PositiveBeta => T::one(),
        Branch::Mirrored => -T::one(),
    };
    let beta = sign / (a.sqrt() * norm_e * norm_e);
    let alpha = -sign / norm_e;
    let kappa = T::one() / (s * tau).sqrt();
    let c =
        StructureCoefficients { c1, c2, d1, d2, alpha, beta, kappa, gamma: alpha, lambda: a * beta, rho: kappa * s };
    let worst = max_abs(canonical_conditions(&c, a, norm_e, tau, b_tau));
    if !(worst < T::lit(1e-9)) {
        return Err(GeometryError::Infeasible("canonical coefficients failed substitution"));
    }
    Ok(c)
}

/// Residuals of every condition the canonical coefficients must satisfy.
pub fn canonical_conditions<T: Real>(c: &StructureCoefficients<T>, a: T, norm_e: T, tau: T, b_tau: T) -> Vec<T> {
    let e2 = norm_e * norm_e;
    let (c1, c2, d1, d2) = isometric_p_coeffs(a, norm_e);
    vec![
        c.c1 * c.c2 - T::one(),
        (c.c1 + c.d1 * e2) * (c.c2 + c.d2 * e2) - T::one(),
        c.c1 - c1,
        c.c2 - c2,
        c.d1 - d1,
        c.d2 - d2,
        c.alpha * c.gamma * e2 - T::one(),
        c.beta * c.lambda * e2 * e2 - T::one(),
        c.kappa * c.rho * tau - T::one(),
        c.lambda - c.gamma / e2 * (c.c2 + c.d2 * e2),
        c.gamma - c.alpha,
        c.lambda - a * c.beta,
        c.rho - c.kappa * (a + b_tau),
    ]
}

/// Replaces `λ` and re-solves `β`, `γ`, `α` so the framed f(3,−1) conditions stay satisfied
/// while the metric compatibility conditions generally do not.
pub fn with_lambda<T: Real>(c: &StructureCoefficients<T>, lambda: T, norm_e: T) -> StructureCoefficients<T> {
    let e2 = norm_e * norm_e;
    let gamma = lambda * e2 / (c.c2 + c.d2 * e2);
    StructureCoefficients { lambda, beta: T::one() / (lambda * e2 * e2), gamma, alpha: T::one() / (gamma * e2), ..*c }
}

/// Everything needed at one bundle point: metric, fiber point, the field `E`.
#[derive(Debug, Clone)]
pub struct StructureContext<T> {
    pub n: usize,
    pub g: Array2<T>,
    pub g_inv: Array2<T>,
    pub t: Array2<T>,
    /// `t̄` as `w[[i, j]] = t̄^j_i`
    pub w: Array2<T>,
    pub e: Vec<T>,
    /// `Ẽ = g(E, ·)`
    pub e_low: Vec<T>,
    pub norm2: T,
    pub tau: T,
    pub params: ParamValues<T>,
}

impl<T: Real> StructureContext<T> {
    pub fn new(chart: &Chart<T>, params: &CGParams<T>, p: &BundlePoint<T>, e: &VectorField<T>) -> Result<Self> {
        let jet = chart.metric_at(&p.x)?;
        let n = p.dim();
        let ev = e.eval(&p.x);
        let e_low: Vec<T> = (0..n).map(|i| (0..n).fold(T::zero(), |acc, j| acc + jet.g[[i, j]] * ev[j])).collect();
        let norm2 = (0..n).fold(T::zero(), |acc, i| acc + e_low[i] * ev[i]);
        if !(norm2 > T::zero()) {
            return Err(GeometryError::DegenerateField("E vanishes"));
        }
        let tau = pairing(&jet.g, &jet.g_inv, &p.t, &p.t);
        let pv = params.check(tau)?;
        let w = weighted(&jet.g, &p.t, &jet.g_inv);
        Ok(Self { n, g: jet.g, g_inv: jet.g_inv, t: p.t.clone(), w, e: ev, e_low, norm2, tau, params: pv })
    }

    pub fn size(&self) -> usize {
        self.n + self.n * self.n
    }

    pub fn norm(&self) -> T {
        self.norm2.sqrt()
    }

    pub fn canonical(&self) -> Result<StructureCoefficients<T>> {
        canonical_coeffs(self.params.a, self.norm(), self.tau, self.params.b * self.tau)
    }

    /// Lifted metric in the adapted frame.
    pub fn metric(&self) -> Array2<T> {
        adapted_gram(&self.g, &self.g_inv, &self.t, self.params.a, self.params.b)
    }

    /// `g(E, tE)`; zero exactly when `t` is G-orthogonal to the family `X ⊗ Ẽ`.
    pub fn coupling(&self) -> T {
        let n = self.n;
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                s = s + self.e_low[i] * self.t[[i, j]] * self.e[j];
            }
        }
        s
    }

    fn horizontal(&self, x: &[T]) -> Vec<T> {
        let mut v = vec![T::zero(); self.size()];
        v[..self.n].copy_from_slice(x);
        v
    }

    fn vertical(&self, a: &Array2<T>) -> Vec<T> {
        let mut v = vec![T::zero(); self.size()];
        for ((i, j), x) in a.indexed_iter() {
            v[vidx(self.n, i, j)] = *x;
        }
        v
    }

    /// `X ⊗ Ẽ` as a matrix.
    fn tensor_with_e(&self, x: &[T]) -> Array2<T> {
        outer(x, &self.e_low)
    }
}

/// The endomorphism `P`.
pub fn build_big_p<T: Real>(ctx: &StructureContext<T>, c: &StructureCoefficients<T>) -> Array2<T> {
    let n = ctx.n;
    let d = ctx.size();
    let mut m = Array2::zeros((d, d));
    let e_e = ctx.tensor_with_e(&ctx.e);
    for l in 0..n {
        let x: Vec<T> = (0..n).map(|i| if i == l { T::one() } else { T::zero() }).collect();
        let img = ctx.tensor_with_e(&x).mapv(|v| v * c.c1) + &e_e.mapv(|v| v * c.d1 * ctx.e_low[l]);
        for (r, v) in ctx.vertical(&img).into_iter().enumerate() {
            m[[r, l]] = v;
        }
    }
    for i in 0..n {
        for j in 0..n {
            // E_ij = X ⊗ Ẽ + A_perp with X = E_ij E / |E|²
            let mut x = vec![T::zero(); n];
            x[i] = ctx.e[j] / ctx.norm2;
            let gxe = ctx.e_low[i] * x[i];
            let mut h = vec![T::zero(); n];
            for k in 0..n {
                h[k] = c.c2 * x[k] + c.d2 * gxe * ctx.e[k];
            }
            let mut perp = ctx.tensor_with_e(&x).mapv(|v| -v);
            perp[[i, j]] = perp[[i, j]] + T::one();
            let col = vidx(n, i, j);
            let hv = ctx.horizontal(&h);
            let vv = ctx.vertical(&perp);
            for r in 0..d {
                m[[r, col]] = hv[r] + vv[r];
            }
        }
    }
    m
}

/// `ξ_k` as adapted vectors and `η^k` as adapted covector rows.
#[derive(Debug, Clone)]
pub struct FrameFields<T> {
    pub xi: [Vec<T>; 3],
    pub eta: [Vec<T>; 3],
}

pub fn build_frame_fields<T: Real>(ctx: &StructureContext<T>, c: &StructureCoefficients<T>) -> FrameFields<T> {
    let n = ctx.n;
    let e_e = ctx.tensor_with_e(&ctx.e);
    let xi1 = ctx.horizontal(&ctx.e.iter().map(|v| *v * c.alpha).collect::<Vec<_>>());
    let xi2 = ctx.vertical(&e_e.mapv(|v| v * c.beta));
    let xi3 = ctx.vertical(&ctx.t.mapv(|v| v * c.kappa));
    let eta1 = ctx.horizontal(&ctx.e_low.iter().map(|v| *v * c.gamma).collect::<Vec<_>>());
    // η²(v) = λ Ẽ_i v^i_j E^j
    let eta2 = ctx.vertical(&Array2::from_shape_fn((n, n), |(i, j)| c.lambda * ctx.e_low[i] * ctx.e[j]));
    let eta3 = ctx.vertical(&ctx.w.mapv(|v| v * c.rho));
    FrameFields { xi: [xi1, xi2, xi3], eta: [eta1, eta2, eta3] }
}

/// `p = P − ξ2 ⊗ η¹ − ξ1 ⊗ η² − ξ3 ⊗ η³`.
pub fn build_p<T: Real>(ctx: &StructureContext<T>, c: &StructureCoefficients<T>) -> Array2<T> {
    let f = build_frame_fields(ctx, c);
    build_big_p(ctx, c) - &outer(&f.xi[1], &f.eta[0]) - &outer(&f.xi[0], &f.eta[1]) - &outer(&f.xi[2], &f.eta[2])
}

/// `p` assembled from its images on the basis `{e_i, V(e_i ⊗ Ẽ), complement}`, using the
/// closed local expressions; equals [`build_p`] wherever `g(E, tE) = 0`.
pub fn build_p_local<T: Real>(ctx: &StructureContext<T>, c: &StructureCoefficients<T>) -> Result<Array2<T>> {
    let n = ctx.n;
    let d = ctx.size();
    let e_e = ctx.tensor_with_e(&ctx.e);
    let mut basis = Array2::zeros((d, d));
    let mut images = Array2::zeros((d, d));
    let mut col = 0;
    let mut push = |b: Vec<T>, im: Vec<T>, col: &mut usize| {
        for r in 0..d {
            basis[[r, *col]] = b[r];
            images[[r, *col]] = im[r];
        }
        *col += 1;
    };
    for i in 0..n {
        let x: Vec<T> = (0..n).map(|k| if k == i { T::one() } else { T::zero() }).collect();
        let img =
            ctx.tensor_with_e(&x).mapv(|v| v * c.c1) + &e_e.mapv(|v| v * (c.d1 - c.beta * c.gamma) * ctx.e_low[i]);
        push(ctx.horizontal(&x), ctx.vertical(&img), &mut col);
    }
    for i in 0..n {
        let x: Vec<T> = (0..n).map(|k| if k == i { T::one() } else { T::zero() }).collect();
        let coef = (c.d2 - c.alpha * c.lambda * ctx.norm2) * ctx.e_low[i];
        let h: Vec<T> = (0..n).map(|k| c.c2 * x[k] + coef * ctx.e[k]).collect();
        push(ctx.vertical(&ctx.tensor_with_e(&x)), ctx.horizontal(&h), &mut col);
    }
    // rows orthogonal (Euclidean) to E give A with A E = 0
    for u in euclidean_complement(&ctx.e) {
        for i in 0..n {
            let a = Array2::from_shape_fn((n, n), |(r, s)| if r == i { u[s] } else { T::zero() });
            let k = c.kappa * c.rho * contract_w(&ctx.w, &a);
            let img = &a - &ctx.t.mapv(|v| v * k);
            push(ctx.vertical(&a), ctx.vertical(&img), &mut col);
        }
    }
    debug_assert_eq!(col, d);
    Ok(matmul(&images, &inverse(&basis)?))
}

fn contract_w<T: Real>(w: &Array2<T>, a: &Array2<T>) -> T {
    w.iter().zip(a.iter()).fold(T::zero(), |s, (x, y)| s + *x * *y)
}

/// An orthonormal basis of the Euclidean complement of `e` (Gram-Schmidt).
fn euclidean_complement<T: Real>(e: &[T]) -> Vec<Vec<T>> {
    let n = e.len();
    let norm = e.iter().fold(T::zero(), |s, v| s + *v * *v).sqrt();
    let mut basis: Vec<Vec<T>> = vec![e.iter().map(|v| *v / norm).collect()];
    let mut out = Vec::new();
    for k in 0..n {
        let mut v: Vec<T> = (0..n).map(|i| if i == k { T::one() } else { T::zero() }).collect();
        for b in &basis {
            let d = v.iter().zip(b).fold(T::zero(), |s, (x, y)| s + *x * *y);
            for i in 0..n {
                v[i] = v[i] - d * b[i];
            }
        }
        let nv = v.iter().fold(T::zero(), |s, x| s + *x * *x).sqrt();
        if nv > T::lit(1e-6) && out.len() < n - 1 {
            let u: Vec<T> = v.iter().map(|x| *x / nv).collect();
            basis.push(u.clone());
            out.push(u);
        }
    }
    out
}

/// Named residuals of the framed f(3,−1) identities at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct F31Report<T> {
    /// `‖p³ − p‖`
    pub p_cubed: T,
    /// `‖p² − (I − Σ ξ_k ⊗ η^k)‖`
    pub p_squared: T,
    /// `max_k ‖η^k ∘ p‖`
    pub eta_p: T,
    /// `max_k ‖p(ξ_k)‖`
    pub p_xi: T,
    /// `max |η^k(ξ_l) − δ^k_l|`
    pub duality: T,
    /// Residual of the general `p²` expansion, valid for any coefficients satisfying `P² = I`.
    pub p_squared_general: T,
    pub corank: usize,
    pub singular_values: Vec<T>,
    /// `max |g(pX, pY) − g(X, Y) + Σ η^k(X) η^k(Y)|` over the frame.
    pub metricity: T,
    /// The three scalar corrections of the `g(pX, pY)` expansion.
    pub metric_corrections: [T; 3],
    /// Residual of that expansion, valid whenever `P` is an isometry.
    pub metric_expansion: T,
}

pub fn p_squared_expansion<T: Real>(ctx: &StructureContext<T>, c: &StructureCoefficients<T>) -> [T; 3] {
    let e2 = ctx.norm2;
    let u1 = c.c1 + c.d1 * e2;
    let u2 = c.c2 + c.d2 * e2;
    [
        c.beta / c.alpha * u2 + c.lambda * e2 / c.gamma * u1 - c.beta * c.lambda * e2 * e2,
        c.alpha / c.beta * u1 + c.gamma / (c.lambda * e2) * u2 - c.alpha * c.gamma * e2,
        c.kappa * c.rho * ctx.tau - T::lit(2.0),
    ]
}

pub fn metric_corrections<T: Real>(ctx: &StructureContext<T>, c: &StructureCoefficients<T>) -> [T; 3] {
    let e2 = ctx.norm2;
    let a = ctx.params.a;
    let two = T::lit(2.0);
    [
        a * c.beta * (two * (c.c1 + c.d1 * e2) / c.gamma - c.beta * e2) * e2,
        c.alpha * (two * (c.c2 + c.d2 * e2) / (c.lambda * e2) - c.alpha * e2),
        c.kappa * (a + ctx.params.b * ctx.tau) * (two / c.rho - c.kappa * ctx.tau),
    ]
}

fn sum_outer<T: Real>(f: &FrameFields<T>, w: [T; 3]) -> Array2<T> {
    let mut m = outer(&f.xi[0], &f.eta[0]).mapv(|v| v * w[0]);
    for k in 1..3 {
        m = m + &outer(&f.xi[k], &f.eta[k]).mapv(|v| v * w[k]);
    }
    m
}

pub fn f31_verify<T: Real>(ctx: &StructureContext<T>, c: &StructureCoefficients<T>) -> F31Report<T> {
    let d = ctx.size();
    let p = build_p(ctx, c);
    let f = build_frame_fields(ctx, c);
    let id = identity::<T>(d);
    let p2 = matmul(&p, &p);
    let p3 = matmul(&p2, &p);
    let one = T::one();
    let proj = sum_outer(&f, [one, one, one]);
    let e = p_squared_expansion(ctx, c);
    let general = &id - &sum_outer(&f, [e[0], e[1], -e[2]]);
    let mut eta_p = T::zero();
    let mut p_xi = T::zero();
    let mut duality = T::zero();
    for k in 0..3 {
        for col in 0..d {
            let v = (0..d).fold(T::zero(), |s, r| s + f.eta[k][r] * p[[r, col]]);
            eta_p = eta_p.max(v.abs());
        }
        for r in 0..d {
            let v = (0..d).fold(T::zero(), |s, col| s + p[[r, col]] * f.xi[k][col]);
            p_xi = p_xi.max(v.abs());
        }
        for l in 0..3 {
            let v = (0..d).fold(T::zero(), |s, r| s + f.eta[k][r] * f.xi[l][r]);
            let delta = if k == l { one } else { T::zero() };
            duality = duality.max((v - delta).abs());
        }
    }
    let sv = singular_values(&p);
    let top = sv[0];
    let corank = sv.iter().filter(|s| **s <= T::lit(1e-8) * top).count();
    let g = ctx.metric();
    let pgp = matmul(&matmul(&p.t().to_owned(), &g), &p);
    let etas = sum_eta_outer(&f, [one, one, one]);
    let metricity = max_abs((&pgp - &g + &etas).iter().copied());
    let mc = metric_corrections(ctx, c);
    let expansion = &pgp - &g + &sum_eta_outer(&f, mc);
    F31Report {
        p_cubed: max_abs((&p3 - &p).iter().copied()),
        p_squared: max_abs((&p2 - &(&id - &proj)).iter().copied()),
        eta_p,
        p_xi,
        duality,
        p_squared_general: max_abs((&p2 - &general).iter().copied()),
        corank,
        singular_values: sv,
        metricity,
        metric_corrections: mc,
        metric_expansion: max_abs(expansion.iter().copied()),
    }
}

fn sum_eta_outer<T: Real>(f: &FrameFields<T>, w: [T; 3]) -> Array2<T> {
    let mut m = outer(&f.eta[0], &f.eta[0]).mapv(|v| v * w[0]);
    for k in 1..3 {
        m = m + &outer(&f.eta[k], &f.eta[k]).mapv(|v| v * w[k]);
    }
    m
}

/// `‖P² − I‖`
pub fn product_residual<T: Real>(big_p: &Array2<T>) -> T {
    let d = big_p.nrows();
    max_abs((&matmul(big_p, big_p) - &identity::<T>(d)).iter().copied())
}

/// `max |g(PX, PY) − g(X, Y)|` over the frame.
pub fn isometry_residual<T: Real>(ctx: &StructureContext<T>, big_p: &Array2<T>) -> T {
    let g = ctx.metric();
    let pgp = matmul(&matmul(&big_p.t().to_owned(), &g), big_p);
    max_abs((&pgp - &g).iter().copied())
}

/// Residuals of the scaling relations for `P(ξ_k)` and `η^k ∘ P`.
pub fn scaling_residuals<T: Real>(ctx: &StructureContext<T>, c: &StructureCoefficients<T>) -> T {
    let d = ctx.size();
    let big_p = build_big_p(ctx, c);
    let f = build_frame_fields(ctx, c);
    let e2 = ctx.norm2;
    let u1 = c.c1 + c.d1 * e2;
    let u2 = c.c2 + c.d2 * e2;
    let apply =
        |v: &[T]| -> Vec<T> { (0..d).map(|r| (0..d).fold(T::zero(), |s, k| s + big_p[[r, k]] * v[k])).collect() };
    let pull =
        |w: &[T]| -> Vec<T> { (0..d).map(|k| (0..d).fold(T::zero(), |s, r| s + w[r] * big_p[[r, k]])).collect() };
    let diff = |a: Vec<T>, b: &[T], s: T| max_abs(a.iter().zip(b).map(|(x, y)| *x - s * *y));
    [
        diff(apply(&f.xi[0]), &f.xi[1], c.alpha / c.beta * u1),
        diff(apply(&f.xi[1]), &f.xi[0], c.beta / c.alpha * u2),
        diff(apply(&f.xi[2]), &f.xi[2], T::one()),
        diff(pull(&f.eta[0]), &f.eta[1], c.gamma / (c.lambda * e2) * u2),
        diff(pull(&f.eta[1]), &f.eta[0], c.lambda * e2 / c.gamma * u1),
        diff(pull(&f.eta[2]), &f.eta[2], T::one()),
    ]
    .into_iter()
    .fold(T::zero(), |m, v| m.max(v))
}

/// Projects `t` onto `{t : t E = 0}`, the locus where every `ξ_k` pairs only with its own `η^k`.
pub fn project_to_locus<T: Real>(chart: &Chart<T>, p: &BundlePoint<T>, e: &VectorField<T>) -> Result<BundlePoint<T>> {
    let jet = chart.metric_at(&p.x)?;
    let n = p.dim();
    let ev = e.eval(&p.x);
    let e_low: Vec<T> = (0..n).map(|i| (0..n).fold(T::zero(), |s, j| s + jet.g[[i, j]] * ev[j])).collect();
    let norm2 = (0..n).fold(T::zero(), |s, i| s + e_low[i] * ev[i]);
    if !(norm2 > T::zero()) {
        return Err(GeometryError::DegenerateField("E vanishes"));
    }
    let te: Vec<T> = (0..n).map(|i| (0..n).fold(T::zero(), |s, j| s + p.t[[i, j]] * ev[j])).collect();
    let t = Array2::from_shape_fn((n, n), |(i, j)| p.t[[i, j]] - te[i] * e_low[j] / norm2);
    BundlePoint::new(p.x.clone(), t)
}
