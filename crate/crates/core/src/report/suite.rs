//! Executes the selected suites over independently seeded samples.

use std::collections::BTreeMap;

use ndarray::Array2;
use rand::Rng;
use rand_distr::{Distribution, Uniform};
use rayon::prelude::*;

use super::checks::{expected_checks, CheckSpec, Suite};
use super::config::RunConfig;
use crate::base_geometry::{base_sectional_curvature, lower_curvature, Chart};
use crate::error::Result;
use crate::framed_structures::{
    build_big_p, build_p, build_p_local, f31_verify, isometry_residual, product_residual, scaling_residuals,
    with_lambda, StructureContext,
};
use crate::koszul::inner;
use crate::linalg::{identity, matmul, max_abs};
use crate::sampling::{
    gaussian_matrix, gaussian_vec, random_bundle_point, random_field, random_locus_point, random_sphere_point,
    random_tangent, random_x, rng_for,
};
use crate::sphere_bundle::{
    curvature_blocks, curvature_oracle, frame_gram, frame_vector, induced_metric, paracontact_verify, radial_component,
    sectional_curvature, sphere_bracket, sphere_connection_closed, sphere_connection_koszul, tensor_independence,
    terminal_identity, upstairs_inner, Block, BlockReading, DefectBasis, SphereField, SpherePoint,
};
use crate::tensor_bundle::{
    cg_connection_closed, cg_connection_koszul, cg_metric_matrices, tau, BundlePoint, CGParams, TableReading,
};

/// One aggregated check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub reference: &'static str,
    pub comparison: &'static str,
    pub samples: usize,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: RunConfig,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl Report {
    pub fn failing(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

type Sample = Vec<(&'static str, f64)>;

/// The `k` grid of the space-form scan: 201 points on `[−10, 10]` plus `1/(a r²)`.
pub fn k_grid(a: f64, r2: f64) -> Vec<f64> {
    let mut ks: Vec<f64> = (0..201).map(|i| (i as f64 - 100.0) / 10.0).collect();
    ks.push(1.0 / (a * r2));
    ks
}

/// Minimum over the grid of the maximal blockwise defect.
pub fn min_defect(basis: &DefectBasis<f64>, ks: &[f64]) -> f64 {
    ks.iter().map(|k| basis.defect(*k).max()).fold(f64::INFINITY, f64::min)
}

/// A bundle point whose `τ` is admissible for `params`, rescaled to `τ = r²` when the raw
/// draw is not.
fn admissible_point(
    chart: &Chart<f64>,
    params: &CGParams<f64>,
    r: f64,
    p: BundlePoint<f64>,
) -> Result<BundlePoint<f64>> {
    let tau0 = tau(chart, &p)?;
    if params.check(tau0).is_ok() {
        return Ok(p);
    }
    let s = r / tau0.sqrt();
    BundlePoint::new(p.x, p.t.mapv(|v| v * s))
}

fn base_sample(cfg: &RunConfig, chart: &Chart<f64>, rng: &mut impl Rng) -> Result<Sample> {
    let n = cfg.n;
    let x = random_x(chart, rng);
    let h = 1e-5;
    let ch = chart.christoffel_at(&x)?;
    let jet = chart.metric_at(&x)?;
    let mut dg = vec![Array2::<f64>::zeros((n, n)); n];
    for (k, slot) in dg.iter_mut().enumerate() {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[k] += h;
        xm[k] -= h;
        *slot = (chart.metric_s(&xp) - chart.metric_s(&xm)) / (2.0 * h);
    }
    let mut fd = 0.0_f64;
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut v = 0.0;
                for l in 0..n {
                    v += 0.5 * jet.g_inv[[k, l]] * (dg[i][[j, l]] + dg[j][[i, l]] - dg[l][[i, j]]);
                }
                fd = fd.max((v - ch.gamma[[k, i, j]]).abs());
            }
        }
    }
    let cf = chart.curvature_at(&x)?;
    let low = lower_curvature(&cf.r, &jet.g);
    let mut sym = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    sym = sym
                        .max((low[[a, b, c, d]] + low[[b, a, c, d]]).abs())
                        .max((low[[a, b, c, d]] - low[[c, d, a, b]]).abs())
                        .max((cf.r[[a, b, c, d]] + cf.r[[b, c, a, d]] + cf.r[[c, a, b, d]]).abs());
                }
            }
        }
    }
    let u = gaussian_vec(n, rng);
    let v = gaussian_vec(n, rng);
    let k = base_sectional_curvature(&cf.r, &jet.g, &u, &v)?;
    let k0 = chart.curvature_constant().unwrap_or(0.0);
    Ok(vec![
        ("base.christoffel_vs_finite_difference", fd),
        ("base.curvature_symmetries", sym),
        ("base.space_form_sectional", (k - k0).abs()),
    ])
}

fn bundle_sample(cfg: &RunConfig, chart: &Chart<f64>, rng: &mut impl Rng) -> Result<Sample> {
    let p = admissible_point(chart, &cfg.params, cfg.radius, random_bundle_point(chart, rng))?;
    let oracle = cg_connection_koszul(chart, &cfg.params, &p)?;
    let (g, gi) = cg_metric_matrices(chart, &cfg.params, &p)?;
    let inv = max_abs((&matmul(&g, &gi) - &identity::<f64>(g.nrows())).iter().copied());
    let closed = cg_connection_closed(chart, &cfg.params, &p, TableReading::Rectified)?;
    let printed = cg_connection_closed(chart, &cfg.params, &p, TableReading::AsPrinted)?;
    Ok(vec![
        ("bundle.oracle_torsion", oracle.torsion_residual),
        ("bundle.oracle_metric", oracle.metric_residual),
        ("bundle.metric_inverse", inv),
        ("bundle.connection_closed", closed.max_abs_diff(&oracle.coefficients)),
        ("bundle.connection_printed", printed.max_abs_diff(&oracle.coefficients)),
    ])
}

fn structures_sample(cfg: &RunConfig, chart: &Chart<f64>, rng: &mut impl Rng) -> Result<Sample> {
    let e = random_field(cfg.n, rng);
    let p = random_locus_point(chart, &e, rng)?;
    let p = admissible_point(chart, &cfg.params, cfg.radius, p)?;
    let ctx = StructureContext::new(chart, &cfg.params, &p, &e)?;
    let c = ctx.canonical()?;
    let big = build_big_p(&ctx, &c);
    let dir = gaussian_vec(4, rng);
    let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
    let s = 1e-2 / len;
    let mut bent = c;
    bent.c1 += s * dir[0];
    bent.c2 += s * dir[1];
    bent.d1 += s * dir[2];
    bent.d2 += s * dir[3];
    let bent_p = build_big_p(&ctx, &bent);
    let rep = f31_verify(&ctx, &c);
    let local = build_p_local(&ctx, &c)?;
    let local_diff = max_abs((&local - &build_p(&ctx, &c)).iter().copied());
    let shift = Uniform::new(0.05, 0.2).expect("range").sample(rng) * if rng.random::<bool>() { 1.0 } else { -1.0 };
    let moved = f31_verify(&ctx, &with_lambda(&c, c.lambda * (1.0 + shift), ctx.norm()));
    Ok(vec![
        ("structures.product", product_residual(&big)),
        ("structures.isometry", isometry_residual(&ctx, &big)),
        ("structures.perturbed_product", product_residual(&bent_p)),
        ("structures.perturbed_isometry", isometry_residual(&ctx, &bent_p)),
        ("structures.p_cubed", rep.p_cubed),
        ("structures.p_squared", rep.p_squared),
        ("structures.duality", rep.duality),
        ("structures.annihilation", rep.eta_p.max(rep.p_xi)),
        ("structures.corank", (rep.corank as f64 - 3.0).abs()),
        ("structures.local_expression", local_diff),
        ("structures.general_expansion", rep.p_squared_general),
        ("structures.scaling", scaling_residuals(&ctx, &c)),
        ("structures.metricity", rep.metricity),
        ("structures.metric_expansion", rep.metric_expansion),
        ("structures.perturbed_lambda_metricity", moved.metricity),
        ("structures.perturbed_lambda_p_cubed", moved.p_cubed),
    ])
}

fn sphere_sample(cfg: &RunConfig, chart: &Chart<f64>, rng: &mut impl Rng) -> Result<Sample> {
    let n = cfg.n;
    let r = cfg.radius;
    let a = cfg.sphere_a();
    let sp = random_sphere_point(chart, r, rng)?;
    let tangents: Vec<_> = (0..8).map(|_| random_tangent(chart, &sp, rng)).collect::<Result<_>>()?;
    let mut radial = 0.0_f64;
    let mut b_indep = 0.0_f64;
    let b = Uniform::new(-0.9 * a / sp.r2(), 2.0).expect("range").sample(rng);
    let up = CGParams::Polynomial { a: vec![a], b: vec![b] };
    for u in &tangents {
        let scale = u.v.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
        radial = radial.max(radial_component(chart, &sp, u)? / scale);
        for w in &tangents {
            let d = upstairs_inner(chart, &up, &sp, u, w)? - induced_metric(chart, &sp, u, w, a)?;
            b_indep = b_indep.max(d.abs());
        }
    }
    let oracle = sphere_connection_koszul(chart, &sp, a)?;
    let closed = sphere_connection_closed(chart, &sp, a, TableReading::Rectified)?;
    let d = n + n * n;
    let mut bracket = 0.0_f64;
    for p in 0..d {
        for q in 0..d {
            let br = sphere_bracket(chart, SphereField::from_index(p, n), SphereField::from_index(q, n), &sp)?;
            for (k, v) in br.flat().into_iter().enumerate() {
                bracket = bracket.max((v - oracle.bracket[[p, q, k]]).abs());
            }
        }
    }
    let curv = curvature_oracle(chart, &sp, a)?;
    let rect = curvature_blocks(chart, &sp, a, BlockReading::Rectified)?;
    let printed = curvature_blocks(chart, &sp, a, BlockReading::AsPrinted)?;
    let gram = frame_gram(chart, &sp, a)?;
    let mut rebase = 0.0_f64;
    let (u, v, k0) = loop {
        let u = gaussian_vec(d, rng);
        let v = gaussian_vec(d, rng);
        if let Ok(k) = sectional_curvature(&rect, &gram, &u, &v) {
            break (u, v, k);
        }
    };
    for _ in 0..20 {
        let m = gaussian_vec(4, rng);
        if (m[0] * m[3] - m[1] * m[2]).abs() < 1e-2 {
            continue;
        }
        let u2: Vec<f64> = u.iter().zip(&v).map(|(x, y)| m[0] * x + m[1] * y).collect();
        let v2: Vec<f64> = u.iter().zip(&v).map(|(x, y)| m[2] * x + m[3] * y).collect();
        let k = sectional_curvature(&rect, &gram, &u2, &v2)?;
        rebase = rebase.max((k - k0).abs() / k0.abs().max(1.0));
    }
    let e = random_field(n, rng);
    let raw = random_bundle_point(chart, rng);
    let on = crate::framed_structures::project_to_locus(chart, &raw, &e)?;
    let lp = SpherePoint::new(chart, on.x, on.t, r)?;
    let lt: Vec<_> = (0..8).map(|_| random_tangent(chart, &lp, rng)).collect::<Result<_>>()?;
    let pc = paracontact_verify(chart, &cfg.params, None, &lp, &e, &lt)?;
    Ok(vec![
        ("sphere.radial_annihilation", radial),
        ("sphere.induced_metric_b_independence", b_indep),
        ("sphere.oracle_torsion", oracle.torsion_residual),
        ("sphere.oracle_metric", oracle.metric_residual),
        ("sphere.bracket_closed", bracket),
        ("sphere.connection_closed", closed.max_abs_diff(&oracle.coefficients)),
        ("sphere.curvature_antisymmetry", curv.antisymmetry),
        ("sphere.curvature_pair_symmetry", curv.pair_symmetry),
        ("sphere.blocks_closed", rect.max_abs_diff(&curv.blocks)),
        ("sphere.blocks_printed", printed.max_abs_diff(&curv.blocks)),
        ("sphere.sectional_rebasing", rebase),
        ("sphere.xi3_normality", pc.xi3_normality),
        ("sphere.paracontact_annihilation", pc.eta_xi.max(pc.p_xi).max(pc.eta_p).max(pc.xi_tangency)),
        ("sphere.xi2_normality", pc.xi2_normality),
        ("sphere.paracontact_square", pc.p_squared),
        ("sphere.paracontact_metric", pc.metric),
    ])
}

fn theorem7_sample(cfg: &RunConfig, chart: &Chart<f64>, rng: &mut impl Rng) -> Result<Sample> {
    let n = cfg.n;
    let r = cfg.radius;
    let a = cfg.sphere_a();
    let sp = random_sphere_point(chart, r, rng)?;
    let r2 = sp.r2();
    let basis = |a: f64| -> Result<DefectBasis<f64>> {
        let blocks = curvature_blocks(chart, &sp, a, BlockReading::Rectified)?;
        DefectBasis::new(chart, &sp, blocks, a)
    };
    let own = basis(a)?;
    let sasaki = basis(1.0)?;
    let model = 1.0 / (a * r2);
    let mut out = vec![
        ("theorem7.min_defect", min_defect(&own, &k_grid(a, r2))),
        ("theorem7.sasaki_min_defect", min_defect(&sasaki, &k_grid(1.0, r2))),
        ("theorem7.model_tangential_defect", own.defect(model).get(Block::Ttt)),
    ];
    if chart.is_flat() {
        // the vertical frame is overcomplete: use the best conditioned pair
        let d = n + n * n;
        let frame: Vec<Vec<f64>> = (0..d).map(|k| frame_vector(chart, &sp, k)).collect();
        let ip = |p: usize, q: usize| inner(&own.gram, &frame[p], &frame[q]);
        let mut best = (f64::NEG_INFINITY, n, n + 1);
        for p in n..d {
            for q in p + 1..d {
                let det = (ip(p, p) * ip(q, q) - ip(p, q).powi(2)) / (ip(p, p) * ip(q, q)).max(1e-300);
                if det > best.0 {
                    best = (det, p, q);
                }
            }
        }
        let vert = sectional_curvature(&own.blocks, &own.gram, &frame[best.1], &frame[best.2])?;
        let horiz = sectional_curvature(&own.blocks, &own.gram, &frame[0], &frame[1])?;
        let mut mixed = 0.0_f64;
        for l in 0..n {
            mixed = mixed.max(sectional_curvature(&own.blocks, &own.gram, &frame[l], &frame[best.1])?.abs());
        }
        out.push(("theorem7.flat_vertical_sectional", (vert - model).abs()));
        out.push(("theorem7.flat_horizontal_sectional", horiz.abs()));
        out.push(("theorem7.flat_mixed_sectional", mixed));
    }
    if chart.curvature_constant().is_some_and(|k| k > 0.0) {
        let x = random_x(chart, rng);
        let ti = terminal_identity(chart, &x, r)?;
        out.push(("theorem7.terminal_identity", ti.block_defect));
    }
    let x = random_x(chart, rng);
    let t = gaussian_matrix(n, rng);
    let ind = tensor_independence(chart, &x, &t)?;
    out.push(("theorem7.independence_rank", (ind.rank as f64 - 4.0).abs() + (ind.tail_rank as f64 - 2.0).abs()));
    Ok(out)
}

fn sample(cfg: &RunConfig, chart: &Chart<f64>, suite: Suite, index: u64) -> Result<Sample> {
    let mut rng = rng_for(cfg.seed, suite.stream(), index);
    match suite {
        Suite::Base => base_sample(cfg, chart, &mut rng),
        Suite::Bundle => bundle_sample(cfg, chart, &mut rng),
        Suite::Structures => structures_sample(cfg, chart, &mut rng),
        Suite::Sphere => sphere_sample(cfg, chart, &mut rng),
        Suite::Theorem7 => theorem7_sample(cfg, chart, &mut rng),
    }
}

/// Runs every selected suite on the current rayon pool; results do not depend on its size.
pub fn run_suite(cfg: &RunConfig) -> Report {
    let expected = expected_checks(cfg);
    let mut values: BTreeMap<&'static str, Vec<f64>> = BTreeMap::new();
    match cfg.chart() {
        Ok(chart) => {
            let jobs: Vec<(Suite, u64)> =
                cfg.suites.iter().flat_map(|s| (0..cfg.samples as u64).map(move |i| (*s, i))).collect();
            let results: Vec<(Suite, Result<Sample>)> =
                jobs.par_iter().map(|(s, i)| (*s, sample(cfg, &chart, *s, *i))).collect();
            for (suite, res) in results {
                match res {
                    Ok(sample) => {
                        for (name, v) in sample {
                            values.entry(name).or_default().push(v);
                        }
                    }
                    Err(_) => {
                        for c in expected.iter().filter(|c| c.suite == suite) {
                            values.entry(c.name).or_default().push(f64::NAN);
                        }
                    }
                }
            }
        }
        Err(_) => {}
    }
    let checks: Vec<CheckResult> = expected.iter().map(|c| aggregate(cfg, c, values.get(c.name))).collect();
    let pass = checks.iter().all(|c| c.pass);
    Report { config: cfg.clone(), checks, pass }
}

fn aggregate(cfg: &RunConfig, spec: &CheckSpec, vals: Option<&Vec<f64>>) -> CheckResult {
    let tolerance = cfg.tolerance(spec.name, spec.tolerance);
    let (samples, residual) = match vals {
        Some(v) => (v.len(), spec.comparison.aggregate(v)),
        None => (0, f64::NAN),
    };
    CheckResult {
        name: spec.name,
        reference: spec.reference,
        comparison: spec.comparison.label(),
        samples,
        residual,
        tolerance,
        pass: spec.comparison.passes(residual, tolerance) && !residual.is_nan(),
        note: spec.note,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::config::BaseKind;

    #[test]
    fn grid_ends_with_model_curvature() {
        let ks = k_grid(0.5, 2.0);
        assert_eq!(ks.len(), 202);
        assert!((ks[0] + 10.0).abs() < 1e-12 && (ks[200] - 10.0).abs() < 1e-12);
        assert_eq!(ks[201], 1.0);
    }

    #[test]
    fn small_flat_run_passes_and_is_complete() {
        let cfg = RunConfig { samples: 2, seed: 42, ..RunConfig::default() };
        let rep = run_suite(&cfg);
        for c in &rep.checks {
            assert!(c.pass, "{c:?}");
            assert_eq!(c.samples, 2, "{}", c.name);
        }
        assert_eq!(rep.checks.len(), expected_checks(&cfg).len());
    }

    #[test]
    fn curved_run_covers_terminal_identity() {
        let cfg = RunConfig { base: BaseKind::ConstantCurvature, k: 1.0, samples: 1, ..RunConfig::default() };
        let rep = run_suite(&cfg);
        assert!(rep.get("theorem7.terminal_identity").is_some());
        assert!(rep.get("theorem7.flat_mixed_sectional").is_none());
        let failing: Vec<_> = rep.failing().map(|c| (c.name, c.residual)).collect();
        assert!(failing.is_empty(), "{failing:?}");
    }
}
