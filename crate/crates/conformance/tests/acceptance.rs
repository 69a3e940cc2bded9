//! Acceptance criteria, run in order; each prints a single `criterion N: PASS|FAIL` line.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use cgbundle::framed_structures::{
    build_big_p, f31_verify, isometry_residual, product_residual, with_lambda, StructureContext,
};
use cgbundle::linalg::{identity, matmul, max_abs};
use cgbundle::report::{k_grid, min_defect};
use cgbundle::sampling::{
    gaussian_vec, random_bundle_point, random_field, random_locus_point, random_sphere_point, random_tangent, rng_for,
};
use cgbundle::sphere_bundle::{
    curvature_blocks, curvature_oracle, frame_gram, paracontact_verify, sectional_curvature, Block, BlockReading,
    DefectBasis, SpherePoint,
};
use cgbundle::tensor_bundle::{cg_connection_closed, cg_connection_koszul, cg_metric_matrices, TableReading};
use cgbundle::{AdaptedVector64, CGParams64, Chart64};
use rayon::prelude::*;

static FAILED: AtomicUsize = AtomicUsize::new(0);

fn verdict(n: u32, ok: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    if !ok {
        FAILED.fetch_add(1, Ordering::SeqCst);
    }
}

fn flat(n: usize) -> Chart64 {
    Chart64::euclidean(n).unwrap()
}

fn curved(k: f64, n: usize) -> Chart64 {
    Chart64::constant_curvature(k, n).unwrap()
}

fn presets() -> [CGParams64; 3] {
    [CGParams64::Sasaki, CGParams64::Classic, CGParams64::Unit]
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

fn min_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(f64::INFINITY, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.min(v) })
}

fn criterion_01_oracle_soundness() {
    let start = Instant::now();
    let charts =
        [("flat R2", flat(2)), ("flat R3", flat(3)), ("k=1 n=2", curved(1.0, 2)), ("k=-1 n=2", curved(-1.0, 2))];
    let mut worst = Vec::new();
    for (ci, (label, chart)) in charts.iter().enumerate() {
        let res: Vec<(f64, f64)> = (0..100u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(1, ci as u64, i);
                let p = random_bundle_point(chart, &mut rng);
                let o = cg_connection_koszul(chart, &presets()[i as usize % 3], &p).unwrap();
                (o.torsion_residual, o.metric_residual)
            })
            .collect();
        worst.push((*label, max_of(res.iter().map(|r| r.0)), max_of(res.iter().map(|r| r.1))));
    }
    let elapsed = start.elapsed();
    let ok = worst.iter().all(|(_, t, m)| *t < 1e-8 && *m < 1e-8) && elapsed < Duration::from_secs(30);
    verdict(1, ok, format!("torsion/metric maxima {worst:?}, {:.1}s", elapsed.as_secs_f64()));
}

fn criterion_02_metric_inverse() {
    let charts = [flat(2), flat(3), curved(1.0, 2), curved(-1.0, 3)];
    let worst = max_of((0..50u64).map(|i| {
        let chart = &charts[i as usize % 4];
        let p = random_bundle_point(chart, &mut rng_for(2, 0, i));
        let (g, gi) = cg_metric_matrices(chart, &presets()[i as usize % 3], &p).unwrap();
        max_abs((&matmul(&g, &gi) - &identity::<f64>(g.nrows())).iter().copied())
    }));
    verdict(2, worst < 1e-10, format!("max |G G^-1 - I| = {worst:.3e} over 50 configurations"));
}

fn criterion_03_connection_table() {
    let charts =
        [("flat n=2", flat(2)), ("flat n=3", flat(3)), ("k=1 n=2", curved(1.0, 2)), ("k=-1 n=3", curved(-1.0, 3))];
    let mut rows = Vec::new();
    let mut ok = true;
    for (ci, (label, chart)) in charts.iter().enumerate() {
        for params in presets() {
            let (mut rect, mut printed) = (0.0_f64, 0.0_f64);
            for i in 0..10u64 {
                let p = random_bundle_point(chart, &mut rng_for(3, ci as u64, i));
                let o = cg_connection_koszul(chart, &params, &p).unwrap();
                rect = rect.max(
                    cg_connection_closed(chart, &params, &p, TableReading::Rectified)
                        .unwrap()
                        .max_abs_diff(&o.coefficients),
                );
                printed = printed.max(
                    cg_connection_closed(chart, &params, &p, TableReading::AsPrinted)
                        .unwrap()
                        .max_abs_diff(&o.coefficients),
                );
            }
            ok &= rect < 1e-8;
            rows.push(format!("{label}/{}: resolved {rect:.2e}, printed {printed:.2e}", params.name()));
        }
    }
    verdict(3, ok, rows.join("; "));
}

fn structure_points(
    stream: u64,
    count: u64,
) -> Vec<(Chart64, CGParams64, cgbundle::BundlePoint64, cgbundle::fields::VectorField<f64>)> {
    let charts = [flat(2), flat(3), curved(1.0, 2), curved(-1.0, 3), curved(1.0, 3), curved(-1.0, 2)];
    (0..count)
        .map(|i| {
            let chart = charts[i as usize % charts.len()].clone();
            let mut rng = rng_for(4, stream, i);
            let e = random_field(chart.dim(), &mut rng);
            let p = random_locus_point(&chart, &e, &mut rng).unwrap();
            (chart, presets()[(i / 6) as usize % 3].clone(), p, e)
        })
        .collect()
}

fn criterion_04_almost_product_structure() {
    let mut worst = [0.0_f64; 2];
    let mut broken = [f64::INFINITY; 2];
    for (i, (chart, params, p, e)) in structure_points(4, 100).into_iter().enumerate() {
        let ctx = StructureContext::new(&chart, &params, &p, &e).unwrap();
        let c = ctx.canonical().unwrap();
        let big = build_big_p(&ctx, &c);
        worst[0] = worst[0].max(product_residual(&big));
        worst[1] = worst[1].max(isometry_residual(&ctx, &big));
        let dir = gaussian_vec(4, &mut rng_for(4, 99, i as u64));
        let s = 1e-2 / dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut bent = c;
        bent.c1 += s * dir[0];
        bent.c2 += s * dir[1];
        bent.d1 += s * dir[2];
        bent.d2 += s * dir[3];
        let bp = build_big_p(&ctx, &bent);
        broken[0] = broken[0].min(product_residual(&bp));
        broken[1] = broken[1].min(isometry_residual(&ctx, &bp));
    }
    let ok = worst[0] < 1e-10 && worst[1] < 1e-9 && broken[0] > 1e-4 && broken[1] > 1e-4;
    verdict(
        4,
        ok,
        format!(
            "P^2-I {:.2e}, isometry {:.2e}; perturbed minima {:.2e}, {:.2e}",
            worst[0], worst[1], broken[0], broken[1]
        ),
    );
}

fn criterion_05_framed_structure() {
    let (mut cubed, mut bad_corank) = (0.0_f64, 0usize);
    for (chart, params, p, e) in structure_points(5, 100) {
        let ctx = StructureContext::new(&chart, &params, &p, &e).unwrap();
        let rep = f31_verify(&ctx, &ctx.canonical().unwrap());
        cubed = cubed.max(rep.p_cubed);
        bad_corank += usize::from(rep.corank != 3);
    }
    verdict(
        5,
        cubed < 1e-9 && bad_corank == 0,
        format!("max |p^3 - p| {cubed:.2e}, corank != 3 at {bad_corank} of 100 points"),
    );
}

fn criterion_06_metrical_structure() {
    let (mut metric, mut moved_metric, mut moved_cubed) = (0.0_f64, f64::INFINITY, 0.0_f64);
    for (i, (chart, params, p, e)) in structure_points(6, 60).into_iter().enumerate() {
        let ctx = StructureContext::new(&chart, &params, &p, &e).unwrap();
        let c = ctx.canonical().unwrap();
        metric = metric.max(f31_verify(&ctx, &c).metricity);
        let shift = if i % 2 == 0 { 0.1 } else { -0.1 };
        let rep = f31_verify(&ctx, &with_lambda(&c, c.lambda * (1.0 + shift), ctx.norm()));
        moved_metric = moved_metric.min(rep.metricity);
        moved_cubed = moved_cubed.max(rep.p_cubed);
    }
    let ok = metric < 1e-9 && moved_metric > 1e-3 && moved_cubed < 1e-9;
    verdict(
        6,
        ok,
        format!(
            "metricity {metric:.2e}; lambda perturbed: metricity min {moved_metric:.2e}, |p^3 - p| {moved_cubed:.2e}"
        ),
    );
}

fn criterion_07_paracontact_structure() {
    let mut rows = Vec::new();
    let mut ok = true;
    for (ci, (label, chart)) in [("flat", flat(2)), ("k=1", curved(1.0, 2))].iter().enumerate() {
        let mut rng = rng_for(7, ci as u64, 0);
        let e = random_field(2, &mut rng);
        let raw = random_bundle_point(chart, &mut rng);
        let on = cgbundle::framed_structures::project_to_locus(chart, &raw, &e).unwrap();
        let sp = SpherePoint::new(chart, on.x, on.t, 1.0).unwrap();
        let tangents: Vec<AdaptedVector64> = (0..100).map(|_| random_tangent(chart, &sp, &mut rng).unwrap()).collect();
        let rep = paracontact_verify(chart, &CGParams64::Sasaki, None, &sp, &e, &tangents).unwrap();
        ok &= rep.structure_max() < 1e-9 && rep.xi2_normality < 1e-10 && rep.xi3_normality < 1e-10;
        rows.push(format!(
            "{label}: eta(xi)-1 {:.1e}, p(xi) {:.1e}, eta.p {:.1e}, p^2 {:.2e}, metric {:.2e}, xi2 normality {:.2e}, xi3 normality {:.1e}",
            rep.eta_xi, rep.p_xi, rep.eta_p, rep.p_squared, rep.metric, rep.xi2_normality, rep.xi3_normality
        ));
    }
    verdict(7, ok, rows.join("; "));
}

fn criterion_08_curvature_blocks() {
    let cases = [(flat(2), true), (flat(3), true), (curved(1.0, 2), false), (curved(-1.0, 2), false)];
    let res: Vec<(f64, f64, f64)> = (0..40u64)
        .into_par_iter()
        .map(|i| {
            let (chart, is_flat) = &cases[i as usize % cases.len()];
            let mut rng = rng_for(8, 0, i);
            let sp = random_sphere_point(chart, 1.0, &mut rng).unwrap();
            let a = 0.3 + 1.5 * (i as f64 / 40.0);
            let o = curvature_oracle(chart, &sp, a).unwrap();
            let sym = o.antisymmetry.max(o.pair_symmetry);
            if !is_flat {
                return (sym, 0.0, 0.0);
            }
            let closed = curvature_blocks(chart, &sp, a, BlockReading::Rectified).unwrap();
            let ttt = closed.block_diff(&o.blocks, Block::Ttt);
            let others = max_of(
                Block::ALL
                    .iter()
                    .filter(|b| **b != Block::Ttt)
                    .flat_map(|b| [closed.block_max(*b), o.blocks.block_max(*b)]),
            );
            (sym, ttt, others)
        })
        .collect();
    let sym = max_of(res.iter().map(|r| r.0));
    let ttt = max_of(res.iter().map(|r| r.1));
    let others = max_of(res.iter().map(|r| r.2));
    verdict(
        8,
        sym < 1e-6 && ttt < 1e-9 && others < 1e-9,
        format!("symmetries {sym:.2e}; flat TTT vs oracle {ttt:.2e}; other flat blocks {others:.2e}"),
    );
}

fn criterion_09_no_constant_sectional_curvature() {
    let start = Instant::now();
    let mut configs = Vec::new();
    for n in [2usize, 3] {
        for r in [1.0, (n as f64).sqrt()] {
            for k in [0.0, 1.0, -1.0] {
                configs.push((n, r, k));
            }
        }
    }
    let positive: Vec<f64> = k_grid(1.0, 1.0)[..201].iter().copied().filter(|k| *k > 0.0).collect();
    let res: Vec<(f64, f64, f64, usize)> = configs
        .par_iter()
        .enumerate()
        .flat_map(|(ci, (n, r, k))| (0..2u64).into_par_iter().map(move |i| (ci, *n, *r, *k, i)))
        .map(|(ci, n, r, k, i)| {
            let chart = if k == 0.0 { flat(n) } else { curved(k, n) };
            let mut rng = rng_for(9, ci as u64, i);
            let sp = random_sphere_point(&chart, r, &mut rng).unwrap();
            let r2 = r * r;
            let weights: Vec<f64> = std::iter::once(1.0).chain(positive.iter().map(|kh| 1.0 / (kh * r2))).collect();
            let mut floor = f64::INFINITY;
            let mut tangential = 0.0_f64;
            let mut vertical = 0.0_f64;
            for a in &weights {
                let blocks = curvature_blocks(&chart, &sp, *a, BlockReading::Rectified).unwrap();
                let basis = DefectBasis::new(&chart, &sp, blocks, *a).unwrap();
                floor = floor.min(min_defect(&basis, &k_grid(*a, r2)));
                tangential = tangential.max(basis.defect(1.0 / (a * r2)).get(Block::Ttt));
                if k == 0.0 {
                    let gram = frame_gram(&chart, &sp, *a).unwrap();
                    let mut vert = || {
                        let mut u = random_tangent(&chart, &sp, &mut rng).unwrap();
                        u.h.iter_mut().for_each(|x| *x = 0.0);
                        u.flat()
                    };
                    let (u, v) = (vert(), vert());
                    let kk = sectional_curvature(&basis.blocks, &gram, &u, &v).unwrap();
                    vertical = vertical.max((kk - 1.0 / (a * r2)).abs());
                }
            }
            (floor, tangential, vertical, weights.len())
        })
        .collect();
    let floor = min_of(res.iter().map(|r| r.0));
    let tangential = max_of(res.iter().map(|r| r.1));
    let vertical = max_of(res.iter().map(|r| r.2));
    let scanned: usize = res.iter().map(|r| r.3).sum();
    let elapsed = start.elapsed();
    let ok = floor > 1e-3 && tangential < 1e-9 && vertical < 1e-8 && elapsed < Duration::from_secs(120);
    verdict(
        9,
        ok,
        format!(
            "min over grid of max defect {floor:.3e} ({} configurations, {scanned} weights); TTT defect at 1/(a r^2) {tangential:.2e}; flat vertical K error {vertical:.2e}; {:.1}s",
            configs.len(),
            elapsed.as_secs_f64()
        ),
    );
}

/// The `cgbundle` executable built alongside this test binary.
fn cli_binary() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let dir = exe.parent().and_then(Path::parent).unwrap();
    dir.join(format!("cgbundle{}", std::env::consts::EXE_SUFFIX))
}

fn criterion_10_determinism() {
    let bin = cli_binary();
    if !bin.exists() {
        verdict(10, false, format!("{} not built; run the workspace tests or build cgbundle-cli first", bin.display()));
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (threads, round) in [(1, 0), (1, 1), (8, 0), (8, 1)] {
        let path = dir.path().join(format!("t{threads}_{round}.json"));
        let status = Command::new(&bin)
            .args(["verify", "--base", "constant-curvature", "--curvature", "1", "--samples", "6", "--seed", "2024"])
            .args(["--threads", &threads.to_string(), "--out", path.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.code().is_some_and(|c| c <= 1));
        outputs.push(std::fs::read(path).unwrap());
    }
    let same = outputs.windows(2).all(|w| w[0] == w[1]);
    verdict(10, same, format!("{} reports of {} bytes, byte-identical: {same}", outputs.len(), outputs[0].len()));
}

fn main() -> ExitCode {
    let criteria: [fn(); 10] = [
        criterion_01_oracle_soundness,
        criterion_02_metric_inverse,
        criterion_03_connection_table,
        criterion_04_almost_product_structure,
        criterion_05_framed_structure,
        criterion_06_metrical_structure,
        criterion_07_paracontact_structure,
        criterion_08_curvature_blocks,
        criterion_09_no_constant_sectional_curvature,
        criterion_10_determinism,
    ];
    for (i, run) in criteria.into_iter().enumerate() {
        if std::panic::catch_unwind(run).is_err() {
            verdict(i as u32 + 1, false, "panicked".into());
        }
    }
    let failed = FAILED.load(Ordering::SeqCst);
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
