//! `cgbundle`: verification suites, sectional-curvature tables and the space-form defect scan.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use cgbundle::report::{k_grid, ReportError};
use cgbundle::report::{parse_with, run_suite, write_report, BaseKind, ConfigError, Overrides, RunConfig};
use cgbundle::sampling::{random_sphere_point, random_tangent, rng_for};
use cgbundle::sphere_bundle::{curvature_blocks, frame_gram, Block, BlockReading, DefectBasis};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "cgbundle", version, about = "Cheeger-Gromoll type tensor bundle verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites and emit a JSON report.
    Verify(Common),
    /// Sectional curvatures of random tangent planes of the sphere bundle (CSV).
    Curvature(Common),
    /// Blockwise space-form defect over the k grid (CSV).
    Defect(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    Euclidean,
    ConstantCurvature,
}

#[derive(Args)]
struct Common {
    /// TOML configuration file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    base: Option<BaseArg>,
    /// Curvature of a constant-curvature base.
    #[arg(long, allow_hyphen_values = true)]
    curvature: Option<f64>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// sasaki, classic or unit
    #[arg(long)]
    preset: Option<String>,
    /// Suite to run; repeatable.
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

enum Failure {
    Config(String),
    Io(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        Failure::Io(e.to_string())
    }
}

fn load(c: &Common) -> Result<RunConfig, Failure> {
    let text = match &c.config {
        Some(p) => {
            std::fs::read_to_string(p).map_err(|e| Failure::Config(format!("cannot read {}: {e}", p.display())))?
        }
        None => String::new(),
    };
    let ov = Overrides {
        base: c.base.map(|b| match b {
            BaseArg::Euclidean => BaseKind::Euclidean,
            BaseArg::ConstantCurvature => BaseKind::ConstantCurvature,
        }),
        k: c.curvature,
        n: c.dim,
        radius: c.radius,
        samples: c.samples,
        seed: c.seed,
        preset: c.preset.clone(),
        suites: if c.suites.is_empty() { None } else { Some(c.suites.clone()) },
    };
    Ok(parse_with(&text, &ov)?)
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, Failure> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        b = b.num_threads(t.max(1));
    }
    b.build().map_err(|e| Failure::Config(format!("thread pool: {e}")))
}

fn emit_text(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    use std::io::Write;
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn verify(c: &Common) -> Result<bool, Failure> {
    let cfg = load(c)?;
    let report = pool(c.threads)?.install(|| run_suite(&cfg));
    write_report(&report, c.out.as_deref())?;
    for f in report.failing() {
        eprintln!("FAIL {} residual {:e} ({} {:e})", f.name, f.residual, f.comparison, f.tolerance);
    }
    Ok(report.pass)
}

fn curvature(c: &Common) -> Result<bool, Failure> {
    let cfg = load(c)?;
    let chart = cfg.chart().map_err(|e| Failure::Config(e.to_string()))?;
    let a = cfg.sphere_a();
    let rows: Vec<String> = pool(c.threads)?.install(|| {
        use rayon::prelude::*;
        (0..cfg.samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(cfg.seed, 101, i);
                let k = (|| {
                    let sp = random_sphere_point(&chart, cfg.radius, &mut rng)?;
                    let blocks = curvature_blocks(&chart, &sp, a, BlockReading::Rectified)?;
                    let gram = frame_gram(&chart, &sp, a)?;
                    let u = random_tangent(&chart, &sp, &mut rng)?.flat();
                    let v = random_tangent(&chart, &sp, &mut rng)?.flat();
                    cgbundle::sphere_bundle::sectional_curvature(&blocks, &gram, &u, &v)
                })();
                match k {
                    Ok(k) => format!("{i},random,{k:.16e}\n"),
                    Err(e) => format!("{i},random,NaN # {e}\n"),
                }
            })
            .collect()
    });
    let mut text = String::from("sample,plane,curvature\n");
    rows.iter().for_each(|r| text.push_str(r));
    emit_text(&text, c.out.as_ref())?;
    Ok(true)
}

fn defect(c: &Common) -> Result<bool, Failure> {
    let cfg = load(c)?;
    let chart = cfg.chart().map_err(|e| Failure::Config(e.to_string()))?;
    let a = cfg.sphere_a();
    let r2 = cfg.radius * cfg.radius;
    let ks = k_grid(a, r2);
    let per_sample: Vec<Result<Vec<Vec<(Block, f64)>>, String>> = pool(c.threads)?.install(|| {
        use rayon::prelude::*;
        (0..cfg.samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(cfg.seed, 102, i);
                let sp = random_sphere_point(&chart, cfg.radius, &mut rng).map_err(|e| e.to_string())?;
                let blocks = curvature_blocks(&chart, &sp, a, BlockReading::Rectified).map_err(|e| e.to_string())?;
                let basis = DefectBasis::new(&chart, &sp, blocks, a).map_err(|e| e.to_string())?;
                Ok(ks.iter().map(|k| basis.defect(*k).per_block).collect())
            })
            .collect()
    });
    let mut worst = vec![vec![0.0_f64; Block::ALL.len()]; ks.len()];
    // smallest pointwise maximum over blocks, per k
    let mut floor = vec![f64::INFINITY; ks.len()];
    for s in per_sample {
        let s = s.map_err(Failure::Config)?;
        for (ki, blocks) in s.into_iter().enumerate() {
            let mut top = 0.0_f64;
            for (bi, (_, v)) in blocks.into_iter().enumerate() {
                worst[ki][bi] = worst[ki][bi].max(v);
                top = top.max(v);
            }
            floor[ki] = floor[ki].min(top);
        }
    }
    let mut text = String::from("k,block,max_defect\n");
    let mut all_positive = true;
    for (ki, k) in ks.iter().enumerate() {
        for (bi, b) in Block::ALL.iter().enumerate() {
            writeln!(text, "{k:.16e},{},{:.16e}", b.label(), worst[ki][bi]).expect("string write");
        }
        writeln!(text, "{k:.16e},max,{:.16e}", floor[ki]).expect("string write");
        all_positive &= floor[ki] > 1e-3;
    }
    emit_text(&text, c.out.as_ref())?;
    Ok(all_positive)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(c) => verify(c),
        Command::Curvature(c) => curvature(c),
        Command::Defect(c) => defect(c),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_IO)
        }
    }
}
