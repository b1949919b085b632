//! `qadlab`: runs the experiments and writes their CSV/JSON outputs.
//!
//! Exit status is 0 on success, 2 on invalid arguments and 1 when an
//! experiment fails at run time.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qadlab_core::experiments::{
    self, io, AdaptiveDemoConfig, CapacityConfig, SweepConfig, TrueStateKind, DEFAULT_DIMS,
};
use qadlab_core::povm::{build_mub, build_sic_povm, find_sic_fiducial, FiducialVector, PovmJson, SicSearchConfig};
use qadlab_core::Error;
use serde::Serialize;

use config::{check_dims, check_purity, check_threads, check_trials, resolve_out_dir, FileConfig, Format};

#[derive(Parser)]
#[command(name = "qadlab", version, about = "Single-copy state estimation with group-structured measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Master seed for every random stream.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (falls back to $QADLAB_OUT).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// csv, json or both.
    #[arg(long)]
    format: Option<String>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// JSON file with any of the flag values; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Worked qubit example with both fidelity conventions.
    QubitExample {
        #[command(flatten)]
        common: Common,
    },
    /// Fidelity sweep over qudit dimensions.
    QuditSweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        purity: Option<f64>,
    },
    /// Purity, capacity and entropies of random states.
    CapacityScan {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Coarse SIC estimate followed by a GEVP-adapted group.
    AdaptiveDemo {
        #[command(flatten)]
        common: Common,
        /// A single dimension.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long)]
        n_coarse: Option<usize>,
        /// diagonal, maximally_mixed or ginibre.
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Numerical SIC fiducial search.
    SicSearch {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        max_iters: Option<usize>,
    },
    /// Builds and checks mutually unbiased bases.
    MubCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
    },
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => Failure::Usage(msg),
            Error::NotPrime(d) => Failure::Usage(format!("dimension {d} is not prime")),
            other => Failure::Runtime(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn usage<T>(r: Result<T, String>) -> Outcome<T> {
    r.map_err(Failure::Usage)
}

/// Resolved shared settings.
struct Ctx {
    file: FileConfig,
    seed: u64,
    out_dir: PathBuf,
    format: Format,
    threads: Option<usize>,
}

impl Ctx {
    fn new(common: Common) -> Outcome<Self> {
        let file = match &common.config {
            Some(p) => usage(FileConfig::load(p))?,
            None => FileConfig::default(),
        };
        let format = usage(Format::parse(common.format.as_deref().or(file.format.as_deref()).unwrap_or("both")))?;
        let threads = common.threads.or(file.threads);
        usage(check_threads(threads))?;
        Ok(Ctx {
            seed: common.seed.or(file.seed).unwrap_or(0),
            out_dir: resolve_out_dir(common.out_dir, file.out_dir.clone()),
            format,
            threads,
            file,
        })
    }

    fn dims(&self, flag: Option<Vec<usize>>, default: &[usize]) -> Outcome<Vec<usize>> {
        let dims = flag.or_else(|| self.file.dims.clone()).unwrap_or_else(|| default.to_vec());
        usage(check_dims(&dims))?;
        Ok(dims)
    }

    fn trials(&self, flag: Option<usize>, default: usize) -> Outcome<usize> {
        let t = flag.or(self.file.trials).unwrap_or(default);
        usage(check_trials(t))?;
        Ok(t)
    }

    fn path(&self, name: &str) -> Outcome<PathBuf> {
        std::fs::create_dir_all(&self.out_dir)?;
        Ok(self.out_dir.join(name))
    }

    fn write_json<T: Serialize + ?Sized>(&self, name: &str, value: &T) -> Outcome<PathBuf> {
        let p = self.path(name)?;
        io::write_json(&p, value)?;
        Ok(p)
    }

    fn write_csv<T: io::CsvRow>(&self, name: &str, rows: &[T]) -> Outcome<PathBuf> {
        let p = self.path(name)?;
        io::write_csv(&p, rows)?;
        Ok(p)
    }

    /// Writes `stem.csv` and/or `stem.json` according to `--format`.
    fn write_table<T: io::CsvRow + Serialize>(&self, stem: &str, rows: &[T]) -> Outcome<Vec<PathBuf>> {
        let mut written = Vec::new();
        if self.format.csv() {
            written.push(self.write_csv(&format!("{stem}.csv"), rows)?);
        }
        if self.format.json() {
            written.push(self.write_json(&format!("{stem}.json"), rows)?);
        }
        Ok(written)
    }
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn qubit_example(common: Common) -> Outcome {
    let ctx = Ctx::new(common)?;
    let r = experiments::run_qubit_example()?;
    println!("{:<16} {:<18} {:>4} {:>9} {:>9} {:>9}", "method", "group", "rank", "uhlmann", "linear", "reference");
    for row in &r.rows {
        println!(
            "{:<16} {:<18} {:>4} {:>9.5} {:>9.5} {:>9.2}",
            row.method, row.group, row.rank, row.uhlmann_fidelity, row.linear_fidelity, row.reference_fidelity
        );
    }
    for n in &r.notes {
        println!("note: {n}");
    }
    let p = ctx.write_json("qubit_example.json", &r)?;
    report_written(&[p]);
    Ok(())
}

fn qudit_sweep(common: Common, dims: Option<Vec<usize>>, trials: Option<usize>, purity: Option<f64>) -> Outcome {
    let ctx = Ctx::new(common)?;
    let purity = purity.or(ctx.file.purity).unwrap_or(0.7);
    usage(check_purity(purity))?;
    let cfg = SweepConfig {
        dims: ctx.dims(dims, &DEFAULT_DIMS)?,
        trials: ctx.trials(trials, 200)?,
        target_purity: purity,
        master_seed: ctx.seed,
        threads: ctx.threads,
        ..Default::default()
    };
    cfg.validate()?;
    let out = experiments::run_qudit_sweep(&cfg)?;
    let table = experiments::compare_with_table1(&out.summary);

    println!("{:>3} {:>6} {:>9} {:>9} {:>9} {:>7} {:>9} {:>9}", "d", "trials", "standard", "hw", "matched", "hw/std", "ref std", "diff");
    for s in &out.summary.dims {
        let reference = table.iter().find(|t| t.d == s.d);
        println!(
            "{:>3} {:>6} {:>9.4} {:>9.4} {:>9.4} {:>7.2} {:>9} {:>9}",
            s.d,
            s.trials,
            s.mean["fidelity_standard"],
            s.mean["fidelity_hw"],
            s.mean["fidelity_matched"],
            s.ratio_hw_over_standard,
            reference.map_or("-".into(), |t| format!("{:.3}", t.standard_reference)),
            reference.map_or("-".into(), |t| format!("{:+.4}", t.standard_discrepancy)),
        );
    }

    let stem = format!("qudit_sweep_seed{}", ctx.seed);
    let mut written = ctx.write_table(&format!("{stem}_records"), &out.records)?;
    written.push(ctx.write_json(&format!("{stem}_summary.json"), &out.summary)?);
    written.extend(ctx.write_table(&format!("{stem}_table1"), &table)?);
    report_written(&written);
    Ok(())
}

fn capacity_scan(common: Common, dims: Option<Vec<usize>>, trials: Option<usize>) -> Outcome {
    let ctx = Ctx::new(common)?;
    let cfg = CapacityConfig {
        dims: ctx.dims(dims, &CapacityConfig::default().dims)?,
        trials: ctx.trials(trials, 200)?,
        master_seed: ctx.seed,
        threads: ctx.threads,
    };
    let records = experiments::run_capacity_scan(&cfg)?;
    println!("{:>3} {:>7} {:>10} {:>10} {:>10} {:>10}", "d", "states", "purity min", "purity max", "kappa min", "kappa max");
    for &d in &cfg.dims {
        let rs: Vec<_> = records.iter().filter(|r| r.d == d).collect();
        let fold = |f: fn(&experiments::CapacityRecord) -> f64| {
            rs.iter().map(|r| f(r)).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
        };
        let (pl, ph) = fold(|r| r.purity);
        let (kl, kh) = fold(|r| r.kappa);
        println!("{d:>3} {:>7} {pl:>10.4} {ph:>10.4} {kl:>10.4} {kh:>10.4}", rs.len());
    }
    let written = ctx.write_table(&format!("capacity_scan_seed{}", ctx.seed), &records)?;
    report_written(&written);
    Ok(())
}

fn adaptive_demo(
    common: Common,
    dims: Option<Vec<usize>>,
    n_coarse: Option<usize>,
    state: Option<String>,
    restarts: Option<usize>,
) -> Outcome {
    let ctx = Ctx::new(common)?;
    let dims = ctx.dims(dims, &[2])?;
    let [d] = dims[..] else {
        return Err(Failure::Usage("adaptive-demo takes exactly one dimension".into()));
    };
    let state: TrueStateKind = state.or_else(|| ctx.file.state.clone()).as_deref().unwrap_or("diagonal").parse()?;
    let cfg = AdaptiveDemoConfig {
        d,
        n_coarse: n_coarse.or(ctx.file.n_coarse).unwrap_or(1000),
        master_seed: ctx.seed,
        state,
        sic_restarts: restarts.or(ctx.file.restarts).unwrap_or(64),
    };
    let r = experiments::run_adaptive_demo(&cfg)?;
    let p = &r.pipeline;
    println!("d = {}, n_coarse = {}, state = {:?}", p.d, p.n_coarse, r.state);
    println!("SIC Zauner residual      {:.3e}", r.sic_zauner_residual);
    println!("coarse trace distance    {:.5}", p.coarse_trace_distance);
    println!("lambda_min               {:.3e}", p.lambda_spectrum.first().copied().unwrap_or(f64::NAN));
    println!("delta_Q before / after   {:.5} / {:.5}", p.delta_q_before, p.delta_q_after);
    println!("fidelity GEVP / HW       {:.5} / {:.5}", p.fidelities.gevp_group, p.fidelities.baseline_hw);
    println!("group order ({:?})      {}", p.group_kind, p.group_order);
    let path = ctx.write_json(&format!("adaptive_demo_d{d}_seed{}.json", ctx.seed), &r)?;
    report_written(&[path]);
    Ok(())
}

#[derive(Serialize)]
struct SicOutput<'a> {
    fiducial: &'a FiducialVector,
    povm: PovmJson,
}

fn sic_search(common: Common, dims: Option<Vec<usize>>, restarts: Option<usize>, max_iters: Option<usize>) -> Outcome {
    let ctx = Ctx::new(common)?;
    let dims = ctx.dims(dims, &[2, 3, 4, 5])?;
    let defaults = SicSearchConfig::default();
    let cfg = SicSearchConfig {
        restarts: restarts.or(ctx.file.restarts).unwrap_or(defaults.restarts),
        max_iterations: max_iters.or(ctx.file.max_iters).unwrap_or(defaults.max_iterations),
        seed: ctx.seed,
        ..defaults
    };
    if cfg.restarts == 0 || cfg.max_iterations == 0 {
        return Err(Failure::Usage("--restarts and --max-iters must be at least 1".into()));
    }
    println!("{:>3} {:>12} {:>16} {:>8} {:>10}", "d", "residual", "frame potential", "restart", "converged");
    let mut written = Vec::new();
    let mut failed = Vec::new();
    for d in dims {
        let fid = find_sic_fiducial(d, &cfg)?;
        println!(
            "{d:>3} {:>12.3e} {:>16.12} {:>8} {:>10}",
            fid.zauner_residual, fid.frame_potential, fid.restart, fid.converged
        );
        if !fid.converged {
            failed.push(d);
            written.push(ctx.write_json(&format!("sic_fiducial_d{d}_seed{}.json", ctx.seed), &fid)?);
            continue;
        }
        let povm = build_sic_povm(d, &fid)?.to_json();
        let out = SicOutput { fiducial: &fid, povm };
        written.push(ctx.write_json(&format!("sic_fiducial_d{d}_seed{}.json", ctx.seed), &out)?);
    }
    report_written(&written);
    if !failed.is_empty() {
        return Err(Failure::Runtime(Error::Verification(format!("no SIC fiducial found for d in {failed:?}"))));
    }
    Ok(())
}

fn mub_check(common: Common, dims: Option<Vec<usize>>) -> Outcome {
    let ctx = Ctx::new(common)?;
    let dims = ctx.dims(dims, &[2, 3, 5, 7, 11, 13])?;
    let reports = dims.iter().map(|&d| build_mub(d)?.report()).collect::<Result<Vec<_>, _>>()?;
    println!("{:>3} {:>6} {:>14} {:>14} {:>14}", "d", "bases", "unbiasedness", "orthonormal", "completeness");
    for r in &reports {
        println!(
            "{:>3} {:>6} {:>14.3e} {:>14.3e} {:>14.3e}",
            r.dim, r.bases, r.max_unbiasedness_deviation, r.max_orthonormality_deviation, r.povm_completeness_residual
        );
    }
    let p = ctx.write_json("mub_check.json", &reports)?;
    report_written(&[p]);
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::QubitExample { common } => qubit_example(common),
        Command::QuditSweep { common, dims, trials, purity } => qudit_sweep(common, dims, trials, purity),
        Command::CapacityScan { common, dims, trials } => capacity_scan(common, dims, trials),
        Command::AdaptiveDemo { common, dims, n_coarse, state, restarts } => {
            adaptive_demo(common, dims, n_coarse, state, restarts)
        }
        Command::SicSearch { common, dims, restarts, max_iters } => sic_search(common, dims, restarts, max_iters),
        Command::MubCheck { common, dims } => mub_check(common, dims),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `qadlab --help` for usage");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
