use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tensor_cs::bench::{gen_noisy_signal, parse_grid, psnr, run_sweep, write_csv, NoisySignalSpec, SweepConfig};
use tensor_cs::io::{load_ten1, save_ten1};
use tensor_cs::reconstruction::{reconstruct, TruncationPolicy};
use tensor_cs::sensing::{
    assemble_from_two_mode, load_measurements, multiway_measure, save_measurements, two_mode_measure, MeasurementMode,
    SensingEnsemble, SensingKind,
};
use tensor_cs::{Error, Result};

#[derive(Parser)]
#[command(
    name = "tensor-cs",
    version,
    about = "Multi-way compressive sensing with direct reconstruction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a noisy low multilinear-rank tensor with unit Frobenius norm.
    Gen {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        ranks: Vec<usize>,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Power-law decay of the core entries (0 keeps a flat spectrum).
        #[arg(long, default_value_t = 0.0)]
        core_decay: f64,
    },
    /// Sense a tensor and write the measurement directory.
    Sense {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        ranks: Vec<usize>,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = Mode::Multiway)]
        mode: Mode,
        /// Rows of the mode-3 matrix in two-mode sensing (identity when omitted).
        #[arg(long)]
        r3: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct a tensor from a measurement directory.
    Reconstruct {
        #[arg(long)]
        meas: PathBuf,
        #[command(flatten)]
        threshold: Threshold,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the PSNR of a test tensor against a reference, in dB.
    Psnr {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        test: PathBuf,
    },
    /// Run a Monte Carlo sweep and write one CSV row per trial.
    Bench {
        #[arg(long, value_enum)]
        sweep: Sweep,
        /// Inclusive grid `a:b:step`.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// JSON with `signal`, `kinds`, `sensing_ranks` and optional `policy`,
        /// `tau_scale`, `fresh_signal_per_trial`.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Fill the wall_ms column.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Threshold {
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    auto_epsilon: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Gaussian,
    Bernoulli,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Multiway,
    TwoMode,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sweep {
    Tau,
    Epsilon,
    Delta,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Gen {
            dims,
            ranks,
            epsilon,
            seed,
            out,
            core_decay,
        } => {
            let signal = gen_noisy_signal(&NoisySignalSpec {
                dims,
                ranks,
                epsilon,
                seed,
                normalize: true,
                core_decay,
            })?;
            save_ten1(&out, &signal.x)?;
            println!("achieved epsilon {:e}", signal.achieved_epsilon);
        }
        Command::Sense {
            input,
            ranks,
            kind,
            mode,
            r3,
            seed,
            out,
        } => sense(input, ranks, kind, mode, r3, seed, out)?,
        Command::Reconstruct {
            meas,
            threshold,
            out,
            report,
        } => {
            let policy = match (threshold.tau, threshold.auto_epsilon) {
                (Some(tau), _) => TruncationPolicy::FixedTau(tau),
                (None, Some(epsilon)) => TruncationPolicy::Auto { epsilon },
                (None, None) => unreachable!("clap enforces one threshold flag"),
            };
            let (m, ensemble, _) = load_measurements(&meas)?;
            let r = reconstruct(&m, &ensemble, policy)?;
            save_ten1(&out, &r.reconstruction)?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            if let Some(path) = report {
                fs::write(path, serde_json::to_string_pretty(&r.summary())?)?;
            }
        }
        Command::Psnr { reference, test } => {
            let x = load_ten1(reference)?;
            let y = load_ten1(test)?;
            println!("{}", psnr(&x, &y)?);
        }
        Command::Bench {
            sweep,
            grid,
            trials,
            seed,
            config,
            out,
            timings,
        } => {
            let mut value: serde_json::Value = serde_json::from_str(&fs::read_to_string(config)?)?;
            let obj = value
                .as_object_mut()
                .ok_or_else(|| Error::InvalidArgument("bench config must be a JSON object".into()))?;
            let sweep = match sweep {
                Sweep::Tau => "tau",
                Sweep::Epsilon => "epsilon",
                Sweep::Delta => "delta",
            };
            obj.insert("sweep".into(), sweep.into());
            obj.insert("grid".into(), parse_grid(&grid)?.into());
            obj.insert("trials".into(), trials.into());
            obj.insert("seed".into(), seed.into());
            if timings {
                obj.insert("record_timings".into(), true.into());
            }
            let cfg: SweepConfig = serde_json::from_value(value)?;
            let result = run_sweep(&cfg)?;
            write_csv(BufWriter::new(File::create(out)?), &result.records)?;
            println!("value\trealized\tmean_error\tstd\tmean_psnr_db\tfailed");
            for s in &result.summaries {
                println!(
                    "{}\t{:.6}\t{:.6e}\t{:.3e}\t{:.3}\t{}",
                    s.value, s.realized_value, s.mean, s.std, s.mean_psnr_db, s.failed
                );
            }
        }
    }
    Ok(())
}

fn sense(
    input: PathBuf,
    ranks: Vec<usize>,
    kind: Kind,
    mode: Mode,
    r3: Option<usize>,
    seed: u64,
    out: PathBuf,
) -> Result<()> {
    let x = load_ten1(input)?;
    let kind = match kind {
        Kind::Gaussian => SensingKind::Gaussian,
        Kind::Bernoulli => SensingKind::Bernoulli,
    };
    match mode {
        Mode::Multiway => {
            if r3.is_some() {
                return Err(Error::InvalidArgument("--r3 only applies to two-mode sensing".into()));
            }
            let kinds = vec![kind; x.order()];
            let ensemble = SensingEnsemble::generate(&kinds, &ranks, x.dims(), seed)?;
            let m = multiway_measure(&x, &ensemble)?;
            save_measurements(&out, &m, &ensemble, MeasurementMode::Multiway)?;
        }
        Mode::TwoMode => {
            if x.order() != 3 {
                return Err(Error::InvalidArgument(format!(
                    "two-mode sensing needs a third-order tensor, got order {}",
                    x.order()
                )));
            }
            let i3 = x.dims()[2];
            let r3 = match (ranks.len(), r3) {
                (2, r3) => r3.unwrap_or(i3),
                (3, None) => ranks[2],
                (3, Some(r)) if r == ranks[2] => r,
                _ => return Err(Error::InvalidArgument("give --ranks r1,r2 and optionally --r3".into())),
            };
            let kind3 = if r3 == i3 {
                SensingKind::Identity
            } else {
                SensingKind::Gaussian
            };
            let ensemble = SensingEnsemble::generate(&[kind, kind, kind3], &[ranks[0], ranks[1], r3], x.dims(), seed)?;
            let y = two_mode_measure(&x, ensemble.matrix(0), ensemble.matrix(1))?;
            let m = assemble_from_two_mode(&y, &ensemble)?;
            save_measurements(&out, &m, &ensemble, MeasurementMode::TwoMode)?;
        }
    }
    Ok(())
}
