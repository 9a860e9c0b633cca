//! Monte Carlo sweep of the threshold in units of `τ0`, written to CSV.
//!
//! ```bash
//! cargo run --release --example tau_sweep -- sweep.csv
//! ```

use std::fs::File;

use tensor_cs::bench::{run_sweep, write_csv, NoisySignalSpec, PolicySpec, SweepConfig, SweepVar, TauScale};
use tensor_cs::sensing::SensingKind;

fn main() -> tensor_cs::Result<()> {
    let cfg = SweepConfig {
        sweep: SweepVar::Tau,
        grid: vec![0.0, 0.01, 0.1, 0.3, 1.0, 3.0, 10.0],
        trials: 20,
        seed: 7,
        signal: NoisySignalSpec {
            dims: vec![64, 64],
            ranks: vec![32, 32],
            epsilon: 3e-4,
            seed: 0,
            normalize: true,
            core_decay: 1.0,
        },
        kinds: vec![SensingKind::Gaussian; 2],
        sensing_ranks: vec![32, 32],
        policy: PolicySpec::FixedTau(0.0),
        tau_scale: TauScale::Tau0,
        fresh_signal_per_trial: false,
        record_timings: false,
    };
    let result = run_sweep(&cfg)?;
    println!("{:>8} {:>12} {:>10} {:>8}", "tau/tau0", "mean error", "std", "PSNR");
    for s in &result.summaries {
        println!(
            "{:>8} {:>12.4e} {:>10.2e} {:>8.2}",
            s.value, s.mean, s.std, s.mean_psnr_db
        );
    }
    if let Some(path) = std::env::args().nth(1) {
        write_csv(File::create(&path)?, &result.records)?;
        println!("wrote {path}");
    }
    Ok(())
}
