//! Compressive reconstruction against the HOSVD and Tucker-ALS
//! approximations computed from the full signal.
//!
//! ```bash
//! cargo run --example hosvd_baseline
//! ```

use tensor_cs::bench::{gen_noisy_signal, NoisySignalSpec};
use tensor_cs::reconstruction::{reconstruct, TruncationPolicy};
use tensor_cs::sensing::{multiway_measure, SensingEnsemble, SensingKind};
use tensor_cs::tensor::relative_error;
use tensor_cs::tucker::{hosvd, tucker_als, ALS_MAX_ITERS, ALS_TOL};

fn main() -> tensor_cs::Result<()> {
    let spec = NoisySignalSpec {
        dims: vec![24, 24, 24],
        ranks: vec![24, 24, 24],
        epsilon: 0.0,
        seed: 4,
        normalize: true,
        core_decay: 1.5,
    };
    let x = gen_noisy_signal(&spec)?.x;
    for r in [4, 8, 12] {
        let ranks = [r, r, r];
        let h = hosvd(&x, &ranks)?.reconstruct()?;
        let als = tucker_als(&x, &ranks, ALS_MAX_ITERS, ALS_TOL)?;
        let e = SensingEnsemble::generate(&[SensingKind::Gaussian; 3], &ranks, &spec.dims, 9)?;
        let cs = reconstruct(&multiway_measure(&x, &e)?, &e, TruncationPolicy::FixedTau(0.0))?;
        println!(
            "rank {r}: HOSVD {:.3e}, ALS {:.3e}, compressive {:.3e}",
            relative_error(&h, &x)?,
            als.error() / x.frobenius_norm(),
            relative_error(&cs.reconstruction, &x)?
        );
    }
    Ok(())
}
