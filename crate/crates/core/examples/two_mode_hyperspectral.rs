//! A hyperspectral-like cube sensed along its two spatial modes only
//! (the spectral mode is left alone), then rebuilt with the two-mode
//! pipeline.
//!
//! ```bash
//! cargo run --example two_mode_hyperspectral
//! ```

use tensor_cs::bench::{gen_noisy_signal, psnr, NoisySignalSpec};
use tensor_cs::reconstruction::{algorithm1, tau0_rough, TruncationPolicy};
use tensor_cs::sensing::{two_mode_measure, SensingEnsemble, SensingKind};

fn main() -> tensor_cs::Result<()> {
    // 64x64 pixels, 16 bands, decaying core like a natural scene
    let spec = NoisySignalSpec {
        dims: vec![64, 64, 16],
        ranks: vec![16, 16, 16],
        epsilon: 1e-3,
        seed: 5,
        normalize: true,
        core_decay: 2.0,
    };
    let signal = gen_noisy_signal(&spec)?;
    let kinds = [SensingKind::Gaussian, SensingKind::Gaussian, SensingKind::Identity];
    let ensemble = SensingEnsemble::generate(&kinds, &[16, 16, 16], &spec.dims, 6)?;

    // only these two projections are "acquired"
    let y = two_mode_measure(&signal.x, ensemble.matrix(0), ensemble.matrix(1))?;
    println!("Y1 {:?}, Y2 {:?}", y.y1.shape(), y.y2.shape());

    // the rough threshold overshoots with unscaled sensing matrices, so scan below it
    let rough = tau0_rough(spec.epsilon, ensemble.matrices())?;
    println!("rough threshold {rough:.3e}");
    for scale in [0.0, 1e-3, 1e-2, 1e-1, 1.0] {
        let report = algorithm1(&y, &ensemble, TruncationPolicy::FixedTau(scale * rough))?;
        println!(
            "tau {:.3e}: PSNR {:.2} dB, dropped {:?}",
            report.tau_used,
            psnr(&signal.x, &report.reconstruction)?,
            report.truncation_counts
        );
    }
    Ok(())
}
