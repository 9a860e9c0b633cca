//! Error bound constants, the threshold they suggest, and how the
//! observed error compares with the bound.
//!
//! ```bash
//! cargo run --example error_bounds
//! ```

use tensor_cs::bench::{gen_noisy_signal, reconstruction_error, NoisySignalSpec};
use tensor_cs::linalg::spectral_norm;
use tensor_cs::reconstruction::{bound_constants, error_bound, reconstruct, tau0_rough, TruncationPolicy};
use tensor_cs::sensing::{multiway_measure, SensingEnsemble, SensingKind};

fn main() -> tensor_cs::Result<()> {
    let spec = NoisySignalSpec {
        dims: vec![32, 32],
        ranks: vec![8, 8],
        epsilon: 1e-3,
        seed: 2,
        normalize: true,
        core_decay: 0.0,
    };
    let s = gen_noisy_signal(&spec)?;
    let ensemble = SensingEnsemble::generate(&[SensingKind::Gaussian; 2], &[8, 8], &spec.dims, 3)?;
    let k = bound_constants(&s.model, &ensemble)?;
    // the matrix bound uses the spectral norm of the noise
    let eps = spectral_norm(&s.x.sub(&s.x0)?.to_matrix()?)?;
    let t0 = k.tau0(eps)?;
    println!("a = {:.3e}, b = {:.3e}, c = {:.3e}", k.a, k.b, k.c);
    println!(
        "tau0 = {t0:.3e}, rough estimate {:.3e}",
        tau0_rough(eps, ensemble.matrices())?
    );

    let meas = multiway_measure(&s.x, &ensemble)?;
    for tau in [0.0, 0.1 * t0, t0, 10.0 * t0] {
        let r = reconstruct(&meas, &ensemble, TruncationPolicy::FixedTau(tau))?;
        let err = reconstruction_error(&s.x, &r.reconstruction)?;
        let b = error_bound(&k, &r.sigma_min_modes(), tau, eps)?;
        let bound = b.bound_value.map_or("n/a".to_string(), |v| format!("{v:.3e}"));
        println!("tau {tau:.3e} ({:?}): error {err:.3e}, bound {bound}", b.branch);
    }
    Ok(())
}
