//! Writing a measurement directory and reconstructing from it later.
//!
//! ```bash
//! cargo run --example measurement_io -- /tmp/meas
//! ```

use tensor_cs::io::{load_ten1, save_ten1};
use tensor_cs::reconstruction::{reconstruct, TruncationPolicy};
use tensor_cs::sensing::{
    load_measurements, multiway_measure, save_measurements, MeasurementMode, SensingEnsemble, SensingKind,
};
use tensor_cs::tensor::relative_error;
use tensor_cs::tucker::TuckerModel;

fn main() -> tensor_cs::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| std::env::temp_dir().join("tensor-cs-meas").display().to_string());
    let x = TuckerModel::random(&[10, 12, 14], &[2, 3, 4], 1)?.reconstruct()?;
    let e = SensingEnsemble::generate(&[SensingKind::Bernoulli; 3], &[2, 3, 4], x.dims(), 17)?;
    let manifest = save_measurements(&dir, &multiway_measure(&x, &e)?, &e, MeasurementMode::Multiway)?;
    save_ten1(format!("{dir}/x.ten"), &x)?;
    println!("wrote {dir}: {}", serde_json::to_string(&manifest)?);

    let (meas, ensemble, _) = load_measurements(&dir)?;
    let reference = load_ten1(format!("{dir}/x.ten"))?;
    let r = reconstruct(&meas, &ensemble, TruncationPolicy::FixedTau(0.0))?;
    println!(
        "reconstructed from disk, relative error {:.2e}",
        relative_error(&r.reconstruction, &reference)?
    );
    Ok(())
}
