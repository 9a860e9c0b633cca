//! Measurement sets on disk.
//!
//! A directory holds `z1.ten … zN.ten`, `w.ten`, the sensing matrices
//! `phi1.ten … phiN.ten` (order-2 tensors) and `manifest.json`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{MeasurementSet, SensingEnsemble, SensingKind};
use crate::error::{Error, Result};
use crate::io::{load_ten1, save_ten1};
use crate::tensor::DenseTensor;

pub const FORMAT_VERSION: u32 = 1;

const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasurementMode {
    Multiway,
    TwoMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub seed: u64,
    pub kinds: Vec<SensingKind>,
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub mode: MeasurementMode,
}

pub fn save_measurements(
    dir: impl AsRef<Path>,
    meas: &MeasurementSet,
    ensemble: &SensingEnsemble,
    mode: MeasurementMode,
) -> Result<Manifest> {
    let dir = dir.as_ref();
    meas.check_shapes()?;
    fs::create_dir_all(dir)?;
    for (n, z) in meas.z.iter().enumerate() {
        save_ten1(dir.join(format!("z{}.ten", n + 1)), z)?;
    }
    save_ten1(dir.join("w.ten"), &meas.w)?;
    for (n, phi) in ensemble.matrices().iter().enumerate() {
        save_ten1(dir.join(format!("phi{}.ten", n + 1)), &DenseTensor::from_matrix(phi))?;
    }
    let manifest = Manifest {
        format_version: FORMAT_VERSION,
        seed: meas.seed,
        kinds: meas.kinds.clone(),
        dims: meas.signal_dims(),
        ranks: meas.ranks().to_vec(),
        mode,
    };
    fs::write(dir.join(MANIFEST), serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}

/// Reads a directory written by [`save_measurements`] and checks it against
/// its manifest.
pub fn load_measurements(dir: impl AsRef<Path>) -> Result<(MeasurementSet, SensingEnsemble, Manifest)> {
    let dir = dir.as_ref();
    let manifest: Manifest = serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST))?)?;
    if manifest.format_version != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported measurement format version {}",
            manifest.format_version
        )));
    }
    let order = manifest.dims.len();
    if manifest.ranks.len() != order || manifest.kinds.len() != order {
        return Err(Error::Format(
            "manifest dims, ranks and kinds disagree in length".into(),
        ));
    }
    let z = (1..=order)
        .map(|n| load_ten1(dir.join(format!("z{n}.ten"))))
        .collect::<Result<Vec<_>>>()?;
    let w = load_ten1(dir.join("w.ten"))?;
    let phis = (1..=order)
        .map(|n| load_ten1(dir.join(format!("phi{n}.ten")))?.to_matrix())
        .collect::<Result<Vec<_>>>()?;
    let mut ensemble = SensingEnsemble::from_matrices(phis)?;
    ensemble.kinds = manifest.kinds.clone();
    ensemble.seed = manifest.seed;

    let meas = MeasurementSet {
        z,
        w,
        seed: manifest.seed,
        kinds: manifest.kinds.clone(),
    };
    meas.check_shapes()?;
    if meas.ranks() != manifest.ranks.as_slice() || meas.signal_dims() != manifest.dims {
        return Err(Error::Format("tensor shapes disagree with manifest".into()));
    }
    if ensemble.ranks() != manifest.ranks || ensemble.dims() != manifest.dims {
        return Err(Error::Format("sensing matrices disagree with manifest".into()));
    }
    Ok((meas, ensemble, manifest))
}
