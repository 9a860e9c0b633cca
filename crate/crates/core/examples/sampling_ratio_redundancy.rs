//! Sampling ratio of 2D multi-way sensing and recovery of the redundant
//! measurement block from the others.
//!
//! ```bash
//! cargo run --example sampling_ratio_redundancy
//! ```

use tensor_cs::rng::{gaussian_matrix, tag};
use tensor_cs::sensing::{rank_for_ratio, recover_z12, sampling_ratio, split_z1};

fn main() -> tensor_cs::Result<()> {
    for (r, i) in [(1, 5), (64, 512), (128, 512), (512, 512)] {
        println!("R/I = {r}/{i}: delta = {:.6}", sampling_ratio(r, i));
    }
    println!("delta 0.36 on I = 512 needs R = {}", rank_for_ratio(0.36, 512));

    // Z1 = X Phi2^T and Z2 = X^T Phi1^T share an R x R block
    let (i, r) = (40, 8);
    let x = gaussian_matrix(i, i, 1, tag::MISC);
    let phi1 = gaussian_matrix(r, i, 2, tag::SENSING);
    let phi2 = gaussian_matrix(r, i, 3, tag::SENSING);
    let z1 = &x * phi2.transpose();
    let z2 = x.transpose() * phi1.transpose();
    let (z11, z12) = split_z1(&z1, r)?;
    let recovered = recover_z12(&z2, &z11, &phi1, &phi2)?;
    println!(
        "held-out block recovered to {:.2e} relative",
        (recovered - &z12).norm() / z12.norm()
    );
    Ok(())
}
