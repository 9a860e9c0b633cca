//! The truncated pseudo-inverse and the identities it satisfies.
//!
//! ```bash
//! cargo run --example truncated_pinv
//! ```

use tensor_cs::linalg::{diag, pinv_properties_check, truncated_pinv};
use tensor_cs::rng::{gaussian_matrix, tag};

fn main() -> tensor_cs::Result<()> {
    let w = diag(3, 3, &[2.0, 1.0, 0.1]);
    println!("W* of diag(2, 1, 0.1) at tau = 0.5:\n{}", truncated_pinv(&w, 0.5)?);

    let w = gaussian_matrix(8, 5, 3, tag::MISC);
    println!(
        "{:>8} {:>5} {:>12} {:>12} {:>10}",
        "tau", "kept", "|WW*W-W|", "|W*WW*-W*|", "|WW*|"
    );
    for tau in [0.0, 0.5, 1.0, 2.0, 5.0] {
        let r = pinv_properties_check(&w, tau)?;
        println!(
            "{tau:>8.2} {:>5} {:>12.3e} {:>12.3e} {:>10.6}",
            r.kept, r.reproduce_residual, r.reflexive_residual, r.left_projector_norm
        );
    }
    Ok(())
}
