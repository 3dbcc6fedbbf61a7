//! Certificates for decompositions that assemble to zero: extraction,
//! verification, the order-3 coefficients, and the certificate of two
//! decompositions of one tensor.
//!
//! ```text
//! cargo run --example zero_form
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slicerank::linalg::{Field, Vector};
use slicerank::sample::{random_decomposition, random_zero_decomposition};
use slicerank::tensor::Tensor;
use slicerank::transforms::pair_shift;
use slicerank::zero_form::{difference_certificate, extract_order_three, extract_zero_form, layers, verify_zero_form};

fn main() -> slicerank::error::Result<()> {
    let f = Field::of(3);
    let mut rng = ChaCha8Rng::seed_from_u64(4);

    let zero = random_zero_decomposition(&mut rng, f, &[3, 3, 3], &[1, 2, 1], 6)?;
    println!("assembles to zero: {}", zero.assemble().is_zero());
    let cert = extract_zero_form(&zero)?;
    println!("certificate with {} entries verifies: {}", cert.len(), verify_zero_form(&zero, &cert).is_ok());
    for (axes, keys) in layers(&cert) {
        println!("  J = {:?}: {} entries", axes.iter().map(|a| a + 1).collect::<Vec<_>>(), keys.len());
    }

    let z3 = extract_order_three(&zero)?;
    println!("order-3 coefficients cancel: {}", z3.coefficients_cancel(f));

    // Two decompositions of one tensor with the same one-variable functions.
    let dec = random_decomposition(&mut rng, f, &[2, 2, 2], &[1, 1, 0])?;
    let c = Tensor::from_vector(&Vector::new(f, vec![1, 2]));
    let other = pair_shift(&dec, (0, 0), (1, 0), &c)?;
    let diff = difference_certificate(&dec, &other)?;
    for (key, value) in &diff.entries {
        println!("  {key}: {:?}", value.data());
    }
    Ok(())
}
