//! Sunflower families: several decompositions of one tensor sharing a center.
//! With more petals than axes the tensor decomposes over the center alone.
//!
//! ```text
//! cargo run --example sunflower
//! ```

use slicerank::linalg::Field;
use slicerank::sunflower::{check_hypotheses, generate_sunflower_fixture, merge_to_center, sharpness_family, SunflowerSpec};

fn main() -> slicerank::error::Result<()> {
    let spec = SunflowerSpec::minimal(3, Field::of(2), &[4, 4, 4]);
    let fam = generate_sunflower_fixture(&spec)?;
    println!("{} petals over center shape {:?}", fam.h(), fam.center_shape());
    println!("hypotheses hold: {}", check_hypotheses(&fam).is_ok());
    let merged = merge_to_center(&fam)?;
    println!("merged length {} (center size {})", merged.len(), fam.center_shape().iter().sum::<usize>());
    assert_eq!(merged.assemble(), fam.tensor()?);

    // Three petals for an order-3 tensor are not enough.
    let sharp = sharpness_family();
    if let Err(violations) = check_hypotheses(&sharp) {
        for v in violations {
            println!("sharpness family: {v}");
        }
    }
    Ok(())
}
