//! Rewriting a slice decomposition without changing the tensor it assembles to:
//! change of basis, pair and star shifts, regrouping a rank decomposition and
//! slicing along an axis.
//!
//! ```text
//! cargo run --example transforms
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slicerank::decomposition::TensorRankDecomposition;
use slicerank::linalg::{Field, Matrix, Vector};
use slicerank::sample::{random_decomposition, random_star_shift_params};
use slicerank::tensor::Tensor;
use slicerank::transforms::{basis_change, pair_shift, regroup_tensor_rank, slice_by_axis, star_shift};

fn main() -> slicerank::error::Result<()> {
    let f = Field::of(3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let dec = random_decomposition(&mut rng, f, &[3, 3, 2], &[2, 1, 1])?;
    let t = dec.assemble();
    println!("random decomposition of shape {:?}", dec.shape());

    let g = Matrix::new(f, 2, 2, vec![1, 1, 0, 2])?;
    let changed = basis_change(&dec, 0, &g)?;
    println!("basis change on axis 1 keeps the tensor: {}", changed.assemble() == t);

    let c = Tensor::from_vector(&Vector::new(f, vec![1, 2]));
    let shifted = pair_shift(&dec, (0, 1), (1, 0), &c)?;
    println!("pair shift keeps the tensor: {}", shifted.assemble() == t);

    if let Some(p) = random_star_shift_params(&mut rng, &dec) {
        let starred = star_shift(&dec, &p.axes, &p.indices, &p.shifts)?;
        println!("star shift over axes {:?} keeps the tensor: {}", p.axes, starred.assemble() == t);
    }

    let e = |i| Vector::unit(f, 2, i);
    let trd = TensorRankDecomposition::new(f, &[2, 2, 2], vec![vec![e(0), e(0), e(0)], vec![e(1), e(1), e(1)]])?;
    let regrouped = regroup_tensor_rank(&trd, &[vec![0], vec![], vec![1]])?;
    println!("regrouped shape {:?}, same tensor: {}", regrouped.shape(), regrouped.assemble() == trd.assemble());

    let sliced = slice_by_axis(&t, 2)?;
    println!("slicing along axis 3 gives {} terms", sliced.len());
    Ok(())
}
