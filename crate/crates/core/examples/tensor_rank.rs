//! Exact tensor rank, counting every minimal rank decomposition, and checking
//! that they all span the same subspace on each axis.
//!
//! ```text
//! cargo run --release --example tensor_rank
//! ```

use slicerank::enumeration::{count_tensor_rank_decompositions, example_product_tensor, tensor_rank_example_formula};
use slicerank::linalg::{Field, Vector};
use slicerank::rank::{tensor_rank, RankBudget};
use slicerank::tensor::Tensor;

fn main() -> slicerank::error::Result<()> {
    let f = Field::of(2);
    let budget = RankBudget::default();

    let (k, dec) = tensor_rank(&Tensor::identity(f, 3, 2), &budget)?;
    println!("tensor rank of I_(3,2) is {k} with {} terms", dec.len());

    // M(x1, x2) a(x3) with M the 2x2 identity: rank 2.
    let t = example_product_tensor(&Tensor::identity(f, 2, 2), &[Vector::new(f, vec![1, 1])]);
    let c = count_tensor_rank_decompositions(&t, &budget)?;
    println!(
        "rank {}: {} ordered decompositions (closed form {}, bound {}), {} distinct span tuple(s)",
        c.k,
        c.count,
        tensor_rank_example_formula(2, 3, c.k),
        c.bound,
        c.span_tuples.len()
    );
    Ok(())
}
