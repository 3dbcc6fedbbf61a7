//! Exhaustive censuses at small sizes: matrix factorizations, admissible
//! subspace tuples, per-tuple basis counts and the lower-bound construction.
//!
//! ```text
//! cargo run --release --example census
//! ```

use slicerank::enumeration::{
    admissible_tuples, basis_count_formula, count_matrix_decompositions, count_slice_decompositions_given_tuple,
    lower_bound_example_census,
};
use slicerank::linalg::{Field, Matrix};
use slicerank::rank::RankBudget;
use slicerank::tensor::Tensor;

fn main() -> slicerank::error::Result<()> {
    let f = Field::of(2);
    let budget = RankBudget::default();

    let m = Matrix::identity(f, 2);
    for line in count_matrix_decompositions(&m, &budget)?.report().lines() {
        println!("{line}");
    }

    let t = Tensor::identity(f, 3, 2);
    let set = admissible_tuples(&t, &budget)?;
    println!("I_(3,2): {} admissible tuples at slice rank {}", set.len(), set.k);
    for (tuple, _) in &set.tuples {
        let count = count_slice_decompositions_given_tuple(&t, tuple)?;
        assert_eq!(count, basis_count_formula(tuple));
    }

    let census = lower_bound_example_census(1, &Tensor::identity(f, 2, 2), &budget)?;
    for line in census.report().lines() {
        println!("{line}");
    }
    Ok(())
}
