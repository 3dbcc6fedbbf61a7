//! Exact slice rank by searching subspace tuples, with a witness decomposition,
//! the search budget, and membership in a target space.
//!
//! ```text
//! cargo run --release --example slice_rank
//! ```

use slicerank::error::Error;
use slicerank::linalg::{Field, Subspace, Vector};
use slicerank::rank::{membership_in_target, slice_rank, RankBudget};
use slicerank::tensor::Tensor;

fn main() -> slicerank::error::Result<()> {
    let f = Field::of(2);
    let budget = RankBudget::default();
    for (d, k) in [(3, 1), (3, 2), (3, 3), (4, 2)] {
        let t = Tensor::identity(f, d, k);
        let r = slice_rank(&t, &budget)?;
        let dims: Vec<usize> = r.tuple.iter().map(Subspace::dim).collect();
        println!("I_({d},{k}): slice rank {} via subspace dims {dims:?}", r.rank);
        assert_eq!(r.witness.assemble(), t);
    }

    // Is I_(3,2) in span{e1} (x) F^2 (x) F^2 + F^2 (x) span{e2} (x) F^2 ?
    let t = Tensor::identity(f, 3, 2);
    let tuple = vec![
        Subspace::from_vectors(f, 2, &[Vector::unit(f, 2, 0)])?,
        Subspace::from_vectors(f, 2, &[Vector::unit(f, 2, 1)])?,
        Subspace::zero(f, 2),
    ];
    match membership_in_target(&t, &tuple)? {
        Some(w) => println!("member; b on axis 1 has entries {:?}", w.b[0][0].data()),
        None => println!("not a member"),
    }

    let tight = RankBudget::with_candidates(10);
    match slice_rank(&Tensor::identity(f, 3, 3), &tight) {
        Err(Error::BudgetExceeded { lower_bound }) => println!("budget exhausted; slice rank >= {lower_bound}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
