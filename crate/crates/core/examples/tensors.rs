//! Dense tensors: outer products, contractions, unfoldings and the diagonal
//! identity tensor.
//!
//! ```text
//! cargo run --example tensors
//! ```

use slicerank::linalg::{Field, Vector};
use slicerank::rank::outer_all;
use slicerank::tensor::Tensor;

fn main() -> slicerank::error::Result<()> {
    let f = Field::of(3);
    let a = Vector::new(f, vec![1, 2]);
    let b = Vector::new(f, vec![1, 1]);
    let c = Vector::new(f, vec![2, 1]);

    let t = outer_all(f, &[&a, &b, &c]);
    println!("a (x) b (x) c has dims {:?} and entries {:?}", t.dims(), t.data());

    // Contracting axis 1 against a vector leaves a (x) c scaled by <b, v>.
    let v = Vector::new(f, vec![2, 0]);
    let s = t.contract_vector(1, &v)?;
    println!("contract axis 2 with {:?}: {:?}", v.entries(), s.data());

    for axis in 0..3 {
        println!("unfolding {} has rank {}", axis + 1, t.unfold(axis).rank());
    }

    let id = Tensor::identity(f, 3, 2);
    let sum = id.add(&t)?;
    println!("I_(3,2) + abc at (1,1,1) = {}", sum.get(&[0, 0, 0]));
    println!("permuted dims {:?}", t.permute_axes(&[2, 0, 1])?.dims());
    println!("{} tensors in F_3^(2x2)", Tensor::all(f, &[2, 2]).count());
    Ok(())
}
