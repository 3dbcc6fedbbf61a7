//! Exact linear algebra over a prime field: elimination, dual families,
//! projections and subspace enumeration.
//!
//! ```text
//! cargo run --example field_linalg
//! ```

use slicerank::linalg::{dual_family, enumerate_subspaces, gaussian_binomial, ordered_basis_count, Field, Matrix, Subspace, Vector};

fn main() -> slicerank::error::Result<()> {
    let f = Field::new(5)?;
    println!("F_5: 3 * 4 = {}, 1/3 = {}", f.mul(3, 4), f.inv(3).unwrap());

    let m = Matrix::new(f, 3, 3, vec![1, 2, 3, 0, 1, 4, 2, 0, 1])?;
    let rref = m.rref();
    println!("rank {} with pivots {:?}", rref.rank, rref.pivots);

    // A family and its biorthogonal dual, plus the projection that kills the family.
    let family = vec![Vector::new(f, vec![1, 1, 0]), Vector::new(f, vec![0, 1, 1])];
    let duals = dual_family(f, 3, &family)?;
    for (i, d) in duals.duals.iter().enumerate() {
        let pairings: Vec<u32> = family.iter().map(|a| d.dot(a)).collect();
        println!("dual {i}: {:?} pairs to {:?}", d.entries(), pairings);
    }
    let q = duals.complement_projection(3, f);
    for a in &family {
        println!("Q a = {:?}", q.mul_vector(a)?.entries());
    }

    let span = Subspace::from_vectors(f, 3, &family)?;
    println!("span has dim {} and {} elements", span.dim(), span.elements().len());

    let f2 = Field::of(2);
    let planes: Vec<Subspace> = enumerate_subspaces(f2, 4, 2, 1_000)?.collect();
    println!("2-dim subspaces of F_2^4: {} (Gaussian binomial {})", planes.len(), gaussian_binomial(4, 2, 2));
    println!("ordered bases of F_3^2: {}", ordered_basis_count(2, 3));
    Ok(())
}
