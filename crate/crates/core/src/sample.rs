//! Seeded random fixtures: vectors, tensors, independent families, invertible
//! matrices and decompositions. All generators take an explicit RNG so callers
//! control reproducibility (`ChaCha8Rng::seed_from_u64` throughout the crate).

use rand::Rng;

use crate::decomposition::SliceDecomposition;
use crate::error::{Error, Result};
use crate::linalg::{are_independent, Field, Matrix, Vector};
use crate::tensor::{complement_axes, Tensor};
use crate::transforms::star_shift;

/// Resampling attempts before giving up on an independence requirement.
pub const MAX_RESAMPLES: usize = 1000;

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> Vector {
    Vector::new(field, (0..n).map(|_| rng.gen_range(0..field.p())).collect())
}

pub fn random_nonzero_vector<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> Vector {
    loop {
        let v = random_vector(rng, field, n);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn random_tensor<R: Rng + ?Sized>(rng: &mut R, field: Field, dims: &[usize]) -> Tensor {
    let len: usize = dims.iter().product();
    let data = (0..len).map(|_| rng.gen_range(0..field.p())).collect();
    Tensor::new(field, dims.to_vec(), data).expect("consistent length")
}

/// `r` linearly independent vectors of length `n`, by rejection sampling.
pub fn random_independent_family<R: Rng + ?Sized>(
    rng: &mut R,
    field: Field,
    n: usize,
    r: usize,
) -> Result<Vec<Vector>> {
    if r > n {
        return Err(Error::DimsTooSmall(format!("{r} independent vectors in dimension {n}")));
    }
    for _ in 0..MAX_RESAMPLES {
        let vs: Vec<Vector> = (0..r).map(|_| random_vector(rng, field, n)).collect();
        if are_independent(field, n, &vs) {
            return Ok(vs);
        }
    }
    Err(Error::DimsTooSmall(format!("no independent family of {r} in dimension {n} after resampling")))
}

pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, field: Field, r: usize) -> Matrix {
    let rows = random_independent_family(rng, field, r, r).expect("square families exist");
    Matrix::from_rows(field, r, &rows).expect("consistent sizes")
}

/// A decomposition with independent `a`-families of the given shape and random `b`s.
pub fn random_decomposition<R: Rng + ?Sized>(
    rng: &mut R,
    field: Field,
    dims: &[usize],
    shape: &[usize],
) -> Result<SliceDecomposition> {
    let mut dec = SliceDecomposition::empty(field, dims);
    for (axis, &r) in shape.iter().enumerate() {
        let family = random_independent_family(rng, field, dims[axis], r)?;
        let rest = dec.complement_dims(axis);
        for a in family {
            let b = random_tensor(rng, field, &rest);
            dec.push(axis, a, b)?;
        }
    }
    Ok(dec)
}

/// Like [`random_decomposition`] but with every `b` zero, so it assembles to zero.
pub fn zero_b_decomposition<R: Rng + ?Sized>(
    rng: &mut R,
    field: Field,
    dims: &[usize],
    shape: &[usize],
) -> Result<SliceDecomposition> {
    let mut dec = SliceDecomposition::empty(field, dims);
    for (axis, &r) in shape.iter().enumerate() {
        let family = random_independent_family(rng, field, dims[axis], r)?;
        let rest = dec.complement_dims(axis);
        for a in family {
            dec.push(axis, a, Tensor::zeros(field, &rest))?;
        }
    }
    Ok(dec)
}

/// Parameters of a star shift: axes `J`, one term index per axis, one shift per axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarShiftParams {
    pub axes: Vec<usize>,
    pub indices: Vec<usize>,
    pub shifts: Vec<Tensor>,
}

/// Random star-shift parameters whose shifts sum to zero, or `None` when fewer
/// than two axes carry terms.
pub fn random_star_shift_params<R: Rng + ?Sized>(
    rng: &mut R,
    dec: &SliceDecomposition,
) -> Option<StarShiftParams> {
    let live: Vec<usize> = (0..dec.order()).filter(|&j| !dec.terms(j).is_empty()).collect();
    if live.len() < 2 {
        return None;
    }
    let mut axes: Vec<usize>;
    loop {
        axes = live.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if axes.len() >= 2 {
            break;
        }
    }
    let indices: Vec<usize> = axes.iter().map(|&j| rng.gen_range(0..dec.terms(j).len())).collect();
    let rest_dims: Vec<usize> =
        complement_axes(dec.order(), &axes).iter().map(|&a| dec.dims()[a]).collect();
    let field = dec.field();
    let mut shifts: Vec<Tensor> =
        (1..axes.len()).map(|_| random_tensor(rng, field, &rest_dims)).collect();
    let mut last = Tensor::zeros(field, &rest_dims);
    for s in &shifts {
        last.add_scaled(s, field.neg(1)).expect("same shape");
    }
    shifts.push(last);
    Some(StarShiftParams { axes, indices, shifts })
}

/// A zero-assembling decomposition: zero `b`s followed by `shifts` random star shifts.
pub fn random_zero_decomposition<R: Rng + ?Sized>(
    rng: &mut R,
    field: Field,
    dims: &[usize],
    shape: &[usize],
    shifts: usize,
) -> Result<SliceDecomposition> {
    let mut dec = zero_b_decomposition(rng, field, dims, shape)?;
    for _ in 0..shifts {
        if let Some(params) = random_star_shift_params(rng, &dec) {
            dec = star_shift(&dec, &params.axes, &params.indices, &params.shifts)?;
        }
    }
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn families_are_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2, 3, 5] {
            let f = Field::of(p);
            for r in 0..=3 {
                let fam = random_independent_family(&mut rng, f, 3, r).unwrap();
                assert!(are_independent(f, 3, &fam));
            }
            assert!(matches!(random_independent_family(&mut rng, f, 2, 3), Err(Error::DimsTooSmall(_))));
        }
    }

    #[test]
    fn zero_decompositions_assemble_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in [2, 3] {
            let dec = random_zero_decomposition(&mut rng, Field::of(p), &[3, 3, 3], &[2, 1, 2], 5).unwrap();
            assert!(dec.assemble().is_zero());
            assert!(dec.validate().is_ok());
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = random_decomposition(&mut ChaCha8Rng::seed_from_u64(9), Field::of(3), &[2, 3, 2], &[1, 2, 1]);
        let b = random_decomposition(&mut ChaCha8Rng::seed_from_u64(9), Field::of(3), &[2, 3, 2], &[1, 2, 1]);
        assert_eq!(a, b);
    }
}
