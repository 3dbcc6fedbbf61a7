//! Rewrites of a slice decomposition that leave the assembled tensor unchanged.
//!
//! Terms are addressed by `(axis, index)`, both 0-based. Outputs keep the input's
//! term order.

use crate::decomposition::{SliceDecomposition, TensorRankDecomposition};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::tensor::{complement_axes, Tensor};

/// Replaces the axis-`axis` family `a` by `change . a` and the `b`s by
/// `(change^-1)^T . b`, so the axis matrix `sum_i a_i (x) b_i` is unchanged.
pub fn basis_change(dec: &SliceDecomposition, axis: usize, change: &Matrix) -> Result<SliceDecomposition> {
    if axis >= dec.order() {
        return Err(Error::IndexOutOfRange(format!("axis {axis} of order {}", dec.order())));
    }
    let r = dec.terms(axis).len();
    if change.rows() != r || change.cols() != r {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} change for {r} terms",
            change.rows(),
            change.cols()
        )));
    }
    let inv_t = change.inverse().ok_or(Error::SingularChange)?.transpose();
    let f = dec.field();
    let terms = dec.terms(axis);
    let mut out = dec.clone();
    for i in 0..r {
        let mut a = Vector::zeros(f, dec.dims()[axis]);
        let mut b = Tensor::zeros(f, terms[i].b.dims());
        for (k, t) in terms.iter().enumerate() {
            a = a.add(&t.a.scale(change.get(i, k)));
            b.add_scaled(&t.b, inv_t.get(i, k))?;
        }
        let slot = out.term_mut(axis, i)?;
        slot.a = a;
        slot.b = b;
    }
    Ok(out)
}

/// Sends rank-one term `i` to axis `j` for every `i` in `partition[j]`, with
/// `b` the product of its other factors.
pub fn regroup_tensor_rank(
    trd: &TensorRankDecomposition,
    partition: &[Vec<usize>],
) -> Result<SliceDecomposition> {
    let d = trd.dims().len();
    if partition.len() != d {
        return Err(Error::InvalidPartition(format!("{} parts for order {d}", partition.len())));
    }
    let mut seen = vec![false; trd.len()];
    for &i in partition.iter().flatten() {
        if i >= trd.len() || seen[i] {
            return Err(Error::InvalidPartition(format!("term {} repeated or out of range", i + 1)));
        }
        seen[i] = true;
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidPartition(format!("term {} not covered", i + 1)));
    }
    let f = trd.field();
    let mut dec = SliceDecomposition::empty(f, trd.dims());
    for (axis, part) in partition.iter().enumerate() {
        for &i in part {
            let factors = &trd.terms()[i];
            let b = complement_axes(d, &[axis])
                .into_iter()
                .map(|a| Tensor::from_vector(&factors[a]))
                .reduce(|acc, t| acc.outer(&t).expect("same field"))
                .unwrap_or_else(|| Tensor::scalar(f, 1));
            dec.push(axis, factors[axis].clone(), b)?;
        }
    }
    Ok(dec)
}

/// The decomposition into indicator functions of axis `axis` times the
/// corresponding slices; zero slices are dropped.
pub fn slice_by_axis(t: &Tensor, axis: usize) -> Result<SliceDecomposition> {
    if axis >= t.order() {
        return Err(Error::IndexOutOfRange(format!("axis {axis} of order {}", t.order())));
    }
    let mut dec = SliceDecomposition::empty(t.field(), t.dims());
    let n = t.dims()[axis];
    for v in 0..n {
        let s = t.fix_coordinate(axis, v)?;
        if !s.is_zero() {
            dec.push(axis, Vector::unit(t.field(), n, v), s)?;
        }
    }
    Ok(dec)
}

/// `(x)_{j in factors} a_j (x) rest`, laid out on the axes `[d] \ {skip}`.
fn product_without(
    dec: &SliceDecomposition,
    skip: usize,
    factors: &[(usize, &Vector)],
    rest_axes: &[usize],
    rest: &Tensor,
) -> Result<Tensor> {
    let vt: Vec<(usize, Tensor)> = factors.iter().map(|&(j, a)| (j, Tensor::from_vector(a))).collect();
    let labels: Vec<[usize; 1]> = vt.iter().map(|(j, _)| [*j]).collect();
    let mut parts: Vec<(&[usize], &Tensor)> = vt.iter().zip(&labels).map(|((_, t), l)| (&l[..], t)).collect();
    parts.push((rest_axes, rest));
    let t = Tensor::outer_labeled(dec.field(), &parts)?;
    debug_assert_eq!(t.dims(), dec.complement_dims(skip).as_slice());
    Ok(t)
}

/// `b_{j1,i1} += a_{j2,i2} (x) c` and `b_{j2,i2} -= a_{j1,i1} (x) c`, where `c`
/// lives on the axes other than `j1` and `j2`.
pub fn pair_shift(
    dec: &SliceDecomposition,
    (j1, i1): (usize, usize),
    (j2, i2): (usize, usize),
    c: &Tensor,
) -> Result<SliceDecomposition> {
    if j1 == j2 {
        return Err(Error::PreconditionFailed("pair shift needs two distinct axes".into()));
    }
    let (lo, hi) = if j1 < j2 { ((j1, i1), (j2, i2)) } else { ((j2, i2), (j1, i1)) };
    let neg_c = c.neg();
    // Order the pair so the call below always has axes ascending; swapping the
    // pair is the same as negating c.
    let c_lo = if j1 < j2 { c } else { &neg_c };
    star_shift(dec, &[lo.0, hi.0], &[lo.1, hi.1], &[c_lo.clone(), c_lo.neg()])
}

/// For axes `J` (strictly increasing, `|J| >= 2`), term indices `i_j` and shifts
/// `c_j` on `[d] \ J` summing to zero: `b_{j,i_j} += (x)_{j' in J, j' != j} a_{j',i_{j'}} (x) c_j`.
pub fn star_shift(
    dec: &SliceDecomposition,
    axes: &[usize],
    indices: &[usize],
    shifts: &[Tensor],
) -> Result<SliceDecomposition> {
    let d = dec.order();
    if axes.len() < 2 || !axes.windows(2).all(|w| w[0] < w[1]) || axes.iter().any(|&j| j >= d) {
        return Err(Error::PreconditionFailed(format!(
            "star shift axes {axes:?} must be increasing, in range and at least two"
        )));
    }
    if indices.len() != axes.len() || shifts.len() != axes.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} axes, {} indices, {} shifts",
            axes.len(),
            indices.len(),
            shifts.len()
        )));
    }
    let rest_axes = complement_axes(d, axes);
    let rest_dims: Vec<usize> = rest_axes.iter().map(|&a| dec.dims()[a]).collect();
    let mut sum = Tensor::zeros(dec.field(), &rest_dims);
    for c in shifts {
        if c.dims() != rest_dims.as_slice() {
            return Err(Error::DimensionMismatch(format!(
                "shift dims {:?}, expected {:?}",
                c.dims(),
                rest_dims
            )));
        }
        sum.add_scaled(c, 1)?;
    }
    if !sum.is_zero() {
        return Err(Error::NonZeroShiftSum);
    }
    let mut a_vecs = Vec::with_capacity(axes.len());
    for (&j, &i) in axes.iter().zip(indices) {
        a_vecs.push(dec.term(j, i)?.a.clone());
    }
    let mut out = dec.clone();
    for (t, (&j, &i)) in axes.iter().zip(indices).enumerate() {
        if shifts[t].is_zero() {
            continue;
        }
        let factors: Vec<(usize, &Vector)> = axes
            .iter()
            .zip(&a_vecs)
            .filter(|(&j2, _)| j2 != j)
            .map(|(&j2, a)| (j2, a))
            .collect();
        let delta = product_without(dec, j, &factors, &rest_axes, &shifts[t])?;
        out.term_mut(j, i)?.b.add_scaled(&delta, 1)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;
    use crate::sample::{random_decomposition, random_invertible, random_tensor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn vec(f: Field, e: &[u32]) -> Vector {
        Vector::new(f, e.to_vec())
    }

    #[test]
    fn identity_change_is_noop() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Field::of(3);
        let dec = random_decomposition(&mut rng, f, &[3, 2, 2], &[2, 1, 1]).unwrap();
        assert_eq!(basis_change(&dec, 0, &Matrix::identity(f, 2)).unwrap(), dec);
    }

    #[test]
    fn swap_change_swaps_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = Field::of(2);
        let dec = random_decomposition(&mut rng, f, &[3, 2, 2], &[2, 0, 1]).unwrap();
        let swap = Matrix::new(f, 2, 2, vec![0, 1, 1, 0]).unwrap();
        let out = basis_change(&dec, 0, &swap).unwrap();
        assert_eq!(out.terms(0)[0], dec.terms(0)[1]);
        assert_eq!(out.terms(0)[1], dec.terms(0)[0]);
    }

    #[test]
    fn singular_change_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = Field::of(2);
        let dec = random_decomposition(&mut rng, f, &[2, 2, 2], &[2, 0, 0]).unwrap();
        let sing = Matrix::new(f, 2, 2, vec![1, 1, 1, 1]).unwrap();
        assert_eq!(basis_change(&dec, 0, &sing), Err(Error::SingularChange));
    }

    #[test]
    fn basis_changes_preserve_and_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for p in [2, 3, 5] {
            let f = Field::of(p);
            let dec = random_decomposition(&mut rng, f, &[3, 3, 2], &[1, 3, 1]).unwrap();
            let g = random_invertible(&mut rng, f, 3);
            let h = random_invertible(&mut rng, f, 3);
            let once = basis_change(&dec, 1, &h).unwrap();
            assert_eq!(once.assemble(), dec.assemble());
            let twice = basis_change(&once, 1, &g).unwrap();
            assert_eq!(twice, basis_change(&dec, 1, &g.mul(&h).unwrap()).unwrap());
            assert_eq!(twice.subspace_tuple(), dec.subspace_tuple());
        }
    }

    #[test]
    fn regroup_identity_tensor() {
        let f = Field::of(2);
        let e = |i| Vector::unit(f, 2, i);
        let trd = TensorRankDecomposition::new(
            f,
            &[2, 2, 2],
            vec![vec![e(0), e(0), e(0)], vec![e(1), e(1), e(1)]],
        )
        .unwrap();
        let dec = regroup_tensor_rank(&trd, &[vec![0, 1], vec![], vec![]]).unwrap();
        assert_eq!(dec.shape(), vec![2, 0, 0]);
        // term i: indicator of x = i times the indicator of y = z = i
        for i in 0..2 {
            assert_eq!(dec.terms(0)[i].a, e(i));
            let mut b = Tensor::zeros(f, &[2, 2]);
            b.set(&[i, i], 1);
            assert_eq!(dec.terms(0)[i].b, b);
        }
        assert_eq!(dec.assemble(), Tensor::identity(f, 3, 2));
        let mixed = regroup_tensor_rank(&trd, &[vec![1], vec![], vec![0]]).unwrap();
        assert_eq!(mixed.assemble(), trd.assemble());
        assert!(matches!(
            regroup_tensor_rank(&trd, &[vec![0, 0], vec![1], vec![]]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(regroup_tensor_rank(&trd, &[vec![0], vec![], vec![]]), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn slice_by_axis_examples() {
        let f = Field::of(2);
        assert!(slice_by_axis(&Tensor::zeros(f, &[2, 2, 2]), 1).unwrap().is_empty());
        let id = Tensor::identity(f, 3, 2);
        let dec = slice_by_axis(&id, 0).unwrap();
        assert_eq!(dec.shape(), vec![2, 0, 0]);
        assert_eq!(dec.terms(0)[0].a, vec(f, &[1, 0]));
        assert_eq!(dec.terms(0)[1].a, vec(f, &[0, 1]));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let t = random_tensor(&mut rng, f, &[2, 2, 2]);
            for axis in 0..3 {
                assert_eq!(slice_by_axis(&t, axis).unwrap().assemble(), t);
            }
        }
    }

    #[test]
    fn pair_shift_order_three_display() {
        // a(x) b(y,z) + c(y) d(x,z) -> b' = b + c (x) e, d' = d - a (x) e
        let f = Field::of(3);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = vec(f, &[1, 2]);
        let c = vec(f, &[2, 0, 1]);
        let b = random_tensor(&mut rng, f, &[3, 2]);
        let dd = random_tensor(&mut rng, f, &[2, 2]);
        let e = random_tensor(&mut rng, f, &[2]);
        let mut dec = SliceDecomposition::empty(f, &[2, 3, 2]);
        dec.push(0, a.clone(), b.clone()).unwrap();
        dec.push(1, c.clone(), dd.clone()).unwrap();
        let out = pair_shift(&dec, (0, 0), (1, 0), &e).unwrap();
        let b2 = b.add(&Tensor::from_vector(&c).outer(&e).unwrap()).unwrap();
        let d2 = dd.sub(&Tensor::from_vector(&a).outer(&e).unwrap()).unwrap();
        assert_eq!(out.terms(0)[0].b, b2);
        assert_eq!(out.terms(1)[0].b, d2);
        assert_eq!(out.assemble(), dec.assemble());
        // swapped argument order gives the same rewrite
        assert_eq!(pair_shift(&dec, (1, 0), (0, 0), &e.neg()).unwrap(), out);
        // zero shift and undo
        assert_eq!(pair_shift(&dec, (0, 0), (1, 0), &Tensor::zeros(f, &[2])).unwrap(), dec);
        assert_eq!(pair_shift(&out, (0, 0), (1, 0), &e.neg()).unwrap(), dec);
    }

    #[test]
    fn star_shift_lambda_display() {
        // d = 3, J = [3]: b_1 += l1 a_2 (x) a_3 etc., with (1, 1, -2) over F_5
        let f = Field::of(5);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let dec = random_decomposition(&mut rng, f, &[2, 2, 2], &[1, 1, 1]).unwrap();
        let lambdas = [1, 1, f.reduce(-2)].map(|l| Tensor::scalar(f, l));
        let out = star_shift(&dec, &[0, 1, 2], &[0, 0, 0], &lambdas).unwrap();
        assert_eq!(out.assemble(), dec.assemble());
        let a = |j: usize| Tensor::from_vector(&dec.terms(j)[0].a);
        let expect0 = dec.terms(0)[0].b.add(&a(1).outer(&a(2)).unwrap()).unwrap();
        assert_eq!(out.terms(0)[0].b, expect0);
        let expect2 = dec.terms(2)[0].b.add(&a(0).outer(&a(1)).unwrap().scale(3)).unwrap();
        assert_eq!(out.terms(2)[0].b, expect2);
        let bad = [1, 1, 1].map(|l| Tensor::scalar(f, l));
        assert_eq!(star_shift(&dec, &[0, 1, 2], &[0, 0, 0], &bad), Err(Error::NonZeroShiftSum));
    }

    #[test]
    fn star_shift_zero_is_identity_and_pair_agrees() {
        let f = Field::of(3);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let dec = random_decomposition(&mut rng, f, &[2, 3, 2, 2], &[1, 2, 1, 1]).unwrap();
        let zeros = vec![Tensor::zeros(f, &[2, 2]); 2];
        assert_eq!(star_shift(&dec, &[1, 3], &[1, 0], &zeros).unwrap(), dec);
        let c = random_tensor(&mut rng, f, &[2, 2]);
        let via_star = star_shift(&dec, &[1, 3], &[1, 0], &[c.clone(), c.neg()]).unwrap();
        assert_eq!(via_star, pair_shift(&dec, (1, 1), (3, 0), &c).unwrap());
    }

    #[test]
    fn star_shift_is_a_chain_of_pair_shifts() {
        // c_1..c_m with zero sum equals pair shifts along consecutive pairs with
        // partial sums s_t = c_1 + ... + c_t, each lifted by the remaining factors.
        let f = Field::of(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let dec = random_decomposition(&mut rng, f, &[2, 2, 2, 2], &[1, 1, 1, 1]).unwrap();
        let axes = [0, 1, 2];
        let c1 = random_tensor(&mut rng, f, &[2]);
        let c2 = random_tensor(&mut rng, f, &[2]);
        let c3 = c1.add(&c2).unwrap().neg();
        let star = star_shift(&dec, &axes, &[0, 0, 0], &[c1.clone(), c2.clone(), c3]).unwrap();
        let a = |j: usize| Tensor::from_vector(&dec.terms(j)[0].a);
        // pair (0,1) with c = a_2 (x) c1 on axes {2,3}; pair (1,2) with a_0 (x) (c1 + c2) on axes {0,3}
        let first = pair_shift(&dec, (0, 0), (1, 0), &a(2).outer(&c1).unwrap()).unwrap();
        let s2 = c1.add(&c2).unwrap();
        let chained = pair_shift(&first, (1, 0), (2, 0), &a(0).outer(&s2).unwrap()).unwrap();
        assert_eq!(chained.assemble(), star.assemble());
        assert_eq!(chained, star);
    }
}
