//! Dense order-`d` tensors over `F_p`.
//!
//! A tensor is a function `[n_1] x ... x [n_d] -> F_p` stored row-major (last
//! axis fastest). Coordinates are 0-based. Order 0 is allowed and holds a single
//! scalar; it is what a full contraction returns.

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tensor {
    field: Field,
    dims: Vec<usize>,
    data: Vec<u32>,
}

/// Axes of `0..d` not in the strictly increasing list `axes`.
pub fn complement_axes(d: usize, axes: &[usize]) -> Vec<usize> {
    (0..d).filter(|a| !axes.contains(a)).collect()
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Iterates over all multi-indices of `dims` in row-major order.
pub fn multi_indices(dims: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = dims.iter().product();
    let mut cur = vec![0usize; dims.len()];
    let mut first = true;
    (0..total).map(move |_| {
        if first {
            first = false;
        } else {
            for k in (0..dims.len()).rev() {
                cur[k] += 1;
                if cur[k] < dims[k] {
                    break;
                }
                cur[k] = 0;
            }
        }
        cur.clone()
    })
}

fn strictly_increasing(axes: &[usize]) -> bool {
    axes.windows(2).all(|w| w[0] < w[1])
}

impl Tensor {
    pub fn new(field: Field, dims: Vec<usize>, data: Vec<u32>) -> Result<Self> {
        let len: usize = dims.iter().product();
        if data.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for dims {:?}",
                data.len(),
                dims
            )));
        }
        if dims.contains(&0) {
            return Err(Error::DimensionMismatch(format!("zero-length axis in {dims:?}")));
        }
        let data = data.into_iter().map(|v| v % field.p()).collect();
        Ok(Tensor { field, dims, data })
    }

    pub fn zeros(field: Field, dims: &[usize]) -> Self {
        let len = dims.iter().product();
        Tensor { field, dims: dims.to_vec(), data: vec![0; len] }
    }

    pub fn scalar(field: Field, v: u32) -> Self {
        Tensor { field, dims: vec![], data: vec![v % field.p()] }
    }

    pub fn from_vector(v: &Vector) -> Self {
        Tensor { field: v.field(), dims: vec![v.len()], data: v.entries().to_vec() }
    }

    /// Flattens to a vector of all entries in row-major order.
    pub fn to_vector(&self) -> Vector {
        Vector::new(self.field, self.data.clone())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// The value of an order-0 tensor.
    pub fn scalar_value(&self) -> Option<u32> {
        (self.dims.is_empty()).then(|| self.data[0])
    }

    fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.dims.len());
        index.iter().zip(&self.dims).fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn get(&self, index: &[usize]) -> u32 {
        self.data[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], v: u32) {
        let o = self.offset(index);
        self.data[o] = v % self.field.p();
    }

    fn check_same_shape(&self, other: &Tensor) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p(), other.field.p()));
        }
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same_shape(other)?;
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Tensor { field: f, dims: self.dims.clone(), data })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same_shape(other)?;
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Tensor { field: f, dims: self.dims.clone(), data })
    }

    pub fn scale(&self, s: u32) -> Tensor {
        let f = self.field;
        Tensor { field: f, dims: self.dims.clone(), data: self.data.iter().map(|&v| f.mul(v, s)).collect() }
    }

    pub fn neg(&self) -> Tensor {
        let f = self.field;
        Tensor { field: f, dims: self.dims.clone(), data: self.data.iter().map(|&v| f.neg(v)).collect() }
    }

    /// Adds `s * other` in place.
    pub fn add_scaled(&mut self, other: &Tensor, s: u32) -> Result<()> {
        self.check_same_shape(other)?;
        let f = self.field;
        if s == 0 {
            return Ok(());
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, f.mul(b, s));
        }
        Ok(())
    }

    /// Outer product with the axes of `other` appended after those of `self`.
    pub fn outer(&self, other: &Tensor) -> Result<Tensor> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p(), other.field.p()));
        }
        let f = self.field;
        let mut data = Vec::with_capacity(self.len() * other.len());
        for &a in &self.data {
            for &b in &other.data {
                data.push(f.mul(a, b));
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Ok(Tensor { field: f, dims, data })
    }

    /// Outer product of factors carrying global axis labels. Each factor's labels
    /// must be strictly increasing and the label sets pairwise disjoint; the
    /// result's axes are the sorted union of all labels.
    pub fn outer_labeled(field: Field, parts: &[(&[usize], &Tensor)]) -> Result<Tensor> {
        let mut all: Vec<(usize, usize, usize)> = Vec::new(); // (label, part, position)
        for (pi, (labels, t)) in parts.iter().enumerate() {
            if labels.len() != t.order() {
                return Err(Error::DimensionMismatch(format!(
                    "{} labels for an order-{} factor",
                    labels.len(),
                    t.order()
                )));
            }
            if !strictly_increasing(labels) {
                return Err(Error::DimensionMismatch(format!("labels {labels:?} not increasing")));
            }
            if t.field != field {
                return Err(Error::FieldMismatch(field.p(), t.field.p()));
            }
            for (pos, &l) in labels.iter().enumerate() {
                all.push((l, pi, pos));
            }
        }
        all.sort();
        if all.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::DimensionMismatch("overlapping axis labels".into()));
        }
        let dims: Vec<usize> = all.iter().map(|&(_, pi, pos)| parts[pi].1.dims[pos]).collect();
        // For each part, the stride its local offset picks up from each result axis.
        let part_strides: Vec<Vec<usize>> = parts.iter().map(|(_, t)| strides(&t.dims)).collect();
        let axis_contrib: Vec<(usize, usize)> =
            all.iter().map(|&(_, pi, pos)| (pi, part_strides[pi][pos])).collect();
        let total: usize = dims.iter().product();
        let mut data = Vec::with_capacity(total);
        let mut offsets = vec![0usize; parts.len()];
        for idx in multi_indices(&dims) {
            offsets.iter_mut().for_each(|o| *o = 0);
            for (axis, &i) in idx.iter().enumerate() {
                let (pi, s) = axis_contrib[axis];
                offsets[pi] += i * s;
            }
            let v = parts
                .iter()
                .zip(&offsets)
                .fold(1 % field.p(), |acc, ((_, t), &o)| field.mul(acc, t.data[o]));
            data.push(v);
        }
        Ok(Tensor { field, dims, data })
    }

    /// Places the vector `a` on axis `axis` and `b` on the remaining axes, in order.
    pub fn slice_product(a: &Vector, axis: usize, b: &Tensor) -> Result<Tensor> {
        let d = b.order() + 1;
        if axis >= d {
            return Err(Error::IndexOutOfRange(format!("axis {axis} in order {d}")));
        }
        let rest = complement_axes(d, &[axis]);
        let at = Tensor::from_vector(a);
        Tensor::outer_labeled(b.field, &[(&[axis], &at), (&rest, b)])
    }

    /// `small . self`: sums `small(x(J')) self(x)` over the axes `axes` of self.
    /// The result lives on the remaining axes in increasing order (order 0 when
    /// every axis is contracted).
    pub fn contract(&self, small: &Tensor, axes: &[usize]) -> Result<Tensor> {
        if !strictly_increasing(axes) || axes.iter().any(|&a| a >= self.order()) {
            return Err(Error::DimensionMismatch(format!(
                "contraction axes {axes:?} for order {}",
                self.order()
            )));
        }
        let sub_dims: Vec<usize> = axes.iter().map(|&a| self.dims[a]).collect();
        if sub_dims != small.dims {
            return Err(Error::DimensionMismatch(format!(
                "contracting {:?} against axes with dims {:?}",
                small.dims, sub_dims
            )));
        }
        if small.field != self.field {
            return Err(Error::FieldMismatch(self.field.p(), small.field.p()));
        }
        let f = self.field;
        let rest = complement_axes(self.order(), axes);
        let rest_dims: Vec<usize> = rest.iter().map(|&a| self.dims[a]).collect();
        let st = strides(&self.dims);
        let small_offsets: Vec<usize> = multi_indices(&sub_dims)
            .map(|idx| idx.iter().zip(axes).map(|(&i, &a)| i * st[a]).sum())
            .collect();
        let mut out = Vec::with_capacity(rest_dims.iter().product());
        for ridx in multi_indices(&rest_dims) {
            let base: usize = ridx.iter().zip(&rest).map(|(&i, &a)| i * st[a]).sum();
            let mut acc = 0;
            for (k, &so) in small_offsets.iter().enumerate() {
                let s = small.data[k];
                if s != 0 {
                    acc = f.add(acc, f.mul(s, self.data[base + so]));
                }
            }
            out.push(acc);
        }
        Ok(Tensor { field: f, dims: rest_dims, data: out })
    }

    pub fn contract_vector(&self, axis: usize, v: &Vector) -> Result<Tensor> {
        self.contract(&Tensor::from_vector(v), &[axis])
    }

    /// Applies the `n_j x n_j` matrix `m` along axis `axis`.
    pub fn mode_product(&self, axis: usize, m: &Matrix) -> Result<Tensor> {
        if axis >= self.order() || m.cols() != self.dims[axis] || m.rows() != self.dims[axis] {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on axis {axis} of {:?}",
                m.rows(),
                m.cols(),
                self.dims
            )));
        }
        let f = self.field;
        let n = self.dims[axis];
        let inner: usize = self.dims[axis + 1..].iter().product();
        let outer: usize = self.dims[..axis].iter().product();
        let mut out = vec![0u32; self.len()];
        for o in 0..outer {
            for r in 0..n {
                for c in 0..n {
                    let coef = m.get(r, c);
                    if coef == 0 {
                        continue;
                    }
                    let src = (o * n + c) * inner;
                    let dst = (o * n + r) * inner;
                    for t in 0..inner {
                        out[dst + t] = f.add(out[dst + t], f.mul(coef, self.data[src + t]));
                    }
                }
            }
        }
        Ok(Tensor { field: f, dims: self.dims.clone(), data: out })
    }

    /// The order-(d-1) slice `T(..., value, ...)` at `axis` (0-based value).
    pub fn fix_coordinate(&self, axis: usize, value: usize) -> Result<Tensor> {
        if axis >= self.order() || value >= self.dims[axis] {
            return Err(Error::IndexOutOfRange(format!(
                "coordinate {value} on axis {axis} of {:?}",
                self.dims
            )));
        }
        let e = Vector::unit(self.field, self.dims[axis], value);
        self.contract_vector(axis, &e)
    }

    /// Inverse of slicing: `slices[v]` becomes the slice at coordinate `v` of `axis`.
    pub fn stack(axis: usize, slices: &[Tensor]) -> Result<Tensor> {
        let first = slices
            .first()
            .ok_or_else(|| Error::DimensionMismatch("no slices to stack".into()))?;
        let f = first.field;
        let mut acc: Option<Tensor> = None;
        for (v, s) in slices.iter().enumerate() {
            let term = Tensor::slice_product(&Vector::unit(f, slices.len(), v), axis, s)?;
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        Ok(acc.expect("nonempty"))
    }

    /// The `n_axis x (product of other dims)` flattening along `axis`.
    pub fn unfold(&self, axis: usize) -> Matrix {
        let n = self.dims[axis];
        let rest = self.len() / n;
        let mut perm = vec![axis];
        perm.extend(complement_axes(self.order(), &[axis]));
        let p = self.permute_axes(&perm).expect("valid permutation");
        Matrix::new(self.field, n, rest, p.data).expect("consistent sizes")
    }

    /// Result axis `i` is axis `perm[i]` of self.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<Tensor> {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.order()).collect::<Vec<_>>() {
            return Err(Error::DimensionMismatch(format!("{perm:?} is not a permutation")));
        }
        let dims: Vec<usize> = perm.iter().map(|&a| self.dims[a]).collect();
        let st = strides(&self.dims);
        let data = multi_indices(&dims)
            .map(|idx| {
                let o: usize = idx.iter().zip(perm).map(|(&i, &a)| i * st[a]).sum();
                self.data[o]
            })
            .collect();
        Ok(Tensor { field: self.field, dims, data })
    }

    /// `I_{d,k}(x) = 1` iff all coordinates agree.
    pub fn identity(field: Field, d: usize, k: usize) -> Tensor {
        let dims = vec![k; d];
        let mut t = Tensor::zeros(field, &dims);
        for i in 0..k {
            t.set(&vec![i; d], 1);
        }
        t
    }

    /// Block-diagonal sum: dims add, `self` occupies the low corner.
    pub fn direct_sum(&self, other: &Tensor) -> Result<Tensor> {
        if self.order() != other.order() {
            return Err(Error::DimensionMismatch("direct sum of different orders".into()));
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mut t = Tensor::zeros(self.field, &dims);
        for idx in multi_indices(&self.dims) {
            t.set(&idx, self.get(&idx));
        }
        for idx in multi_indices(&other.dims) {
            let shifted: Vec<usize> = idx.iter().zip(&self.dims).map(|(i, n)| i + n).collect();
            t.set(&shifted, other.get(&idx));
        }
        Ok(t)
    }

    /// Every tensor of the given shape, in lexicographic order of entries.
    pub fn all(field: Field, dims: &[usize]) -> impl Iterator<Item = Tensor> + '_ {
        let len: usize = dims.iter().product();
        Vector::all(field, len).map(move |v| Tensor { field, dims: dims.to_vec(), data: v.into_entries() })
    }
}

impl From<&Vector> for Tensor {
    fn from(v: &Vector) -> Tensor {
        Tensor::from_vector(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::of(2)
    }

    fn vt(p: u32, e: &[u32]) -> Tensor {
        Tensor::from_vector(&Vector::new(Field::of(p), e.to_vec()))
    }

    #[test]
    fn vector_contraction() {
        let r = vt(2, &[1, 1]).contract(&vt(2, &[1, 0]), &[0]).unwrap();
        assert_eq!(r.scalar_value(), Some(1));
    }

    #[test]
    fn zero_vector_contracts_to_zero() {
        let t = Tensor::identity(Field::of(3), 3, 2);
        let r = t.contract(&vt(3, &[0, 0]), &[1]).unwrap();
        assert_eq!(r.dims(), &[2, 2]);
        assert!(r.is_zero());
    }

    #[test]
    fn contraction_recovers_coefficients_of_spanned_elements() {
        // Brute-force oracle on 2x2x2: T = sum a (x) c (x) p_{a,c}, apply a* (x) c*.
        let f = f2();
        let a = [Vector::new(f, vec![1, 1]), Vector::new(f, vec![0, 1])];
        let c = [Vector::new(f, vec![1, 0]), Vector::new(f, vec![1, 1])];
        let p = [[vec![1, 0], vec![0, 1]], [vec![1, 1], vec![0, 0]]];
        let ad = crate::linalg::dual_family(f, 2, &a).unwrap().duals;
        let cd = crate::linalg::dual_family(f, 2, &c).unwrap().duals;
        let mut t = Tensor::zeros(f, &[2, 2, 2]);
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    let mut acc = 0;
                    for i in 0..2 {
                        for j in 0..2 {
                            acc ^= a[i][x] * c[j][y] * p[i][j][z];
                        }
                    }
                    t.set(&[x, y, z], acc);
                }
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                let dual = Tensor::from_vector(&ad[i]).outer(&Tensor::from_vector(&cd[j])).unwrap();
                let got = t.contract(&dual, &[0, 1]).unwrap();
                assert_eq!(got.data(), &p[i][j][..]);
            }
        }
    }

    #[test]
    fn outer_products() {
        let f = f2();
        let e1 = vt(2, &[1, 0]);
        let m = e1.outer(&e1).unwrap();
        assert_eq!(m.data(), &[1, 0, 0, 0]);
        assert_eq!(Tensor::outer_labeled(f, &[(&[0], &e1)]).unwrap(), e1);
        let ones = vt(2, &[1, 1]);
        let cube = ones.outer(&ones).unwrap().outer(&ones).unwrap();
        assert_eq!(cube.dims(), &[2, 2, 2]);
        assert!(cube.data().iter().all(|&v| v == 1));
    }

    #[test]
    fn outer_labeled_interleaves_axes() {
        let f = Field::of(5);
        let a = vt(5, &[1, 2]);
        let b = Tensor::new(f, vec![3, 2], vec![1, 2, 3, 4, 0, 1]).unwrap();
        let t = Tensor::outer_labeled(f, &[(&[1], &a), (&[0, 2], &b)]).unwrap();
        assert_eq!(t.dims(), &[3, 2, 2]);
        for idx in multi_indices(t.dims()) {
            assert_eq!(t.get(&idx), f.mul(a.get(&[idx[1]]), b.get(&[idx[0], idx[2]])));
        }
        assert!(Tensor::outer_labeled(f, &[(&[0], &a), (&[0, 1], &b)]).is_err());
    }

    #[test]
    fn identity_tensors() {
        assert_eq!(Tensor::identity(f2(), 2, 2).data(), &[1, 0, 0, 1]);
        assert_eq!(Tensor::identity(f2(), 3, 1).data(), &[1]);
    }

    #[test]
    fn slicing() {
        let t = Tensor::identity(f2(), 3, 2);
        let s = t.fix_coordinate(0, 0).unwrap();
        assert_eq!(s.data(), &[1, 0, 0, 0]);
        assert!(Tensor::zeros(f2(), &[2, 3]).fix_coordinate(1, 2).unwrap().is_zero());
        assert!(t.fix_coordinate(0, 2).is_err());
    }

    #[test]
    fn stacking_slices_reassembles() {
        let f = Field::of(3);
        let t = Tensor::new(f, vec![2, 3, 2], (0..12).collect()).unwrap();
        for axis in 0..3 {
            let slices: Vec<_> = (0..t.dims()[axis]).map(|v| t.fix_coordinate(axis, v).unwrap()).collect();
            assert_eq!(Tensor::stack(axis, &slices).unwrap(), t);
        }
    }

    #[test]
    fn mode_product_with_identity_is_noop() {
        let f = Field::of(3);
        let t = Tensor::new(f, vec![2, 3], vec![1, 2, 0, 1, 1, 2]).unwrap();
        assert_eq!(t.mode_product(1, &Matrix::identity(f, 3)).unwrap(), t);
    }

    #[test]
    fn unfold_rank_of_identity() {
        let t = Tensor::identity(f2(), 3, 2);
        assert_eq!(t.unfold(1).rank(), 2);
    }
}
