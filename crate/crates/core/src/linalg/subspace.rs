//! Subspaces of `F_p^n` stored by their canonical reduced row-echelon basis,
//! so equality of subspaces is equality of basis matrices.

use crate::error::{Error, Result};
use crate::linalg::field::Field;
use crate::linalg::matrix::{Matrix, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(field: Field, ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::zeros(field, 0, ambient_dim) }
    }

    pub fn full(field: Field, ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::identity(field, ambient_dim) }
    }

    /// The span of `vs`, canonicalized.
    pub fn from_vectors(field: Field, ambient_dim: usize, vs: &[Vector]) -> Result<Self> {
        let m = Matrix::from_rows(field, ambient_dim, vs)?;
        Ok(Subspace::from_rows(&m))
    }

    /// Row space of a matrix.
    pub fn from_rows(m: &Matrix) -> Self {
        let r = m.rref();
        Subspace { ambient_dim: m.cols(), basis: r.matrix.truncate_rows(r.rank) }
    }

    /// Wraps a matrix that is already in reduced row-echelon form with no zero rows.
    fn from_canonical(basis: Matrix) -> Self {
        Subspace { ambient_dim: basis.cols(), basis }
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    pub fn contains(&self, v: &Vector) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let mut rows = self.basis_vectors();
        rows.push(v.clone());
        Matrix::from_rows(self.field(), self.ambient_dim, &rows)
            .map(|m| m.rank() == self.dim())
            .unwrap_or(false)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    /// Every vector of the subspace, in lexicographic order of coefficients.
    pub fn elements(&self) -> Vec<Vector> {
        let f = self.field();
        let basis = self.basis_vectors();
        Vector::all(f, self.dim())
            .map(|coeffs| {
                basis
                    .iter()
                    .zip(coeffs.entries())
                    .fold(Vector::zeros(f, self.ambient_dim), |acc, (b, &c)| acc.add(&b.scale(c)))
            })
            .collect()
    }

    fn check_ambient(spaces: &[&Subspace]) -> Result<(Field, usize)> {
        let first = spaces
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty list of subspaces".into()))?;
        for s in spaces {
            if s.ambient_dim != first.ambient_dim {
                return Err(Error::DimensionMismatch(format!(
                    "ambient dimensions {} and {}",
                    first.ambient_dim, s.ambient_dim
                )));
            }
            if s.field() != first.field() {
                return Err(Error::FieldMismatch(first.field().p(), s.field().p()));
            }
        }
        Ok((first.field(), first.ambient_dim))
    }

    pub fn sum(spaces: &[&Subspace]) -> Result<Subspace> {
        let (field, n) = Subspace::check_ambient(spaces)?;
        let rows: Vec<Vector> = spaces.iter().flat_map(|s| s.basis_vectors()).collect();
        Subspace::from_vectors(field, n, &rows)
    }

    /// Intersection of two subspaces, from the left kernel of the stacked bases.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        let (field, n) = Subspace::check_ambient(&[self, other])?;
        let du = self.dim();
        let mut rows = self.basis_vectors();
        rows.extend(other.basis_vectors());
        let stacked = Matrix::from_rows(field, n, &rows)?;
        // (alpha, beta) with alpha U + beta V = 0 gives alpha U in both spaces.
        let left_kernel = stacked.transpose().kernel();
        let vectors: Vec<Vector> = left_kernel
            .iter()
            .map(|k| {
                (0..du).fold(Vector::zeros(field, n), |acc, i| {
                    acc.add(&self.basis.row(i).scale(k[i]))
                })
            })
            .collect();
        Subspace::from_vectors(field, n, &vectors)
    }

    /// True iff `dim(sum) = sum of dims`.
    pub fn is_direct_sum(spaces: &[&Subspace]) -> Result<bool> {
        let total: usize = spaces.iter().map(|s| s.dim()).sum();
        Ok(Subspace::sum(spaces)?.dim() == total)
    }
}

/// Gaussian binomial coefficient `[n choose r]_q`.
pub fn gaussian_binomial(n: usize, r: usize, q: u64) -> u128 {
    if r > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..r {
        num *= q.pow(n as u32) - q.pow(i as u32);
        den *= q.pow(r as u32) - q.pow(i as u32);
    }
    num / den
}

/// Number of ordered bases of an `r`-dimensional space over `F_q`:
/// `prod_{i<r} (q^r - q^i)`.
pub fn ordered_basis_count(r: usize, q: u64) -> u128 {
    let q = q as u128;
    (0..r).map(|i| q.pow(r as u32) - q.pow(i as u32)).product()
}

/// All `r`-dimensional subspaces of `F_p^n`, each exactly once, sorted
/// lexicographically by canonical basis matrix.
///
/// Fails with [`Error::BudgetExceeded`] when there are more than `limit` of them.
pub fn enumerate_subspaces(
    field: Field,
    n: usize,
    r: usize,
    limit: u64,
) -> Result<impl Iterator<Item = Subspace>> {
    if r > n {
        return Err(Error::DimensionMismatch(format!("dimension {r} exceeds ambient {n}")));
    }
    let count = gaussian_binomial(n, r, field.size());
    if count > limit as u128 {
        return Err(Error::BudgetExceeded { lower_bound: 0 });
    }
    let mut out: Vec<Subspace> = Vec::with_capacity(count as usize);
    for pivots in combinations(n, r) {
        let mut free = Vec::new();
        for (row, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..n {
                if !pivots.contains(&c) {
                    free.push((row, c));
                }
            }
        }
        for assignment in Vector::all(field, free.len()) {
            let mut m = Matrix::zeros(field, r, n);
            for (row, &pc) in pivots.iter().enumerate() {
                m.set(row, pc, 1);
            }
            for (&(row, c), &v) in free.iter().zip(assignment.entries()) {
                m.set(row, c, v);
            }
            out.push(Subspace::from_canonical(m));
        }
    }
    out.sort_by(|a, b| a.basis.data().cmp(b.basis.data()));
    Ok(out.into_iter())
}

/// `r`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, r, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn v(p: u32, e: &[u32]) -> Vector {
        Vector::new(Field::of(p), e.to_vec())
    }

    #[test]
    fn empty_list_gives_zero_subspace() {
        let s = Subspace::from_vectors(Field::of(2), 3, &[]).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s, Subspace::zero(Field::of(2), 3));
    }

    #[test]
    fn spanning_pair_gives_full_space() {
        let f = Field::of(2);
        let s = Subspace::from_vectors(f, 2, &[v(2, &[1, 1]), v(2, &[0, 1])]).unwrap();
        assert_eq!(s.basis(), &Matrix::identity(f, 2));
    }

    #[test]
    fn proportional_vectors_over_f5() {
        let s = Subspace::from_vectors(Field::of(5), 3, &[v(5, &[1, 2, 0]), v(5, &[2, 4, 0])]).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis_vectors(), vec![v(5, &[1, 2, 0])]);
    }

    #[test]
    fn sum_intersection_direct_sum() {
        let f = Field::of(2);
        let e = |i| Vector::unit(f, 3, i);
        let e1 = Subspace::from_vectors(f, 2, &[Vector::unit(f, 2, 0)]).unwrap();
        let e2 = Subspace::from_vectors(f, 2, &[Vector::unit(f, 2, 1)]).unwrap();
        assert_eq!(Subspace::sum(&[&e1, &e2]).unwrap(), Subspace::full(f, 2));
        assert!(Subspace::is_direct_sum(&[&e1, &e2]).unwrap());

        let a = Subspace::from_vectors(f, 3, &[e(0), e(1)]).unwrap();
        let b = Subspace::from_vectors(f, 3, &[e(1), e(2)]).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), Subspace::from_vectors(f, 3, &[e(1)]).unwrap());

        let l1 = Subspace::from_vectors(f, 2, &[v(2, &[1, 1])]).unwrap();
        assert!(!Subspace::is_direct_sum(&[&l1, &e2, &e1]).unwrap());
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let f = Field::of(2);
        let a = Subspace::full(f, 2);
        let b = Subspace::full(f, 3);
        assert!(Subspace::sum(&[&a, &b]).is_err());
        assert!(a.intersect(&b).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let f2 = Field::of(2);
        let lines: Vec<_> = enumerate_subspaces(f2, 2, 1, 1000).unwrap().collect();
        assert_eq!(lines.len(), 3);
        // Brute-force oracle: distinct spans of nonzero vectors.
        let spans: BTreeSet<_> = Vector::all(f2, 2)
            .filter(|x| !x.is_zero())
            .map(|x| Subspace::from_vectors(f2, 2, &[x]).unwrap())
            .collect();
        assert_eq!(spans, lines.iter().cloned().collect());

        let zero: Vec<_> = enumerate_subspaces(f2, 3, 0, 10).unwrap().collect();
        assert_eq!(zero, vec![Subspace::zero(f2, 3)]);

        let f3 = Field::of(3);
        let full: Vec<_> = enumerate_subspaces(f3, 2, 2, 10).unwrap().collect();
        assert_eq!(full, vec![Subspace::full(f3, 2)]);
    }

    #[test]
    fn enumeration_respects_budget() {
        assert_eq!(
            enumerate_subspaces(Field::of(3), 4, 2, 10).err(),
            Some(Error::BudgetExceeded { lower_bound: 0 })
        );
    }

    #[test]
    fn enumeration_matches_gaussian_binomial_and_is_sorted() {
        for p in [2u32, 3] {
            let f = Field::of(p);
            for n in 0..=4 {
                for r in 0..=n {
                    let all: Vec<_> = enumerate_subspaces(f, n, r, 1_000_000).unwrap().collect();
                    assert_eq!(all.len() as u128, gaussian_binomial(n, r, p as u64));
                    let distinct: BTreeSet<_> = all.iter().cloned().collect();
                    assert_eq!(distinct.len(), all.len());
                    assert!(all.windows(2).all(|w| w[0].basis().data() < w[1].basis().data()));
                    for s in &all {
                        assert_eq!(&Subspace::from_rows(s.basis()), s);
                    }
                }
            }
        }
    }

    #[test]
    fn modular_law_exhaustive() {
        for p in [2u32, 3] {
            let f = Field::of(p);
            for n in 1..=3 {
                let all: Vec<Subspace> =
                    (0..=n).flat_map(|r| enumerate_subspaces(f, n, r, 10_000).unwrap()).collect();
                for u in &all {
                    for w in &all {
                        let s = Subspace::sum(&[u, w]).unwrap();
                        let i = u.intersect(w).unwrap();
                        assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
                        assert!(u.contains_subspace(&i) && w.contains_subspace(&i));
                    }
                }
            }
        }
    }

    #[test]
    fn basis_counts() {
        assert_eq!(ordered_basis_count(0, 2), 1);
        assert_eq!(ordered_basis_count(1, 2), 1);
        assert_eq!(ordered_basis_count(2, 2), 6);
        assert_eq!(ordered_basis_count(1, 3), 2);
    }
}
