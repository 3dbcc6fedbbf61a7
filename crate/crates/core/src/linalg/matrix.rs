//! Dense vectors and matrices over `F_p`, Gaussian elimination and the
//! routines built on it: solving, kernels, inverses and dual families.

use crate::error::{Error, Result};
use crate::linalg::field::Field;

/// A vector in `F_p^n`; the one-variable functions `[n] -> F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    field: Field,
    entries: Vec<u32>,
}

impl Vector {
    /// Builds a vector, reducing every entry mod p.
    pub fn new(field: Field, entries: Vec<u32>) -> Self {
        let entries = entries.into_iter().map(|v| v % field.p()).collect();
        Vector { field, entries }
    }

    pub fn zeros(field: Field, n: usize) -> Self {
        Vector { field, entries: vec![0; n] }
    }

    /// The `i`th standard basis vector (0-based).
    pub fn unit(field: Field, n: usize, i: usize) -> Self {
        let mut v = Vector::zeros(field, n);
        v.entries[i] = 1;
        v
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    /// The pairing `a.a' = sum_x a(x) a'(x)`.
    pub fn dot(&self, other: &Vector) -> u32 {
        assert_eq!(self.len(), other.len(), "dot: length mismatch");
        let f = self.field;
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    pub fn scale(&self, s: u32) -> Vector {
        let f = self.field;
        Vector { field: f, entries: self.entries.iter().map(|&v| f.mul(v, s)).collect() }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "add: length mismatch");
        let f = self.field;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.add(a, b)).collect();
        Vector { field: f, entries }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "sub: length mismatch");
        let f = self.field;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.sub(a, b)).collect();
        Vector { field: f, entries }
    }

    /// Index of the first nonzero entry.
    pub fn leading_index(&self) -> Option<usize> {
        self.entries.iter().position(|&v| v != 0)
    }

    /// Iterates over every vector of `F_p^n` in lexicographic order.
    pub fn all(field: Field, n: usize) -> impl Iterator<Item = Vector> {
        let total = (field.size()).pow(n as u32);
        (0..total).map(move |mut code| {
            let mut entries = vec![0u32; n];
            for slot in entries.iter_mut().rev() {
                *slot = (code % field.size()) as u32;
                code /= field.size();
            }
            Vector { field, entries }
        })
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.entries[i]
    }
}

/// A dense row-major matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data.into_iter().map(|v| v % field.p()).collect();
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Stacks equal-length vectors as rows. `cols` is only used for an empty list.
    pub fn from_rows(field: Field, cols: usize, rows: &[Vector]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            if r.field() != field {
                return Err(Error::FieldMismatch(r.field().p(), field.p()));
            }
            data.extend_from_slice(r.entries());
        }
        Ok(Matrix { field, rows: rows.len(), cols, data })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p();
    }

    pub fn row(&self, r: usize) -> Vector {
        Vector::new(self.field, self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn column(&self, c: usize) -> Vector {
        Vector::new(self.field, (0..self.rows).map(|r| self.get(r, c)).collect())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vector(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let f = self.field;
        let out = (0..self.rows)
            .map(|r| (0..self.cols).fold(0, |acc, c| f.add(acc, f.mul(self.get(r, c), v[c]))))
            .collect();
        Ok(Vector::new(f, out))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Reduced row-echelon form, rank and pivot columns.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(pr, row);
            let inv = f.inv(m.get(row, col)).expect("nonzero pivot");
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), inv);
                m.data[row * m.cols + c] = v;
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.data[r * m.cols + c] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, rank: row, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Keeps the first `n` rows.
    pub fn truncate_rows(&self, n: usize) -> Matrix {
        Matrix {
            field: self.field,
            rows: n,
            cols: self.cols,
            data: self.data[..n * self.cols].to_vec(),
        }
    }

    /// Basis of the right kernel `{x : self * x = 0}`, one vector per free column,
    /// with that free variable set to 1 and the other free variables 0.
    pub fn kernel(&self) -> Vec<Vector> {
        let f = self.field;
        let Rref { matrix, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = vec![0u32; self.cols];
                x[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = f.neg(matrix.get(r, free));
                }
                Vector::new(f, x)
            })
            .collect()
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.data[r * 2 * n + c] = self.get(r, c);
            }
            aug.data[r * 2 * n + n + r] = 1;
        }
        let Rref { matrix, pivots, .. } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.data[r * n + c] = matrix.get(r, n + c);
            }
        }
        Some(inv)
    }
}

/// Solves `a x = b`, returning the solution with all free variables zero, or
/// `None` when the system is inconsistent.
pub fn solve_linear(a: &Matrix, b: &Vector) -> Result<Option<Vector>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} equations but right-hand side of length {}",
            a.rows(),
            b.len()
        )));
    }
    let f = a.field();
    let (rows, cols) = (a.rows(), a.cols());
    let mut aug = Matrix::zeros(f, rows, cols + 1);
    for r in 0..rows {
        for c in 0..cols {
            aug.data[r * (cols + 1) + c] = a.get(r, c);
        }
        aug.data[r * (cols + 1) + cols] = b[r];
    }
    let Rref { matrix, pivots, .. } = aug.rref();
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = vec![0u32; cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = matrix.get(r, cols);
    }
    Ok(Some(Vector::new(f, x)))
}

/// A family of vectors together with a biorthogonal dual family:
/// `duals[i] . originals[j] = [i == j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualFamily {
    pub originals: Vec<Vector>,
    pub duals: Vec<Vector>,
}

impl DualFamily {
    pub fn len(&self) -> usize {
        self.originals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.originals.is_empty()
    }

    /// Checks biorthogonality of an arbitrary candidate pair of families.
    pub fn is_biorthogonal(originals: &[Vector], duals: &[Vector]) -> bool {
        originals.len() == duals.len()
            && duals.iter().enumerate().all(|(i, d)| {
                originals
                    .iter()
                    .enumerate()
                    .all(|(j, o)| d.len() == o.len() && d.dot(o) == u32::from(i == j))
            })
    }

    /// Coordinates of `v` along the originals, `(duals[i] . v)_i`.
    pub fn coordinates(&self, v: &Vector) -> Vec<u32> {
        self.duals.iter().map(|d| d.dot(v)).collect()
    }

    /// The projection `v -> sum_i (duals[i] . v) originals[i]` onto the span,
    /// as an `n x n` matrix.
    pub fn projection(&self, n: usize, field: Field) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for (o, d) in self.originals.iter().zip(&self.duals) {
            for r in 0..n {
                if o[r] == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = field.add(m.get(r, c), field.mul(o[r], d[c]));
                    m.set(r, c, v);
                }
            }
        }
        m
    }

    /// `I - projection`: kills the span, fixes the common kernel of the duals.
    pub fn complement_projection(&self, n: usize, field: Field) -> Matrix {
        let p = self.projection(n, field);
        let mut m = Matrix::identity(field, n);
        for r in 0..n {
            for c in 0..n {
                let v = field.sub(m.get(r, c), p.get(r, c));
                m.set(r, c, v);
            }
        }
        m
    }
}

/// Canonical dual family of linearly independent vectors of common length `n`.
///
/// With `V` the matrix whose rows are the vectors and `P` the pivot columns of
/// its row-echelon form, the duals vanish outside `P` and equal the rows of
/// `(V_P^{-1})^T` on `P`.
pub fn dual_family(field: Field, n: usize, vectors: &[Vector]) -> Result<DualFamily> {
    let v = Matrix::from_rows(field, n, vectors)?;
    let Rref { rank, pivots, .. } = v.rref();
    if rank < vectors.len() {
        return Err(Error::LinearlyDependentInput);
    }
    let r = vectors.len();
    let mut vp = Matrix::zeros(field, r, r);
    for i in 0..r {
        for (k, &pc) in pivots.iter().enumerate() {
            vp.set(i, k, v.get(i, pc));
        }
    }
    let inv_t = vp.inverse().expect("pivot block of an independent family is invertible").transpose();
    let duals = (0..r)
        .map(|i| {
            let mut d = vec![0u32; n];
            for (k, &pc) in pivots.iter().enumerate() {
                d[pc] = inv_t.get(i, k);
            }
            Vector::new(field, d)
        })
        .collect();
    Ok(DualFamily { originals: vectors.to_vec(), duals })
}

/// True iff the vectors are linearly independent.
pub fn are_independent(field: Field, n: usize, vectors: &[Vector]) -> bool {
    match Matrix::from_rows(field, n, vectors) {
        Ok(m) => m.rank() == vectors.len(),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(p: u32, rows: usize, cols: usize, data: &[u32]) -> Matrix {
        Matrix::new(Field::of(p), rows, cols, data.to_vec()).unwrap()
    }

    #[test]
    fn rref_identity_is_fixed() {
        let m = Matrix::identity(Field::of(2), 2);
        let r = m.rref();
        assert_eq!(r.matrix, m);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_duplicate_rows() {
        let r = mat(2, 2, 2, &[1, 1, 1, 1]).rref();
        assert_eq!(r.matrix, mat(2, 2, 2, &[1, 1, 0, 0]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn rref_scaled_row_over_f5() {
        // row2 = 2 * row1 mod 5
        let r = mat(5, 2, 2, &[1, 2, 2, 4]).rref();
        assert_eq!(r.matrix, mat(5, 2, 2, &[1, 2, 0, 0]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let f = Field::of(5);
        let b = Vector::new(f, vec![3, 1, 4]);
        assert_eq!(solve_linear(&Matrix::identity(f, 3), &b).unwrap(), Some(b));
    }

    #[test]
    fn solve_zeroes_free_variables() {
        let f = Field::of(2);
        let x = solve_linear(&mat(2, 1, 2, &[1, 1]), &Vector::new(f, vec![1])).unwrap();
        assert_eq!(x, Some(Vector::new(f, vec![1, 0])));
    }

    #[test]
    fn solve_inconsistent() {
        let f = Field::of(2);
        let x = solve_linear(&mat(2, 2, 2, &[1, 0, 1, 0]), &Vector::new(f, vec![1, 0])).unwrap();
        assert_eq!(x, None);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let f = Field::of(2);
        assert!(matches!(
            solve_linear(&Matrix::identity(f, 2), &Vector::zeros(f, 3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn dual_of_standard_basis() {
        let f = Field::of(2);
        let basis = vec![Vector::unit(f, 2, 0), Vector::unit(f, 2, 1)];
        let dual = dual_family(f, 2, &basis).unwrap();
        assert_eq!(dual.duals, basis);
    }

    #[test]
    fn dual_matches_elimination_oracle() {
        // Oracle: solve the biorthogonality system d . v_j = delta_ij for each i
        // with free coordinates zero, by a separate linear solve.
        let f = Field::of(2);
        let vs = vec![Vector::new(f, vec![1, 1, 0]), Vector::new(f, vec![0, 1, 1])];
        let dual = dual_family(f, 3, &vs).unwrap();
        let system = Matrix::from_rows(f, 3, &vs).unwrap();
        for i in 0..2 {
            let rhs = Vector::unit(f, 2, i);
            let oracle = solve_linear(&system, &rhs).unwrap().unwrap();
            for (j, v) in vs.iter().enumerate() {
                assert_eq!(oracle.dot(v), u32::from(i == j));
            }
            assert_eq!(dual.duals[i], oracle);
        }
        // Frozen from the oracle above.
        assert_eq!(dual.duals[0], Vector::new(f, vec![1, 0, 0]));
        assert_eq!(dual.duals[1], Vector::new(f, vec![1, 1, 0]));
        assert!(DualFamily::is_biorthogonal(&vs, &dual.duals));
    }

    #[test]
    fn dual_rejects_dependent_family() {
        let f = Field::of(3);
        let vs = vec![Vector::new(f, vec![1, 0]), Vector::new(f, vec![1, 0])];
        assert_eq!(dual_family(f, 2, &vs), Err(Error::LinearlyDependentInput));
    }

    #[test]
    fn dual_of_empty_family() {
        let f = Field::of(3);
        let d = dual_family(f, 4, &[]).unwrap();
        assert!(d.is_empty());
        assert_eq!(d.complement_projection(4, f), Matrix::identity(f, 4));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = mat(5, 2, 2, &[2, 1, 1, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(Field::of(5), 2));
        assert_eq!(mat(5, 2, 2, &[1, 2, 2, 4]).inverse(), None);
    }

    #[test]
    fn kernel_vectors_are_killed() {
        let m = mat(3, 2, 4, &[1, 2, 0, 1, 0, 1, 1, 2]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vector(v).unwrap().is_zero());
        }
    }
}
