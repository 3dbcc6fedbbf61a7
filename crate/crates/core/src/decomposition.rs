//! Slice-rank and tensor-rank decompositions.
//!
//! A [`SliceDecomposition`] stores its terms grouped by axis: group `j` holds
//! the pairs `(a_{j,i}, b_{j,i})` with `a_{j,i}: [n_j] -> F` and `b_{j,i}` a
//! tensor over the other axes in increasing order. The grouped view is also the
//! per-axis matrix `M_j = sum_i a_{j,i} (x) b_{j,i}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{are_independent, Field, Subspace, Vector};
use crate::tensor::{complement_axes, Tensor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceTerm {
    pub a: Vector,
    pub b: Tensor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceDecomposition {
    field: Field,
    dims: Vec<usize>,
    groups: Vec<Vec<SliceTerm>>,
}

/// A problem found by [`SliceDecomposition::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The one-variable functions on this axis are linearly dependent.
    DependentFamily { axis: usize },
    /// A term's `a` or `b` does not fit the ambient shape.
    Shape { axis: usize, index: usize, detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DependentFamily { axis } => {
                write!(f, "axis {}: one-variable functions are linearly dependent", axis + 1)
            }
            Violation::Shape { axis, index, detail } => {
                write!(f, "axis {} term {}: {}", axis + 1, index + 1, detail)
            }
        }
    }
}

impl SliceDecomposition {
    /// The empty (length 0) decomposition, which assembles to zero.
    pub fn empty(field: Field, dims: &[usize]) -> Self {
        SliceDecomposition { field, dims: dims.to_vec(), groups: vec![Vec::new(); dims.len()] }
    }

    /// Builds from per-axis groups without checking independence.
    pub fn from_groups(field: Field, dims: &[usize], groups: Vec<Vec<SliceTerm>>) -> Result<Self> {
        if groups.len() != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} axis groups for order {}",
                groups.len(),
                dims.len()
            )));
        }
        let mut dec = SliceDecomposition::empty(field, dims);
        for (axis, terms) in groups.into_iter().enumerate() {
            for t in terms {
                dec.push(axis, t.a, t.b)?;
            }
        }
        Ok(dec)
    }

    /// Appends a term on `axis`, checking shapes.
    pub fn push(&mut self, axis: usize, a: Vector, b: Tensor) -> Result<()> {
        if axis >= self.dims.len() {
            return Err(Error::IndexOutOfRange(format!("axis {axis} of order {}", self.dims.len())));
        }
        if a.len() != self.dims[axis] {
            return Err(Error::DimensionMismatch(format!(
                "a-vector of length {} on axis of size {}",
                a.len(),
                self.dims[axis]
            )));
        }
        let expected = self.complement_dims(axis);
        if b.dims() != expected.as_slice() {
            return Err(Error::DimensionMismatch(format!(
                "b-tensor dims {:?}, expected {:?}",
                b.dims(),
                expected
            )));
        }
        if a.field() != self.field || b.field() != self.field {
            return Err(Error::FieldMismatch(self.field.p(), a.field().p()));
        }
        self.groups[axis].push(SliceTerm { a, b });
        Ok(())
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

    /// Dims of the tensors `b_{axis,i}`.
    pub fn complement_dims(&self, axis: usize) -> Vec<usize> {
        complement_axes(self.dims.len(), &[axis]).iter().map(|&a| self.dims[a]).collect()
    }

    /// `(r_1, ..., r_d)`.
    pub fn shape(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    /// `r_1 + ... + r_d`.
    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn groups(&self) -> &[Vec<SliceTerm>] {
        &self.groups
    }

    pub fn terms(&self, axis: usize) -> &[SliceTerm] {
        &self.groups[axis]
    }

    pub fn term(&self, axis: usize, index: usize) -> Result<&SliceTerm> {
        self.groups
            .get(axis)
            .and_then(|g| g.get(index))
            .ok_or_else(|| Error::IndexOutOfRange(format!("term {} on axis {}", index + 1, axis + 1)))
    }

    pub(crate) fn term_mut(&mut self, axis: usize, index: usize) -> Result<&mut SliceTerm> {
        self.groups
            .get_mut(axis)
            .and_then(|g| g.get_mut(index))
            .ok_or_else(|| Error::IndexOutOfRange(format!("term {} on axis {}", index + 1, axis + 1)))
    }

    /// The family `(a_{axis,1}, ..., a_{axis,r})`.
    pub fn a_family(&self, axis: usize) -> Vec<Vector> {
        self.groups[axis].iter().map(|t| t.a.clone()).collect()
    }

    /// The sum of all terms `a_{j,i}(x_j) b_{j,i}(x without x_j)`.
    pub fn assemble(&self) -> Tensor {
        let mut acc = Tensor::zeros(self.field, &self.dims);
        for (axis, group) in self.groups.iter().enumerate() {
            for t in group {
                let term = Tensor::slice_product(&t.a, axis, &t.b).expect("validated on push");
                acc.add_scaled(&term, 1).expect("same shape");
            }
        }
        acc
    }

    /// Checks shapes and per-axis linear independence of the `a`-families.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        for (axis, group) in self.groups.iter().enumerate() {
            let expected = self.complement_dims(axis);
            for (index, t) in group.iter().enumerate() {
                if t.a.len() != self.dims[axis] {
                    violations.push(Violation::Shape {
                        axis,
                        index,
                        detail: format!("a has length {}, expected {}", t.a.len(), self.dims[axis]),
                    });
                }
                if t.b.dims() != expected.as_slice() {
                    violations.push(Violation::Shape {
                        axis,
                        index,
                        detail: format!("b has dims {:?}, expected {:?}", t.b.dims(), expected),
                    });
                }
            }
            if !are_independent(self.field, self.dims[axis], &self.a_family(axis)) {
                violations.push(Violation::DependentFamily { axis });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// Canonical spans `(<a_{1,i}>, ..., <a_{d,i}>)`.
    pub fn subspace_tuple(&self) -> Vec<Subspace> {
        (0..self.order())
            .map(|axis| {
                Subspace::from_vectors(self.field, self.dims[axis], &self.a_family(axis))
                    .expect("a-vectors have the axis length")
            })
            .collect()
    }

    /// Replaces every `b` by `b_other - b_self`, keeping the `a`s. Both inputs
    /// must have identical one-variable functions.
    pub fn b_difference(&self, other: &SliceDecomposition) -> Result<SliceDecomposition> {
        if self.dims != other.dims || self.shape() != other.shape() {
            return Err(Error::MismatchedOneVariableFunctions);
        }
        let mut out = self.clone();
        for (axis, group) in out.groups.iter_mut().enumerate() {
            for (i, t) in group.iter_mut().enumerate() {
                let o = &other.groups[axis][i];
                if o.a != t.a {
                    return Err(Error::MismatchedOneVariableFunctions);
                }
                t.b = o.b.sub(&t.b)?;
            }
        }
        Ok(out)
    }
}

/// `T = sum_i a_{1,i} (x) ... (x) a_{d,i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorRankDecomposition {
    field: Field,
    dims: Vec<usize>,
    terms: Vec<Vec<Vector>>,
}

impl TensorRankDecomposition {
    pub fn new(field: Field, dims: &[usize], terms: Vec<Vec<Vector>>) -> Result<Self> {
        for (i, term) in terms.iter().enumerate() {
            if term.len() != dims.len() {
                return Err(Error::DimensionMismatch(format!(
                    "term {} has {} factors for order {}",
                    i + 1,
                    term.len(),
                    dims.len()
                )));
            }
            for (axis, v) in term.iter().enumerate() {
                if v.len() != dims[axis] {
                    return Err(Error::DimensionMismatch(format!(
                        "term {} axis {}: length {} vs {}",
                        i + 1,
                        axis + 1,
                        v.len(),
                        dims[axis]
                    )));
                }
                if v.is_zero() {
                    return Err(Error::PreconditionFailed(format!(
                        "term {} has a zero factor on axis {}",
                        i + 1,
                        axis + 1
                    )));
                }
            }
        }
        Ok(TensorRankDecomposition { field, dims: dims.to_vec(), terms })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn terms(&self) -> &[Vec<Vector>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rank-one tensor `a_{1,i} (x) ... (x) a_{d,i}`.
    pub fn rank_one(&self, i: usize) -> Tensor {
        let factors: Vec<Tensor> = self.terms[i].iter().map(Tensor::from_vector).collect();
        let mut it = factors.into_iter();
        let first = it.next().unwrap_or_else(|| Tensor::scalar(self.field, 1));
        it.fold(first, |acc, t| acc.outer(&t).expect("same field"))
    }

    pub fn assemble(&self) -> Tensor {
        let mut acc = Tensor::zeros(self.field, &self.dims);
        for i in 0..self.terms.len() {
            acc.add_scaled(&self.rank_one(i), 1).expect("same shape");
        }
        acc
    }

    /// Per-axis canonical spans of the factors.
    pub fn subspace_tuple(&self) -> Vec<Subspace> {
        (0..self.dims.len())
            .map(|axis| {
                let vs: Vec<Vector> = self.terms.iter().map(|t| t[axis].clone()).collect();
                Subspace::from_vectors(self.field, self.dims[axis], &vs).expect("checked lengths")
            })
            .collect()
    }
}
