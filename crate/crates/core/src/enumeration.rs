//! Exhaustive censuses of decompositions at small sizes, compared against
//! closed-form counts and upper bounds.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::decomposition::{SliceDecomposition, TensorRankDecomposition};
use crate::error::{Error, Result};
use crate::linalg::{are_independent, gaussian_binomial, ordered_basis_count, Field, Matrix, Subspace, Vector};
use crate::rank::{
    for_each_admissible, outer_all, slice_rank, slice_rank_at_most, solve_first_axis, tensor_rank, RankBudget,
    TailProducts,
};
use crate::tensor::Tensor;

/// `prod_{i >= 1} (1 - 2^-i)`.
pub const OMEGA: f64 = 0.288_788_095_086_602_4;

/// Terms of the partial product used by [`exceeds_omega_multiple`].
const OMEGA_TERMS: u32 = 12;

/// True iff `count >= OMEGA * scale`, decided exactly: the partial product
/// `prod_{i <= N} (1 - 2^-i)` is a rational upper bound for `OMEGA`, so
/// `count` clearing it with `N` terms clears `OMEGA` too. Falls back to the
/// floating-point constant only if the rational test is inconclusive.
pub fn exceeds_omega_multiple(count: u128, scale: u128) -> bool {
    let mut num: u128 = 1;
    for i in 1..=OMEGA_TERMS {
        num *= (1u128 << i) - 1;
    }
    let den_log = OMEGA_TERMS * (OMEGA_TERMS + 1) / 2;
    match (count.checked_shl(den_log), num.checked_mul(scale)) {
        (Some(lhs), Some(rhs)) if count.leading_zeros() >= den_log => lhs >= rhs,
        _ => count as f64 >= OMEGA * scale as f64,
    }
}

/// One named count in a [`CensusReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub name: String,
    pub value: u128,
}

/// Machine-readable census outcome. Entries keep insertion order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub what: String,
    pub entries: Vec<CensusEntry>,
    pub passed: bool,
    pub notes: Vec<String>,
}

impl CensusReport {
    pub fn new(what: &str) -> Self {
        CensusReport { what: what.into(), entries: Vec::new(), passed: true, notes: Vec::new() }
    }

    pub fn push(&mut self, name: &str, value: u128) -> &mut Self {
        self.entries.push(CensusEntry { name: name.into(), value });
        self
    }

    pub fn get(&self, name: &str) -> Option<u128> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.value)
    }

    /// Human-readable lines.
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("census {}", self.what)];
        out.extend(self.entries.iter().map(|e| format!("{} {}", e.name, e.value)));
        out.extend(self.notes.iter().cloned());
        out.push(if self.passed { "result ok".into() } else { "result FAILED".into() });
        out
    }
}

fn pow_u128(base: u128, exp: u128) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// Exact number of ordered pairs `(f_1..f_k, g_1..g_k)` with `m = sum f_i g_i^T`,
/// `k = rank m`, found by running over every `f` family and counting the `g`s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixCount {
    pub rank: usize,
    pub count: u128,
    pub formula: u128,
}

impl MatrixCount {
    pub fn report(&self) -> CensusReport {
        let mut r = CensusReport::new("matrix-count");
        r.push("rank", self.rank as u128).push("count", self.count).push("formula", self.formula);
        r.passed = self.count == self.formula;
        r
    }
}

pub fn count_matrix_decompositions(m: &Matrix, budget: &RankBudget) -> Result<MatrixCount> {
    let f = m.field();
    let p = f.size() as u128;
    let k = m.rank();
    let rows = m.rows();
    let vectors: Vec<Vector> = Vector::all(f, rows).collect();
    let families = pow_u128(vectors.len() as u128, k as u128);
    if families > budget.max_candidates as u128 {
        return Err(Error::BudgetExceeded { lower_bound: 0 });
    }
    let col_space = Subspace::from_rows(&m.transpose());
    let in_col: Vec<bool> = vectors.iter().map(|v| col_space.contains(v)).collect();
    let mut count: u128 = 0;
    let mut idx = vec![0usize; k];
    for _ in 0..families {
        // Solutions need col(m) inside col(f), and f has at most k = dim col(m)
        // columns, so col(f) = col(m). Families leaving col(m) contribute nothing.
        if idx.iter().all(|&i| in_col[i]) {
            let cols: Vec<Vector> = idx.iter().map(|&i| vectors[i].clone()).collect();
            let fm = Matrix::from_rows(f, rows, &cols)?.transpose();
            let rank_f = fm.rank();
            let mut aug = Matrix::zeros(f, rows, k + m.cols());
            for r in 0..rows {
                for c in 0..k {
                    aug.set(r, c, fm.get(r, c));
                }
                for c in 0..m.cols() {
                    aug.set(r, k + c, m.get(r, c));
                }
            }
            if aug.rank() == rank_f {
                count += pow_u128(p, ((k - rank_f) * m.cols()) as u128);
            }
        }
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < vectors.len() {
                break;
            }
            *slot = 0;
        }
    }
    Ok(MatrixCount { rank: k, count, formula: ordered_basis_count(k, f.size()) })
}

/// `d^k p^{d k^2}`.
pub fn admissible_bound(d: usize, k: usize, p: u64) -> u128 {
    pow_u128(d as u128, k as u128).saturating_mul(pow_u128(p as u128, (d * k * k) as u128))
}

/// Every subspace tuple of total dimension `k = slice rank` whose target space
/// contains the tensor, each with a witness decomposition on canonical bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleTupleSet {
    pub k: usize,
    pub tuples: Vec<(Vec<Subspace>, SliceDecomposition)>,
}

impl AdmissibleTupleSet {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &[Subspace]) -> bool {
        self.tuples.iter().any(|(t, _)| t.as_slice() == tuple)
    }

    pub fn report(&self, t: &Tensor) -> CensusReport {
        let bound = admissible_bound(t.order(), self.k, t.field().size());
        let mut r = CensusReport::new("admissible");
        r.push("slice_rank", self.k as u128).push("tuples", self.len() as u128).push("bound", bound);
        r.passed = (self.len() as u128) <= bound;
        for (tuple, _) in &self.tuples {
            let dims: Vec<String> = tuple.iter().map(|s| s.dim().to_string()).collect();
            r.notes.push(format!("tuple dims ({})", dims.join(",")));
        }
        r
    }
}

pub fn admissible_tuples(t: &Tensor, budget: &RankBudget) -> Result<AdmissibleTupleSet> {
    let k = slice_rank(t, budget)?.rank;
    admissible_tuples_at(t, k, budget)
}

/// Like [`admissible_tuples`] with the slice rank supplied by the caller.
pub fn admissible_tuples_at(t: &Tensor, k: usize, budget: &RankBudget) -> Result<AdmissibleTupleSet> {
    let mut tuples = Vec::new();
    for_each_admissible(t, k, budget, |tuple, w| {
        let families: Vec<Vec<Vector>> = tuple.iter().map(Subspace::basis_vectors).collect();
        let dec = w.into_decomposition(t, &families).expect("witness fits the tensor");
        tuples.push((tuple, dec));
        true
    })?;
    Ok(AdmissibleTupleSet { k, tuples })
}

/// Ordered bases of `s`, counted by running over all `dim s`-tuples of its elements.
pub fn count_ordered_bases(s: &Subspace) -> u128 {
    let elems = s.elements();
    let r = s.dim();
    let mut idx = vec![0usize; r];
    let total = pow_u128(elems.len() as u128, r as u128);
    let mut count = 0;
    for _ in 0..total {
        let vs: Vec<Vector> = idx.iter().map(|&i| elems[i].clone()).collect();
        if are_independent(s.field(), s.ambient_dim(), &vs) {
            count += 1;
        }
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < elems.len() {
                break;
            }
            *slot = 0;
        }
    }
    count
}

/// Number of choices of ordered one-variable functions spanning the tuple
/// (product over axes of ordered-basis counts), for a tuple whose target space
/// contains `t`.
pub fn count_slice_decompositions_given_tuple(t: &Tensor, tuple: &[Subspace]) -> Result<u128> {
    if crate::rank::membership_in_target(t, tuple)?.is_none() {
        return Err(Error::PreconditionFailed("tensor is not in the target space of the tuple".into()));
    }
    Ok(tuple.iter().map(count_ordered_bases).product())
}

/// `prod_j prod_{i < r_j} (p^{r_j} - p^i)`.
pub fn basis_count_formula(tuple: &[Subspace]) -> u128 {
    tuple.iter().map(|s| ordered_basis_count(s.dim(), s.field().size())).product()
}

/// `(p-1)^{(d-2)k} prod_{i<k} (p^k - p^i)`.
pub fn tensor_rank_example_formula(p: u64, d: usize, k: usize) -> u128 {
    pow_u128(p as u128 - 1, ((d.saturating_sub(2)) * k) as u128).saturating_mul(ordered_basis_count(k, p))
}

/// If `t = M(x_1, x_2) a_3(x_3) ... a_d(x_d)` with nonzero `a`s, the rank of `M`.
pub fn example_shape_rank(t: &Tensor) -> Option<usize> {
    if t.order() < 2 || t.is_zero() {
        return None;
    }
    let d = t.order();
    let n12 = t.dims()[0] * t.dims()[1];
    let tail = t.len() / n12;
    let flat = Matrix::new(t.field(), n12, tail, t.data().to_vec()).ok()?;
    if d > 2 {
        if flat.rank() != 1 {
            return None;
        }
        let row = (0..n12).map(|r| flat.row(r)).find(|r| !r.is_zero())?;
        let tail_dims = &t.dims()[2..];
        let w = Tensor::new(t.field(), tail_dims.to_vec(), row.into_entries()).ok()?;
        if (0..w.order()).any(|a| w.unfold(a).rank() != 1) {
            return None;
        }
    }
    // Summing over the tail against a vector that sees w recovers M up to scale.
    let m_rank = Matrix::new(t.field(), t.dims()[0], t.dims()[1] * tail, t.data().to_vec()).ok()?.rank();
    Some(m_rank)
}

/// Every ordered length-`k` tensor rank decomposition of `t`.
///
/// Runs over all ordered `k`-tuples of nonzero factor vectors on axes `2..d` and
/// solves for the axis-1 vectors. Fails with [`Error::NotOfRankK`] if none exist
/// and with [`Error::PreconditionFailed`] if a shorter decomposition shows up.
pub fn enumerate_tensor_rank_decompositions(
    t: &Tensor,
    k: usize,
    budget: &RankBudget,
) -> Result<Vec<TensorRankDecomposition>> {
    let f = t.field();
    if t.order() == 0 {
        return Err(Error::PreconditionFailed("tensor rank needs order at least 1".into()));
    }
    if k == 0 {
        return if t.is_zero() {
            Ok(vec![TensorRankDecomposition::new(f, t.dims(), vec![])?])
        } else {
            Err(Error::NotOfRankK(0))
        };
    }
    let per_axis: u128 = t.dims()[1..]
        .iter()
        .map(|&n| pow_u128(f.size() as u128, n as u128) - 1)
        .fold(1, |a: u128, b| a.saturating_mul(b));
    let total = pow_u128(per_axis, k as u128);
    if total > budget.max_candidates as u128 {
        return Err(Error::BudgetExceeded { lower_bound: 0 });
    }
    let tails = TailProducts::new(f, t.dims(), |n| Vector::all(f, n).filter(|v| !v.is_zero()).collect());
    let m = tails.flat.len();
    let rest = t.len() / t.dims()[0];
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    for _ in 0..total {
        let ws: Vec<&Vector> = idx.iter().map(|&i| &tails.flat[i]).collect();
        if let Some(a) = solve_first_axis(t, &ws) {
            let owned: Vec<Vector> = ws.iter().map(|w| (*w).clone()).collect();
            if !are_independent(f, rest, &owned) || a.iter().any(Vector::is_zero) {
                return Err(Error::PreconditionFailed(format!("tensor has a decomposition shorter than {k}")));
            }
            let terms = idx
                .iter()
                .zip(a)
                .map(|(&i, a1)| {
                    let mut term = vec![a1];
                    term.extend(tails.factors[i].iter().cloned());
                    term
                })
                .collect();
            out.push(TensorRankDecomposition::new(f, t.dims(), terms)?);
        }
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < m {
                break;
            }
            *slot = 0;
        }
    }
    if out.is_empty() {
        return Err(Error::NotOfRankK(k));
    }
    debug_assert!(out.iter().all(|d| d.assemble() == *t));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorRankCount {
    pub k: usize,
    pub count: u128,
    /// `p^{(d-1) k^2}`.
    pub bound: u128,
    /// The closed form, when `t` has the product shape it applies to.
    pub formula: Option<u128>,
    /// Distinct per-axis span tuples across all decompositions.
    pub span_tuples: Vec<Vec<Subspace>>,
}

impl TensorRankCount {
    pub fn report(&self) -> CensusReport {
        let mut r = CensusReport::new("tensor-rank-count");
        r.push("tensor_rank", self.k as u128).push("count", self.count).push("bound", self.bound);
        if let Some(fm) = self.formula {
            r.push("formula", fm);
        }
        r.push("distinct_span_tuples", self.span_tuples.len() as u128);
        r.passed = self.count <= self.bound && self.formula.is_none_or(|fm| fm == self.count) && self.span_tuples.len() == 1;
        r
    }
}

/// Counts length-`k` tensor rank decompositions with `k` the tensor rank.
pub fn count_tensor_rank_decompositions(t: &Tensor, budget: &RankBudget) -> Result<TensorRankCount> {
    let (k, _) = tensor_rank(t, budget)?;
    count_tensor_rank_decompositions_at(t, k, budget)
}

pub fn count_tensor_rank_decompositions_at(t: &Tensor, k: usize, budget: &RankBudget) -> Result<TensorRankCount> {
    let decs = enumerate_tensor_rank_decompositions(t, k, budget)?;
    let p = t.field().size();
    let d = t.order();
    let formula = example_shape_rank(t).filter(|&r| r == k).map(|_| tensor_rank_example_formula(p, d, k));
    let spans: BTreeSet<Vec<Subspace>> = decs.iter().map(TensorRankDecomposition::subspace_tuple).collect();
    Ok(TensorRankCount {
        k,
        count: decs.len() as u128,
        bound: pow_u128(p as u128, ((d - 1) * k * k) as u128),
        formula,
        span_tuples: spans.into_iter().collect(),
    })
}

/// Checks that all length-`k` decompositions span the same subspace per axis,
/// returning that common tuple.
pub fn verify_subspace_uniqueness_tensor_rank(t: &Tensor, k: usize, budget: &RankBudget) -> Result<Vec<Subspace>> {
    let c = count_tensor_rank_decompositions_at(t, k, budget)?;
    match c.span_tuples.as_slice() {
        [only] => Ok(only.clone()),
        _ => Err(Error::PreconditionFailed(format!("{} distinct span tuples", c.span_tuples.len()))),
    }
}

/// Outcome of [`lower_bound_example_census`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundCensus {
    pub r: usize,
    pub p: u64,
    /// Distinct first-axis subspaces among admissible tuples of shape `(r, r, 0, ..., 0)`.
    pub first_axis_spaces: Vec<Subspace>,
    /// Admissible tuples of that shape.
    pub tuples: usize,
}

impl LowerBoundCensus {
    pub fn count(&self) -> u128 {
        self.first_axis_spaces.len() as u128
    }

    pub fn scale(&self) -> u128 {
        pow_u128(self.p as u128, (self.r * self.r) as u128)
    }

    pub fn report(&self) -> CensusReport {
        let mut r = CensusReport::new("example-lower-bound");
        r.push("r", self.r as u128)
            .push("first_axis_spaces", self.count())
            .push("tuples", self.tuples as u128)
            .push("p_pow_r_squared", self.scale());
        r.passed = exceeds_omega_multiple(self.count(), self.scale());
        r
    }
}

/// `T = M(x_1, x_2) c(x_3, ..., x_d)` with `M` the `2r x 2r` identity: counts the
/// possible first-axis subspaces of minimal decompositions split as `r` terms on
/// axis 1 and `r` on axis 2. Requires `c` of order at least 2 and slice rank at
/// least `2r`.
pub fn lower_bound_example_census(r: usize, c: &Tensor, budget: &RankBudget) -> Result<LowerBoundCensus> {
    let f = c.field();
    if r == 0 {
        return Ok(LowerBoundCensus { r, p: f.size(), first_axis_spaces: vec![Subspace::zero(f, 0)], tuples: 1 });
    }
    if c.order() < 2 {
        return Err(Error::PreconditionFailed("c must have order at least 2".into()));
    }
    if slice_rank_at_most(c, 2 * r - 1, budget)?.is_some() {
        return Err(Error::PreconditionFailed(format!("c has slice rank below {}", 2 * r)));
    }
    let m = Tensor::identity(f, 2, 2 * r);
    let t = m.outer(c)?;
    let k = slice_rank(&t, budget)?.rank;
    if k != 2 * r {
        return Err(Error::InternalContradiction(format!("slice rank {k}, expected {}", 2 * r)));
    }
    let mut spaces = BTreeSet::new();
    let mut tuples = 0;
    for_each_admissible(&t, k, budget, |tuple, _| {
        let split = tuple[0].dim() == r && tuple[1].dim() == r && tuple[2..].iter().all(|s| s.dim() == 0);
        if split {
            tuples += 1;
            spaces.insert(tuple[0].clone());
        }
        true
    })?;
    Ok(LowerBoundCensus { r, p: f.size(), first_axis_spaces: spaces.into_iter().collect(), tuples })
}

/// Number of `r`-dimensional subspaces of `F^{2r}`: the count the census above
/// should reach when `M` is the identity.
pub fn expected_lower_bound_count(r: usize, field: Field) -> u128 {
    gaussian_binomial(2 * r, r, field.size())
}

/// The product tensor `M(x_1,x_2) a_3 ... a_d` used by the counting examples.
pub fn example_product_tensor(m: &Tensor, tail: &[Vector]) -> Tensor {
    let refs: Vec<&Vector> = tail.iter().collect();
    let w = outer_all(m.field(), &refs);
    m.outer(&w).expect("same field")
}
