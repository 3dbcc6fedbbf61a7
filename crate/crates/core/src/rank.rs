//! Exact matrix, slice and tensor rank with witnesses.
//!
//! Slice rank is found by enumerating subspace tuples `(A_1, ..., A_d)` and
//! testing whether `T` lies in `sum_j A_j (x) F^{other axes}`. With dual bases
//! and the complementary projections `Q_j = I - P_j`, that holds exactly when
//! `(Q_1 (x) ... (x) Q_d) T = 0`, and peeling one axis at a time yields the
//! witness `b`s directly.

use rayon::prelude::*;

use crate::decomposition::{SliceDecomposition, TensorRankDecomposition};
use crate::error::{Error, Result};
use crate::linalg::{dual_family, gaussian_binomial, solve_linear, Field, Matrix, Subspace, Vector};
use crate::linalg::enumerate_subspaces;
use crate::tensor::Tensor;

/// Default cap on the number of candidates an exhaustive search may test.
pub const DEFAULT_MAX_CANDIDATES: u64 = 20_000_000;

/// Limits for the exhaustive searches. A search that would exceed either limit
/// stops with [`Error::BudgetExceeded`] carrying the largest `k` proven to be a
/// lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankBudget {
    pub max_rank: usize,
    pub max_candidates: u64,
}

impl Default for RankBudget {
    fn default() -> Self {
        RankBudget { max_rank: usize::MAX, max_candidates: DEFAULT_MAX_CANDIDATES }
    }
}

impl RankBudget {
    pub fn with_candidates(max_candidates: u64) -> Self {
        RankBudget { max_candidates, ..RankBudget::default() }
    }
}

/// The `b`-functions of a decomposition whose one-variable functions were given
/// in advance: `b[j][i]` pairs with the `i`-th vector of axis `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipWitness {
    pub b: Vec<Vec<Tensor>>,
}

impl MembershipWitness {
    pub fn into_decomposition(self, t: &Tensor, families: &[Vec<Vector>]) -> Result<SliceDecomposition> {
        let mut dec = SliceDecomposition::empty(t.field(), t.dims());
        for (axis, (fam, bs)) in families.iter().zip(self.b).enumerate() {
            for (a, b) in fam.iter().zip(bs) {
                dec.push(axis, a.clone(), b)?;
            }
        }
        Ok(dec)
    }
}

pub fn matrix_rank(m: &Matrix) -> usize {
    m.rank()
}

/// An axis family prepared for repeated membership tests.
#[derive(Clone, Debug)]
pub struct PreparedFamily {
    pub vectors: Vec<Vector>,
    pub duals: Vec<Vector>,
    pub complement: Matrix,
}

impl PreparedFamily {
    pub fn new(field: Field, n: usize, vectors: &[Vector]) -> Result<Self> {
        let dual = dual_family(field, n, vectors)?;
        let complement = dual.complement_projection(n, field);
        Ok(PreparedFamily { vectors: vectors.to_vec(), duals: dual.duals, complement })
    }

    pub fn from_subspace(s: &Subspace) -> Self {
        PreparedFamily::new(s.field(), s.ambient_dim(), &s.basis_vectors()).expect("canonical bases are independent")
    }
}

fn check_family_dims(t: &Tensor, families: &[PreparedFamily]) -> Result<()> {
    if families.len() != t.order() {
        return Err(Error::DimensionMismatch(format!("{} families for order {}", families.len(), t.order())));
    }
    for (axis, fam) in families.iter().enumerate() {
        if fam.complement.rows() != t.dims()[axis] {
            return Err(Error::DimensionMismatch(format!(
                "axis {} family of length {} for size {}",
                axis + 1,
                fam.complement.rows(),
                t.dims()[axis]
            )));
        }
    }
    Ok(())
}

/// True iff `t` lies in `sum_j span(families[j]) (x) F^{other axes}`.
pub fn is_member_prepared(t: &Tensor, families: &[PreparedFamily]) -> bool {
    let mut s = t.clone();
    for (axis, fam) in families.iter().enumerate() {
        if fam.vectors.is_empty() {
            continue;
        }
        s = s.mode_product(axis, &fam.complement).expect("checked dims");
        if s.is_zero() {
            return true;
        }
    }
    s.is_zero()
}

/// Membership with witness against prepared families.
pub fn witness_prepared(t: &Tensor, families: &[PreparedFamily]) -> Option<MembershipWitness> {
    let mut s = t.clone();
    let mut b = Vec::with_capacity(families.len());
    for (axis, fam) in families.iter().enumerate() {
        let bs: Vec<Tensor> = fam.duals.iter().map(|d| s.contract_vector(axis, d).expect("checked dims")).collect();
        if !fam.vectors.is_empty() {
            s = s.mode_product(axis, &fam.complement).expect("checked dims");
        }
        b.push(bs);
    }
    s.is_zero().then_some(MembershipWitness { b })
}

/// Decides whether `t` has a slice decomposition whose axis-`j` one-variable
/// functions are exactly the given independent `families[j]`, and returns the
/// matching `b`s.
pub fn membership_with_families(t: &Tensor, families: &[Vec<Vector>]) -> Result<Option<MembershipWitness>> {
    if families.len() != t.order() {
        return Err(Error::DimensionMismatch(format!("{} families for order {}", families.len(), t.order())));
    }
    let prepared = families
        .iter()
        .enumerate()
        .map(|(axis, fam)| {
            PreparedFamily::new(t.field(), t.dims()[axis], fam).map_err(|e| match e {
                Error::LinearlyDependentInput => Error::DependentFamilies(axis + 1),
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    check_family_dims(t, &prepared)?;
    Ok(witness_prepared(t, &prepared))
}

/// Membership in `R_target` for a subspace tuple; the witness is expressed
/// against the canonical bases.
pub fn membership_in_target(t: &Tensor, tuple: &[Subspace]) -> Result<Option<MembershipWitness>> {
    if tuple.len() != t.order() || tuple.iter().zip(t.dims()).any(|(s, &n)| s.ambient_dim() != n) {
        return Err(Error::DimensionMismatch("subspace tuple does not match tensor dims".into()));
    }
    let families: Vec<Vec<Vector>> = tuple.iter().map(Subspace::basis_vectors).collect();
    membership_with_families(t, &families)
}

/// Reference implementation of [`membership_with_families`]: one linear system
/// in all unknown `b` entries at once.
pub fn membership_by_linear_system(t: &Tensor, families: &[Vec<Vector>]) -> Result<Option<MembershipWitness>> {
    let f = t.field();
    let d = t.order();
    // Column blocks: one per (axis, term), each of the size of the b tensor.
    let mut blocks = Vec::new();
    for (axis, fam) in families.iter().enumerate() {
        let rest: Vec<usize> = (0..d).filter(|&a| a != axis).map(|a| t.dims()[a]).collect();
        let size: usize = rest.iter().product();
        for a in fam {
            blocks.push((axis, a.clone(), rest.clone(), size));
        }
    }
    let unknowns: usize = blocks.iter().map(|b| b.3).sum();
    let mut m = Matrix::zeros(f, t.len(), unknowns);
    let mut col = 0;
    for (axis, a, rest, size) in &blocks {
        for k in 0..*size {
            let mut unit = vec![0u32; *size];
            unit[k] = 1;
            let e = Tensor::new(f, rest.clone(), unit)?;
            let column = Tensor::slice_product(a, *axis, &e)?;
            for (row, &v) in column.data().iter().enumerate() {
                m.set(row, col + k, v);
            }
        }
        col += size;
    }
    let rhs = Vector::new(f, t.data().to_vec());
    let Some(x) = solve_linear(&m, &rhs)? else {
        return Ok(None);
    };
    let mut b = vec![Vec::new(); d];
    let mut offset = 0;
    for (axis, _, rest, size) in blocks {
        let data = x.entries()[offset..offset + size].to_vec();
        b[axis].push(Tensor::new(f, rest, data)?);
        offset += size;
    }
    Ok(Some(MembershipWitness { b }))
}

/// Compositions of `k` into `parts` parts with part `j` at most `caps[j]`,
/// in ascending lexicographic order.
pub fn compositions(k: usize, caps: &[usize]) -> Vec<Vec<usize>> {
    fn rec(k: usize, caps: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if caps.is_empty() {
            if k == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let room: usize = caps[1..].iter().sum();
        let lo = k.saturating_sub(room);
        for r in lo..=k.min(caps[0]) {
            cur.push(r);
            rec(k - r, &caps[1..], cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, caps, &mut Vec::new(), &mut out);
    out
}

/// Every subspace of every dimension of `F^n`, prepared, indexed by dimension.
struct SubspaceTable {
    by_dim: Vec<Vec<(Subspace, PreparedFamily)>>,
}

impl SubspaceTable {
    fn new(field: Field, n: usize, max_dim: usize, limit: u64) -> Result<Self> {
        let mut by_dim = Vec::new();
        for r in 0..=max_dim.min(n) {
            let list = enumerate_subspaces(field, n, r, limit)?
                .map(|s| {
                    let prep = PreparedFamily::from_subspace(&s);
                    (s, prep)
                })
                .collect();
            by_dim.push(list);
        }
        Ok(SubspaceTable { by_dim })
    }
}

/// Number of subspace tuples of total dimension `k`.
pub fn tuple_count(field: Field, dims: &[usize], k: usize) -> u128 {
    compositions(k, dims)
        .iter()
        .map(|c| c.iter().zip(dims).map(|(&r, &n)| gaussian_binomial(n, r, field.size())).product::<u128>())
        .sum()
}

fn tables_for(t: &Tensor, max_dim: usize, budget: &RankBudget) -> Result<Vec<SubspaceTable>> {
    t.dims()
        .iter()
        .map(|&n| SubspaceTable::new(t.field(), n, max_dim, budget.max_candidates))
        .collect()
}

fn tuple_at<'a>(tables: &'a [SubspaceTable], shape: &[usize], mut index: u128) -> Vec<&'a (Subspace, PreparedFamily)> {
    let mut picks = vec![None; shape.len()];
    for axis in (0..shape.len()).rev() {
        let list = &tables[axis].by_dim[shape[axis]];
        let len = list.len() as u128;
        picks[axis] = Some(&list[(index % len) as usize]);
        index /= len;
    }
    picks.into_iter().map(|p| p.expect("filled")).collect()
}

fn shape_size(tables: &[SubspaceTable], shape: &[usize]) -> u128 {
    shape.iter().enumerate().map(|(axis, &r)| tables[axis].by_dim[r].len() as u128).product()
}

/// Calls `visit` on every subspace tuple of total dimension `k` containing `t`
/// in its target space, in search order. Stops early when `visit` returns false.
pub(crate) fn for_each_admissible(
    t: &Tensor,
    k: usize,
    budget: &RankBudget,
    mut visit: impl FnMut(Vec<Subspace>, MembershipWitness) -> bool,
) -> Result<()> {
    let count = tuple_count(t.field(), t.dims(), k);
    if count > budget.max_candidates as u128 {
        return Err(Error::BudgetExceeded { lower_bound: 0 });
    }
    let tables = tables_for(t, k, budget)?;
    for shape in compositions(k, t.dims()) {
        let size = shape_size(&tables, &shape);
        for index in 0..size {
            let picks = tuple_at(&tables, &shape, index);
            let families: Vec<PreparedFamily> = picks.iter().map(|p| p.1.clone()).collect();
            if let Some(w) = witness_prepared(t, &families) {
                if !visit(picks.iter().map(|p| p.0.clone()).collect(), w) {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

/// Result of [`slice_rank`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceRankResult {
    pub rank: usize,
    pub witness: SliceDecomposition,
    pub tuple: Vec<Subspace>,
}

/// The first tuple of total dimension `k` in search order whose target space
/// contains `t`, searching in parallel.
fn first_hit(t: &Tensor, k: usize, tables: &[SubspaceTable]) -> Option<(Vec<Subspace>, MembershipWitness)> {
    for shape in compositions(k, t.dims()) {
        let size = shape_size(tables, &shape);
        let hit = (0..size as u64).into_par_iter().find_map_first(|index| {
            let picks = tuple_at(tables, &shape, index as u128);
            let families: Vec<PreparedFamily> = picks.iter().map(|p| p.1.clone()).collect();
            if !is_member_prepared(t, &families) {
                return None;
            }
            let w = witness_prepared(t, &families)?;
            Some((picks.iter().map(|p| p.0.clone()).collect::<Vec<_>>(), w))
        });
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// Exact slice rank with a witness decomposition on canonical bases.
///
/// Searches `k = 0, 1, ...`; within each `k`, shapes `(r_1, ..., r_d)` in
/// ascending lexicographic order with `r_j <= n_j`, then subspace tuples in
/// enumeration order (last axis fastest). The first hit is returned.
pub fn slice_rank(t: &Tensor, budget: &RankBudget) -> Result<SliceRankResult> {
    if t.order() == 0 {
        return Err(Error::PreconditionFailed("slice rank needs order at least 1".into()));
    }
    let trivial = *t.dims().iter().min().expect("order >= 1");
    let mut spent: u128 = 0;
    let mut tables: Vec<SubspaceTable> = Vec::new();
    let mut built_for: Option<usize> = None;
    for k in 0..=trivial {
        if k > budget.max_rank {
            return Err(Error::BudgetExceeded { lower_bound: k });
        }
        spent += tuple_count(t.field(), t.dims(), k);
        if spent > budget.max_candidates as u128 {
            return Err(Error::BudgetExceeded { lower_bound: k });
        }
        if built_for < Some(k) {
            tables = tables_for(t, k, budget).map_err(|_| Error::BudgetExceeded { lower_bound: k })?;
            built_for = Some(k);
        }
        if let Some((tuple, w)) = first_hit(t, k, &tables) {
            let families: Vec<Vec<Vector>> = tuple.iter().map(Subspace::basis_vectors).collect();
            let witness = w.into_decomposition(t, &families)?;
            return Ok(SliceRankResult { rank: k, witness, tuple });
        }
    }
    Err(Error::InternalContradiction("slicing along the smallest axis always succeeds".into()))
}

/// Slice rank if it is at most `bound`, otherwise `None`. Cheaper than
/// [`slice_rank`] when only a threshold matters.
pub fn slice_rank_at_most(t: &Tensor, bound: usize, budget: &RankBudget) -> Result<Option<usize>> {
    let capped = RankBudget { max_rank: bound.min(budget.max_rank), ..*budget };
    match slice_rank(t, &capped) {
        Ok(r) => Ok(Some(r.rank)),
        Err(Error::BudgetExceeded { lower_bound }) if lower_bound > bound => Ok(None),
        Err(e) => Err(e),
    }
}

/// Nonzero vectors of length `n` whose first nonzero coordinate is 1.
pub fn normalized_vectors(field: Field, n: usize) -> Vec<Vector> {
    Vector::all(field, n)
        .filter(|v| v.leading_index().is_some_and(|i| v[i] == 1))
        .collect()
}

/// Outer product of vectors, in order.
pub fn outer_all(field: Field, vs: &[&Vector]) -> Tensor {
    vs.iter()
        .map(|v| Tensor::from_vector(v))
        .reduce(|acc, t| acc.outer(&t).expect("same field"))
        .unwrap_or_else(|| Tensor::scalar(field, 1))
}

/// Candidate rank-one products on axes `2..d`, with their factors.
pub(crate) struct TailProducts {
    pub factors: Vec<Vec<Vector>>,
    pub flat: Vec<Vector>,
}

impl TailProducts {
    pub fn new(field: Field, dims: &[usize], per_axis: impl Fn(usize) -> Vec<Vector>) -> Self {
        let lists: Vec<Vec<Vector>> = dims[1..].iter().map(|&n| per_axis(n)).collect();
        let mut factors: Vec<Vec<Vector>> = vec![Vec::new()];
        for list in &lists {
            factors = factors
                .into_iter()
                .flat_map(|prefix| {
                    list.iter().map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v.clone());
                        p
                    })
                })
                .collect();
        }
        let flat = factors
            .iter()
            .map(|fs| {
                let refs: Vec<&Vector> = fs.iter().collect();
                outer_all(field, &refs).to_vector()
            })
            .collect();
        TailProducts { factors, flat }
    }
}

/// Solves `T = sum_i a_i (x) w_i` for the axis-1 vectors `a_i`, given the
/// products `w_i` over the remaining axes. Returns `None` if inconsistent.
pub(crate) fn solve_first_axis(t: &Tensor, ws: &[&Vector]) -> Option<Vec<Vector>> {
    let f = t.field();
    let n1 = t.dims()[0];
    let rest = t.len() / n1;
    let k = ws.len();
    // rest x k system matrix with columns w_i.
    let mut w = Matrix::zeros(f, rest, k);
    for (i, wi) in ws.iter().enumerate() {
        for r in 0..rest {
            w.set(r, i, wi[r]);
        }
    }
    let mut a = vec![vec![0u32; n1]; k];
    for x in 0..n1 {
        let row = Vector::new(f, t.data()[x * rest..(x + 1) * rest].to_vec());
        let y = solve_linear(&w, &row).expect("consistent dims")?;
        for (ai, &yi) in a.iter_mut().zip(y.entries()) {
            ai[x] = yi;
        }
    }
    Some(a.into_iter().map(|e| Vector::new(f, e)).collect())
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Calls `f` on each `k`-subset of `0..n` in lexicographic order until it returns `Some`.
fn find_combination<T>(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> Option<T>) -> Option<T> {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return None;
    }
    loop {
        if let Some(x) = f(&idx) {
            return Some(x);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exact tensor rank with a witness decomposition.
///
/// For each `k`, tries every set of `k` distinct products of projectively
/// normalized vectors on axes `2..d` and solves linearly for the axis-1 vectors.
pub fn tensor_rank(t: &Tensor, budget: &RankBudget) -> Result<(usize, TensorRankDecomposition)> {
    if t.order() == 0 {
        return Err(Error::PreconditionFailed("tensor rank needs order at least 1".into()));
    }
    let f = t.field();
    if t.is_zero() {
        return Ok((0, TensorRankDecomposition::new(f, t.dims(), vec![])?));
    }
    let tail_sizes: u128 = t.dims()[1..]
        .iter()
        .map(|&n| (f.size() as u128).checked_pow(n as u32).map_or(u128::MAX, |q| (q - 1) / (f.size() as u128 - 1)))
        .fold(1u128, |acc, x| acc.saturating_mul(x));
    if tail_sizes > budget.max_candidates as u128 {
        return Err(Error::BudgetExceeded { lower_bound: 1 });
    }
    let tails = TailProducts::new(f, t.dims(), |n| normalized_vectors(f, n));
    let n_tails = tails.flat.len();
    let mut spent: u128 = 0;
    let mut k = 1;
    loop {
        if k > budget.max_rank {
            return Err(Error::BudgetExceeded { lower_bound: k });
        }
        spent = spent.saturating_add(binomial(n_tails as u128, k as u128));
        if spent > budget.max_candidates as u128 {
            return Err(Error::BudgetExceeded { lower_bound: k });
        }
        let found = find_combination(n_tails, k, |combo| {
            let ws: Vec<&Vector> = combo.iter().map(|&i| &tails.flat[i]).collect();
            let a = solve_first_axis(t, &ws)?;
            if a.iter().any(Vector::is_zero) {
                return None;
            }
            let terms = combo
                .iter()
                .zip(a)
                .map(|(&i, a1)| {
                    let mut term = vec![a1];
                    term.extend(tails.factors[i].iter().cloned());
                    term
                })
                .collect();
            Some(terms)
        });
        if let Some(terms) = found {
            return Ok((k, TensorRankDecomposition::new(f, t.dims(), terms)?));
        }
        if k >= n_tails {
            return Err(Error::InternalContradiction("every tensor is a sum of slice products".into()));
        }
        k += 1;
    }
}

/// True iff for every axis `j` and every nonzero coefficient vector `lambda`,
/// `sum_i lambda_i b_{j,i}` has slice rank at least `2k`, with `k` the length.
pub fn is_separated_decomposition(dec: &SliceDecomposition, budget: &RankBudget) -> Result<bool> {
    let k = dec.len();
    let f = dec.field();
    for axis in 0..dec.order() {
        let terms = dec.terms(axis);
        if terms.is_empty() {
            continue;
        }
        for lambda in Vector::all(f, terms.len()).filter(|l| !l.is_zero()) {
            let mut combo = Tensor::zeros(f, terms[0].b.dims());
            for (t, &l) in terms.iter().zip(lambda.entries()) {
                combo.add_scaled(&t.b, l)?;
            }
            if combo.order() == 0 {
                // A scalar has slice rank at most one.
                if 2 * k > usize::from(!combo.is_zero()) {
                    return Ok(false);
                }
                continue;
            }
            if 2 * k > 0 && slice_rank_at_most(&combo, 2 * k - 1, budget)?.is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_decomposition, random_tensor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Field {
        Field::of(2)
    }

    fn outer3(a: &Vector, b: &Vector, c: &Vector) -> Tensor {
        outer_all(a.field(), &[a, b, c])
    }

    /// Independent oracle for 2x2x2 tensors: rank 0 iff zero; rank 1 iff some
    /// unfolding has matrix rank at most 1; otherwise 2 (slicing gives 2).
    fn oracle_222(t: &Tensor) -> usize {
        if t.is_zero() {
            0
        } else if (0..3).any(|a| t.unfold(a).rank() <= 1) {
            1
        } else {
            2
        }
    }

    #[test]
    fn matrix_rank_examples() {
        let f = f2();
        assert_eq!(matrix_rank(&Matrix::zeros(f, 2, 3)), 0);
        assert_eq!(matrix_rank(&Matrix::identity(f, 3)), 3);
        assert_eq!(matrix_rank(&Matrix::new(f, 2, 2, vec![1, 1, 1, 1]).unwrap()), 1);
    }

    #[test]
    fn compositions_are_lexicographic_and_capped() {
        assert_eq!(compositions(2, &[1, 2, 2]), vec![vec![0, 0, 2], vec![0, 1, 1], vec![0, 2, 0], vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(compositions(0, &[3, 3]), vec![vec![0, 0]]);
        assert!(compositions(5, &[1, 1]).is_empty());
    }

    #[test]
    fn membership_examples() {
        let f = f2();
        let z = Tensor::zeros(f, &[2, 2, 2]);
        let tuple = vec![Subspace::full(f, 2), Subspace::zero(f, 2), Subspace::zero(f, 2)];
        let w = membership_in_target(&z, &tuple).unwrap().unwrap();
        assert!(w.b.iter().flatten().all(Tensor::is_zero));

        let a = Vector::new(f, vec![1, 1]);
        let b = Vector::new(f, vec![0, 1]);
        let c = Vector::new(f, vec![1, 0]);
        let t = outer3(&a, &b, &c);
        let tuple = vec![Subspace::from_vectors(f, 2, &[a.clone()]).unwrap(), Subspace::zero(f, 2), Subspace::zero(f, 2)];
        let w = membership_in_target(&t, &tuple).unwrap().unwrap();
        assert_eq!(w.b[0], vec![Tensor::from_vector(&b).outer(&Tensor::from_vector(&c)).unwrap()]);

        let id = Tensor::identity(f, 3, 2);
        let e1 = Subspace::from_vectors(f, 2, &[Vector::unit(f, 2, 0)]).unwrap();
        let tuple = vec![e1.clone(), e1, Subspace::zero(f, 2)];
        assert!(membership_in_target(&id, &tuple).unwrap().is_none());
    }

    #[test]
    fn identity_membership_against_brute_force() {
        // Brute force: every b_1 on axes (y,z) and b_2 on axes (x,z), 2^4 * 2^4 choices.
        let f = f2();
        let id = Tensor::identity(f, 3, 2);
        let e1 = Vector::unit(f, 2, 0);
        let mut found = false;
        for b1 in Tensor::all(f, &[2, 2]) {
            for b2 in Tensor::all(f, &[2, 2]) {
                let s = Tensor::slice_product(&e1, 0, &b1).unwrap().add(&Tensor::slice_product(&e1, 1, &b2).unwrap()).unwrap();
                found |= s == id;
            }
        }
        assert!(!found);
    }

    #[test]
    fn projection_membership_agrees_with_linear_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for p in [2, 3] {
            let f = Field::of(p);
            for _ in 0..60 {
                let t = random_tensor(&mut rng, f, &[2, 3, 2]);
                let dec = random_decomposition(&mut rng, f, &[2, 3, 2], &[1, 1, 0]).unwrap();
                let fams: Vec<Vec<Vector>> = (0..3).map(|j| dec.a_family(j)).collect();
                // Both a random tensor and one inside the target.
                for target in [t.clone(), dec.assemble()] {
                    let fast = membership_with_families(&target, &fams).unwrap();
                    let slow = membership_by_linear_system(&target, &fams).unwrap();
                    assert_eq!(fast.is_some(), slow.is_some());
                    if let Some(w) = fast {
                        assert_eq!(w.into_decomposition(&target, &fams).unwrap().assemble(), target);
                    }
                }
            }
        }
    }

    #[test]
    fn slice_rank_examples() {
        let f = f2();
        let budget = RankBudget::default();
        assert_eq!(slice_rank(&Tensor::zeros(f, &[2, 2, 2]), &budget).unwrap().rank, 0);
        for k in 1..=3 {
            let r = slice_rank(&Tensor::identity(f, 3, k), &budget).unwrap();
            assert_eq!(r.rank, k);
            assert_eq!(r.witness.assemble(), Tensor::identity(f, 3, k));
        }
        let a = Vector::new(f, vec![1, 1]);
        let t = outer3(&a, &a, &Vector::new(f, vec![0, 1]));
        let r = slice_rank(&t, &budget).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.witness.assemble(), t);
    }

    #[test]
    fn slice_rank_matches_222_oracle_exhaustively() {
        let f = f2();
        for t in Tensor::all(f, &[2, 2, 2]) {
            let r = slice_rank(&t, &RankBudget::default()).unwrap();
            assert_eq!(r.rank, oracle_222(&t));
            assert_eq!(r.witness.assemble(), t);
        }
    }

    #[test]
    fn budget_reports_lower_bound() {
        let f = f2();
        let budget = RankBudget { max_rank: 1, ..RankBudget::default() };
        assert_eq!(slice_rank(&Tensor::identity(f, 3, 2), &budget), Err(Error::BudgetExceeded { lower_bound: 2 }));
        let tight = RankBudget::with_candidates(5);
        assert!(matches!(slice_rank(&Tensor::identity(f, 3, 3), &tight), Err(Error::BudgetExceeded { .. })));
        assert_eq!(slice_rank_at_most(&Tensor::identity(f, 3, 3), 2, &RankBudget::default()).unwrap(), None);
        assert_eq!(slice_rank_at_most(&Tensor::identity(f, 3, 2), 2, &RankBudget::default()).unwrap(), Some(2));
    }

    /// Tensor rank by breadth-first search over sums of rank-one tensors.
    fn tensor_rank_bfs(t: &Tensor) -> usize {
        use std::collections::HashSet;
        let f = t.field();
        let dims = t.dims().to_vec();
        let mut rank_one: HashSet<Tensor> = HashSet::new();
        let lists: Vec<Vec<Vector>> = dims.iter().map(|&n| Vector::all(f, n).filter(|v| !v.is_zero()).collect()).collect();
        let mut stack = vec![Tensor::scalar(f, 1)];
        for l in &lists {
            stack = stack.iter().flat_map(|s| l.iter().map(move |v| s.outer(&Tensor::from_vector(v)).unwrap())).collect();
        }
        rank_one.extend(stack);
        let mut level: HashSet<Tensor> = [Tensor::zeros(f, &dims)].into();
        let mut seen = level.clone();
        for k in 0.. {
            if level.contains(t) {
                return k;
            }
            let mut next = HashSet::new();
            for s in &level {
                for r in &rank_one {
                    let u = s.add(r).unwrap();
                    if seen.insert(u.clone()) {
                        next.insert(u);
                    }
                }
            }
            level = next;
        }
        unreachable!()
    }

    #[test]
    fn tensor_rank_examples() {
        let f = f2();
        let b = RankBudget::default();
        assert_eq!(tensor_rank(&Tensor::zeros(f, &[2, 2]), &b).unwrap().0, 0);
        let (k, dec) = tensor_rank(&Tensor::identity(f, 2, 2), &b).unwrap();
        assert_eq!(k, 2);
        assert_eq!(dec.assemble(), Tensor::identity(f, 2, 2));
        let (k, dec) = tensor_rank(&Tensor::identity(f, 3, 2), &b).unwrap();
        assert_eq!(k, 2);
        assert_eq!(dec.assemble(), Tensor::identity(f, 3, 2));
    }

    #[test]
    fn tensor_rank_matches_bfs_on_222() {
        let f = f2();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..40 {
            let t = random_tensor(&mut rng, f, &[2, 2, 2]);
            let (k, dec) = tensor_rank(&t, &RankBudget::default()).unwrap();
            assert_eq!(k, tensor_rank_bfs(&t));
            assert_eq!(dec.assemble(), t);
            assert!(slice_rank(&t, &RankBudget::default()).unwrap().rank <= k);
        }
    }

    #[test]
    fn order_two_ranks_agree() {
        let f = f2();
        for t in Tensor::all(f, &[3, 3]).step_by(7) {
            let m = t.unfold(0);
            let sr = slice_rank(&t, &RankBudget::default()).unwrap().rank;
            let tr = tensor_rank(&t, &RankBudget::default()).unwrap().0;
            assert_eq!(sr, m.rank());
            assert_eq!(tr, m.rank());
        }
    }

    #[test]
    fn separated_examples() {
        let f = f2();
        let b = RankBudget::default();
        assert!(is_separated_decomposition(&SliceDecomposition::empty(f, &[2, 2, 2]), &b).unwrap());
        let mut zero_b = SliceDecomposition::empty(f, &[2, 2, 2]);
        zero_b.push(0, Vector::unit(f, 2, 0), Tensor::zeros(f, &[2, 2])).unwrap();
        assert!(!is_separated_decomposition(&zero_b, &b).unwrap());
        let mut sep = SliceDecomposition::empty(f, &[2, 2, 2, 2]);
        sep.push(0, Vector::unit(f, 2, 0), Tensor::identity(f, 3, 2)).unwrap();
        assert!(is_separated_decomposition(&sep, &b).unwrap());
    }
}
