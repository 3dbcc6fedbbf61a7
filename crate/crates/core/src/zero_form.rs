//! Certificates that a slice decomposition assembles to zero.
//!
//! A certificate assigns to each key `(J, j, i, i_{J \ j})`, with `J` a set of at
//! least two axes and `j` in `J`, a tensor `c` on the axes outside `J` (a scalar
//! when `J` is every axis). It is valid for a decomposition when
//!
//! * every `b_{j,i}` equals the sum over keys `(J, j, i, idx)` of
//!   `(x)_{j' in J \ j} a_{j', idx_{j'}} (x) c`, and
//! * for each `J` and each full index tuple on `J`, the entries obtained by
//!   choosing one axis `j` of `J` to be the "owner" sum to zero.
//!
//! Missing keys stand for zero tensors. Both conditions together force the
//! decomposition to assemble to zero.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::decomposition::SliceDecomposition;
use crate::error::{Error, Result};
use crate::linalg::{dual_family, Matrix, Vector};
use crate::tensor::{complement_axes, multi_indices, Tensor};

/// `(J, j, i, i_{J \ j})`, all 0-based; `others` follows the order of `J \ j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CertKey {
    pub axes: Vec<usize>,
    pub axis: usize,
    pub index: usize,
    pub others: Vec<usize>,
}

impl CertKey {
    /// The index tuple over all of `J`, with `index` inserted at `axis`.
    pub fn full_indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.axes.len());
        let mut it = self.others.iter();
        for &a in &self.axes {
            out.push(if a == self.axis { self.index } else { *it.next().expect("others has |J|-1 entries") });
        }
        out
    }

    /// Inverse of [`CertKey::full_indices`] for owner `axis`.
    pub fn from_full(axes: &[usize], axis: usize, full: &[usize]) -> CertKey {
        let mut index = 0;
        let mut others = Vec::with_capacity(axes.len() - 1);
        for (&a, &i) in axes.iter().zip(full) {
            if a == axis {
                index = i;
            } else {
                others.push(i);
            }
        }
        CertKey { axes: axes.to_vec(), axis, index, others }
    }
}

impl fmt::Display for CertKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axes: Vec<String> = self.axes.iter().map(|a| (a + 1).to_string()).collect();
        let others: Vec<String> = self.others.iter().map(|a| (a + 1).to_string()).collect();
        write!(f, "J={{{}}} axis {} index {} others ({})", axes.join(","), self.axis + 1, self.index + 1, others.join(","))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZeroFormCertificate {
    pub entries: BTreeMap<CertKey, Tensor>,
}

impl ZeroFormCertificate {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &CertKey) -> Option<&Tensor> {
        self.entries.get(key)
    }

    /// Adds to an entry, dropping it if the result is zero.
    pub fn accumulate(&mut self, key: CertKey, value: &Tensor) -> Result<()> {
        match self.entries.get_mut(&key) {
            Some(v) => {
                v.add_scaled(value, 1)?;
                if v.is_zero() {
                    self.entries.remove(&key);
                }
            }
            None => {
                if !value.is_zero() {
                    self.entries.insert(key, value.clone());
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroFormViolation {
    /// The key does not fit the decomposition's shape or dims.
    Key { key: CertKey, detail: String },
    /// `b_{axis,index}` is not reproduced by its entries.
    Representation { axis: usize, index: usize },
    /// The entries over `axes` at `indices` do not sum to zero.
    Cancellation { axes: Vec<usize>, indices: Vec<usize> },
}

impl fmt::Display for ZeroFormViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroFormViolation::Key { key, detail } => write!(f, "bad key {key}: {detail}"),
            ZeroFormViolation::Representation { axis, index } => {
                write!(f, "b on axis {} term {} is not represented by the certificate", axis + 1, index + 1)
            }
            ZeroFormViolation::Cancellation { axes, indices } => {
                let a: Vec<String> = axes.iter().map(|x| (x + 1).to_string()).collect();
                let i: Vec<String> = indices.iter().map(|x| (x + 1).to_string()).collect();
                write!(f, "entries over J={{{}}} at ({}) do not cancel", a.join(","), i.join(","))
            }
        }
    }
}

fn check_key(dec: &SliceDecomposition, key: &CertKey, value: &Tensor) -> Option<String> {
    let d = dec.order();
    if key.axes.len() < 2 || !key.axes.windows(2).all(|w| w[0] < w[1]) || key.axes.iter().any(|&a| a >= d) {
        return Some("J must be an increasing set of at least two axes".into());
    }
    if !key.axes.contains(&key.axis) {
        return Some("owner axis not in J".into());
    }
    if key.others.len() != key.axes.len() - 1 {
        return Some("wrong number of partner indices".into());
    }
    let shape = dec.shape();
    if key.index >= shape[key.axis] {
        return Some("index out of range".into());
    }
    let partners = key.axes.iter().filter(|&&a| a != key.axis);
    if key.others.iter().zip(partners).any(|(&i, &a)| i >= shape[a]) {
        return Some("partner index out of range".into());
    }
    let rest: Vec<usize> = complement_axes(d, &key.axes).iter().map(|&a| dec.dims()[a]).collect();
    if value.dims() != rest.as_slice() || value.field() != dec.field() {
        return Some(format!("value dims {:?}, expected {:?}", value.dims(), rest));
    }
    None
}

/// `(x)_{j' in J \ j} a_{j', idx} (x) c` on the axes other than `key.axis`.
fn lift(dec: &SliceDecomposition, key: &CertKey, value: &Tensor) -> Result<Tensor> {
    let d = dec.order();
    let partners: Vec<usize> = key.axes.iter().copied().filter(|&a| a != key.axis).collect();
    let vecs: Vec<Tensor> = partners
        .iter()
        .zip(&key.others)
        .map(|(&a, &i)| Tensor::from_vector(&dec.terms(a)[i].a))
        .collect();
    let labels: Vec<[usize; 1]> = partners.iter().map(|&a| [a]).collect();
    let rest = complement_axes(d, &key.axes);
    let mut parts: Vec<(&[usize], &Tensor)> = labels.iter().zip(&vecs).map(|(l, t)| (&l[..], t)).collect();
    parts.push((&rest, value));
    Tensor::outer_labeled(dec.field(), &parts)
}

/// Checks both certificate properties exactly, reporting every violation.
pub fn verify_zero_form(
    dec: &SliceDecomposition,
    cert: &ZeroFormCertificate,
) -> std::result::Result<(), Vec<ZeroFormViolation>> {
    let mut violations = Vec::new();
    for (key, value) in &cert.entries {
        if let Some(detail) = check_key(dec, key, value) {
            violations.push(ZeroFormViolation::Key { key: key.clone(), detail });
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    // Representation.
    let mut rebuilt: Vec<Vec<Tensor>> = (0..dec.order())
        .map(|j| vec![Tensor::zeros(dec.field(), &dec.complement_dims(j)); dec.terms(j).len()])
        .collect();
    for (key, value) in &cert.entries {
        let t = lift(dec, key, value).expect("key checked");
        rebuilt[key.axis][key.index].add_scaled(&t, 1).expect("same dims");
    }
    for (axis, terms) in dec.groups().iter().enumerate() {
        for (index, term) in terms.iter().enumerate() {
            if term.b != rebuilt[axis][index] {
                violations.push(ZeroFormViolation::Representation { axis, index });
            }
        }
    }
    // Cancellation.
    let mut sums: BTreeMap<(Vec<usize>, Vec<usize>), Tensor> = BTreeMap::new();
    for (key, value) in &cert.entries {
        sums.entry((key.axes.clone(), key.full_indices()))
            .or_insert_with(|| Tensor::zeros(value.field(), value.dims()))
            .add_scaled(value, 1)
            .expect("same dims");
    }
    for ((axes, indices), s) in sums {
        if !s.is_zero() {
            violations.push(ZeroFormViolation::Cancellation { axes, indices });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Per-axis dual families and complementary projections.
struct AxisData {
    duals: Vec<Vec<Vector>>,
    complements: Vec<Matrix>,
}

fn axis_data(dec: &SliceDecomposition) -> Result<AxisData> {
    let f = dec.field();
    let mut duals = Vec::new();
    let mut complements = Vec::new();
    for axis in 0..dec.order() {
        let n = dec.dims()[axis];
        let fam = dual_family(f, n, &dec.a_family(axis)).map_err(|_| Error::DependentFamilies(axis + 1))?;
        complements.push(fam.complement_projection(n, f));
        duals.push(fam.duals);
    }
    Ok(AxisData { duals, complements })
}

fn check_zero(dec: &SliceDecomposition) -> Result<AxisData> {
    let data = axis_data(dec)?;
    if !dec.assemble().is_zero() {
        return Err(Error::NotZero);
    }
    Ok(data)
}

/// Nonempty subsets of `items`, by increasing size then lexicographically.
fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=items.len() {
        for combo in crate::linalg::combinations_of(items.len(), size) {
            out.push(combo.iter().map(|&i| items[i]).collect());
        }
    }
    out
}

/// Builds a certificate for a decomposition of the zero tensor.
///
/// With canonical dual families `a*` and `Q_j = I - P_j` the projection killing
/// the axis-`j` span, the entry for `(J, j, i, idx)` is
/// `Q_{outside J} ((x)_{j' in J \ j} a*_{j', idx} . b_{j,i})`: expanding each
/// other axis of `b_{j,i}` as `P + Q` and gathering terms by the set of axes that
/// received a `P`. The all-`Q` part vanishes because the decomposition is zero.
pub fn extract_zero_form(dec: &SliceDecomposition) -> Result<ZeroFormCertificate> {
    let data = check_zero(dec)?;
    let d = dec.order();
    let mut cert = ZeroFormCertificate::new();
    for j in 0..d {
        let others: Vec<usize> = (0..d).filter(|&a| a != j).collect();
        let live: Vec<usize> = others.iter().copied().filter(|&a| !dec.terms(a).is_empty()).collect();
        for (i, term) in dec.terms(j).iter().enumerate() {
            if term.b.is_zero() {
                continue;
            }
            for s in subsets(&live) {
                let mut axes = s.clone();
                axes.push(j);
                axes.sort_unstable();
                // Positions of the axes of s inside b (which omits axis j).
                let local: Vec<usize> = s.iter().map(|&a| if a < j { a } else { a - 1 }).collect();
                let rest_global = complement_axes(d, &axes);
                let ranges: Vec<usize> = s.iter().map(|&a| dec.terms(a).len()).collect();
                for idx in multi_indices(&ranges) {
                    let duals: Vec<Tensor> =
                        s.iter().zip(&idx).map(|(&a, &k)| Tensor::from_vector(&data.duals[a][k])).collect();
                    let small = duals
                        .into_iter()
                        .reduce(|acc, t| acc.outer(&t).expect("same field"))
                        .expect("s nonempty");
                    let mut c = term.b.contract(&small, &local)?;
                    for (pos, &g) in rest_global.iter().enumerate() {
                        if !dec.terms(g).is_empty() {
                            c = c.mode_product(pos, &data.complements[g])?;
                        }
                    }
                    if !c.is_zero() {
                        cert.entries.insert(CertKey { axes: axes.clone(), axis: j, index: i, others: idx }, c);
                    }
                }
            }
        }
    }
    Ok(cert)
}

/// The order-3 quantities of a zero decomposition
/// `sum a_i(x) b_i(y,z) + sum c_j(y) d_j(x,z) + sum e_k(z) f_k(x,y)`:
///
/// `b_i = sum_j c_j (x) p_{ij} + sum_k q_{ik} (x) e_k`,
/// `d_j = sum_i a_i (x) g_{ij} + sum_k h_{jk} (x) e_k`,
/// `f_k = sum_i a_i (x) u_{ik} + sum_j v_{jk} (x) c_j`,
///
/// with `p + g = sum_k lambda e_k`, `q + u = sum_j mu c_j`, `h + v = sum_i nu a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderThreeZeroForm {
    pub p: Vec<Vec<Vector>>,
    pub q: Vec<Vec<Vector>>,
    pub g: Vec<Vec<Vector>>,
    pub h: Vec<Vec<Vector>>,
    pub u: Vec<Vec<Vector>>,
    pub v: Vec<Vec<Vector>>,
    /// Indexed `[i][j][k]`.
    pub lambda: Vec<Vec<Vec<u32>>>,
    pub mu: Vec<Vec<Vec<u32>>>,
    pub nu: Vec<Vec<Vec<u32>>>,
}

/// Explicit order-3 extraction by dual functions.
pub fn extract_order_three(dec: &SliceDecomposition) -> Result<OrderThreeZeroForm> {
    if dec.order() != 3 {
        return Err(Error::PreconditionFailed(format!("order-3 path on order {}", dec.order())));
    }
    let data = check_zero(dec)?;
    let [r, s, t] = [0, 1, 2].map(|j| dec.terms(j).len());
    let dual = |axis: usize, i: usize| &data.duals[axis][i];
    let apply = |axis: usize, w: Vector| data.complements[axis].mul_vector(&w).expect("dims");
    let vec_of = |t: Tensor| t.to_vector();
    // b_i(y,z): axis 0 of b is y, axis 1 is z.
    let b = |i: usize| &dec.terms(0)[i].b;
    let dd = |j: usize| &dec.terms(1)[j].b; // (x,z)
    let ff = |k: usize| &dec.terms(2)[k].b; // (x,y)
    let grid = |rows: usize, cols: usize, fun: &dyn Fn(usize, usize) -> Vector| -> Vec<Vec<Vector>> {
        (0..rows).map(|x| (0..cols).map(|y| fun(x, y)).collect()).collect()
    };
    let p = grid(r, s, &|i, j| vec_of(b(i).contract_vector(0, dual(1, j)).expect("dims")));
    let q = grid(r, t, &|i, k| apply(1, vec_of(b(i).contract_vector(1, dual(2, k)).expect("dims"))));
    let g = grid(r, s, &|i, j| vec_of(dd(j).contract_vector(0, dual(0, i)).expect("dims")));
    let h = grid(s, t, &|j, k| apply(0, vec_of(dd(j).contract_vector(1, dual(2, k)).expect("dims"))));
    let u = grid(r, t, &|i, k| vec_of(ff(k).contract_vector(0, dual(0, i)).expect("dims")));
    let v = grid(s, t, &|j, k| apply(0, vec_of(ff(k).contract_vector(1, dual(1, j)).expect("dims"))));
    let mut lambda = vec![vec![vec![0u32; t]; s]; r];
    let mut mu = lambda.clone();
    let mut nu = lambda.clone();
    for i in 0..r {
        for j in 0..s {
            for k in 0..t {
                lambda[i][j][k] = dual(2, k).dot(&p[i][j].add(&g[i][j]));
                mu[i][j][k] = dual(1, j).dot(&q[i][k].add(&u[i][k]));
                nu[i][j][k] = dual(0, i).dot(&h[j][k].add(&v[j][k]));
            }
        }
    }
    Ok(OrderThreeZeroForm { p, q, g, h, u, v, lambda, mu, nu })
}

impl OrderThreeZeroForm {
    /// True iff `lambda + mu + nu = 0` at every index triple.
    pub fn coefficients_cancel(&self, field: crate::linalg::Field) -> bool {
        self.lambda.iter().enumerate().all(|(i, li)| {
            li.iter().enumerate().all(|(j, lij)| {
                lij.iter().enumerate().all(|(k, &l)| field.add(field.add(l, self.mu[i][j][k]), self.nu[i][j][k]) == 0)
            })
        })
    }

    /// The same data as a general certificate. Each pair function is split into
    /// its part outside the third span (the two-axis layer) and its coordinates
    /// along it (the three-axis layer).
    pub fn to_certificate(&self, dec: &SliceDecomposition) -> Result<ZeroFormCertificate> {
        let data = axis_data(dec)?;
        let [r, s, t] = [0, 1, 2].map(|j| dec.terms(j).len());
        let mut cert = ZeroFormCertificate::new();
        let vt = |v: &Vector| Tensor::from_vector(v);
        let split = |axis: usize, w: &Vector| -> (Vector, Vec<u32>) {
            if data.duals[axis].is_empty() {
                return (w.clone(), Vec::new());
            }
            let outside = data.complements[axis].mul_vector(w).expect("dims");
            (outside, data.duals[axis].iter().map(|d| d.dot(w)).collect())
        };
        let key = |axes: &[usize], axis: usize, index: usize, others: &[usize]| CertKey {
            axes: axes.to_vec(),
            axis,
            index,
            others: others.to_vec(),
        };
        let f = dec.field();
        for i in 0..r {
            for j in 0..s {
                let (outside, coords) = split(2, &self.p[i][j]);
                cert.accumulate(key(&[0, 1], 0, i, &[j]), &vt(&outside))?;
                for (k, &c) in coords.iter().enumerate() {
                    cert.accumulate(key(&[0, 1, 2], 0, i, &[j, k]), &Tensor::scalar(f, c))?;
                }
                let (outside, coords) = split(2, &self.g[i][j]);
                cert.accumulate(key(&[0, 1], 1, j, &[i]), &vt(&outside))?;
                for (k, &c) in coords.iter().enumerate() {
                    cert.accumulate(key(&[0, 1, 2], 1, j, &[i, k]), &Tensor::scalar(f, c))?;
                }
            }
            for k in 0..t {
                cert.accumulate(key(&[0, 2], 0, i, &[k]), &vt(&self.q[i][k]))?;
                let (outside, coords) = split(1, &self.u[i][k]);
                cert.accumulate(key(&[0, 2], 2, k, &[i]), &vt(&outside))?;
                for (j, &c) in coords.iter().enumerate() {
                    cert.accumulate(key(&[0, 1, 2], 2, k, &[i, j]), &Tensor::scalar(f, c))?;
                }
            }
        }
        for j in 0..s {
            for k in 0..t {
                cert.accumulate(key(&[1, 2], 1, j, &[k]), &vt(&self.h[j][k]))?;
                let (outside, coords) = split(0, &self.v[j][k]);
                cert.accumulate(key(&[1, 2], 2, k, &[j]), &vt(&outside))?;
                for (i, &c) in coords.iter().enumerate() {
                    cert.accumulate(key(&[0, 1, 2], 2, k, &[i, j]), &Tensor::scalar(f, c))?;
                }
            }
        }
        Ok(cert)
    }
}

/// Certificate for the difference of two decompositions of one tensor that
/// share their one-variable functions.
pub fn difference_certificate(dec1: &SliceDecomposition, dec2: &SliceDecomposition) -> Result<ZeroFormCertificate> {
    let diff = dec1.b_difference(dec2)?;
    if dec1.assemble() != dec2.assemble() {
        return Err(Error::DifferentTensors);
    }
    extract_zero_form(&diff)
}

/// Keys that carry at least one nonzero entry, grouped by `J`.
pub fn layers(cert: &ZeroFormCertificate) -> BTreeMap<Vec<usize>, BTreeSet<CertKey>> {
    let mut out: BTreeMap<Vec<usize>, BTreeSet<CertKey>> = BTreeMap::new();
    for key in cert.entries.keys() {
        out.entry(key.axes.clone()).or_default().insert(key.clone());
    }
    out
}
