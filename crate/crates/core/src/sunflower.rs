//! Families of decompositions of one tensor that share a common "center" of
//! one-variable functions, and merging them into a center-only decomposition.
//!
//! Petal `theta` decomposes `T` as
//! `sum_j sum_i a0_{j,i} (x) b0^theta_{j,i} + sum_j sum_i a^theta_{j,i} (x) b^theta_{j,i}`.
//! When there are more than `d` petals and, on every axis, the center functions
//! together with all petal functions are linearly independent, `T` already has a
//! decomposition using only the center functions.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decomposition::SliceDecomposition;
use crate::error::{Error, Result};
use crate::linalg::{are_independent, Field, Vector};
use crate::rank::membership_with_families;
use crate::sample::{random_independent_family, random_star_shift_params, random_tensor};
use crate::tensor::Tensor;
use crate::transforms::{slice_by_axis, star_shift};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Petal {
    /// `b0^theta[j][i]`, paired with the center function `a0_{j,i}`.
    pub center_b: Vec<Vec<Tensor>>,
    /// `a^theta[j]`, this petal's own functions.
    pub a: Vec<Vec<Vector>>,
    /// `b^theta[j][i]`, paired with `a^theta[j][i]`.
    pub b: Vec<Vec<Tensor>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SunflowerFamily {
    pub field: Field,
    pub dims: Vec<usize>,
    pub center: Vec<Vec<Vector>>,
    pub petals: Vec<Petal>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SunflowerViolation {
    Shape { petal: usize, detail: String },
    /// Petal `petal` assembles to a different tensor than petal 0.
    DifferentTensor { petal: usize },
    /// Center and petal functions on this axis are jointly dependent.
    Dependent { axis: usize },
    TooFewPetals { h: usize, d: usize },
}

impl fmt::Display for SunflowerViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SunflowerViolation::Shape { petal, detail } => write!(f, "petal {}: {}", petal + 1, detail),
            SunflowerViolation::DifferentTensor { petal } => {
                write!(f, "petal {} assembles to a different tensor than petal 1", petal + 1)
            }
            SunflowerViolation::Dependent { axis } => {
                write!(f, "axis {}: center and petal functions are linearly dependent", axis + 1)
            }
            SunflowerViolation::TooFewPetals { h, d } => write!(f, "h <= d: {h} petals for order {d}"),
        }
    }
}

impl SunflowerFamily {
    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn h(&self) -> usize {
        self.petals.len()
    }

    /// `(r0_1, ..., r0_d)`.
    pub fn center_shape(&self) -> Vec<usize> {
        self.center.iter().map(Vec::len).collect()
    }

    /// Petal `theta` as a decomposition: center terms first on each axis, then its own.
    pub fn petal_decomposition(&self, theta: usize) -> Result<SliceDecomposition> {
        let petal = &self.petals[theta];
        let mut dec = SliceDecomposition::empty(self.field, &self.dims);
        for axis in 0..self.order() {
            for (a, b) in self.center[axis].iter().zip(&petal.center_b[axis]) {
                dec.push(axis, a.clone(), b.clone())?;
            }
            for (a, b) in petal.a[axis].iter().zip(&petal.b[axis]) {
                dec.push(axis, a.clone(), b.clone())?;
            }
        }
        Ok(dec)
    }

    /// The tensor of petal 0.
    pub fn tensor(&self) -> Result<Tensor> {
        match self.petals.first() {
            Some(_) => Ok(self.petal_decomposition(0)?.assemble()),
            None => Err(Error::HypothesesViolated("family has no petals".into())),
        }
    }

    fn shape_problems(&self, theta: usize) -> Option<String> {
        let p = &self.petals[theta];
        let d = self.order();
        if self.center.len() != d || p.center_b.len() != d || p.a.len() != d || p.b.len() != d {
            return Some(format!("expected {d} axes"));
        }
        for axis in 0..d {
            if p.center_b[axis].len() != self.center[axis].len() {
                return Some(format!("axis {}: center b count differs from center size", axis + 1));
            }
            if p.a[axis].len() != p.b[axis].len() {
                return Some(format!("axis {}: a and b counts differ", axis + 1));
            }
        }
        self.petal_decomposition(theta).err().map(|e| e.to_string())
    }
}

/// Checks equal tensors, joint independence per axis, and `h > d`.
pub fn check_hypotheses(fam: &SunflowerFamily) -> std::result::Result<(), Vec<SunflowerViolation>> {
    let mut violations = Vec::new();
    let d = fam.order();
    let mut shapes_ok = true;
    for theta in 0..fam.h() {
        if let Some(detail) = fam.shape_problems(theta) {
            violations.push(SunflowerViolation::Shape { petal: theta, detail });
            shapes_ok = false;
        }
    }
    if shapes_ok && fam.h() > 0 {
        let t0 = fam.petal_decomposition(0).expect("shape checked").assemble();
        for theta in 1..fam.h() {
            if fam.petal_decomposition(theta).expect("shape checked").assemble() != t0 {
                violations.push(SunflowerViolation::DifferentTensor { petal: theta });
            }
        }
        for axis in 0..d {
            let mut all = fam.center[axis].clone();
            for p in &fam.petals {
                all.extend(p.a[axis].iter().cloned());
            }
            if !are_independent(fam.field, fam.dims[axis], &all) {
                violations.push(SunflowerViolation::Dependent { axis });
            }
        }
    }
    if fam.h() <= d {
        violations.push(SunflowerViolation::TooFewPetals { h: fam.h(), d });
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// A decomposition of the family's tensor using only the center functions.
pub fn merge_to_center(fam: &SunflowerFamily) -> Result<SliceDecomposition> {
    if let Err(v) = check_hypotheses(fam) {
        let msgs: Vec<String> = v.iter().map(ToString::to_string).collect();
        return Err(Error::HypothesesViolated(msgs.join("; ")));
    }
    let t = fam.tensor()?;
    match membership_with_families(&t, &fam.center)? {
        Some(w) => w.into_decomposition(&t, &fam.center),
        None => Err(Error::InternalContradiction(
            "tensor is not in the center target space although the hypotheses hold".into(),
        )),
    }
}

/// Parameters of [`generate_sunflower_fixture`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SunflowerSpec {
    pub seed: u64,
    pub field: Field,
    pub dims: Vec<usize>,
    pub center_shape: Vec<usize>,
    pub petal_shape: Vec<usize>,
    pub h: usize,
    /// Random star shifts applied to each petal.
    pub shifts: usize,
}

impl SunflowerSpec {
    /// Smallest valid family for the given dims: `h = d + 1`, one center function
    /// on the first axis and one petal function per axis where room allows.
    pub fn minimal(seed: u64, field: Field, dims: &[usize]) -> Self {
        let d = dims.len();
        let h = d + 1;
        let center_shape: Vec<usize> = (0..d).map(|j| usize::from(j == 0)).collect();
        let petal_shape = dims.iter().zip(&center_shape).map(|(&n, &c)| usize::from(n >= c + h)).collect();
        SunflowerSpec { seed, field, dims: dims.to_vec(), center_shape, petal_shape, h, shifts: 4 }
    }
}

/// A deterministic family satisfying the hypotheses: a random center
/// decomposition of `T`, copied into every petal together with zero-`b` petal
/// terms, then scrambled by random star shifts inside each petal.
pub fn generate_sunflower_fixture(spec: &SunflowerSpec) -> Result<SunflowerFamily> {
    let d = spec.dims.len();
    if spec.center_shape.len() != d || spec.petal_shape.len() != d {
        return Err(Error::DimensionMismatch("shape lengths differ from the order".into()));
    }
    for axis in 0..d {
        let need = spec.center_shape[axis] + spec.h * spec.petal_shape[axis];
        if need > spec.dims[axis] {
            return Err(Error::DimsTooSmall(format!(
                "axis {} needs {need} independent functions but has dimension {}",
                axis + 1,
                spec.dims[axis]
            )));
        }
    }
    let f = spec.field;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut center = Vec::with_capacity(d);
    let mut petal_a: Vec<Vec<Vec<Vector>>> = vec![Vec::with_capacity(d); spec.h];
    for axis in 0..d {
        let total = spec.center_shape[axis] + spec.h * spec.petal_shape[axis];
        let mut fam = random_independent_family(&mut rng, f, spec.dims[axis], total)?;
        let rest = fam.split_off(spec.center_shape[axis]);
        center.push(fam);
        let size = spec.petal_shape[axis];
        for (theta, slot) in petal_a.iter_mut().enumerate() {
            slot.push(rest[theta * size..(theta + 1) * size].to_vec());
        }
    }
    let mut base = SliceDecomposition::empty(f, &spec.dims);
    for (axis, fam) in center.iter().enumerate() {
        let rest = base.complement_dims(axis);
        for a in fam {
            base.push(axis, a.clone(), random_tensor(&mut rng, f, &rest))?;
        }
    }
    let mut petals = Vec::with_capacity(spec.h);
    for own in petal_a {
        let mut dec = SliceDecomposition::empty(f, &spec.dims);
        for (axis, own_axis) in own.iter().enumerate() {
            for t in base.terms(axis) {
                dec.push(axis, t.a.clone(), t.b.clone())?;
            }
            let rest = dec.complement_dims(axis);
            for a in own_axis {
                dec.push(axis, a.clone(), Tensor::zeros(f, &rest))?;
            }
        }
        for _ in 0..spec.shifts {
            if let Some(p) = random_star_shift_params(&mut rng, &dec) {
                dec = star_shift(&dec, &p.axes, &p.indices, &p.shifts)?;
            }
        }
        let mut center_b = Vec::with_capacity(d);
        let mut b = Vec::with_capacity(d);
        for axis in 0..d {
            let terms = dec.terms(axis);
            let split = spec.center_shape[axis];
            center_b.push(terms[..split].iter().map(|t| t.b.clone()).collect());
            b.push(terms[split..].iter().map(|t| t.b.clone()).collect());
        }
        petals.push(Petal { center_b, a: own, b });
    }
    Ok(SunflowerFamily { field: f, dims: spec.dims.clone(), center, petals })
}

/// Three petals with empty center on the order-3 identity tensor with 2 values
/// per axis over `F_2`: petal `j` slices along axis `j`. It has only `h = d`
/// petals and the tensor admits no decomposition with an empty center.
pub fn sharpness_family() -> SunflowerFamily {
    let f = Field::of(2);
    let t = Tensor::identity(f, 3, 2);
    let petals = (0..3)
        .map(|axis| {
            let dec = slice_by_axis(&t, axis).expect("axis in range");
            Petal {
                center_b: vec![Vec::new(); 3],
                a: (0..3).map(|j| dec.a_family(j)).collect(),
                b: (0..3).map(|j| dec.terms(j).iter().map(|t| t.b.clone()).collect()).collect(),
            }
        })
        .collect();
    SunflowerFamily { field: f, dims: vec![2, 2, 2], center: vec![Vec::new(); 3], petals }
}
