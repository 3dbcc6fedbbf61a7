//! Acceptance suite: one check per criterion, each printing a PASS or FAIL line
//! with its running time. Runs as a plain binary so the lines always show.
//!
//! ```text
//! cargo test --release -p slicerank --test acceptance
//! ```

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use slicerank::decomposition::{SliceDecomposition, TensorRankDecomposition};
use slicerank::enumeration::{
    admissible_bound, admissible_tuples, basis_count_formula, count_matrix_decompositions,
    count_slice_decompositions_given_tuple, count_tensor_rank_decompositions, example_product_tensor,
    tensor_rank_example_formula,
};
use slicerank::error::Error;
use slicerank::linalg::{are_independent, ordered_basis_count, Field, Vector};
use slicerank::rank::{is_separated_decomposition, membership_with_families, slice_rank, RankBudget};
use slicerank::sample::{
    random_decomposition, random_invertible, random_nonzero_vector, random_star_shift_params, random_tensor,
    random_zero_decomposition,
};
use slicerank::sunflower::{
    check_hypotheses, generate_sunflower_fixture, merge_to_center, sharpness_family, SunflowerSpec,
    SunflowerViolation,
};
use slicerank::tensor::{complement_axes, Tensor};
use slicerank::transforms::{basis_change, pair_shift, regroup_tensor_rank, slice_by_axis, star_shift};
use slicerank::zero_form::{extract_order_three, extract_zero_form, verify_zero_form};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Matrix factorization counts for every matrix of rank <= 2 with both sides at
/// most 3, over F_2 and F_3.
fn criterion_1() -> Outcome {
    let budget = RankBudget::default();
    let mut matrices = 0usize;
    for p in [2, 3] {
        let f = Field::of(p);
        for rows in 1..=3 {
            for cols in 1..=3 {
                let bad: Vec<String> = Tensor::all(f, &[rows, cols])
                    .collect::<Vec<_>>()
                    .par_iter()
                    .filter_map(|t| {
                        let m = t.unfold(0);
                        if m.rank() > 2 {
                            return None;
                        }
                        let c = count_matrix_decompositions(&m, &budget).ok()?;
                        (c.count != ordered_basis_count(c.rank, f.size()))
                            .then(|| format!("p={p} {rows}x{cols} {:?}: {} vs {}", m.data(), c.count, c.formula))
                    })
                    .collect();
                if let Some(b) = bad.first() {
                    return Err(b.clone());
                }
                matrices += Tensor::all(f, &[rows, cols]).filter(|t| t.unfold(0).rank() <= 2).count();
            }
        }
    }
    Ok(format!("{matrices} matrices match"))
}

fn criterion_2() -> Outcome {
    let f = Field::of(2);
    let mut seen = Vec::new();
    for (d, k) in [(3, 1), (3, 2), (3, 3), (4, 2)] {
        let t = Tensor::identity(f, d, k);
        let r = slice_rank(&t, &RankBudget::default()).map_err(|e| format!("I_({d},{k}): {e}"))?;
        check(r.rank == k, || format!("I_({d},{k}) has slice rank {}", r.rank))?;
        check(r.witness.assemble() == t, || format!("I_({d},{k}) witness does not assemble"))?;
        seen.push(format!("({d},{k})->{}", r.rank));
    }
    Ok(seen.join(" "))
}

fn random_dims(rng: &mut ChaCha8Rng, d: usize) -> Vec<usize> {
    (0..d).map(|_| rng.gen_range(2..=3)).collect()
}

/// A random shape with at least two nonempty axes.
fn random_shape(rng: &mut ChaCha8Rng, dims: &[usize]) -> Vec<usize> {
    loop {
        let shape: Vec<usize> = dims.iter().map(|&n| rng.gen_range(0..=n.min(2))).collect();
        if shape.iter().filter(|&&r| r > 0).count() >= 2 {
            return shape;
        }
    }
}

fn transform_fixture(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = [3, 4][rng.gen_range(0..2)];
    let f = Field::of([2, 3, 5][rng.gen_range(0..3)]);
    let dims = random_dims(&mut rng, d);
    let shape = random_shape(&mut rng, &dims);
    let dec = random_decomposition(&mut rng, f, &dims, &shape).map_err(|e| e.to_string())?;
    let t = dec.assemble();
    let same = |name: &str, out: slicerank::error::Result<SliceDecomposition>| -> Result<(), String> {
        let out = out.map_err(|e| format!("seed {seed} {name}: {e}"))?;
        check(out.assemble() == t, || format!("seed {seed}: {name} changed the tensor"))
    };

    let live: Vec<usize> = (0..d).filter(|&j| shape[j] > 0).collect();
    let axis = live[rng.gen_range(0..live.len())];
    let g = random_invertible(&mut rng, f, shape[axis]);
    same("basis change", basis_change(&dec, axis, &g))?;

    let (j1, j2) = (live[0], live[1]);
    let (i1, i2) = (rng.gen_range(0..shape[j1]), rng.gen_range(0..shape[j2]));
    let rest: Vec<usize> = complement_axes(d, &[j1, j2]).iter().map(|&a| dims[a]).collect();
    let c = random_tensor(&mut rng, f, &rest);
    same("pair shift", pair_shift(&dec, (j2, i2), (j1, i1), &c))?;

    let p = random_star_shift_params(&mut rng, &dec).ok_or("no star shift parameters")?;
    same("star shift", star_shift(&dec, &p.axes, &p.indices, &p.shifts))?;

    for axis in 0..d {
        same("slice by axis", slice_by_axis(&t, axis))?;
    }

    let k = rng.gen_range(1..=4);
    let terms: Vec<Vec<Vector>> =
        (0..k).map(|_| dims.iter().map(|&n| random_nonzero_vector(&mut rng, f, n)).collect()).collect();
    let trd = TensorRankDecomposition::new(f, &dims, terms).map_err(|e| e.to_string())?;
    let mut partition = vec![Vec::new(); d];
    for i in 0..k {
        partition[rng.gen_range(0..d)].push(i);
    }
    let regrouped = regroup_tensor_rank(&trd, &partition).map_err(|e| format!("seed {seed} regroup: {e}"))?;
    check(regrouped.assemble() == trd.assemble(), || format!("seed {seed}: regroup changed the tensor"))
}

fn criterion_3() -> Outcome {
    let failures: Vec<String> = (0..1000u64).into_par_iter().filter_map(|s| transform_fixture(s).err()).collect();
    match failures.first() {
        None => Ok("1000 fixtures, 0 failures".into()),
        Some(first) => Err(format!("{} failures, first: {first}", failures.len())),
    }
}

/// Every independent ordered family of `r` vectors in `F^n`.
fn families(f: Field, n: usize, r: usize) -> Vec<Vec<Vector>> {
    let all: Vec<Vector> = Vector::all(f, n).collect();
    let mut out: Vec<Vec<Vector>> = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                all.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out.retain(|fam| are_independent(f, n, fam));
    out
}

/// All slice decompositions of the given shape on `dims` over `f`.
fn all_decompositions(f: Field, dims: &[usize], shape: &[usize]) -> Vec<SliceDecomposition> {
    let mut out = vec![SliceDecomposition::empty(f, dims)];
    for (axis, &r) in shape.iter().enumerate() {
        if r == 0 {
            continue;
        }
        let rest = out[0].complement_dims(axis);
        let bs: Vec<Tensor> = Tensor::all(f, &rest).collect();
        let mut next = Vec::new();
        for dec in &out {
            for fam in families(f, dims[axis], r) {
                let mut partial = vec![dec.clone()];
                for a in &fam {
                    partial = partial
                        .iter()
                        .flat_map(|d| {
                            bs.iter().map(move |b| {
                                let mut d = d.clone();
                                d.push(axis, a.clone(), b.clone()).expect("shapes fit");
                                d
                            })
                        })
                        .collect();
                }
                next.extend(partial);
            }
        }
        out = next;
    }
    out
}

fn zero_form_ok(dec: &SliceDecomposition) -> Result<(), String> {
    let cert = extract_zero_form(dec).map_err(|e| e.to_string())?;
    if let Err(v) = verify_zero_form(dec, &cert) {
        return Err(format!("{} violations, first {}", v.len(), v[0]));
    }
    if dec.order() == 3 {
        let z = extract_order_three(dec).map_err(|e| e.to_string())?;
        check(z.coefficients_cancel(dec.field()), || "order-3 coefficients do not cancel".into())?;
        check(z.to_certificate(dec).map_err(|e| e.to_string())? == cert, || "order-3 certificate differs".into())?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let f = Field::of(2);
    let dims = [2, 2, 2];
    let mut shapes = Vec::new();
    for a in 0..=2 {
        for b in 0..=2 - a {
            for c in 0..=2 - a - b {
                shapes.push(vec![a, b, c]);
            }
        }
    }
    let mut exhaustive = 0;
    for shape in &shapes {
        for dec in all_decompositions(f, &dims, shape) {
            if dec.assemble().is_zero() {
                zero_form_ok(&dec).map_err(|e| format!("shape {shape:?}: {e}"))?;
                exhaustive += 1;
            }
        }
    }
    let failures: Vec<String> = (0..200u64)
        .into_par_iter()
        .filter_map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(10_000 + seed);
            let d = [3, 4][(seed % 2) as usize];
            let f = Field::of([2, 3, 5][rng.gen_range(0..3)]);
            let dims = random_dims(&mut rng, d);
            let shape = random_shape(&mut rng, &dims);
            let dec = random_zero_decomposition(&mut rng, f, &dims, &shape, 8).ok()?;
            zero_form_ok(&dec).err().map(|e| format!("seed {seed}: {e}"))
        })
        .collect();
    match failures.first() {
        None => Ok(format!("{exhaustive} exhaustive zero decompositions and 200 random ones verify")),
        Some(e) => Err(e.clone()),
    }
}

fn criterion_5() -> Outcome {
    let mut contradictions = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(20_000 + seed);
        let d = 2 + (seed % 2) as usize;
        let h = d + 1;
        let f = Field::of([2, 3, 5][rng.gen_range(0..3)]);
        let center: Vec<usize> = (0..d).map(|_| rng.gen_range(0..=1)).collect();
        let petal: Vec<usize> = (0..d).map(|_| rng.gen_range(0..=1)).collect();
        let dims: Vec<usize> = center.iter().zip(&petal).map(|(&c, &q)| (c + h * q).max(2)).collect();
        let spec = SunflowerSpec { seed, field: f, dims, center_shape: center.clone(), petal_shape: petal, h, shifts: 4 };
        let fam = generate_sunflower_fixture(&spec).map_err(|e| format!("seed {seed}: {e}"))?;
        check_hypotheses(&fam).map_err(|v| format!("seed {seed}: {}", v[0]))?;
        let merged = match merge_to_center(&fam) {
            Ok(m) => m,
            Err(Error::InternalContradiction(_)) => {
                contradictions += 1;
                continue;
            }
            Err(e) => return Err(format!("seed {seed}: {e}")),
        };
        check(merged.assemble() == fam.tensor().map_err(|e| e.to_string())?, || format!("seed {seed}: wrong tensor"))?;
        check(merged.len() <= center.iter().sum(), || format!("seed {seed}: merged length {}", merged.len()))?;
        for axis in 0..d {
            check(merged.a_family(axis) == fam.center[axis], || format!("seed {seed}: non-center function"))?;
        }
    }
    check(contradictions == 0, || format!("{contradictions} internal contradictions"))?;

    let sharp = sharpness_family();
    match check_hypotheses(&sharp) {
        Err(v) if v == vec![SunflowerViolation::TooFewPetals { h: 3, d: 3 }] => {}
        other => return Err(format!("sharpness family: {other:?}")),
    }
    let t = sharp.tensor().map_err(|e| e.to_string())?;
    let center_only = membership_with_families(&t, &sharp.center).map_err(|e| e.to_string())?;
    check(center_only.is_none() && !t.is_zero(), || "sharpness tensor merges into the empty center".into())?;
    Ok("100 families merged; sharpness family has no center merge".into())
}

fn criterion_6() -> Outcome {
    let f = Field::of(2);
    let tensors: Vec<Tensor> = Tensor::all(f, &[2, 2, 2]).collect();
    let results: Vec<Result<(usize, usize), String>> = tensors
        .par_iter()
        .map(|t| {
            let set = admissible_tuples(t, &RankBudget::default()).map_err(|e| e.to_string())?;
            let bound = admissible_bound(3, set.k, 2);
            check(set.len() as u128 <= bound, || format!("{:?}: {} tuples > {bound}", t.data(), set.len()))?;
            for (tuple, dec) in &set.tuples {
                check(dec.assemble() == *t, || format!("{:?}: witness differs", t.data()))?;
                let n = count_slice_decompositions_given_tuple(t, tuple).map_err(|e| e.to_string())?;
                check(n == basis_count_formula(tuple), || format!("{:?}: basis count {n}", t.data()))?;
            }
            Ok((set.k, set.len()))
        })
        .collect();
    let mut max_tuples = 0;
    for r in results {
        max_tuples = max_tuples.max(r?.1);
    }
    Ok(format!("256 tensors, largest admissible set {max_tuples}"))
}

fn criterion_7() -> Outcome {
    let mut seen = Vec::new();
    for (d, k, p, expected) in [(3usize, 1usize, 2u32, 1u128), (3, 2, 2, 6), (3, 1, 3, 4)] {
        let f = Field::of(p);
        let m = if k == 1 { Tensor::new(f, vec![2, 2], vec![1, 1, 0, 0]).unwrap() } else { Tensor::identity(f, 2, k) };
        let tail: Vec<Vector> = (2..d).map(|_| Vector::new(f, vec![1, 1])).collect();
        let t = example_product_tensor(&m, &tail);
        let c = count_tensor_rank_decompositions(&t, &RankBudget::default()).map_err(|e| e.to_string())?;
        let formula = tensor_rank_example_formula(p as u64, d, k);
        check(c.k == k, || format!("({d},{k},{p}): rank {}", c.k))?;
        check(c.count == expected && formula == expected && c.formula == Some(expected), || {
            format!("({d},{k},{p}): count {} formula {formula}", c.count)
        })?;
        check(c.count <= c.bound, || format!("({d},{k},{p}): above bound"))?;
        check(c.span_tuples.len() == 1, || format!("({d},{k},{p}): {} span tuples", c.span_tuples.len()))?;
        seen.push(format!("({d},{k},{p})->{}", c.count));
    }
    Ok(seen.join(" "))
}

fn criterion_8() -> Outcome {
    let f = Field::of(2);
    let budget = RankBudget::default();
    let mut seen = Vec::new();
    for d in [3, 4] {
        let b = Tensor::identity(f, d - 1, 2);
        let mut dec = SliceDecomposition::empty(f, &vec![2; d]);
        dec.push(0, Vector::unit(f, 2, 0), b).map_err(|e| e.to_string())?;
        let separated = is_separated_decomposition(&dec, &budget).map_err(|e| e.to_string())?;
        check(separated, || format!("d={d}: fixture is not separated"))?;
        let set = admissible_tuples(&dec.assemble(), &budget).map_err(|e| e.to_string())?;
        check(set.len() == 1, || format!("d={d}: {} admissible tuples", set.len()))?;
        check(set.tuples[0].0 == dec.subspace_tuple(), || format!("d={d}: tuple differs from the fixture's"))?;
        seen.push(format!("d={d}: 1 tuple"));
    }
    Ok(seen.join(", "))
}

fn main() {
    let criteria: [(usize, &str, Duration, fn() -> Outcome); 8] = [
        (1, "matrix decomposition counts", Duration::from_secs(10), criterion_1),
        (2, "identity slice ranks", Duration::from_secs(60), criterion_2),
        (3, "transform invariance", Duration::MAX, criterion_3),
        (4, "zero-form round trip", Duration::MAX, criterion_4),
        (5, "sunflower merge", Duration::MAX, criterion_5),
        (6, "admissible-tuple bound census", Duration::from_secs(300), criterion_6),
        (7, "tensor-rank decomposition counts", Duration::MAX, criterion_7),
        (8, "rigid subspaces", Duration::MAX, criterion_8),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}, but over the {}s limit", limit.as_secs())),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {n} PASS {name} ({:.2}s): {detail}", elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("criterion {n} FAIL {name} ({:.2}s): {detail}", elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
