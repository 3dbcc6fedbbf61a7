//! The `slicerank` command line. [`run`] takes the arguments and output streams
//! and returns the process exit code, so it can be driven in-process by tests.
//!
//! Exit codes: 0 ok, 1 any other error, 2 search budget exceeded, 3 transform
//! precondition, 4 zero-form precondition, 5 regression fixture mismatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::decomposition::{SliceDecomposition, TensorRankDecomposition};
use crate::enumeration::{
    admissible_tuples, count_matrix_decompositions, count_tensor_rank_decompositions, lower_bound_example_census,
    CensusReport,
};
use crate::error::{Error, Result};
use crate::format::{
    read_document, read_json, to_json, write_json_atomic, AnyDecomposition, CensusFile, CertificateFile,
    DecompositionFile, Document, SunflowerFile,
};
use crate::linalg::{Field, Matrix};
use crate::rank::{slice_rank, tensor_rank, RankBudget, DEFAULT_MAX_CANDIDATES};
use crate::sunflower::{check_hypotheses, generate_sunflower_fixture, merge_to_center, SunflowerFamily, SunflowerSpec};
use crate::tensor::{complement_axes, Tensor};
use crate::transforms::{basis_change, pair_shift, regroup_tensor_rank, slice_by_axis, star_shift};
use crate::zero_form::{extract_zero_form, verify_zero_form};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_TRANSFORM: i32 = 3;
pub const EXIT_ZERO_FORM: i32 = 4;
pub const EXIT_REGRESSION: i32 = 5;

/// Environment variable holding the default candidate budget.
pub const BUDGET_ENV: &str = "SLICERANK_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "slicerank", version, about = "Exact slice, tensor and matrix rank tools over small prime fields")]
pub struct Cli {
    /// Maximum number of candidates an exhaustive search may examine.
    #[arg(long, global = true, env = BUDGET_ENV, default_value_t = DEFAULT_MAX_CANDIDATES)]
    pub budget: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RankKind {
    Slice,
    Tensor,
    Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TransformOp {
    BasisChange,
    Regroup,
    SliceByAxis,
    PairShift,
    StarShift,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CensusKind {
    MatrixCount,
    Admissible,
    TensorRankCount,
    ExampleLowerBound,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a rank and optionally write a witness decomposition.
    Rank {
        /// Tensor file.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = RankKind::Slice)]
        kind: RankKind,
        /// Where to write the witness decomposition.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rewrite a decomposition without changing the tensor it assembles to.
    Transform {
        /// Decomposition file (a tensor file is accepted for slice-by-axis).
        input: PathBuf,
        #[arg(long, value_enum)]
        op: TransformOp,
        /// Axis for basis-change and slice-by-axis (1-based).
        #[arg(long)]
        axis: Option<usize>,
        /// Row-major entries of the r x r change-of-basis matrix, comma separated.
        #[arg(long)]
        matrix: Option<String>,
        /// Term numbers sent to each axis, axes separated by ';' (e.g. "1,3;2;").
        #[arg(long)]
        partition: Option<String>,
        /// First term of a pair shift as "axis,term".
        #[arg(long)]
        from: Option<String>,
        /// Second term of a pair shift as "axis,term".
        #[arg(long)]
        to: Option<String>,
        /// Row-major entries of the pair-shift function on the remaining axes.
        #[arg(long)]
        c: Option<String>,
        /// Star-shift axes, comma separated and increasing.
        #[arg(long)]
        axes: Option<String>,
        /// Star-shift term numbers, one per axis.
        #[arg(long)]
        indices: Option<String>,
        /// Star-shift function entries, repeated once per axis.
        #[arg(long = "shift")]
        shifts: Vec<String>,
        /// Output file; the decomposition is printed to stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a zero-form certificate against a decomposition.
    VerifyZeroForm { decomposition: PathBuf, certificate: PathBuf },
    /// Build a zero-form certificate for a decomposition that assembles to zero.
    ExtractZeroForm {
        decomposition: PathBuf,
        /// Output file; the certificate is printed to stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a sunflower family and merge it into a center-only decomposition.
    Sunflower {
        /// Sunflower family file.
        #[arg(required_unless_present = "generate")]
        family: Option<PathBuf>,
        /// Generate a family from this seed instead of reading one.
        #[arg(long, conflicts_with = "family")]
        generate: Option<u64>,
        /// Field size for generated families.
        #[arg(long, default_value_t = 2)]
        p: u32,
        /// Dims for generated families, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "4,4,4")]
        dims: Vec<usize>,
        /// Number of petals for generated families (default order + 1).
        #[arg(long)]
        h: Option<usize>,
        /// Also write the generated family here.
        #[arg(long)]
        save_family: Option<PathBuf>,
        /// Where to write the merged decomposition.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an exhaustive census on a tensor.
    Census {
        /// Tensor file (for example-lower-bound: the tail tensor c, default the
        /// order-2 identity of size 2r over F_2).
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        what: CensusKind,
        /// Block size r for example-lower-bound.
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Regression fixture: written if missing, compared otherwise.
        #[arg(long)]
        fixture: Option<PathBuf>,
        /// Print the machine-readable report instead of text lines.
        #[arg(long)]
        json: bool,
    },
}

/// A command failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::NonZeroShiftSum | Error::SingularChange | Error::InvalidPartition(_) => EXIT_TRANSFORM,
            Error::NotZero => EXIT_ZERO_FORM,
            _ => EXIT_ERROR,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_ERROR, message: message.into() }
}

type CmdResult = std::result::Result<i32, Failure>;

struct Io<'a> {
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", s.as_ref());
    }

    /// Writes `value` to `path`, or prints it when no path is given.
    fn emit<T: Serialize>(&mut self, path: Option<&Path>, value: &T) -> Result<()> {
        match path {
            Some(p) => write_json_atomic(p, value),
            None => {
                let _ = self.out.write_all(to_json(value)?.as_bytes());
                Ok(())
            }
        }
    }
}

/// Parses arguments, runs one command and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            if shown {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let _ = write!(err, "{e}");
            return EXIT_ERROR;
        }
    };
    let budget = RankBudget::with_candidates(cli.budget);
    let mut io = Io { out };
    match execute(cli.command, &budget, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cmd: Command, budget: &RankBudget, io: &mut Io) -> CmdResult {
    match cmd {
        Command::Rank { input, kind, out } => cmd_rank(&input, kind, out.as_deref(), budget, io),
        Command::Transform { input, op, axis, matrix, partition, from, to, c, axes, indices, shifts, out } => {
            let args = TransformArgs { axis, matrix, partition, from, to, c, axes, indices, shifts };
            cmd_transform(&input, op, &args, out.as_deref(), io)
        }
        Command::VerifyZeroForm { decomposition, certificate } => cmd_verify_zero_form(&decomposition, &certificate, io),
        Command::ExtractZeroForm { decomposition, out } => cmd_extract_zero_form(&decomposition, out.as_deref(), io),
        Command::Sunflower { family, generate, p, dims, h, save_family, out } => {
            let fam = match (family, generate) {
                (Some(path), _) => load_sunflower(&path)?,
                (None, Some(seed)) => {
                    let mut spec = SunflowerSpec::minimal(seed, Field::new(p)?, &dims);
                    if let Some(h) = h {
                        spec.h = h;
                        spec.petal_shape =
                            dims.iter().zip(&spec.center_shape).map(|(&n, &c)| usize::from(n >= c + h)).collect();
                    }
                    generate_sunflower_fixture(&spec)?
                }
                (None, None) => return Err(fail("give a family file or --generate SEED")),
            };
            if let Some(path) = save_family {
                write_json_atomic(&path, &SunflowerFile::from_family(&fam))?;
            }
            cmd_sunflower(&fam, out.as_deref(), io)
        }
        Command::Census { input, what, r, fixture, json } => {
            cmd_census(input.as_deref(), what, r, fixture.as_deref(), json, budget, io)
        }
    }
}

fn load_tensor(path: &Path) -> Result<Tensor> {
    match read_document(path)? {
        Document::Tensor(t) => t.to_tensor(),
        Document::Decomposition(d) => Ok(d.to_decomposition()?.assemble()),
        _ => Err(Error::Format(format!("{} is not a tensor file", path.display()))),
    }
}

fn load_decomposition(path: &Path) -> Result<AnyDecomposition> {
    match read_document(path)? {
        Document::Decomposition(d) => d.to_decomposition(),
        _ => Err(Error::Format(format!("{} is not a decomposition file", path.display()))),
    }
}

fn load_slice(path: &Path) -> Result<SliceDecomposition> {
    match load_decomposition(path)? {
        AnyDecomposition::Slice(d) => Ok(d),
        AnyDecomposition::TensorRank(_) => Err(Error::Format("expected a slice decomposition".into())),
    }
}

fn load_sunflower(path: &Path) -> Result<SunflowerFamily> {
    match read_document(path)? {
        Document::Sunflower(s) => s.to_family(),
        _ => Err(Error::Format(format!("{} is not a sunflower file", path.display()))),
    }
}

fn budget_failure(io: &mut Io, what: &str, e: Error) -> Failure {
    if let Error::BudgetExceeded { lower_bound } = e {
        io.line(format!("{what} >= {lower_bound}"));
    }
    e.into()
}

/// `m = sum_i c_i r_i^T` with `c_i` the pivot columns of `m` and `r_i` the
/// nonzero rows of its reduced echelon form.
fn matrix_rank_decomposition(m: &Matrix) -> Result<TensorRankDecomposition> {
    let rref = m.rref();
    let terms = rref
        .pivots
        .iter()
        .enumerate()
        .map(|(i, &c)| vec![m.column(c), rref.matrix.row(i)])
        .collect();
    TensorRankDecomposition::new(m.field(), &[m.rows(), m.cols()], terms)
}

fn cmd_rank(input: &Path, kind: RankKind, out: Option<&Path>, budget: &RankBudget, io: &mut Io) -> CmdResult {
    let t = load_tensor(input)?;
    let (label, k, witness) = match kind {
        RankKind::Slice => {
            let r = slice_rank(&t, budget).map_err(|e| budget_failure(io, "slice_rank", e))?;
            ("slice_rank", r.rank, DecompositionFile::from_slice(&r.witness))
        }
        RankKind::Tensor => {
            let (k, d) = tensor_rank(&t, budget).map_err(|e| budget_failure(io, "tensor_rank", e))?;
            ("tensor_rank", k, DecompositionFile::from_tensor_rank(&d))
        }
        RankKind::Matrix => {
            if t.order() != 2 {
                return Err(fail(format!("matrix rank needs an order-2 tensor, got order {}", t.order())));
            }
            let m = t.unfold(0);
            ("rank", m.rank(), DecompositionFile::from_tensor_rank(&matrix_rank_decomposition(&m)?))
        }
    };
    io.line(format!("{label} {k}"));
    if let Some(path) = out {
        write_json_atomic(path, &witness)?;
    }
    Ok(EXIT_OK)
}

struct TransformArgs {
    axis: Option<usize>,
    matrix: Option<String>,
    partition: Option<String>,
    from: Option<String>,
    to: Option<String>,
    c: Option<String>,
    axes: Option<String>,
    indices: Option<String>,
    shifts: Vec<String>,
}

fn parse_list(s: &str) -> std::result::Result<Vec<u64>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<u64>().map_err(|_| fail(format!("not an integer: {x:?}"))))
        .collect()
}

fn parse_indices(s: &str) -> std::result::Result<Vec<usize>, Failure> {
    parse_list(s)?
        .into_iter()
        .map(|v| (v as usize).checked_sub(1).ok_or_else(|| fail("indices are 1-based")))
        .collect()
}

fn parse_entries(field: Field, s: &str) -> std::result::Result<Vec<u32>, Failure> {
    parse_list(s)?
        .into_iter()
        .map(|v| if v < field.p() as u64 { Ok(v as u32) } else { Err(fail(format!("entry {v} not reduced mod {}", field.p()))) })
        .collect()
}

fn parse_pair(s: &Option<String>, flag: &str) -> std::result::Result<(usize, usize), Failure> {
    let s = s.as_deref().ok_or_else(|| fail(format!("--{flag} is required")))?;
    match parse_indices(s)?.as_slice() {
        [j, i] => Ok((*j, *i)),
        _ => Err(fail(format!("--{flag} takes \"axis,term\""))),
    }
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> std::result::Result<&'a str, Failure> {
    v.as_deref().ok_or_else(|| fail(format!("--{flag} is required")))
}

fn tensor_on(field: Field, dims: Vec<usize>, s: &str) -> std::result::Result<Tensor, Failure> {
    Ok(Tensor::new(field, dims, parse_entries(field, s)?)?)
}

fn cmd_transform(input: &Path, op: TransformOp, args: &TransformArgs, out: Option<&Path>, io: &mut Io) -> CmdResult {
    let axis = || -> std::result::Result<usize, Failure> {
        let a = args.axis.ok_or_else(|| fail("--axis is required"))?;
        a.checked_sub(1).ok_or_else(|| fail("axes are 1-based"))
    };
    let (before, after): (Tensor, AnyDecomposition) = match op {
        TransformOp::SliceByAxis => {
            let t = load_tensor(input)?;
            let d = slice_by_axis(&t, axis()?)?;
            (t, AnyDecomposition::Slice(d))
        }
        TransformOp::Regroup => {
            let AnyDecomposition::TensorRank(trd) = load_decomposition(input)? else {
                return Err(fail("regroup needs a tensor_rank decomposition"));
            };
            let text = required(&args.partition, "partition")?;
            let parts = text.split(';').map(parse_indices).collect::<std::result::Result<Vec<_>, _>>()?;
            (trd.assemble(), AnyDecomposition::Slice(regroup_tensor_rank(&trd, &parts)?))
        }
        TransformOp::BasisChange => {
            let dec = load_slice(input)?;
            let j = axis()?;
            let r = dec.terms(j.min(dec.order().saturating_sub(1))).len();
            let entries = parse_entries(dec.field(), required(&args.matrix, "matrix")?)?;
            let m = Matrix::new(dec.field(), r, r, entries).map_err(|_| fail(format!("--matrix needs {} entries", r * r)))?;
            (dec.assemble(), AnyDecomposition::Slice(basis_change(&dec, j, &m)?))
        }
        TransformOp::PairShift => {
            let dec = load_slice(input)?;
            let (from, to) = (parse_pair(&args.from, "from")?, parse_pair(&args.to, "to")?);
            let rest: Vec<usize> = complement_axes(dec.order(), &[from.0.min(to.0), from.0.max(to.0)])
                .iter()
                .map(|&a| dec.dims().get(a).copied().unwrap_or(0))
                .collect();
            let c = tensor_on(dec.field(), rest, required(&args.c, "c")?)?;
            (dec.assemble(), AnyDecomposition::Slice(pair_shift(&dec, from, to, &c)?))
        }
        TransformOp::StarShift => {
            let dec = load_slice(input)?;
            let axes = parse_indices(required(&args.axes, "axes")?)?;
            let indices = parse_indices(required(&args.indices, "indices")?)?;
            let rest: Vec<usize> =
                complement_axes(dec.order(), &axes).iter().map(|&a| dec.dims().get(a).copied().unwrap_or(0)).collect();
            let shifts = args
                .shifts
                .iter()
                .map(|s| tensor_on(dec.field(), rest.clone(), s))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            (dec.assemble(), AnyDecomposition::Slice(star_shift(&dec, &axes, &indices, &shifts)?))
        }
    };
    if after.assemble() != before {
        return Err(Error::InternalContradiction("transformed decomposition assembles differently".into()).into());
    }
    io.emit(out, &DecompositionFile::from_any(&after))?;
    if out.is_some() {
        io.line(format!("ok length {}", after.len()));
    }
    Ok(EXIT_OK)
}

fn cmd_verify_zero_form(dec_path: &Path, cert_path: &Path, io: &mut Io) -> CmdResult {
    let dec = load_slice(dec_path)?;
    if !dec.assemble().is_zero() {
        return Err(Error::NotZero.into());
    }
    let cert = read_json::<CertificateFile>(cert_path)?.to_certificate()?;
    match verify_zero_form(&dec, &cert) {
        Ok(()) => {
            io.line("ok");
            Ok(EXIT_OK)
        }
        Err(violations) => {
            for v in &violations {
                io.line(format!("violation: {v}"));
            }
            Err(fail(format!("{} violations", violations.len())))
        }
    }
}

fn cmd_extract_zero_form(dec_path: &Path, out: Option<&Path>, io: &mut Io) -> CmdResult {
    let dec = load_slice(dec_path)?;
    let cert = extract_zero_form(&dec)?;
    if verify_zero_form(&dec, &cert).is_err() {
        return Err(Error::InternalContradiction("extracted certificate does not verify".into()).into());
    }
    io.emit(out, &CertificateFile::from_certificate(dec.field(), &cert))?;
    if out.is_some() {
        io.line(format!("ok entries {}", cert.len()));
    }
    Ok(EXIT_OK)
}

fn cmd_sunflower(fam: &SunflowerFamily, out: Option<&Path>, io: &mut Io) -> CmdResult {
    if let Err(violations) = check_hypotheses(fam) {
        for v in &violations {
            io.line(format!("violation: {v}"));
        }
        return Err(fail("sunflower hypotheses violated"));
    }
    let merged = merge_to_center(fam)?;
    let bound: usize = fam.center_shape().iter().sum();
    io.line(format!("petals {}", fam.h()));
    io.line(format!("merged length {}", merged.len()));
    io.line(format!("sr <= {bound}"));
    if let Some(path) = out {
        write_json_atomic(path, &DecompositionFile::from_slice(&merged))?;
    }
    Ok(EXIT_OK)
}

fn census_report(input: Option<&Path>, what: CensusKind, r: usize, budget: &RankBudget) -> Result<CensusReport> {
    let tensor = || match input {
        Some(p) => load_tensor(p),
        None => Err(Error::Format("this census needs a tensor file".into())),
    };
    Ok(match what {
        CensusKind::MatrixCount => {
            let t = tensor()?;
            if t.order() != 2 {
                return Err(Error::PreconditionFailed(format!("matrix-count needs order 2, got {}", t.order())));
            }
            count_matrix_decompositions(&t.unfold(0), budget)?.report()
        }
        CensusKind::Admissible => {
            let t = tensor()?;
            admissible_tuples(&t, budget)?.report(&t)
        }
        CensusKind::TensorRankCount => count_tensor_rank_decompositions(&tensor()?, budget)?.report(),
        CensusKind::ExampleLowerBound => {
            let c = match input {
                Some(_) => tensor()?,
                None => Tensor::identity(Field::of(2), 2, 2 * r),
            };
            lower_bound_example_census(r, &c, budget)?.report()
        }
    })
}

fn cmd_census(
    input: Option<&Path>,
    what: CensusKind,
    r: usize,
    fixture: Option<&Path>,
    json: bool,
    budget: &RankBudget,
    io: &mut Io,
) -> CmdResult {
    let report = census_report(input, what, r, budget)?;
    if json {
        io.emit(None, &CensusFile::new(&report))?;
    } else {
        for l in report.lines() {
            io.line(l);
        }
    }
    if let Some(path) = fixture {
        if path.exists() {
            let pinned = read_json::<CensusFile>(path)?.into_report()?;
            if pinned != report {
                return Err(Failure {
                    code: EXIT_REGRESSION,
                    message: format!("census differs from fixture {}", path.display()),
                });
            }
            if !json {
                io.line("fixture matches");
            }
        } else {
            write_json_atomic(path, &CensusFile::new(&report))?;
            if !json {
                io.line(format!("fixture written {}", path.display()));
            }
        }
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_ERROR })
}
