//! Versioned JSON files for tensors, decompositions, zero-form certificates,
//! sunflower families and census reports.
//!
//! Every file carries a `format` tag and a `version`. Values are integers only,
//! and axis and term indices are 1-based. Writes go to a temporary file in the
//! target directory followed by a rename.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::decomposition::{SliceDecomposition, TensorRankDecomposition};
use crate::enumeration::CensusReport;
use crate::error::{Error, Result};
use crate::linalg::{Field, Vector};
use crate::sunflower::{Petal, SunflowerFamily};
use crate::tensor::Tensor;
use crate::zero_form::{CertKey, ZeroFormCertificate};

pub const VERSION: u32 = 1;

pub const TENSOR: &str = "tensor";
pub const DECOMPOSITION: &str = "decomposition";
pub const CERTIFICATE: &str = "zero_form_certificate";
pub const SUNFLOWER: &str = "sunflower";
pub const CENSUS: &str = "census";

fn check_header(format: &str, version: u32, expected: &str) -> Result<()> {
    if format != expected {
        return Err(Error::Format(format!("expected a {expected} file, found {format}")));
    }
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    Ok(())
}

fn check_entries(field: Field, entries: &[u32]) -> Result<()> {
    match entries.iter().find(|&&v| !field.contains(v)) {
        Some(v) => Err(Error::Format(format!("entry {v} is not reduced mod {}", field.p()))),
        None => Ok(()),
    }
}

fn vector(field: Field, n: usize, entries: &[u32]) -> Result<Vector> {
    if entries.len() != n {
        return Err(Error::Format(format!("vector of length {}, expected {n}", entries.len())));
    }
    check_entries(field, entries)?;
    Ok(Vector::new(field, entries.to_vec()))
}

fn one_based(i: usize, what: &str) -> Result<usize> {
    i.checked_sub(1).ok_or_else(|| Error::Format(format!("{what} indices are 1-based")))
}

/// Dims and row-major entries of a tensor whose field is given elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorPayload {
    pub dims: Vec<usize>,
    pub entries: Vec<u32>,
}

impl TensorPayload {
    pub fn from_tensor(t: &Tensor) -> Self {
        TensorPayload { dims: t.dims().to_vec(), entries: t.data().to_vec() }
    }

    pub fn to_tensor(&self, field: Field) -> Result<Tensor> {
        check_entries(field, &self.entries)?;
        Tensor::new(field, self.dims.clone(), self.entries.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorFile {
    pub format: String,
    pub version: u32,
    pub p: u32,
    pub dims: Vec<usize>,
    pub entries: Vec<u32>,
}

impl TensorFile {
    pub fn from_tensor(t: &Tensor) -> Self {
        TensorFile {
            format: TENSOR.into(),
            version: VERSION,
            p: t.field().p(),
            dims: t.dims().to_vec(),
            entries: t.data().to_vec(),
        }
    }

    pub fn to_tensor(&self) -> Result<Tensor> {
        check_header(&self.format, self.version, TENSOR)?;
        let payload = TensorPayload { dims: self.dims.clone(), entries: self.entries.clone() };
        payload.to_tensor(Field::new(self.p)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionKind {
    Slice,
    TensorRank,
}

/// A slice term (`axis`, `a`, `b`) or a rank-one term (`factors`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<TensorPayload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub format: String,
    pub version: u32,
    pub kind: DecompositionKind,
    pub p: u32,
    pub dims: Vec<usize>,
    pub terms: Vec<TermEntry>,
}

/// Either kind of decomposition, as loaded from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyDecomposition {
    Slice(SliceDecomposition),
    TensorRank(TensorRankDecomposition),
}

impl AnyDecomposition {
    pub fn assemble(&self) -> Tensor {
        match self {
            AnyDecomposition::Slice(d) => d.assemble(),
            AnyDecomposition::TensorRank(d) => d.assemble(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyDecomposition::Slice(d) => d.len(),
            AnyDecomposition::TensorRank(d) => d.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl DecompositionFile {
    pub fn from_slice(dec: &SliceDecomposition) -> Self {
        let mut terms = Vec::with_capacity(dec.len());
        for axis in 0..dec.order() {
            for t in dec.terms(axis) {
                terms.push(TermEntry {
                    axis: Some(axis + 1),
                    a: Some(t.a.entries().to_vec()),
                    b: Some(TensorPayload::from_tensor(&t.b)),
                    factors: None,
                });
            }
        }
        DecompositionFile {
            format: DECOMPOSITION.into(),
            version: VERSION,
            kind: DecompositionKind::Slice,
            p: dec.field().p(),
            dims: dec.dims().to_vec(),
            terms,
        }
    }

    pub fn from_tensor_rank(dec: &TensorRankDecomposition) -> Self {
        let terms = dec
            .terms()
            .iter()
            .map(|fs| TermEntry {
                axis: None,
                a: None,
                b: None,
                factors: Some(fs.iter().map(|v| v.entries().to_vec()).collect()),
            })
            .collect();
        DecompositionFile {
            format: DECOMPOSITION.into(),
            version: VERSION,
            kind: DecompositionKind::TensorRank,
            p: dec.field().p(),
            dims: dec.dims().to_vec(),
            terms,
        }
    }

    pub fn from_any(dec: &AnyDecomposition) -> Self {
        match dec {
            AnyDecomposition::Slice(d) => Self::from_slice(d),
            AnyDecomposition::TensorRank(d) => Self::from_tensor_rank(d),
        }
    }

    pub fn to_decomposition(&self) -> Result<AnyDecomposition> {
        check_header(&self.format, self.version, DECOMPOSITION)?;
        let field = Field::new(self.p)?;
        match self.kind {
            DecompositionKind::Slice => {
                let mut dec = SliceDecomposition::empty(field, &self.dims);
                for term in &self.terms {
                    let (Some(axis), Some(a), Some(b)) = (term.axis, &term.a, &term.b) else {
                        return Err(Error::Format("slice terms need axis, a and b".into()));
                    };
                    let axis = one_based(axis, "axis")?;
                    let n = *self.dims.get(axis).ok_or_else(|| Error::Format(format!("axis {} out of range", axis + 1)))?;
                    dec.push(axis, vector(field, n, a)?, b.to_tensor(field)?)?;
                }
                Ok(AnyDecomposition::Slice(dec))
            }
            DecompositionKind::TensorRank => {
                let mut terms = Vec::with_capacity(self.terms.len());
                for term in &self.terms {
                    let Some(factors) = &term.factors else {
                        return Err(Error::Format("tensor rank terms need factors".into()));
                    };
                    if factors.len() != self.dims.len() {
                        return Err(Error::Format(format!("{} factors for order {}", factors.len(), self.dims.len())));
                    }
                    let vs = factors.iter().zip(&self.dims).map(|(f, &n)| vector(field, n, f)).collect::<Result<_>>()?;
                    terms.push(vs);
                }
                Ok(AnyDecomposition::TensorRank(TensorRankDecomposition::new(field, &self.dims, terms)?))
            }
        }
    }

    pub fn to_slice(&self) -> Result<SliceDecomposition> {
        match self.to_decomposition()? {
            AnyDecomposition::Slice(d) => Ok(d),
            AnyDecomposition::TensorRank(_) => Err(Error::Format("expected a slice decomposition".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub axes: Vec<usize>,
    pub axis: usize,
    pub index: usize,
    pub others: Vec<usize>,
    pub c: TensorPayload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub format: String,
    pub version: u32,
    pub p: u32,
    pub entries: Vec<CertificateEntry>,
}

impl CertificateFile {
    pub fn from_certificate(field: Field, cert: &ZeroFormCertificate) -> Self {
        let inc = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
        let entries = cert
            .entries
            .iter()
            .map(|(k, c)| CertificateEntry {
                axes: inc(&k.axes),
                axis: k.axis + 1,
                index: k.index + 1,
                others: inc(&k.others),
                c: TensorPayload::from_tensor(c),
            })
            .collect();
        CertificateFile { format: CERTIFICATE.into(), version: VERSION, p: field.p(), entries }
    }

    pub fn to_certificate(&self) -> Result<ZeroFormCertificate> {
        check_header(&self.format, self.version, CERTIFICATE)?;
        let field = Field::new(self.p)?;
        let dec = |v: &[usize]| v.iter().map(|&x| one_based(x, "certificate")).collect::<Result<Vec<_>>>();
        let mut cert = ZeroFormCertificate::new();
        for e in &self.entries {
            let key = CertKey {
                axes: dec(&e.axes)?,
                axis: one_based(e.axis, "axis")?,
                index: one_based(e.index, "term")?,
                others: dec(&e.others)?,
            };
            if cert.entries.insert(key, e.c.to_tensor(field)?).is_some() {
                return Err(Error::Format("repeated certificate key".into()));
            }
        }
        Ok(cert)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PetalEntry {
    pub center_b: Vec<Vec<TensorPayload>>,
    pub a: Vec<Vec<Vec<u32>>>,
    pub b: Vec<Vec<TensorPayload>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SunflowerFile {
    pub format: String,
    pub version: u32,
    pub p: u32,
    pub dims: Vec<usize>,
    /// Center functions, one list per axis.
    pub center: Vec<Vec<Vec<u32>>>,
    pub petals: Vec<PetalEntry>,
}

impl SunflowerFile {
    pub fn from_family(fam: &SunflowerFamily) -> Self {
        let vecs = |g: &[Vec<Vector>]| g.iter().map(|vs| vs.iter().map(|v| v.entries().to_vec()).collect()).collect();
        let tens = |g: &[Vec<Tensor>]| g.iter().map(|ts| ts.iter().map(TensorPayload::from_tensor).collect()).collect();
        SunflowerFile {
            format: SUNFLOWER.into(),
            version: VERSION,
            p: fam.field.p(),
            dims: fam.dims.clone(),
            center: vecs(&fam.center),
            petals: fam
                .petals
                .iter()
                .map(|p| PetalEntry { center_b: tens(&p.center_b), a: vecs(&p.a), b: tens(&p.b) })
                .collect(),
        }
    }

    /// Loads the family; shape problems are left to the hypothesis check.
    pub fn to_family(&self) -> Result<SunflowerFamily> {
        check_header(&self.format, self.version, SUNFLOWER)?;
        let field = Field::new(self.p)?;
        let dims = &self.dims;
        let vecs = |g: &[Vec<Vec<u32>>]| -> Result<Vec<Vec<Vector>>> {
            if g.len() != dims.len() {
                return Err(Error::Format(format!("{} axes listed for order {}", g.len(), dims.len())));
            }
            g.iter().zip(dims).map(|(vs, &n)| vs.iter().map(|v| vector(field, n, v)).collect()).collect()
        };
        let tens = |g: &[Vec<TensorPayload>]| -> Result<Vec<Vec<Tensor>>> {
            g.iter().map(|ts| ts.iter().map(|t| t.to_tensor(field)).collect()).collect()
        };
        let petals = self
            .petals
            .iter()
            .map(|p| Ok(Petal { center_b: tens(&p.center_b)?, a: vecs(&p.a)?, b: tens(&p.b)? }))
            .collect::<Result<_>>()?;
        Ok(SunflowerFamily { field, dims: dims.clone(), center: vecs(&self.center)?, petals })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusFile {
    pub format: String,
    pub version: u32,
    pub report: CensusReport,
}

impl CensusFile {
    pub fn new(report: &CensusReport) -> Self {
        CensusFile { format: CENSUS.into(), version: VERSION, report: report.clone() }
    }

    pub fn into_report(self) -> Result<CensusReport> {
        check_header(&self.format, self.version, CENSUS)?;
        Ok(self.report)
    }
}

/// Any of the file kinds above, dispatched on the `format` tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Tensor(TensorFile),
    Decomposition(DecompositionFile),
    Certificate(CertificateFile),
    Sunflower(SunflowerFile),
    Census(CensusFile),
}

pub fn parse_document(text: &str) -> Result<Document> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let tag = value.get("format").and_then(|v| v.as_str()).unwrap_or_default().to_string();
    Ok(match tag.as_str() {
        TENSOR => Document::Tensor(serde_json::from_value(value)?),
        DECOMPOSITION => Document::Decomposition(serde_json::from_value(value)?),
        CERTIFICATE => Document::Certificate(serde_json::from_value(value)?),
        SUNFLOWER => Document::Sunflower(serde_json::from_value(value)?),
        CENSUS => Document::Census(serde_json::from_value(value)?),
        other => return Err(Error::Format(format!("unknown format tag {other:?}"))),
    })
}

pub fn read_document(path: &Path) -> Result<Document> {
    parse_document(&fs::read_to_string(path)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Pretty JSON with flat integer arrays kept on one line.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let pretty = serde_json::to_string_pretty(value)?;
    let mut out = String::with_capacity(pretty.len());
    let mut rest = pretty.as_str();
    while let Some(open) = rest.find('[') {
        out.push_str(&rest[..=open]);
        rest = &rest[open + 1..];
        let close = rest.find(']').unwrap_or(0);
        let inner = &rest[..close];
        if close > 0 && inner.chars().all(|c| c.is_ascii_digit() || c == ',' || c.is_whitespace()) {
            let items: Vec<&str> = inner.split(',').map(str::trim).collect();
            out.push_str(&items.join(", "));
            rest = &rest[close..];
        }
    }
    out.push_str(rest);
    out.push('\n');
    Ok(out)
}

/// Writes `value` as pretty JSON through a temporary sibling file and a rename.
pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = to_json(value)?;
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path.file_name().ok_or_else(|| Error::Io(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}
