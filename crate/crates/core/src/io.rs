//! JSON documents and the lossy CSV export.
//!
//! Every document carries `"schema": "mubforge/1"`, a `"type"` tag and the
//! indexing convention: vectors of `Z_p^n` are numbered lexicographically
//! with coordinate 0 most significant, so index `i` has base-`p` digits
//! `(v_0, ..., v_(n-1))`. Function values, matrix rows and matrix columns all
//! follow that order.

use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bent::{FunctionTable, MubentSet};
use crate::constructions::SpreadSet;
use crate::engine::{Encoding, ExponentRows, PhaseMatrix};
use crate::error::{Error, Result};
use crate::zmod::{Matrix, MatrixRows};

pub const SCHEMA: &str = "mubforge/1";
pub const INDEXING: &str = "lexicographic";

/// Claim attached to a stored family of function tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `p^n` functions with pairwise bent differences.
    Mubent,
    /// Pairwise bent differences, no size claim.
    PairwiseBent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Document {
    FunctionTable(FunctionTableDoc),
    FunctionFamily(FamilyDoc),
    SpreadSet(SpreadSetDoc),
    PhaseMatrix(PhaseMatrixDoc),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionTableDoc {
    pub p: u32,
    pub n: usize,
    pub codomain: u32,
    pub values: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub p: u32,
    pub n: usize,
    pub codomain: u32,
    pub kind: FamilyKind,
    /// Value tables, one per function.
    pub functions: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadSetDoc {
    pub p: u32,
    pub n: usize,
    pub matrices: Vec<MatrixRows>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseMatrixDoc {
    pub p: u32,
    pub n: usize,
    pub encoding: Encoding,
    /// Factor applied to the stored rows to get unit vectors.
    pub normalization: String,
    /// `zeta_p`: `e` stands for `ζ^e`. `pm_i`: `[s, t]` stands for
    /// `(-1)^s i^t`. Empty for `standard`.
    pub exponents: ExponentRows,
}

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    schema: String,
    indexing: String,
    #[serde(flatten)]
    body: T,
}

impl From<&FunctionTable> for FunctionTableDoc {
    fn from(f: &FunctionTable) -> Self {
        Self {
            p: f.p(),
            n: f.n(),
            codomain: f.codomain(),
            values: f.values().iter().map(|&v| v as i64).collect(),
        }
    }
}

impl TryFrom<FunctionTableDoc> for FunctionTable {
    type Error = Error;

    fn try_from(d: FunctionTableDoc) -> Result<Self> {
        FunctionTable::new(d.p, d.n, d.codomain, d.values)
    }
}

impl FamilyDoc {
    pub fn new(functions: &[FunctionTable], kind: FamilyKind) -> Result<Self> {
        let first = functions
            .first()
            .ok_or_else(|| Error::Invalid("empty function family".into()))?;
        Ok(Self {
            p: first.p(),
            n: first.n(),
            codomain: first.codomain(),
            kind,
            functions: functions
                .iter()
                .map(|f| f.values().iter().map(|&v| v as i64).collect())
                .collect(),
        })
    }

    /// Tables as stored; the claim in `kind` is not checked here.
    pub fn tables(&self) -> Result<Vec<FunctionTable>> {
        self.functions
            .iter()
            .map(|v| FunctionTable::new(self.p, self.n, self.codomain, v.clone()))
            .collect()
    }
}

impl From<&MubentSet> for FamilyDoc {
    fn from(s: &MubentSet) -> Self {
        Self::new(s.functions(), FamilyKind::Mubent).expect("mubent sets are nonempty")
    }
}

impl From<&SpreadSet> for SpreadSetDoc {
    fn from(s: &SpreadSet) -> Self {
        Self {
            p: s.p(),
            n: s.dim(),
            matrices: s.matrices().iter().map(MatrixRows::from).collect(),
        }
    }
}

impl SpreadSetDoc {
    /// Matrices as stored, without the spread-set check.
    pub fn matrices(&self) -> Result<Vec<Matrix>> {
        self.matrices
            .iter()
            .map(|m| {
                if m.0.len() != self.n {
                    return Err(Error::DimensionMismatch {
                        expected: self.n,
                        found: m.0.len(),
                    });
                }
                Matrix::new(&m.0, self.p)
            })
            .collect()
    }
}

impl TryFrom<SpreadSetDoc> for SpreadSet {
    type Error = Error;

    fn try_from(d: SpreadSetDoc) -> Result<Self> {
        SpreadSet::new(d.matrices()?)
    }
}

impl From<&PhaseMatrix> for PhaseMatrixDoc {
    fn from(m: &PhaseMatrix) -> Self {
        Self {
            p: m.p(),
            n: m.n(),
            encoding: m.encoding(),
            normalization: if m.is_standard() {
                "1".into()
            } else {
                format!("1/sqrt({})", m.dim())
            },
            exponents: m.exponent_rows(),
        }
    }
}

impl TryFrom<PhaseMatrixDoc> for PhaseMatrix {
    type Error = Error;

    fn try_from(d: PhaseMatrixDoc) -> Result<Self> {
        PhaseMatrix::from_exponent_rows(d.p, d.n, d.encoding, d.exponents)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json(doc: &Document) -> String {
    let env = Envelope {
        schema: SCHEMA.to_string(),
        indexing: INDEXING.to_string(),
        body: doc,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("documents serialize");
    s.push('\n');
    s
}

/// One-line JSON, for JSON-lines output.
pub fn to_json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("documents serialize")
}

pub fn from_json(text: &str) -> Result<Document> {
    let env: Envelope<Document> = parse_json(text)?;
    if env.schema != SCHEMA {
        return Err(Error::Invalid(format!(
            "unsupported schema {:?}, expected {SCHEMA:?}",
            env.schema
        )));
    }
    if env.indexing != INDEXING {
        return Err(Error::Invalid(format!(
            "unsupported indexing {:?}, expected {INDEXING:?}",
            env.indexing
        )));
    }
    Ok(env.body)
}

fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("JSON: {e}")))
}

pub fn read_document(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    from_json(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

pub fn write_document(path: &Path, doc: &Document) -> Result<()> {
    std::fs::write(path, to_json(doc))
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

/// Normalized complex entries as `row,col,re,im`, 12 significant digits.
///
/// Lossy: the exact exponents are rounded through `f64`, and nothing here
/// can be read back.
pub fn phase_matrix_csv(m: &PhaseMatrix) -> String {
    let scale = 1.0 / (m.row_norm_sq() as f64).sqrt();
    let mut out = String::from("row,col,re,im\n");
    for r in 0..m.dim() {
        for c in 0..m.dim() {
            let (re, im) = m.entry_f64(r, c);
            // avoid printing -0
            let re = re * scale + 0.0;
            let im = im * scale + 0.0;
            writeln!(out, "{r},{c},{re:.11e},{im:.11e}").expect("string write");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{build_basis, build_standard_basis};

    fn table(p: u32, n: usize, c: u32, v: &[i64]) -> FunctionTable {
        FunctionTable::new(p, n, c, v.to_vec()).unwrap()
    }

    fn round_trip(doc: &Document) -> Document {
        from_json(&to_json(doc)).unwrap()
    }

    #[test]
    fn function_table_schema() {
        let f = table(3, 1, 3, &[0, 1, 1]);
        let json = to_json(&Document::FunctionTable((&f).into()));
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["schema"], "mubforge/1");
        assert_eq!(value["type"], "function_table");
        assert_eq!(value["values"], serde_json::json!([0, 1, 1]));
        let Document::FunctionTable(d) = round_trip(&Document::FunctionTable((&f).into())) else {
            panic!()
        };
        assert_eq!(FunctionTable::try_from(d).unwrap(), f);
    }

    #[test]
    fn phase_matrix_round_trip() {
        for m in [
            build_standard_basis(3, 1).unwrap(),
            build_basis(&table(3, 1, 3, &[0, 1, 1])).unwrap(),
            build_basis(&table(2, 2, 4, &[0, 1, 1, 2])).unwrap(),
            build_basis(&table(2, 2, 2, &[0, 0, 0, 1])).unwrap(),
        ] {
            let Document::PhaseMatrix(d) = round_trip(&Document::PhaseMatrix((&m).into())) else {
                panic!()
            };
            assert_eq!(PhaseMatrix::try_from(d).unwrap(), m);
        }
    }

    #[test]
    fn pm_i_exponents_are_pairs() {
        let m = build_basis(&table(2, 1, 4, &[0, 1])).unwrap();
        let json = to_json(&Document::PhaseMatrix((&m).into()));
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["encoding"], "pm_i");
        assert_eq!(
            value["exponents"],
            serde_json::json!([[[0, 0], [0, 1]], [[0, 0], [1, 1]]])
        );
    }

    #[test]
    fn family_and_spread_round_trip() {
        let fam = vec![table(3, 1, 3, &[0, 0, 0]), table(3, 1, 3, &[0, 1, 1])];
        let doc = Document::FunctionFamily(FamilyDoc::new(&fam, FamilyKind::PairwiseBent).unwrap());
        let json = to_json(&doc);
        assert!(json.contains("\"kind\": \"pairwise-bent\""));
        let Document::FunctionFamily(back) = from_json(&json).unwrap() else {
            panic!()
        };
        assert_eq!(back.tables().unwrap(), fam);

        let m = |r: &[Vec<i64>]| Matrix::new(r, 2).unwrap();
        let spread = SpreadSet::new(vec![
            m(&[vec![0, 0], vec![0, 0]]),
            m(&[vec![1, 0], vec![0, 1]]),
            m(&[vec![0, 1], vec![1, 1]]),
            m(&[vec![1, 1], vec![1, 0]]),
        ])
        .unwrap();
        let Document::SpreadSet(d) = round_trip(&Document::SpreadSet((&spread).into())) else {
            panic!()
        };
        assert_eq!(SpreadSet::try_from(d).unwrap(), spread);
    }

    #[test]
    fn wrong_schema_rejected() {
        let f = table(3, 1, 3, &[0, 1, 1]);
        let json =
            to_json(&Document::FunctionTable((&f).into())).replace("mubforge/1", "mubforge/0");
        assert!(from_json(&json).is_err());
        assert!(from_json("{").is_err());
    }

    #[test]
    fn csv_is_normalized() {
        let m = build_basis(&table(3, 1, 3, &[0, 0, 0])).unwrap();
        let csv = phase_matrix_csv(&m);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("row,col,re,im"));
        assert_eq!(lines.next(), Some("0,0,5.77350269190e-1,0.00000000000e0"));
        assert_eq!(csv.lines().count(), 10);
    }
}
