//! Phase-matrix bases and exact certification of complete MUB sets.
//!
//! A basis is stored unnormalized, as integer exponents of roots of unity:
//!
//! * `zeta_p` (odd `p`): row `a` is `e_(a,B) = Σ_v ζ^(a·v + B(v)) e_v`,
//!   stored as the exponent `a·v + B(v) mod p`;
//! * `pm_i` (`p = 2`): row `a` is `Σ_v (-1)^(a·v) i^(B(v)) e_v`, stored as the
//!   pair `(a·v mod 2, B(v) mod 4)`. A real basis (`ζ = -1`, `Z_2`-valued `B`)
//!   is the restriction to pairs `(a·v + B(v) mod 2, 0)`;
//! * `standard`: the identity, `M_∞`.
//!
//! Every phase vector has squared norm `N = p^n`, the standard vectors 1. The
//! normalized bases divide by `sqrt(N)`; that factor is never materialized.

mod verify;

pub use verify::{
    verify_complete_mub, verify_mub_family, FailureKind, VerificationFailure, VerificationReport,
    VerifyOptions,
};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bent::FunctionTable;
use crate::cyclotomic::{CyclotomicInt, ExactScalar, GaussianInt};
use crate::error::{Error, Result};
use crate::zmod::{is_prime, VectorSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    Standard,
    ZetaP,
    PmI,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Standard => "standard",
            Encoding::ZetaP => "zeta_p",
            Encoding::PmI => "pm_i",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Phases {
    Standard,
    /// Row-major exponents of ζ.
    Zeta(Vec<u8>),
    /// Row-major `(s, t)` meaning `(-1)^s i^t`.
    PmI(Vec<[u8; 2]>),
}

/// An `N x N` basis of unnormalized root-of-unity vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhaseMatrix {
    p: u32,
    n: usize,
    dim: usize,
    phases: Phases,
}

impl PhaseMatrix {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N = p^n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn encoding(&self) -> Encoding {
        match self.phases {
            Phases::Standard => Encoding::Standard,
            Phases::Zeta(_) => Encoding::ZetaP,
            Phases::PmI(_) => Encoding::PmI,
        }
    }

    pub fn is_standard(&self) -> bool {
        matches!(self.phases, Phases::Standard)
    }

    /// True when every entry is real (`±1` or the standard basis).
    pub fn is_real(&self) -> bool {
        match &self.phases {
            Phases::Standard => true,
            Phases::Zeta(_) => false,
            Phases::PmI(e) => e.iter().all(|[_, t]| t % 2 == 0),
        }
    }

    /// Squared norm of every (unnormalized) row.
    pub fn row_norm_sq(&self) -> u64 {
        if self.is_standard() {
            1
        } else {
            self.dim as u64
        }
    }

    /// Order of the root of unity the exponents refer to.
    pub fn root_order(&self) -> u32 {
        if self.p == 2 {
            4
        } else {
            self.p
        }
    }

    /// Exponent table as JSON-ready rows: plain integers for `zeta_p`,
    /// `[s, t]` pairs for `pm_i`, empty for `standard`.
    pub fn exponent_rows(&self) -> ExponentRows {
        match &self.phases {
            Phases::Standard => ExponentRows::Zeta(Vec::new()),
            Phases::Zeta(e) => ExponentRows::Zeta(
                e.chunks(self.dim)
                    .map(|r| r.iter().map(|&x| x as u32).collect())
                    .collect(),
            ),
            Phases::PmI(e) => ExponentRows::PmI(
                e.chunks(self.dim)
                    .map(|r| r.iter().map(|&[s, t]| [s as u32, t as u32]).collect())
                    .collect(),
            ),
        }
    }

    pub fn from_exponent_rows(
        p: u32,
        n: usize,
        encoding: Encoding,
        rows: ExponentRows,
    ) -> Result<Self> {
        let dim = dimension(p, n)?;
        let bad = |msg: String| Error::EncodingMismatch(msg);
        let check_rows = |widths: Vec<usize>| -> Result<()> {
            if widths.len() != dim {
                return Err(bad(format!("expected {dim} rows, found {}", widths.len())));
            }
            if let Some(w) = widths.into_iter().find(|&w| w != dim) {
                return Err(bad(format!("expected rows of length {dim}, found {w}")));
            }
            Ok(())
        };
        let phases = match (encoding, rows) {
            (Encoding::Standard, ExponentRows::Zeta(r)) if r.is_empty() => Phases::Standard,
            (Encoding::Standard, ExponentRows::PmI(r)) if r.is_empty() => Phases::Standard,
            (Encoding::Standard, _) => {
                return Err(bad("standard basis carries no exponents".into()));
            }
            (Encoding::ZetaP, ExponentRows::Zeta(r)) => {
                if p == 2 {
                    return Err(bad("zeta_p encoding requires an odd prime".into()));
                }
                check_rows(r.iter().map(Vec::len).collect())?;
                let flat: Vec<u8> = r.into_iter().flatten().map(|e| (e % p) as u8).collect();
                Phases::Zeta(flat)
            }
            (Encoding::PmI, ExponentRows::PmI(r)) => {
                if p != 2 {
                    return Err(bad("pm_i encoding requires p = 2".into()));
                }
                check_rows(r.iter().map(Vec::len).collect())?;
                let flat: Vec<[u8; 2]> = r
                    .into_iter()
                    .flatten()
                    .map(|[s, t]| [(s % 2) as u8, (t % 4) as u8])
                    .collect();
                Phases::PmI(flat)
            }
            (enc, _) => return Err(bad(format!("exponent shape does not match {enc}"))),
        };
        Ok(Self { p, n, dim, phases })
    }

    /// Exponent of entry `(row, col)` as a power of the primitive
    /// `root_order()`-th root of unity (ζ, or `i` with `(-1)^s i^t = i^(2s+t)`).
    /// `None` for the zero entries of the standard basis.
    pub fn root_exponent(&self, row: usize, col: usize) -> Option<u32> {
        match &self.phases {
            Phases::Standard => (row == col).then_some(0),
            Phases::Zeta(e) => Some(e[row * self.dim + col] as u32),
            Phases::PmI(e) => {
                let [s, t] = e[row * self.dim + col];
                Some(((2 * s + t) % 4) as u32)
            }
        }
    }

    /// Unnormalized entry as a float pair. Export and test use only.
    pub fn entry_f64(&self, row: usize, col: usize) -> (f64, f64) {
        match self.root_exponent(row, col) {
            None => (0.0, 0.0),
            Some(e) => {
                let order = self.root_order();
                // quarter turns exactly, so that real and imaginary zeros print as 0
                if (4 * e) % order == 0 {
                    return [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]
                        [(4 * e / order) as usize % 4];
                }
                let angle = 2.0 * std::f64::consts::PI * e as f64 / order as f64;
                (angle.cos(), angle.sin())
            }
        }
    }

    /// Rows and columns reordered: entry `(r, c)` of the result is entry
    /// `(row_perm[r], col_perm[c])` of `self`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<PhaseMatrix> {
        if row_perm.len() != self.dim || col_perm.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: row_perm.len().min(col_perm.len()),
            });
        }
        let pick = |r: usize, c: usize| row_perm[r] * self.dim + col_perm[c];
        let phases = match &self.phases {
            Phases::Standard => {
                if row_perm != col_perm {
                    return Err(Error::Invalid(
                        "standard basis only admits a simultaneous relabeling".into(),
                    ));
                }
                Phases::Standard
            }
            Phases::Zeta(e) => Phases::Zeta(
                (0..self.dim)
                    .flat_map(|r| (0..self.dim).map(move |c| (r, c)))
                    .map(|(r, c)| e[pick(r, c)])
                    .collect(),
            ),
            Phases::PmI(e) => Phases::PmI(
                (0..self.dim)
                    .flat_map(|r| (0..self.dim).map(move |c| (r, c)))
                    .map(|(r, c)| e[pick(r, c)])
                    .collect(),
            ),
        };
        Ok(PhaseMatrix {
            p: self.p,
            n: self.n,
            dim: self.dim,
            phases,
        })
    }

    fn compatible(&self, other: &PhaseMatrix) -> Result<()> {
        if self.p != other.p || self.n != other.n {
            return Err(Error::EncodingMismatch(format!(
                "bases over Z_{}^{} and Z_{}^{}",
                self.p, self.n, other.p, other.n
            )));
        }
        Ok(())
    }

    /// Flips the phase of one entry; for mutation tests of the verifier.
    pub fn with_bumped_entry(&self, row: usize, col: usize) -> PhaseMatrix {
        let mut out = self.clone();
        let idx = row * self.dim + col;
        match &mut out.phases {
            Phases::Standard => {}
            Phases::Zeta(e) => e[idx] = ((e[idx] as u32 + 1) % self.p) as u8,
            Phases::PmI(e) => e[idx][1] = (e[idx][1] + 1) % 4,
        }
        out
    }
}

/// Exponent rows as they appear in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExponentRows {
    Zeta(Vec<Vec<u32>>),
    PmI(Vec<Vec<[u32; 2]>>),
}

fn dimension(p: u32, n: usize) -> Result<usize> {
    // exponents are stored as bytes
    if p > u8::MAX as u32 {
        return Err(Error::UnsupportedModulus(p));
    }
    Ok(VectorSpace::new(p, n)?.size())
}

/// `M_∞`: the identity pattern.
pub fn build_standard_basis(p: u32, n: usize) -> Result<PhaseMatrix> {
    if !is_prime(p) {
        return Err(Error::NonPrimeModulus(p));
    }
    Ok(PhaseMatrix {
        p,
        n,
        dim: dimension(p, n)?,
        phases: Phases::Standard,
    })
}

/// The basis `{e_(a,B) : a in V}` for one function `B`, row `a`, column `v`.
pub fn build_basis(b: &FunctionTable) -> Result<PhaseMatrix> {
    let space = b.space();
    let dim = space.size();
    let rows = (0..dim).flat_map(|a| (0..dim).map(move |v| (a, v)));
    let phases = match (b.p(), b.codomain()) {
        (2, 4) => Phases::PmI(
            rows.map(|(a, v)| [space.dot(a, v) as u8, b.value(v) as u8])
                .collect(),
        ),
        // ζ = -1: (-1)^(a·v + B(v))
        (2, 2) => Phases::PmI(
            rows.map(|(a, v)| [((space.dot(a, v) + b.value(v)) % 2) as u8, 0])
                .collect(),
        ),
        (p, c) if p == c => Phases::Zeta(
            rows.map(|(a, v)| ((space.dot(a, v) + b.value(v)) % p) as u8)
                .collect(),
        ),
        (p, c) => {
            return Err(Error::EncodingMismatch(format!(
                "no phase encoding for Z_{p}^n -> Z_{c}"
            )))
        }
    };
    Ok(PhaseMatrix {
        p: b.p(),
        n: b.n(),
        dim,
        phases,
    })
}

/// Multiplicities of `exp(x_v) - exp(y_v)` over columns `v`, for two
/// non-standard rows; `Σ_k counts[k] ω^k` is their inner product.
fn difference_counts(x: &PhaseMatrix, a: usize, y: &PhaseMatrix, b: usize) -> Vec<i64> {
    let r = x.root_order();
    let mut counts = vec![0i64; r as usize];
    for v in 0..x.dim {
        let ex = x.root_exponent(a, v).expect("phase row");
        let ey = y.root_exponent(b, v).expect("phase row");
        counts[((ex + r - ey) % r) as usize] += 1;
    }
    counts
}

fn scalar_from_counts(p: u32, counts: &[i64]) -> Result<ExactScalar> {
    if p == 2 {
        let c: [i64; 4] = counts.try_into().expect("four exponent classes");
        Ok(ExactScalar::Gaussian(GaussianInt::from_exponent_counts(&c)))
    } else {
        CyclotomicInt::from_exponent_counts(p, counts).map(ExactScalar::Cyclotomic)
    }
}

/// Hermitian inner product `Σ_v x_v conj(y_v)` of row `a` of `x` and row `b`
/// of `y`, exactly.
pub fn inner_product(x: &PhaseMatrix, a: usize, y: &PhaseMatrix, b: usize) -> Result<ExactScalar> {
    x.compatible(y)?;
    if a >= x.dim || b >= y.dim {
        return Err(Error::Invalid(format!(
            "row index out of range for dimension {}",
            x.dim
        )));
    }
    let r = x.root_order();
    let mut counts = vec![0i64; r as usize];
    match (x.is_standard(), y.is_standard()) {
        (true, true) => {
            if a == b {
                counts[0] = 1;
            }
        }
        // e_a against a phase row: conj of the single entry at column a
        (true, false) => {
            let e = y.root_exponent(b, a).expect("phase row");
            counts[((r - e) % r) as usize] = 1;
        }
        (false, true) => {
            let e = x.root_exponent(a, b).expect("phase row");
            counts[e as usize] = 1;
        }
        (false, false) => counts = difference_counts(x, a, y, b),
    }
    scalar_from_counts(x.p, &counts)
}

/// `{M_∞} ∪ {M_B : B in functions}`, standard basis first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MubFamily {
    bases: Vec<PhaseMatrix>,
    provenance: Vec<FunctionTable>,
}

impl MubFamily {
    pub fn from_bases(bases: Vec<PhaseMatrix>, provenance: Vec<FunctionTable>) -> Result<Self> {
        if let Some(first) = bases.first() {
            for b in &bases[1..] {
                first.compatible(b)?;
            }
        }
        Ok(Self { bases, provenance })
    }

    pub fn bases(&self) -> &[PhaseMatrix] {
        &self.bases
    }

    pub fn provenance(&self) -> &[FunctionTable] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.bases.first().map(PhaseMatrix::dim)
    }

    /// `N + 1` bases.
    pub fn is_complete(&self) -> bool {
        self.dim().is_some_and(|d| self.bases.len() == d + 1)
    }

    pub fn replace_basis(&mut self, index: usize, basis: PhaseMatrix) -> Result<()> {
        if let Some(first) = self.bases.first() {
            first.compatible(&basis)?;
        }
        self.bases[index] = basis;
        Ok(())
    }
}

/// Standard basis plus one phase basis per function.
pub fn build_family(functions: &[FunctionTable]) -> Result<MubFamily> {
    let Some(first) = functions.first() else {
        return Err(Error::Invalid("no functions given".into()));
    };
    let mut bases = vec![build_standard_basis(first.p(), first.n())?];
    for f in functions {
        if !f.same_shape(first) {
            return Err(Error::DimensionMismatch {
                expected: first.size(),
                found: f.size(),
            });
        }
        bases.push(build_basis(f)?);
    }
    MubFamily::from_bases(bases, functions.to_vec())
}

/// Real bases from `Z_2`-valued functions (`ζ = -1`). An empty input gives
/// just `M_∞` over `Z_2^n`.
pub fn build_real_mub_family(n: usize, functions: &[FunctionTable]) -> Result<MubFamily> {
    for f in functions {
        if f.p() != 2 || f.codomain() != 2 || f.n() != n {
            return Err(Error::Invalid(format!(
                "real family needs Z_2^{n} -> Z_2 tables, got Z_{}^{} -> Z_{}",
                f.p(),
                f.n(),
                f.codomain()
            )));
        }
    }
    let mut bases = vec![build_standard_basis(2, n)?];
    for f in functions {
        bases.push(build_basis(f)?);
    }
    MubFamily::from_bases(bases, functions.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(p: u32, n: usize, c: u32, v: &[i64]) -> FunctionTable {
        FunctionTable::new(p, n, c, v.to_vec()).unwrap()
    }

    #[test]
    fn zero_function_gives_characters() {
        let m = build_basis(&FunctionTable::zero(3, 2, 3).unwrap()).unwrap();
        let space = VectorSpace::new(3, 2).unwrap();
        for a in 0..9 {
            for v in 0..9 {
                assert_eq!(m.root_exponent(a, v), Some(space.dot(a, v)));
            }
        }
    }

    #[test]
    fn square_row_zero() {
        let m = build_basis(&table(3, 1, 3, &[0, 1, 1])).unwrap();
        let row: Vec<_> = (0..3).map(|v| m.root_exponent(0, v).unwrap()).collect();
        assert_eq!(row, [0, 1, 1]);
    }

    #[test]
    fn pm_i_rows() {
        let m = build_basis(&table(2, 1, 4, &[0, 1])).unwrap();
        assert_eq!(m.encoding(), Encoding::PmI);
        // [1, i] and [1, -i]
        assert_eq!(m.root_exponent(0, 0), Some(0));
        assert_eq!(m.root_exponent(0, 1), Some(1));
        assert_eq!(m.root_exponent(1, 0), Some(0));
        assert_eq!(m.root_exponent(1, 1), Some(3));
    }

    #[test]
    fn standard_basis_products() {
        let e = build_standard_basis(3, 1).unwrap();
        assert!(inner_product(&e, 0, &e, 1).unwrap().is_zero());
        assert!(inner_product(&e, 2, &e, 2).unwrap().is_one());
        let m = build_basis(&table(3, 1, 3, &[0, 1, 1])).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let x = inner_product(&e, a, &m, b).unwrap();
                assert!(x.norm_sq().is_one());
            }
        }
    }

    #[test]
    fn orthogonality_within_a_basis() {
        let m = build_basis(&table(3, 1, 3, &[0, 1, 1])).unwrap();
        assert!(inner_product(&m, 1, &m, 1).unwrap().equals_integer(3));
        assert!(inner_product(&m, 0, &m, 2).unwrap().is_zero());
    }

    #[test]
    fn mismatched_bases_rejected() {
        let a = build_standard_basis(3, 1).unwrap();
        let b = build_standard_basis(2, 1).unwrap();
        assert!(inner_product(&a, 0, &b, 0).is_err());
        assert!(inner_product(&a, 5, &a, 0).is_err());
    }

    #[test]
    fn real_basis_is_real() {
        let m = build_basis(&table(2, 2, 2, &[0, 0, 0, 1])).unwrap();
        assert!(m.is_real());
        assert!(!build_basis(&table(2, 1, 4, &[0, 1])).unwrap().is_real());
        let fam = build_real_mub_family(2, &[]).unwrap();
        assert_eq!(fam.len(), 1);
        assert!(build_real_mub_family(2, &[table(2, 2, 4, &[0, 0, 0, 1])]).is_err());
    }

    #[test]
    fn exponent_rows_round_trip() {
        for t in [table(3, 1, 3, &[0, 1, 1]), table(2, 1, 4, &[0, 1])] {
            let m = build_basis(&t).unwrap();
            let back =
                PhaseMatrix::from_exponent_rows(m.p(), m.n(), m.encoding(), m.exponent_rows())
                    .unwrap();
            assert_eq!(back, m);
        }
        let e = build_standard_basis(2, 2).unwrap();
        let back =
            PhaseMatrix::from_exponent_rows(2, 2, Encoding::Standard, e.exponent_rows()).unwrap();
        assert_eq!(back, e);
        assert!(PhaseMatrix::from_exponent_rows(
            3,
            1,
            Encoding::ZetaP,
            ExponentRows::Zeta(vec![vec![0, 1], vec![0, 1], vec![0, 1]])
        )
        .is_err());
    }
}
