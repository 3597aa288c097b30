//! Generators for mubent sets: quadratic forms of symmetric matrices, spread
//! sets, the `Z_2 -> Z_4` lift, and the two field-trace families.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bent::{FunctionTable, MubentSet};
use crate::error::{Error, Result};
use crate::zmod::{
    find_self_dual_basis, inverse_mod, GaloisField, GfElement, Matrix, SelfDualBasis, SymMatrix,
    VectorSpace, ZVec,
};

/// `v -> v M v^T / 2` over `Z_p`, `p` odd; division by 2 is multiplication
/// by its inverse mod p.
pub fn quadratic_odd(m: &SymMatrix) -> Result<FunctionTable> {
    let p = m.modulus();
    if p.is_multiple_of(2) {
        return Err(Error::EvenCharacteristic(p));
    }
    let half = inverse_mod(2, p).expect("p odd");
    let space = VectorSpace::new(p, m.dim())?;
    FunctionTable::from_fn(&space, p, |v| {
        let c = space.coords(v);
        m.as_matrix().bilinear_raw(c, c) * half % p
    })
}

/// `x -> Tr(a x^2)` for every `a` in GF(p^n), `p` odd.
///
/// `x` runs over the field in polynomial coordinates, which are identified
/// with `Z_p^n` lexicographically; members are ordered by the index of `a`.
pub fn trace_family_odd(field: &GaloisField) -> Result<MubentSet> {
    MubentSet::new(trace_family_tables(field)?)
}

pub(crate) fn trace_family_tables(field: &GaloisField) -> Result<Vec<FunctionTable>> {
    let p = field.characteristic();
    if p == 2 {
        return Err(Error::EvenCharacteristic(p));
    }
    let space = VectorSpace::new(p, field.degree())?;
    let squares: Vec<GfElement> = field.elements().map(|x| field.mul(&x, &x)).collect();
    field
        .elements()
        .map(|a| {
            FunctionTable::from_fn(&space, p, |v| {
                field.trace(&field.mul(&a, &squares[v])).value()
            })
        })
        .collect()
}

/// `M_a[i][j] = Tr(a x^i x^j)` for every `a`: symmetric, and
/// `M_a - M_b = M_(a-b)` is nonsingular because the trace form is.
/// `quadratic_odd(M_a)` is `x -> Tr(a x^2) / 2`.
pub fn trace_spread_set(field: &GaloisField) -> Result<SpreadSet> {
    let p = field.characteristic();
    let n = field.degree();
    let monomials: Vec<GfElement> = (0..n)
        .map(|i| {
            let mut c = vec![0; n];
            c[i] = 1;
            field.element(&c)
        })
        .collect::<Result<_>>()?;
    let matrices = field
        .elements()
        .map(|a| {
            Matrix::from_fn(n, p, |i, j| {
                let prod = field.mul(&monomials[i], &monomials[j]);
                field.trace(&field.mul(&a, &prod)).value()
            })
        })
        .collect();
    SpreadSet::new(matrices)
}

/// Quadratic tables `v M v^T / 2` over a symmetric spread set, `p` odd.
pub fn mubent_from_spread_odd(s: &SpreadSet) -> Result<MubentSet> {
    let tables = s
        .symmetric()?
        .iter()
        .map(quadratic_odd)
        .collect::<Result<Vec<_>>>()?;
    MubentSet::new(tables)
}

/// Reads a 0/1 vector over `Z_2` in `Z_4`.
pub fn hat_vector(v: &ZVec) -> Result<ZVec> {
    if v.modulus() != 2 {
        return Err(Error::ModulusMismatch {
            left: 2,
            right: v.modulus(),
        });
    }
    ZVec::new(&v.coords().iter().map(|&c| c as i64).collect::<Vec<_>>(), 4)
}

/// `B_M(v) = v^ M v^^T mod 4` over `Z_2^n`.
pub fn quadratic_z4(m: &SymMatrix) -> Result<FunctionTable> {
    if m.modulus() != 4 {
        return Err(Error::ModulusMismatch {
            left: 4,
            right: m.modulus(),
        });
    }
    let space = VectorSpace::new(2, m.dim())?;
    // the coordinates of v are already the 0/1 entries of v^
    FunctionTable::from_fn(&space, 4, |v| {
        let c = space.coords(v);
        m.as_matrix().bilinear_raw(c, c)
    })
}

/// Symmetric `Z_2` matrix together with its 0/1 lift to `Z_4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedMatrix {
    source: SymMatrix,
    lifted: SymMatrix,
}

impl LiftedMatrix {
    pub fn new(source: SymMatrix) -> Result<Self> {
        let lifted = source.lift()?;
        Ok(Self { source, lifted })
    }

    pub fn source(&self) -> &SymMatrix {
        &self.source
    }

    pub fn lifted(&self) -> &SymMatrix {
        &self.lifted
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpreadReport {
    pub ok: bool,
    pub size: usize,
    pub expected_size: usize,
    pub pairs_checked: usize,
    /// First pair `(i, j)` whose difference is singular.
    pub first_failure: Option<(usize, usize)>,
}

/// Checks `|s| = p^n` and that every pairwise difference is nonsingular.
pub fn verify_spread_set(s: &[Matrix]) -> Result<SpreadReport> {
    let Some(first) = s.first() else {
        return Err(Error::InvalidSpreadSet("empty".into()));
    };
    let p = first.modulus();
    let n = first.dim();
    for m in s {
        if m.modulus() != p || m.dim() != n {
            return Err(Error::InvalidSpreadSet(
                "matrices must share modulus and size".into(),
            ));
        }
    }
    let expected_size = (p as usize).pow(n as u32);
    let pairs: Vec<(usize, usize)> = (0..s.len())
        .flat_map(|i| (i + 1..s.len()).map(move |j| (i, j)))
        .collect();
    let singular: Vec<bool> = pairs
        .par_iter()
        .map(|&(i, j)| {
            s[i].sub(&s[j])
                .and_then(|d| d.is_nonsingular())
                .map(|ok| !ok)
        })
        .collect::<Result<_>>()?;
    let first_failure = pairs
        .iter()
        .zip(&singular)
        .find(|(_, &bad)| bad)
        .map(|(&pair, _)| pair);
    Ok(SpreadReport {
        ok: s.len() == expected_size && first_failure.is_none(),
        size: s.len(),
        expected_size,
        pairs_checked: pairs.len(),
        first_failure,
    })
}

/// A verified spread set: `p^n` matrices over `Z_p` with nonsingular
/// pairwise differences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpreadSet {
    matrices: Vec<Matrix>,
}

impl SpreadSet {
    pub fn new(matrices: Vec<Matrix>) -> Result<Self> {
        let report = verify_spread_set(&matrices)?;
        if !report.ok {
            return Err(Error::InvalidSpreadSet(match report.first_failure {
                Some((i, j)) => format!("difference of members {i} and {j} is singular"),
                None => format!(
                    "{} matrices, expected {}",
                    report.size, report.expected_size
                ),
            }));
        }
        Ok(Self { matrices })
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn p(&self) -> u32 {
        self.matrices[0].modulus()
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// All members as symmetric matrices, or the first asymmetric one.
    pub fn symmetric(&self) -> Result<Vec<SymMatrix>> {
        self.matrices
            .iter()
            .cloned()
            .map(SymMatrix::try_from)
            .collect()
    }
}

/// `{B_(R^) : R in Σ - R_0}` for a symmetric spread set over `Z_2`, where
/// `R_0` is the first member. The pivot itself maps to the zero table.
pub fn mubent_from_spread_z2(s: &SpreadSet) -> Result<MubentSet> {
    if s.p() != 2 {
        return Err(Error::OddCharacteristic(s.p()));
    }
    let members = s.symmetric()?;
    let pivot = &members[0];
    let tables = members
        .iter()
        .map(|r| {
            let lifted = LiftedMatrix::new(r.sub(pivot)?)?;
            quadratic_z4(lifted.lifted())
        })
        .collect::<Result<Vec<_>>>()?;
    MubentSet::new(tables)
}

/// Matrix of `x -> c x` in a self-dual basis, acting on row vectors:
/// entry `(i, j)` is the `j`-th coordinate of `c b_i`, i.e. `Tr(c b_i b_j)`.
pub fn mult_matrix_self_adjoint(
    field: &GaloisField,
    c: &GfElement,
    basis: &SelfDualBasis,
) -> Result<SymMatrix> {
    let n = basis.degree();
    let rows: Vec<Vec<u32>> = basis
        .elements()
        .iter()
        .map(|b| basis.coordinates(field, &field.mul(c, b)))
        .collect();
    SymMatrix::try_from(Matrix::from_fn(n, 2, |i, j| rows[i][j]))
}

/// The spread set `{cI : c in F_(2^n)}` written in a self-dual basis.
pub fn scalar_spread_set_z2(field: &GaloisField, basis: &SelfDualBasis) -> Result<SpreadSet> {
    let matrices = field
        .elements()
        .map(|c| mult_matrix_self_adjoint(field, &c, basis).map(SymMatrix::into_matrix))
        .collect::<Result<Vec<_>>>()?;
    SpreadSet::new(matrices)
}

/// The characteristic-2 field family: self-dual basis, `{cI}` spread set,
/// and the lifted quadratic mubent set.
pub fn trace_family_even(field: &GaloisField) -> Result<(SelfDualBasis, MubentSet)> {
    let basis = find_self_dual_basis(field)?;
    let spread = scalar_spread_set_z2(field, &basis)?;
    let set = mubent_from_spread_z2(&spread)?;
    Ok((basis, set))
}
