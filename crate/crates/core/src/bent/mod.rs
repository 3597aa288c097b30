//! Function tables on `V = Z_p^n`, bent tests, and mubent-set verification.
//!
//! Bentness is decided from the derivative histograms directly:
//!
//! * codomain `Z_p` (any prime, including the real `Z_2` case): every
//!   derivative `v -> B(v+u) - B(v)` with `u != 0` hits each value
//!   `|V|/p` times;
//! * codomain `Z_4` over `Z_2^n`: every such derivative has
//!   `n(u,0) = n(u,2)` and `n(u,1) = n(u,3)`.
//!
//! The character-sum test in [`walsh`] is kept only as a cross-check.

mod search;
mod walsh;

pub use search::{search_mubent, SearchConfig, SearchMode, SearchOutcome};
pub use walsh::walsh_bent_oracle;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zmod::{is_prime, reduce, VectorSpace, ZVec};

/// A total function `Z_p^n -> Z_p` or `Z_2^n -> Z_4`, stored densely in
/// lexicographic vector order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionTable {
    p: u32,
    n: usize,
    codomain: u32,
    values: Vec<u32>,
}

fn check_domain(p: u32, n: usize, codomain: u32) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::NonPrimeModulus(p));
    }
    if codomain != p && !(p == 2 && codomain == 4) {
        return Err(Error::Invalid(format!(
            "codomain Z_{codomain} is not supported over Z_{p}^{n}"
        )));
    }
    if n == 0 {
        return Err(Error::Invalid("dimension must be at least 1".into()));
    }
    (p as usize)
        .checked_pow(n as u32)
        .filter(|&s| s <= 1 << 20)
        .ok_or_else(|| Error::Invalid(format!("Z_{p}^{n} is too large")))
}

impl FunctionTable {
    pub fn new(p: u32, n: usize, codomain: u32, values: Vec<i64>) -> Result<Self> {
        let size = check_domain(p, n, codomain)?;
        if values.len() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: values.len(),
            });
        }
        Ok(Self {
            p,
            n,
            codomain,
            values: values.into_iter().map(|v| reduce(v, codomain)).collect(),
        })
    }

    pub fn zero(p: u32, n: usize, codomain: u32) -> Result<Self> {
        let size = check_domain(p, n, codomain)?;
        Ok(Self {
            p,
            n,
            codomain,
            values: vec![0; size],
        })
    }

    /// Tabulates `f` over `space` in index order.
    pub fn from_fn(
        space: &VectorSpace,
        codomain: u32,
        mut f: impl FnMut(usize) -> u32,
    ) -> Result<Self> {
        check_domain(space.p(), space.n(), codomain)?;
        Ok(Self {
            p: space.p(),
            n: space.n(),
            codomain,
            values: (0..space.size()).map(|i| f(i) % codomain).collect(),
        })
    }

    pub(crate) fn from_reduced(p: u32, n: usize, codomain: u32, values: Vec<u32>) -> Self {
        debug_assert!(values.iter().all(|&v| v < codomain));
        Self {
            p,
            n,
            codomain,
            values,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn codomain(&self) -> u32 {
        self.codomain
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn value(&self, index: usize) -> u32 {
        self.values[index]
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn space(&self) -> VectorSpace {
        VectorSpace::new(self.p, self.n).expect("validated at construction")
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn same_shape(&self, other: &FunctionTable) -> bool {
        self.p == other.p && self.n == other.n && self.codomain == other.codomain
    }

    fn check(&self, other: &FunctionTable) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "table shapes differ: (p={}, n={}, codomain={}) vs (p={}, n={}, codomain={})",
                self.p, self.n, self.codomain, other.p, other.n, other.codomain
            )))
        }
    }

    /// Pointwise difference in the codomain.
    pub fn sub(&self, other: &FunctionTable) -> Result<FunctionTable> {
        self.check(other)?;
        let m = self.codomain;
        Ok(Self::from_reduced(
            self.p,
            self.n,
            m,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a + m - b) % m)
                .collect(),
        ))
    }

    pub fn add(&self, other: &FunctionTable) -> Result<FunctionTable> {
        self.check(other)?;
        let m = self.codomain;
        Ok(Self::from_reduced(
            self.p,
            self.n,
            m,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a + b) % m)
                .collect(),
        ))
    }

    pub fn plus_constant(&self, c: u32) -> FunctionTable {
        let m = self.codomain;
        Self::from_reduced(
            self.p,
            self.n,
            m,
            self.values.iter().map(|a| (a + c) % m).collect(),
        )
    }

    /// `v -> f(v + t)`.
    pub fn translate(&self, t: &ZVec) -> Result<FunctionTable> {
        let space = self.space();
        let t = self.direction_index(&space, t)?;
        Ok(Self::from_reduced(
            self.p,
            self.n,
            self.codomain,
            (0..space.size())
                .map(|v| self.values[space.add(v, t)])
                .collect(),
        ))
    }

    /// `v -> f(perm(v))` for a permutation of indices.
    pub fn permute(&self, perm: &[usize]) -> Result<FunctionTable> {
        if perm.len() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                found: perm.len(),
            });
        }
        Ok(Self::from_reduced(
            self.p,
            self.n,
            self.codomain,
            perm.iter().map(|&i| self.values[i]).collect(),
        ))
    }

    fn direction_index(&self, space: &VectorSpace, u: &ZVec) -> Result<usize> {
        if u.modulus() != self.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: u.modulus(),
            });
        }
        if u.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: u.len(),
            });
        }
        Ok(space.index_of(u.coords()))
    }
}

/// `counts[k] = |{v : B(v+u) - B(v) = k}|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivativeHistogram {
    pub direction: Vec<u32>,
    pub counts: Vec<usize>,
}

impl DerivativeHistogram {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

pub fn derivative_histogram(f: &FunctionTable, u: &ZVec) -> Result<DerivativeHistogram> {
    if u.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let space = f.space();
    let u = f.direction_index(&space, u)?;
    Ok(histogram_at(f, &space, u))
}

fn histogram_at(f: &FunctionTable, space: &VectorSpace, u: usize) -> DerivativeHistogram {
    let m = f.codomain;
    let mut counts = vec![0usize; m as usize];
    for v in 0..space.size() {
        let d = (f.values[space.add(v, u)] + m - f.values[v]) % m;
        counts[d as usize] += 1;
    }
    DerivativeHistogram {
        direction: space.coords(u).to_vec(),
        counts,
    }
}

fn histogram_is_bent(f: &FunctionTable, h: &DerivativeHistogram) -> bool {
    if f.codomain == 4 {
        h.counts[0] == h.counts[2] && h.counts[1] == h.counts[3]
    } else {
        let target = f.size() / f.p as usize;
        h.counts.iter().all(|&c| c == target)
    }
}

/// The first nonzero direction (in index order) whose derivative breaks the
/// bent condition, with its histogram.
pub fn first_non_bent_direction(f: &FunctionTable) -> Option<DerivativeHistogram> {
    let space = f.space();
    (1..space.size())
        .map(|u| histogram_at(f, &space, u))
        .find(|h| !histogram_is_bent(f, h))
}

/// Bent test dispatched on the codomain.
pub fn is_bent(f: &FunctionTable) -> bool {
    first_non_bent_direction(f).is_none()
}

/// Bent test for `Z_p^n -> Z_p`, `p` odd.
pub fn is_bent_odd(f: &FunctionTable) -> Result<bool> {
    if f.p == 2 {
        return Err(Error::EvenCharacteristic(2));
    }
    if f.codomain != f.p {
        return Err(Error::ModulusMismatch {
            left: f.p,
            right: f.codomain,
        });
    }
    Ok(is_bent(f))
}

/// Bent test for `Z_2^n -> Z_4`.
pub fn is_bent_z4(f: &FunctionTable) -> Result<bool> {
    if f.p != 2 {
        return Err(Error::OddCharacteristic(f.p));
    }
    if f.codomain != 4 {
        return Err(Error::ModulusMismatch {
            left: 4,
            right: f.codomain,
        });
    }
    Ok(is_bent(f))
}

/// Bent test for `Z_2^n -> Z_2`: balanced derivatives.
pub fn is_bent_binary(f: &FunctionTable) -> Result<bool> {
    if f.p != 2 || f.codomain != 2 {
        return Err(Error::Invalid(format!(
            "expected Z_2^n -> Z_2, got Z_{}^n -> Z_{}",
            f.p, f.codomain
        )));
    }
    Ok(is_bent(f))
}

/// A pair of members whose difference is not bent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonBentPair {
    pub first: usize,
    pub second: usize,
    pub histogram: DerivativeHistogram,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MubentReport {
    pub ok: bool,
    pub size: usize,
    pub expected_size: usize,
    /// False when `size != p^n`: "not a full mubent set".
    pub full_size: bool,
    pub pairs_checked: usize,
    pub first_failure: Option<NonBentPair>,
}

impl MubentReport {
    pub fn summary(&self) -> String {
        if self.ok {
            return format!(
                "mubent set of {} functions, {} pairs bent",
                self.size, self.pairs_checked
            );
        }
        let mut parts = Vec::new();
        if !self.full_size {
            parts.push(format!(
                "not a full mubent set ({} functions, expected {})",
                self.size, self.expected_size
            ));
        }
        if let Some(f) = &self.first_failure {
            parts.push(format!(
                "difference of members {} and {} is not bent in direction {:?} (counts {:?})",
                f.first, f.second, f.histogram.direction, f.histogram.counts
            ));
        }
        parts.join("; ")
    }
}

/// Checks every unordered pair for a bent difference. Runs all pairs, in
/// parallel, and reports the first failing pair in `(i, j)` order.
pub fn check_pairwise_bent(tables: &[FunctionTable]) -> Result<(usize, Option<NonBentPair>)> {
    if let Some(first) = tables.first() {
        for t in &tables[1..] {
            first.check(t)?;
        }
    }
    let pairs: Vec<(usize, usize)> = (0..tables.len())
        .flat_map(|i| (i + 1..tables.len()).map(move |j| (i, j)))
        .collect();
    let failures: Vec<Option<NonBentPair>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let diff = tables[i].sub(&tables[j]).expect("shapes checked");
            first_non_bent_direction(&diff).map(|histogram| NonBentPair {
                first: i,
                second: j,
                histogram,
            })
        })
        .collect();
    Ok((pairs.len(), failures.into_iter().flatten().next()))
}

/// Verifies a candidate mubent set: `p^n` members with pairwise bent
/// differences. A wrong size is reported, and the pairwise check still runs.
pub fn verify_mubent(tables: &[FunctionTable]) -> Result<MubentReport> {
    let Some(first) = tables.first() else {
        return Err(Error::Invalid("empty candidate set".into()));
    };
    let expected_size = first.size();
    let (pairs_checked, first_failure) = check_pairwise_bent(tables)?;
    let full_size = tables.len() == expected_size;
    Ok(MubentReport {
        ok: full_size && first_failure.is_none(),
        size: tables.len(),
        expected_size,
        full_size,
        pairs_checked,
        first_failure,
    })
}

/// A verified set of `|V|` functions with pairwise bent differences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MubentSet {
    functions: Vec<FunctionTable>,
}

impl MubentSet {
    pub fn new(functions: Vec<FunctionTable>) -> Result<Self> {
        let report = verify_mubent(&functions)?;
        if !report.ok {
            return Err(Error::Invalid(report.summary()));
        }
        Ok(Self { functions })
    }

    pub fn functions(&self) -> &[FunctionTable] {
        &self.functions
    }

    pub fn into_functions(self) -> Vec<FunctionTable> {
        self.functions
    }

    pub fn p(&self) -> u32 {
        self.functions[0].p
    }

    pub fn n(&self) -> usize {
        self.functions[0].n
    }

    pub fn codomain(&self) -> u32 {
        self.functions[0].codomain
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }
}
