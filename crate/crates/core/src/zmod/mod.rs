//! Arithmetic over Z_p, Z_4 and GF(p^n).
//!
//! Vectors of `Z_m^n` are enumerated lexicographically with `coords[0]` the
//! most significant digit. That enumeration is the row and column order of
//! every function table and phase matrix in the crate.

mod field;
mod field_table;
mod matrix;
mod self_dual;

pub use field::{AxiomViolation, GaloisField, GfElement};
pub use field_table::{FieldTable, FIELD_TABLE_ENV};
pub use matrix::{Matrix, MatrixRows, SymMatrix};
pub use self_dual::{
    find_self_dual_basis, find_self_dual_basis_with, trace_gram, SelfDualBasis,
    DEFAULT_SEARCH_BUDGET, DEFAULT_SEARCH_SEED,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub fn is_prime(m: u32) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Accepts a prime or 4.
pub fn check_modulus(m: u32) -> Result<u32> {
    if m == 4 || is_prime(m) {
        Ok(m)
    } else {
        Err(Error::UnsupportedModulus(m))
    }
}

pub(crate) fn reduce(value: i64, modulus: u32) -> u32 {
    value.rem_euclid(modulus as i64) as u32
}

/// Multiplicative inverse of `a` modulo the prime `p`.
pub fn inverse_mod(a: u32, p: u32) -> Option<u32> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    // Fermat; p is tiny.
    let mut result = 1u64;
    let mut base = a as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    Some(result as u32)
}

/// An element of `Z_m` for `m` prime or `m = 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZMod {
    value: u32,
    modulus: u32,
}

impl ZMod {
    pub fn new(value: i64, modulus: u32) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self {
            value: reduce(value, modulus),
            modulus,
        })
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn inverse(self) -> Option<Self> {
        if !is_prime(self.modulus) {
            return None;
        }
        inverse_mod(self.value, self.modulus).map(|value| Self {
            value,
            modulus: self.modulus,
        })
    }

    fn same(self, other: Self) -> u32 {
        assert_eq!(
            self.modulus, other.modulus,
            "mixed-modulus arithmetic on ZMod"
        );
        self.modulus
    }
}

impl fmt::Display for ZMod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Add for ZMod {
    type Output = ZMod;
    fn add(self, rhs: ZMod) -> ZMod {
        let m = self.same(rhs);
        ZMod {
            value: (self.value + rhs.value) % m,
            modulus: m,
        }
    }
}

impl Sub for ZMod {
    type Output = ZMod;
    fn sub(self, rhs: ZMod) -> ZMod {
        let m = self.same(rhs);
        ZMod {
            value: (self.value + m - rhs.value) % m,
            modulus: m,
        }
    }
}

impl Mul for ZMod {
    type Output = ZMod;
    fn mul(self, rhs: ZMod) -> ZMod {
        let m = self.same(rhs);
        ZMod {
            value: self.value * rhs.value % m,
            modulus: m,
        }
    }
}

impl Neg for ZMod {
    type Output = ZMod;
    fn neg(self) -> ZMod {
        ZMod {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

/// A row vector in `Z_m^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZVec {
    modulus: u32,
    coords: Vec<u32>,
}

impl ZVec {
    pub fn new(coords: &[i64], modulus: u32) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self {
            modulus,
            coords: coords.iter().map(|&c| reduce(c, modulus)).collect(),
        })
    }

    pub fn zero(n: usize, modulus: u32) -> Self {
        Self {
            modulus,
            coords: vec![0; n],
        }
    }

    pub(crate) fn from_reduced(coords: Vec<u32>, modulus: u32) -> Self {
        debug_assert!(coords.iter().all(|&c| c < modulus));
        Self { modulus, coords }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &ZVec) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ZVec) -> Result<ZVec> {
        self.check(other)?;
        let m = self.modulus;
        Ok(ZVec::from_reduced(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| (a + b) % m)
                .collect(),
            m,
        ))
    }

    pub fn sub(&self, other: &ZVec) -> Result<ZVec> {
        self.check(other)?;
        let m = self.modulus;
        Ok(ZVec::from_reduced(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| (a + m - b) % m)
                .collect(),
            m,
        ))
    }

    pub fn scale(&self, c: u32) -> ZVec {
        let m = self.modulus;
        ZVec::from_reduced(self.coords.iter().map(|a| a * (c % m) % m).collect(), m)
    }

    /// The usual dot product.
    pub fn dot(&self, other: &ZVec) -> Result<ZMod> {
        self.check(other)?;
        let m = self.modulus as u64;
        let s = self
            .coords
            .iter()
            .zip(&other.coords)
            .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % m);
        Ok(ZMod {
            value: s as u32,
            modulus: self.modulus,
        })
    }

    /// Lexicographic index of this vector.
    pub fn index(&self) -> usize {
        self.coords
            .iter()
            .fold(0usize, |acc, &c| acc * self.modulus as usize + c as usize)
    }

    pub fn from_index(index: usize, n: usize, modulus: u32) -> ZVec {
        let mut coords = vec![0u32; n];
        let mut rest = index;
        for slot in coords.iter_mut().rev() {
            *slot = (rest % modulus as usize) as u32;
            rest /= modulus as usize;
        }
        ZVec { modulus, coords }
    }
}

/// The index space of `Z_p^n`: vector arithmetic on lexicographic indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSpace {
    p: u32,
    n: usize,
    size: usize,
    digits: Vec<u32>,
}

impl VectorSpace {
    pub fn new(p: u32, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        if n == 0 {
            return Err(Error::Invalid("dimension must be at least 1".into()));
        }
        let size = (p as usize)
            .checked_pow(n as u32)
            .filter(|&s| s <= 1 << 20)
            .ok_or_else(|| Error::Invalid(format!("Z_{p}^{n} is too large")))?;
        let mut digits = Vec::with_capacity(size * n);
        for idx in 0..size {
            digits.extend_from_slice(ZVec::from_index(idx, n, p).coords());
        }
        Ok(Self { p, n, size, digits })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `|V| = p^n`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coords(&self, idx: usize) -> &[u32] {
        &self.digits[idx * self.n..(idx + 1) * self.n]
    }

    pub fn vector(&self, idx: usize) -> ZVec {
        ZVec::from_reduced(self.coords(idx).to_vec(), self.p)
    }

    pub fn index_of(&self, coords: &[u32]) -> usize {
        coords
            .iter()
            .fold(0usize, |acc, &c| acc * self.p as usize + c as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let p = self.p;
        self.coords(a)
            .iter()
            .zip(self.coords(b))
            .fold(0usize, |acc, (x, y)| {
                acc * p as usize + ((x + y) % p) as usize
            })
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        let p = self.p;
        self.coords(a)
            .iter()
            .zip(self.coords(b))
            .fold(0usize, |acc, (x, y)| {
                acc * p as usize + ((x + p - y) % p) as usize
            })
    }

    pub fn dot(&self, a: usize, b: usize) -> u32 {
        let p = self.p;
        self.coords(a)
            .iter()
            .zip(self.coords(b))
            .fold(0u32, |acc, (x, y)| (acc + x * y) % p)
    }
}
