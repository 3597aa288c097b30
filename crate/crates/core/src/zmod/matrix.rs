use std::fmt;

use serde::{Deserialize, Serialize};

use super::{check_modulus, inverse_mod, is_prime, reduce, ZVec};
use crate::error::{Error, Result};

/// A square matrix over `Z_p` or `Z_4`, row major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    modulus: u32,
    n: usize,
    entries: Vec<u32>,
}

impl Matrix {
    pub fn new(rows: &[Vec<i64>], modulus: u32) -> Result<Self> {
        check_modulus(modulus)?;
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| reduce(x, modulus)));
        }
        Ok(Self {
            modulus,
            n,
            entries,
        })
    }

    pub fn zero(n: usize, modulus: u32) -> Self {
        Self {
            modulus,
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn identity(n: usize, modulus: u32) -> Self {
        Self::scalar(n, modulus, 1)
    }

    pub fn scalar(n: usize, modulus: u32, c: u32) -> Self {
        let mut m = Self::zero(n, modulus);
        for i in 0..n {
            m.entries[i * n + i] = c % modulus;
        }
        m
    }

    pub(crate) fn from_fn(n: usize, modulus: u32, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j) % modulus);
            }
        }
        Self {
            modulus,
            n,
            entries,
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries
            .chunks(self.n.max(1))
            .map(<[u32]>::to_vec)
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    fn first_asymmetry(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != self.get(j, i))
    }

    fn check(&self, other: &Matrix) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check(other)?;
        let m = self.modulus;
        Ok(Matrix {
            modulus: m,
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a + b) % m)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check(other)?;
        let m = self.modulus;
        Ok(Matrix {
            modulus: m,
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a + m - b) % m)
                .collect(),
        })
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let m = self.modulus;
        Matrix {
            modulus: m,
            n: self.n,
            entries: self.entries.iter().map(|a| a * (c % m) % m).collect(),
        }
    }

    /// `x M y^T`.
    pub fn bilinear(&self, x: &ZVec, y: &ZVec) -> Result<u32> {
        if x.modulus() != self.modulus || y.modulus() != self.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: if x.modulus() != self.modulus {
                    x.modulus()
                } else {
                    y.modulus()
                },
            });
        }
        if x.len() != self.n || y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: if x.len() != self.n { x.len() } else { y.len() },
            });
        }
        Ok(self.bilinear_raw(x.coords(), y.coords()))
    }

    pub(crate) fn bilinear_raw(&self, x: &[u32], y: &[u32]) -> u32 {
        let m = self.modulus as u64;
        let mut acc = 0u64;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let row = &self.entries[i * self.n..(i + 1) * self.n];
            let inner = row
                .iter()
                .zip(y)
                .fold(0u64, |s, (&a, &b)| s + a as u64 * b as u64);
            acc = (acc + xi as u64 * (inner % m)) % m;
        }
        acc as u32
    }

    /// Rank over the prime field `Z_p`.
    pub fn rank(&self) -> Result<usize> {
        let p = self.modulus;
        if !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        let n = self.n;
        let mut a = self.entries.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| a[r * n + col] != 0) else {
                continue;
            };
            for k in 0..n {
                a.swap(rank * n + k, pivot * n + k);
            }
            let inv = inverse_mod(a[rank * n + col], p).expect("nonzero pivot");
            for k in 0..n {
                a[rank * n + k] = a[rank * n + k] * inv % p;
            }
            for r in 0..n {
                let factor = a[r * n + col];
                if r == rank || factor == 0 {
                    continue;
                }
                for k in 0..n {
                    a[r * n + k] = (a[r * n + k] + p * p - factor * a[rank * n + k] % p) % p;
                }
            }
            rank += 1;
        }
        Ok(rank)
    }

    /// Full rank over `Z_p`. Modulus 4 is rejected: reduce mod 2 first.
    pub fn is_nonsingular(&self) -> Result<bool> {
        Ok(self.rank()? == self.n)
    }

    /// Entrywise reduction of a `Z_4` matrix mod 2.
    pub fn reduce_mod2(&self) -> Result<Matrix> {
        if self.modulus != 4 {
            return Err(Error::ModulusMismatch {
                left: 4,
                right: self.modulus,
            });
        }
        Ok(Matrix {
            modulus: 2,
            n: self.n,
            entries: self.entries.iter().map(|a| a % 2).collect(),
        })
    }

    /// Reads a `Z_2` matrix as a 0/1 matrix over `Z_4`.
    pub fn lift(&self) -> Result<Matrix> {
        if self.modulus != 2 {
            return Err(Error::ModulusMismatch {
                left: 2,
                right: self.modulus,
            });
        }
        Ok(Matrix {
            modulus: 4,
            n: self.n,
            entries: self.entries.clone(),
        })
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{row:?}")?;
        }
        write!(f, "] mod {}", self.modulus)
    }
}

/// A symmetric square matrix over `Z_p` or `Z_4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    pub fn new(rows: &[Vec<i64>], modulus: u32) -> Result<Self> {
        Self::try_from(Matrix::new(rows, modulus)?)
    }

    pub fn zero(n: usize, modulus: u32) -> Self {
        SymMatrix(Matrix::zero(n, modulus))
    }

    pub fn identity(n: usize, modulus: u32) -> Self {
        SymMatrix(Matrix::identity(n, modulus))
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn modulus(&self) -> u32 {
        self.0.modulus
    }

    pub fn dim(&self) -> usize {
        self.0.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.0.get(i, j)
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.0.add(&other.0).map(SymMatrix)
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.0.sub(&other.0).map(SymMatrix)
    }

    pub fn scale(&self, c: u32) -> SymMatrix {
        SymMatrix(self.0.scale(c))
    }

    pub fn is_nonsingular(&self) -> Result<bool> {
        self.0.is_nonsingular()
    }

    pub fn reduce_mod2(&self) -> Result<SymMatrix> {
        self.0.reduce_mod2().map(SymMatrix)
    }

    pub fn lift(&self) -> Result<SymMatrix> {
        self.0.lift().map(SymMatrix)
    }
}

impl TryFrom<Matrix> for SymMatrix {
    type Error = Error;

    fn try_from(m: Matrix) -> Result<Self> {
        match m.first_asymmetry() {
            Some((row, col)) => Err(Error::NotSymmetric { row, col }),
            None => Ok(SymMatrix(m)),
        }
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Row lists as they appear in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixRows(pub Vec<Vec<i64>>);

impl From<&Matrix> for MatrixRows {
    fn from(m: &Matrix) -> Self {
        MatrixRows(
            m.rows()
                .into_iter()
                .map(|r| r.into_iter().map(i64::from).collect())
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Leibniz expansion mod p, independent of the elimination path.
    fn det_mod(m: &Matrix) -> u32 {
        let n = m.dim();
        let p = m.modulus() as i64;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0i64;
        permute(&mut perm, 0, &mut |perm| {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if perm[i] > perm[j] {
                        inversions += 1;
                    }
                }
            }
            let mut term = if inversions % 2 == 0 { 1 } else { -1 };
            for (i, &j) in perm.iter().enumerate() {
                term = term * m.get(i, j) as i64 % p;
            }
            total = (total + term).rem_euclid(p);
        });
        total as u32
    }

    fn permute(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if k == perm.len() {
            visit(perm);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            permute(perm, k + 1, visit);
            perm.swap(k, i);
        }
    }

    fn all_matrices(n: usize, p: u32) -> impl Iterator<Item = Matrix> {
        let count = (p as usize).pow((n * n) as u32);
        (0..count).map(move |idx| {
            let coords = ZVec::from_index(idx, n * n, p);
            Matrix::from_fn(n, p, |i, j| coords.coords()[i * n + j])
        })
    }

    #[test]
    fn small_nonsingularity_cases() {
        assert!(Matrix::identity(3, 2).is_nonsingular().unwrap());
        assert!(!Matrix::zero(3, 2).is_nonsingular().unwrap());
        let ones = Matrix::new(&[vec![1, 1], vec![1, 1]], 2).unwrap();
        assert!(!ones.is_nonsingular().unwrap());
        assert_eq!(ones.rank().unwrap(), 1);
    }

    #[test]
    fn modulus_four_rejected_for_rank() {
        let m = Matrix::identity(2, 4);
        assert_eq!(m.is_nonsingular(), Err(Error::NonPrimeModulus(4)));
        assert!(m.reduce_mod2().unwrap().is_nonsingular().unwrap());
    }

    #[test]
    fn nonsingular_agrees_with_determinant_exhaustive() {
        for p in [2, 3] {
            for n in [2, 3] {
                for m in all_matrices(n, p) {
                    assert_eq!(
                        m.is_nonsingular().unwrap(),
                        det_mod(&m) != 0,
                        "disagreement on {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn reduce_mod2_examples() {
        let m = SymMatrix::new(&[vec![3]], 4).unwrap();
        assert_eq!(
            m.reduce_mod2().unwrap(),
            SymMatrix::new(&[vec![1]], 2).unwrap()
        );
        let m = SymMatrix::new(&[vec![2, 1], vec![1, 2]], 4).unwrap();
        assert_eq!(
            m.reduce_mod2().unwrap(),
            SymMatrix::new(&[vec![0, 1], vec![1, 0]], 2).unwrap()
        );
        assert!(SymMatrix::identity(2, 3).reduce_mod2().is_err());
    }

    #[test]
    fn lift_then_reduce_is_identity() {
        for m in all_matrices(2, 2).filter(Matrix::is_symmetric) {
            let s = SymMatrix::try_from(m).unwrap();
            assert_eq!(s.lift().unwrap().reduce_mod2().unwrap(), s);
        }
    }

    #[test]
    fn symmetry_is_enforced() {
        let err = SymMatrix::new(&[vec![0, 1], vec![0, 0]], 3).unwrap_err();
        assert_eq!(err, Error::NotSymmetric { row: 0, col: 1 });
        assert!(Matrix::new(&[vec![1, 2], vec![3]], 3).is_err());
    }

    #[test]
    fn bilinear_matches_hand_expansion() {
        let m = Matrix::new(&[vec![1, 2], vec![2, 3]], 5).unwrap();
        let x = ZVec::new(&[1, 2], 5).unwrap();
        let y = ZVec::new(&[3, 4], 5).unwrap();
        // x M = (1 + 4, 2 + 6) = (5, 8) -> (0, 3); (0,3).(3,4) = 12 -> 2
        assert_eq!(m.bilinear(&x, &y).unwrap(), 2);
    }
}
