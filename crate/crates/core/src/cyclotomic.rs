//! Exact arithmetic in `Z[ζ_p]` (odd `p`) and `Z[i]`.
//!
//! A [`CyclotomicInt`] stores `Σ c_k ζ^k` over the redundant basis
//! `1, ζ, ..., ζ^(p-1)`. Since `1 + ζ + ... + ζ^(p-1) = 0`, subtracting the
//! last coefficient from every slot gives a unique form with `c_(p-1) = 0`;
//! all values are kept in that form, so derived equality is exact equality.
//! Conjugation is the index permutation `k -> -k mod p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::zmod::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    p: u32,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInt {
    /// Builds `Σ coeffs[k] ζ^k` and canonicalizes. `coeffs` must have length `p`.
    pub fn new(p: u32, coeffs: Vec<BigInt>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic(p));
        }
        if coeffs.len() != p as usize {
            return Err(Error::DimensionMismatch {
                expected: p as usize,
                found: coeffs.len(),
            });
        }
        Ok(Self::canonical(p, coeffs))
    }

    fn canonical(p: u32, mut coeffs: Vec<BigInt>) -> Self {
        let last = coeffs[p as usize - 1].clone();
        if !last.is_zero() {
            for c in coeffs.iter_mut() {
                *c -= &last;
            }
        }
        Self { p, coeffs }
    }

    /// `Σ_k counts[k] ζ^k`: the value of a sum of roots of unity given the
    /// multiplicity of each exponent.
    pub fn from_exponent_counts(p: u32, counts: &[i64]) -> Result<Self> {
        Self::new(p, counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_integer(p: u32, c: impl Into<BigInt>) -> Result<Self> {
        let mut coeffs = vec![BigInt::zero(); p as usize];
        coeffs[0] = c.into();
        Self::new(p, coeffs)
    }

    pub fn zero(p: u32) -> Result<Self> {
        Self::from_integer(p, 0)
    }

    pub fn one(p: u32) -> Result<Self> {
        Self::from_integer(p, 1)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Canonical coefficients; the last one is always zero.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `Some(c)` when the value is the rational integer `c`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    pub fn equals_integer(&self, c: i64) -> bool {
        self.as_integer().is_some_and(|v| *v == BigInt::from(c))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: other.p,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self::canonical(self.p, coeffs))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self::canonical(self.p, coeffs))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.p as usize;
        let mut coeffs = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[(i + j) % p] += a * b;
                }
            }
        }
        Ok(Self::canonical(self.p, coeffs))
    }

    /// Complex conjugation, `ζ -> ζ^(p-1)`.
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let mut coeffs = vec![BigInt::zero(); p];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(p - k) % p] = c.clone();
        }
        Self::canonical(self.p, coeffs)
    }

    /// `a * conj(a)`, which is `|a|^2` under any embedding.
    pub fn norm_sq(&self) -> Self {
        self.checked_mul(&self.conj()).expect("same p")
    }

    /// Numerical value at `ζ = exp(2πi/p)`. Test and export use only.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let p = self.p as f64;
        self.coeffs
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (k, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                let angle = 2.0 * std::f64::consts::PI * k as f64 / p;
                (re + c * angle.cos(), im + c * angle.sin())
            })
    }
}

/// `ζ^(k mod p)` for an odd prime `p`.
pub fn root_power(p: u32, k: i64) -> Result<CyclotomicInt> {
    let mut counts = vec![0i64; p as usize];
    counts[k.rem_euclid(p as i64) as usize] = 1;
    CyclotomicInt::from_exponent_counts(p, &counts)
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let magnitude = c.abs();
            let sign = match (first, c.is_negative()) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let coeff = if k > 0 && magnitude.is_one() {
                String::new()
            } else {
                magnitude.to_string()
            };
            match k {
                0 => write!(f, "{sign}{magnitude}")?,
                1 => write!(f, "{sign}{coeff}ζ")?,
                k => write!(f, "{sign}{coeff}ζ^{k}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// Operator impls panic on mismatched p; use the checked_* forms when the
// operands come from untrusted input.
impl Add for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn add(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self.checked_add(rhs)
            .expect("mismatched p in CyclotomicInt addition")
    }
}

impl Sub for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn sub(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self.checked_sub(rhs)
            .expect("mismatched p in CyclotomicInt subtraction")
    }
}

impl Mul for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn mul(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self.checked_mul(rhs)
            .expect("mismatched p in CyclotomicInt product")
    }
}

impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        CyclotomicInt::canonical(self.p, self.coeffs.iter().map(|c| -c).collect())
    }
}

/// An element `re + im·i` of `Z[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        Self {
            re: re.into(),
            im: im.into(),
        }
    }

    /// `i^k`.
    pub fn i_power(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::new(1, 0),
            1 => Self::new(0, 1),
            2 => Self::new(-1, 0),
            _ => Self::new(0, -1),
        }
    }

    /// `Σ_k counts[k] i^k`.
    pub fn from_exponent_counts(counts: &[i64; 4]) -> Self {
        Self::new(counts[0] - counts[2], counts[1] - counts[3])
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm_sq(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        self.im.is_zero().then_some(&self.re)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, -&self.im)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl Add for &GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

/// An exact inner product value: `Z[ζ_p]` for odd `p`, `Z[i]` for `p = 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Cyclotomic(CyclotomicInt),
    Gaussian(GaussianInt),
}

impl ExactScalar {
    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Cyclotomic(c) => c.is_zero(),
            ExactScalar::Gaussian(g) => g.is_zero(),
        }
    }

    /// `|x|^2` in the same ring.
    pub fn norm_sq(&self) -> ExactScalar {
        match self {
            ExactScalar::Cyclotomic(c) => ExactScalar::Cyclotomic(c.norm_sq()),
            ExactScalar::Gaussian(g) => ExactScalar::Gaussian(GaussianInt {
                re: g.norm_sq(),
                im: BigInt::zero(),
            }),
        }
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            ExactScalar::Cyclotomic(c) => c.as_integer(),
            ExactScalar::Gaussian(g) => g.as_integer(),
        }
    }

    pub fn equals_integer(&self, c: u64) -> bool {
        self.as_integer().is_some_and(|v| *v == BigInt::from(c))
    }

    pub fn is_one(&self) -> bool {
        self.as_integer().is_some_and(One::is_one)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        match self {
            ExactScalar::Cyclotomic(c) => c.to_f64_pair(),
            ExactScalar::Gaussian(g) => g.to_f64_pair(),
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Cyclotomic(c) => c.fmt(f),
            ExactScalar::Gaussian(g) => g.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyc(p: u32, coeffs: &[i64]) -> CyclotomicInt {
        CyclotomicInt::new(p, coeffs.iter().map(|&c| BigInt::from(c)).collect()).unwrap()
    }

    #[test]
    fn root_powers() {
        assert!(root_power(3, 0).unwrap().equals_integer(1));
        assert!(root_power(3, 3).unwrap().equals_integer(1));
        assert_eq!(root_power(5, -1).unwrap(), root_power(5, 4).unwrap());
        for p in [3, 5, 7] {
            let sum = (0..p as i64)
                .map(|k| root_power(p, k).unwrap())
                .fold(CyclotomicInt::zero(p).unwrap(), |acc, x| &acc + &x);
            assert!(sum.is_zero(), "p = {p}");
        }
    }

    #[test]
    fn products_reduce() {
        let z = root_power(3, 1).unwrap();
        let z2 = root_power(3, 2).unwrap();
        assert!((&z * &z2).equals_integer(1));

        let all_ones = cyc(3, &[1, 1, 1]);
        assert!(all_ones.is_zero());
        assert!((&all_ones * &cyc(3, &[4, -2, 7])).is_zero());

        let one = CyclotomicInt::one(3).unwrap();
        let lhs = &(&z - &one) * &(&z2 - &one);
        assert!(lhs.equals_integer(3));
    }

    #[test]
    fn mismatched_p_is_an_error() {
        let a = CyclotomicInt::one(3).unwrap();
        let b = CyclotomicInt::one(5).unwrap();
        assert_eq!(
            a.checked_mul(&b),
            Err(Error::ModulusMismatch { left: 3, right: 5 })
        );
        assert!(CyclotomicInt::one(2).is_err());
        assert!(CyclotomicInt::new(3, vec![BigInt::one()]).is_err());
    }

    #[test]
    fn conjugation() {
        assert!(CyclotomicInt::one(7).unwrap().conj().equals_integer(1));
        assert_eq!(root_power(3, 1).unwrap().conj(), root_power(3, 2).unwrap());
    }

    #[test]
    fn norms() {
        for p in [3, 5, 7] {
            assert!(root_power(p, 1).unwrap().norm_sq().equals_integer(1));
        }
        // (1 + ζ)(1 + ζ^2) = 2 + ζ + ζ^2 = 1
        assert!(cyc(3, &[1, 1, 0]).norm_sq().equals_integer(1));
        assert_eq!(GaussianInt::new(3, 4).norm_sq(), BigInt::from(25));
    }

    #[test]
    fn gaussian_basics() {
        let i = GaussianInt::i_power(1);
        assert_eq!(&i * &i, GaussianInt::new(-1, 0));
        assert_eq!(GaussianInt::i_power(-1), i.conj());
        assert_eq!(
            GaussianInt::from_exponent_counts(&[2, 1, 2, 1]),
            GaussianInt::new(0, 0)
        );
    }

    fn arb_cyc(p: u32) -> impl Strategy<Value = CyclotomicInt> {
        prop::collection::vec(-1000i64..=1000, p as usize).prop_map(move |c| cyc(p, &c))
    }

    fn arb_triple() -> impl Strategy<Value = (CyclotomicInt, CyclotomicInt, CyclotomicInt)> {
        prop_oneof![Just(3u32), Just(5), Just(7)]
            .prop_flat_map(|p| (arb_cyc(p), arb_cyc(p), arb_cyc(p)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn canonical_form_is_idempotent((a, _, _) in arb_triple()) {
            let again = CyclotomicInt::new(a.p(), a.coeffs().to_vec()).unwrap();
            prop_assert_eq!(&again, &a);
            prop_assert!(a.coeffs()[a.p() as usize - 1].is_zero());
        }

        #[test]
        fn ring_axioms((a, b, c) in arb_triple()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(&a + &(-&b), &a - &b);
        }

        #[test]
        fn conj_is_multiplicative((a, b, _) in arb_triple()) {
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!(a.conj().conj(), a.clone());
        }

        #[test]
        fn norm_is_multiplicative((a, b, _) in arb_triple()) {
            prop_assert_eq!((&a * &b).norm_sq(), &a.norm_sq() * &b.norm_sq());
        }

        #[test]
        fn exact_value_matches_float_evaluation((a, b, _) in arb_triple()) {
            use num_complex::Complex64;
            let z = |x: &CyclotomicInt| {
                let (re, im) = x.to_f64_pair();
                Complex64::new(re, im)
            };
            // reference evaluation of the raw product, independent of reduction
            let zeta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / a.p() as f64);
            let eval = |x: &CyclotomicInt| {
                x.coeffs().iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (k, c)| {
                    acc + zeta.powu(k as u32) * c.to_f64().unwrap()
                })
            };
            let product = &a * &b;
            let expected = eval(&a) * eval(&b);
            let got = z(&product);
            let scale = expected.norm().max(1.0);
            prop_assert!((got - expected).norm() / scale < 1e-9, "{} vs {}", got, expected);
        }

        #[test]
        fn gaussian_norm_is_multiplicative(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000, d in -1000i64..1000) {
            let x = GaussianInt::new(a, b);
            let y = GaussianInt::new(c, d);
            prop_assert_eq!((&x * &y).norm_sq(), x.norm_sq() * y.norm_sq());
        }
    }
}
