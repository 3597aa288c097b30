use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{inverse_mod, is_prime, ZMod};
use crate::error::{Error, Result};

/// An element of GF(p^n) in polynomial coordinates: `coeffs[i]` is the
/// coefficient of `x^i` modulo the field's modulus polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GfElement {
    coeffs: Vec<u32>,
}

impl GfElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".into(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// A field axiom that failed on a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    AdditiveInverse {
        element: GfElement,
    },
    Commutativity {
        a: GfElement,
        b: GfElement,
    },
    Associativity {
        a: GfElement,
        b: GfElement,
        c: GfElement,
    },
    Distributivity {
        a: GfElement,
        b: GfElement,
        c: GfElement,
    },
    /// `a^(p^n - 1) != 1` for a nonzero `a`: the multiplicative group does
    /// not have order `p^n - 1`, so the modulus is reducible.
    MultiplicativeGroupOrder {
        element: GfElement,
    },
}

impl AxiomViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            AxiomViolation::AdditiveInverse { .. } => "additive inverses",
            AxiomViolation::Commutativity { .. } => "commutativity of multiplication",
            AxiomViolation::Associativity { .. } => "associativity of multiplication",
            AxiomViolation::Distributivity { .. } => "distributivity",
            AxiomViolation::MultiplicativeGroupOrder { .. } => "multiplicative group order p^n - 1",
        }
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::AdditiveInverse { element }
            | AxiomViolation::MultiplicativeGroupOrder { element } => {
                write!(f, "{} fails at {element}", self.axiom())
            }
            AxiomViolation::Commutativity { a, b } => {
                write!(f, "{} fails at ({a}, {b})", self.axiom())
            }
            AxiomViolation::Associativity { a, b, c }
            | AxiomViolation::Distributivity { a, b, c } => {
                write!(f, "{} fails at ({a}, {b}, {c})", self.axiom())
            }
        }
    }
}

/// GF(p^n) as `Z_p[x] / (f)` for a monic degree-`n` modulus `f`.
///
/// Construction only checks the shape of `f`; [`GaloisField::check_axioms`]
/// certifies that the quotient really is a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    p: u32,
    n: usize,
    /// Low to high, length `n + 1`, leading coefficient 1.
    modulus: Vec<u32>,
}

impl GaloisField {
    pub fn new(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        let n = modulus.len().saturating_sub(1);
        let invalid = |reason: &str| Error::InvalidFieldModulus {
            p,
            n,
            reason: reason.to_string(),
        };
        if n == 0 {
            return Err(invalid("modulus must have degree at least 1"));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(invalid("coefficients must lie in [0, p)"));
        }
        if modulus[n] != 1 {
            return Err(invalid("modulus must be monic"));
        }
        if (p as u64).pow(n as u32) > 1 << 20 {
            return Err(invalid("field too large"));
        }
        Ok(Self { p, n, modulus })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.n as u32)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> GfElement {
        GfElement {
            coeffs: vec![0; self.n],
        }
    }

    pub fn one(&self) -> GfElement {
        self.constant(1)
    }

    pub fn constant(&self, c: u32) -> GfElement {
        let mut coeffs = vec![0; self.n];
        coeffs[0] = c % self.p;
        GfElement { coeffs }
    }

    /// The class of `x`.
    pub fn generator(&self) -> GfElement {
        if self.n == 1 {
            // x = -f(0) when f is linear
            return self.constant((self.p - self.modulus[0]) % self.p);
        }
        let mut coeffs = vec![0; self.n];
        coeffs[1] = 1;
        GfElement { coeffs }
    }

    pub fn element(&self, coeffs: &[u32]) -> Result<GfElement> {
        if coeffs.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: coeffs.len(),
            });
        }
        Ok(GfElement {
            coeffs: coeffs.iter().map(|c| c % self.p).collect(),
        })
    }

    /// Element whose coefficient vector has the given lexicographic index.
    pub fn from_index(&self, index: usize) -> GfElement {
        let mut coeffs = vec![0; self.n];
        let mut rest = index;
        for slot in coeffs.iter_mut().rev() {
            *slot = (rest % self.p as usize) as u32;
            rest /= self.p as usize;
        }
        GfElement { coeffs }
    }

    pub fn index_of(&self, x: &GfElement) -> usize {
        x.coeffs
            .iter()
            .fold(0usize, |acc, &c| acc * self.p as usize + c as usize)
    }

    /// All elements in lexicographic coefficient order.
    pub fn elements(&self) -> impl Iterator<Item = GfElement> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn random(&self, rng: &mut impl Rng) -> GfElement {
        GfElement {
            coeffs: (0..self.n).map(|_| rng.gen_range(0..self.p)).collect(),
        }
    }

    pub fn add(&self, a: &GfElement, b: &GfElement) -> GfElement {
        GfElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        }
    }

    pub fn sub(&self, a: &GfElement, b: &GfElement) -> GfElement {
        GfElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + self.p - y) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &GfElement) -> GfElement {
        self.sub(&self.zero(), a)
    }

    pub fn scale(&self, c: u32, a: &GfElement) -> GfElement {
        GfElement {
            coeffs: a.coeffs.iter().map(|x| x * (c % self.p) % self.p).collect(),
        }
    }

    pub fn mul(&self, a: &GfElement, b: &GfElement) -> GfElement {
        let p = self.p;
        let n = self.n;
        let mut prod = vec![0u32; 2 * n - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // x^n = -(f_0 + f_1 x + ... + f_{n-1} x^{n-1})
        for k in (n..prod.len()).rev() {
            let top = prod[k];
            if top == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &f) in self.modulus[..n].iter().enumerate() {
                let slot = &mut prod[k - n + i];
                *slot = (*slot + p * p - top * f % p) % p;
            }
        }
        prod.truncate(n);
        GfElement { coeffs: prod }
    }

    pub fn pow(&self, a: &GfElement, mut e: u64) -> GfElement {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    pub fn inverse(&self, a: &GfElement) -> Option<GfElement> {
        if a.is_zero() {
            return None;
        }
        if self.n == 1 {
            return inverse_mod(a.coeffs[0], self.p).map(|c| self.constant(c));
        }
        Some(self.pow(a, self.order() as u64 - 2))
    }

    pub fn frobenius(&self, a: &GfElement) -> GfElement {
        self.pow(a, self.p as u64)
    }

    /// `x + x^p + ... + x^(p^(n-1))`, which lands in the prime subfield.
    pub fn trace(&self, x: &GfElement) -> ZMod {
        let mut acc = x.clone();
        let mut conj = x.clone();
        for _ in 1..self.n {
            conj = self.frobenius(&conj);
            acc = self.add(&acc, &conj);
        }
        ZMod::new(acc.coeffs[0] as i64, self.p).expect("prime characteristic")
    }

    /// Traces of the monomial basis `1, x, ..., x^(n-1)`; trace is linear,
    /// so `Tr(y) = sum_i y_i * t_i`.
    pub fn trace_functional(&self) -> Vec<u32> {
        (0..self.n)
            .map(|i| {
                let mut coeffs = vec![0; self.n];
                coeffs[i] = 1;
                self.trace(&GfElement { coeffs }).value()
            })
            .collect()
    }

    /// Checks the field axioms: exhaustively when `q^3` is at most
    /// `exhaustive_limit`, otherwise on `samples` seeded random triples.
    /// The multiplicative group order is always checked on every element.
    pub fn check_axioms(
        &self,
        exhaustive_limit: usize,
        samples: usize,
        seed: u64,
    ) -> std::result::Result<(), AxiomViolation> {
        let q = self.order();
        for a in self.elements() {
            if !self.add(&a, &self.neg(&a)).is_zero() {
                return Err(AxiomViolation::AdditiveInverse { element: a });
            }
            if !a.is_zero() && self.pow(&a, q as u64 - 1) != self.one() {
                return Err(AxiomViolation::MultiplicativeGroupOrder { element: a });
            }
        }
        let check = |a: &GfElement, b: &GfElement, c: &GfElement| {
            if self.mul(a, b) != self.mul(b, a) {
                return Err(AxiomViolation::Commutativity {
                    a: a.clone(),
                    b: b.clone(),
                });
            }
            if self.mul(&self.mul(a, b), c) != self.mul(a, &self.mul(b, c)) {
                return Err(AxiomViolation::Associativity {
                    a: a.clone(),
                    b: b.clone(),
                    c: c.clone(),
                });
            }
            if self.mul(a, &self.add(b, c)) != self.add(&self.mul(a, b), &self.mul(a, c)) {
                return Err(AxiomViolation::Distributivity {
                    a: a.clone(),
                    b: b.clone(),
                    c: c.clone(),
                });
            }
            Ok(())
        };
        if q.saturating_mul(q).saturating_mul(q) <= exhaustive_limit {
            let all: Vec<GfElement> = self.elements().collect();
            for a in &all {
                for b in &all {
                    for c in &all {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let a = self.random(&mut rng);
                let b = self.random(&mut rng);
                let c = self.random(&mut rng);
                check(&a, &b, &c)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.n)
    }
}
