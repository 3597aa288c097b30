use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GaloisField, GfElement, Matrix};
use crate::error::{Error, Result};

pub const DEFAULT_SEARCH_SEED: u64 = 0x5e1f_d0a1;
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

/// A basis `b_1..b_n` of F_{2^n} over F_2 with `Tr(b_i b_j) = δ_ij`, so
/// that `Tr(xy)` is the coordinate dot product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfDualBasis {
    basis: Vec<GfElement>,
}

impl SelfDualBasis {
    /// Wraps a candidate basis after recomputing its trace Gram matrix.
    pub fn new(field: &GaloisField, basis: Vec<GfElement>) -> Result<Self> {
        if field.characteristic() != 2 {
            return Err(Error::OddCharacteristic(field.characteristic()));
        }
        if basis.len() != field.degree() {
            return Err(Error::DimensionMismatch {
                expected: field.degree(),
                found: basis.len(),
            });
        }
        if trace_gram(field, &basis) != Matrix::identity(basis.len(), 2) {
            return Err(Error::Invalid(
                "trace Gram matrix is not the identity".into(),
            ));
        }
        Ok(Self { basis })
    }

    pub fn elements(&self) -> &[GfElement] {
        &self.basis
    }

    pub fn degree(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `x`: the i-th one is `Tr(x b_i)`.
    pub fn coordinates(&self, field: &GaloisField, x: &GfElement) -> Vec<u32> {
        self.basis
            .iter()
            .map(|b| field.trace(&field.mul(x, b)).value())
            .collect()
    }

    pub fn element(&self, field: &GaloisField, coords: &[u32]) -> GfElement {
        coords
            .iter()
            .zip(&self.basis)
            .filter(|(&c, _)| c % 2 == 1)
            .fold(field.zero(), |acc, (_, b)| field.add(&acc, b))
    }
}

/// `G[i][j] = Tr(b_i b_j)`.
pub fn trace_gram(field: &GaloisField, basis: &[GfElement]) -> Matrix {
    Matrix::from_fn(basis.len(), field.characteristic(), |i, j| {
        field.trace(&field.mul(&basis[i], &basis[j])).value()
    })
}

pub fn find_self_dual_basis(field: &GaloisField) -> Result<SelfDualBasis> {
    find_self_dual_basis_with(field, DEFAULT_SEARCH_SEED, DEFAULT_SEARCH_BUDGET)
}

/// Seeded randomized orthonormalisation under the trace form.
///
/// Draws candidates and keeps one whenever it is orthogonal to everything
/// kept so far and has `Tr(x^2) = 1`. Restarts when the orthogonal
/// complement of the partial basis has no such vector left. Every drawn
/// candidate counts against `budget`.
pub fn find_self_dual_basis_with(
    field: &GaloisField,
    seed: u64,
    budget: u64,
) -> Result<SelfDualBasis> {
    if field.characteristic() != 2 {
        return Err(Error::OddCharacteristic(field.characteristic()));
    }
    let n = field.degree();
    if n == 1 {
        return SelfDualBasis::new(field, vec![field.one()]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stall_limit = 8 * field.order() as u64;
    let mut drawn = 0u64;
    let mut chosen: Vec<GfElement> = Vec::with_capacity(n);
    let mut stalled = 0u64;
    while chosen.len() < n {
        if drawn >= budget {
            return Err(Error::BudgetExhausted { budget });
        }
        drawn += 1;
        let x = field.random(&mut rng);
        let fits = !x.is_zero()
            && field.trace(&field.mul(&x, &x)).value() == 1
            && chosen
                .iter()
                .all(|b| field.trace(&field.mul(&x, b)).value() == 0);
        if fits {
            chosen.push(x);
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= stall_limit {
                chosen.clear();
                stalled = 0;
            }
        }
    }
    SelfDualBasis::new(field, chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmod::FieldTable;

    #[test]
    fn degree_one_is_unit() {
        let f = FieldTable::builtin().field(2, 1).unwrap();
        let b = find_self_dual_basis(&f).unwrap();
        assert_eq!(b.elements(), &[f.one()]);
    }

    #[test]
    fn omega_pair_is_self_dual_in_f4() {
        // F_4 = F_2[w]/(w^2 + w + 1)
        let f = FieldTable::builtin().field(2, 2).unwrap();
        let w = f.generator();
        let w2 = f.mul(&w, &w);
        let gram = trace_gram(&f, &[w.clone(), w2.clone()]);
        assert_eq!(gram, Matrix::identity(2, 2));
        assert!(SelfDualBasis::new(&f, vec![w, w2]).is_ok());
        // the polynomial basis {1, w} is not: Tr(1) = 0
        assert!(SelfDualBasis::new(&f, vec![f.one(), f.generator()]).is_err());
    }

    #[test]
    fn search_output_has_identity_gram() {
        let table = FieldTable::builtin();
        for n in 1..=8 {
            let f = table.field(2, n).unwrap();
            let b = find_self_dual_basis(&f).unwrap();
            assert_eq!(
                trace_gram(&f, b.elements()),
                Matrix::identity(n, 2),
                "n = {n}"
            );
        }
    }

    #[test]
    fn search_is_deterministic() {
        let f = FieldTable::builtin().field(2, 5).unwrap();
        assert_eq!(
            find_self_dual_basis_with(&f, 3, 10_000).unwrap(),
            find_self_dual_basis_with(&f, 3, 10_000).unwrap()
        );
    }

    #[test]
    fn tiny_budget_is_reported() {
        let f = FieldTable::builtin().field(2, 6).unwrap();
        assert_eq!(
            find_self_dual_basis_with(&f, 1, 2),
            Err(Error::BudgetExhausted { budget: 2 })
        );
    }

    #[test]
    fn coordinates_round_trip() {
        let f = FieldTable::builtin().field(2, 4).unwrap();
        let b = find_self_dual_basis(&f).unwrap();
        for x in f.elements() {
            let c = b.coordinates(&f, &x);
            assert_eq!(b.element(&f, &c), x);
        }
    }

    #[test]
    fn odd_characteristic_rejected() {
        let f = FieldTable::builtin().field(3, 2).unwrap();
        assert_eq!(find_self_dual_basis(&f), Err(Error::OddCharacteristic(3)));
    }
}
