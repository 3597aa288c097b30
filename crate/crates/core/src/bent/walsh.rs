use super::FunctionTable;
use crate::cyclotomic::CyclotomicInt;
use crate::error::{Error, Result};

/// Character-sum bent test for odd `p`: `f` is bent iff
/// `|Σ_v ζ^(f(v) + u·v)|^2 = p^n` for every `u`, computed exactly in `Z[ζ_p]`.
///
/// Independent of the histogram test; used to cross-check it.
pub fn walsh_bent_oracle(f: &FunctionTable) -> Result<bool> {
    let p = f.p();
    if p == 2 {
        return Err(Error::EvenCharacteristic(p));
    }
    if f.codomain() != p {
        return Err(Error::ModulusMismatch {
            left: p,
            right: f.codomain(),
        });
    }
    let space = f.space();
    let target = space.size() as i64;
    for u in 0..space.size() {
        let mut counts = vec![0i64; p as usize];
        for v in 0..space.size() {
            counts[((f.value(v) + space.dot(u, v)) % p) as usize] += 1;
        }
        let sum = CyclotomicInt::from_exponent_counts(p, &counts)?;
        if !sum.norm_sq().equals_integer(target) {
            return Ok(false);
        }
    }
    Ok(true)
}
