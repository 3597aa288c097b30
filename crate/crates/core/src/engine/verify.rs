use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{inner_product, MubFamily, PhaseMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Worker threads; 0 means the global rayon pool.
    pub parallelism: usize,
    /// Stop at the first failure. Runs sequentially so that the counters
    /// still describe exactly the checks performed.
    pub fail_fast: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// Distinct rows of one basis are not orthogonal.
    Orthogonality,
    /// A row's squared norm is not the basis norm (`N`, or 1 for `M_∞`).
    Normalization,
    /// Rows of two bases are not unbiased.
    Unbiasedness,
    /// The family does not have `N + 1` bases.
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationFailure {
    pub kind: FailureKind,
    pub bases: (usize, usize),
    pub vectors: (usize, usize),
    /// Exact value found: the inner product for orthogonality and
    /// normalization checks, its squared modulus for unbiasedness.
    pub found: String,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub dimension: usize,
    pub complete: bool,
    pub bases_checked: usize,
    /// Distinct basis pairs checked for unbiasedness.
    pub pairs_checked: usize,
    pub inner_products_checked: u64,
    /// Unnormalized convention: rows of `M_∞` have norm 1, phase rows `N`,
    /// and the normalized bases are these divided by the square root of it.
    pub normalization: String,
    pub first_failure: Option<VerificationFailure>,
}

#[derive(Debug, Default)]
struct Tally {
    inner_products: u64,
    failure: Option<VerificationFailure>,
}

/// Orthonormality of one basis: `(x_a, x_b) = 0` for `a != b`, `(x_a, x_a)`
/// equal to the row norm.
fn check_basis(index: usize, m: &PhaseMatrix, fail_fast: bool) -> Result<Tally> {
    let mut tally = Tally::default();
    let norm = m.row_norm_sq();
    for a in 0..m.dim() {
        for b in a..m.dim() {
            let alpha = inner_product(m, a, m, b)?;
            tally.inner_products += 1;
            let good = if a == b {
                alpha.equals_integer(norm)
            } else {
                alpha.is_zero()
            };
            if !good && tally.failure.is_none() {
                tally.failure = Some(VerificationFailure {
                    kind: if a == b {
                        FailureKind::Normalization
                    } else {
                        FailureKind::Orthogonality
                    },
                    bases: (index, index),
                    vectors: (a, b),
                    found: alpha.to_string(),
                    expected: if a == b { norm.to_string() } else { "0".into() },
                });
                if fail_fast {
                    return Ok(tally);
                }
            }
        }
    }
    Ok(tally)
}

/// Unbiasedness of two bases: after normalization `|(u, v)|^2 = 1/N`, i.e.
/// `N |α|^2 = |x_a|^2 |y_b|^2` for the unnormalized rows.
fn check_pair(
    (i, x): (usize, &PhaseMatrix),
    (j, y): (usize, &PhaseMatrix),
    fail_fast: bool,
) -> Result<Tally> {
    let mut tally = Tally::default();
    let dim = x.dim() as u64;
    let target = x.row_norm_sq() * y.row_norm_sq();
    let expected = if target % dim == 0 {
        (target / dim).to_string()
    } else {
        format!("{target}/{dim}")
    };
    for a in 0..x.dim() {
        for b in 0..y.dim() {
            let alpha = inner_product(x, a, y, b)?;
            tally.inner_products += 1;
            let norm = alpha.norm_sq();
            let good = norm
                .as_integer()
                .is_some_and(|v| v * BigInt::from(dim) == BigInt::from(target));
            if !good && tally.failure.is_none() {
                tally.failure = Some(VerificationFailure {
                    kind: FailureKind::Unbiasedness,
                    bases: (i, j),
                    vectors: (a, b),
                    found: norm.to_string(),
                    expected: expected.clone(),
                });
                if fail_fast {
                    return Ok(tally);
                }
            }
        }
    }
    Ok(tally)
}

#[derive(Clone, Copy)]
enum Job {
    Basis(usize),
    Pair(usize, usize),
}

/// Checks that every basis is orthonormal and every pair of bases is
/// unbiased, whatever the number of bases.
pub fn verify_mub_family(family: &MubFamily, opts: VerifyOptions) -> Result<VerificationReport> {
    let bases = family.bases();
    let Some(first) = bases.first() else {
        return Err(Error::Invalid("empty family".into()));
    };
    let dim = first.dim();
    for b in bases {
        if b.dim() != dim || b.p() != first.p() {
            return Err(Error::EncodingMismatch("bases of different shapes".into()));
        }
    }
    let jobs: Vec<Job> = (0..bases.len())
        .map(Job::Basis)
        .chain((0..bases.len()).flat_map(|i| (i + 1..bases.len()).map(move |j| Job::Pair(i, j))))
        .collect();
    let run = |job: &Job| match *job {
        Job::Basis(i) => check_basis(i, &bases[i], opts.fail_fast),
        Job::Pair(i, j) => check_pair((i, &bases[i]), (j, &bases[j]), opts.fail_fast),
    };

    let mut bases_checked = 0;
    let mut pairs_checked = 0;
    let mut inner_products = 0u64;
    let mut first_failure = None;
    let mut absorb = |job: &Job, tally: Tally| {
        match job {
            Job::Basis(_) => bases_checked += 1,
            Job::Pair(..) => pairs_checked += 1,
        }
        inner_products += tally.inner_products;
        if first_failure.is_none() {
            first_failure = tally.failure;
        }
    };

    if opts.fail_fast {
        for job in &jobs {
            let tally = run(job)?;
            let failed = tally.failure.is_some();
            absorb(job, tally);
            if failed {
                break;
            }
        }
    } else {
        let tallies: Vec<Result<Tally>> = if opts.parallelism == 0 {
            jobs.par_iter().map(run).collect()
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.parallelism)
                .build()
                .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?
                .install(|| jobs.par_iter().map(run).collect())
        };
        // ordered reduction: the first failure is the first in job order
        for (job, tally) in jobs.iter().zip(tallies) {
            absorb(job, tally?);
        }
    }

    Ok(VerificationReport {
        ok: first_failure.is_none(),
        dimension: dim,
        complete: bases.len() == dim + 1,
        bases_checked,
        pairs_checked,
        inner_products_checked: inner_products,
        normalization: format!("standard rows unit, phase rows scaled by 1/sqrt({dim})"),
        first_failure,
    })
}

/// [`verify_mub_family`] plus the requirement of `N + 1` bases.
pub fn verify_complete_mub(family: &MubFamily, opts: VerifyOptions) -> Result<VerificationReport> {
    let mut report = verify_mub_family(family, opts)?;
    if !report.complete {
        report.ok = false;
        if report.first_failure.is_none() {
            report.first_failure = Some(VerificationFailure {
                kind: FailureKind::Incomplete,
                bases: (0, 0),
                vectors: (0, 0),
                found: family.len().to_string(),
                expected: (report.dimension + 1).to_string(),
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bent::FunctionTable;
    use crate::engine::{build_family, build_standard_basis};

    fn z3_family() -> MubFamily {
        let t = |v: &[i64]| FunctionTable::new(3, 1, 3, v.to_vec()).unwrap();
        build_family(&[t(&[0, 0, 0]), t(&[0, 1, 1]), t(&[0, 2, 2])]).unwrap()
    }

    #[test]
    fn z3_family_is_complete() {
        let report = verify_complete_mub(&z3_family(), VerifyOptions::default()).unwrap();
        assert!(report.ok, "{report:?}");
        assert_eq!(report.bases_checked, 4);
        assert_eq!(report.pairs_checked, 6);
        // 4 * (3 * 4 / 2) self products + 6 * 9 cross products
        assert_eq!(report.inner_products_checked, 24 + 54);
    }

    #[test]
    fn mutated_entry_is_located() {
        let mut fam = z3_family();
        let bumped = fam.bases()[2].with_bumped_entry(1, 2);
        fam.replace_basis(2, bumped).unwrap();
        let report = verify_complete_mub(&fam, VerifyOptions::default()).unwrap();
        assert!(!report.ok);
        let f = report.first_failure.unwrap();
        assert_eq!(f.bases.0.max(f.bases.1), 2);
    }

    #[test]
    fn fail_fast_counts_only_performed_checks() {
        let mut fam = z3_family();
        let bumped = fam.bases()[1].with_bumped_entry(0, 0);
        fam.replace_basis(1, bumped).unwrap();
        let full = verify_complete_mub(&fam, VerifyOptions::default()).unwrap();
        let fast = verify_complete_mub(
            &fam,
            VerifyOptions {
                parallelism: 1,
                fail_fast: true,
            },
        )
        .unwrap();
        assert!(!fast.ok);
        assert_eq!(fast.first_failure, full.first_failure);
        assert!(fast.inner_products_checked < full.inner_products_checked);
        assert_eq!(fast.bases_checked, 2);
    }

    #[test]
    fn incomplete_family_is_flagged() {
        let fam = MubFamily::from_bases(vec![build_standard_basis(3, 1).unwrap()], vec![]).unwrap();
        let partial = verify_mub_family(&fam, VerifyOptions::default()).unwrap();
        assert!(partial.ok);
        let complete = verify_complete_mub(&fam, VerifyOptions::default()).unwrap();
        assert!(!complete.ok);
        assert_eq!(
            complete.first_failure.unwrap().kind,
            FailureKind::Incomplete
        );
    }

    #[test]
    fn two_standard_bases_are_not_unbiased() {
        let e = build_standard_basis(2, 1).unwrap();
        let fam = MubFamily::from_bases(vec![e.clone(), e], vec![]).unwrap();
        let r = verify_mub_family(&fam, VerifyOptions::default()).unwrap();
        assert!(!r.ok);
        assert_eq!(r.first_failure.unwrap().expected, "1/2");
    }

    #[test]
    fn parallelism_does_not_change_reports() {
        let fam = z3_family();
        let one = verify_complete_mub(
            &fam,
            VerifyOptions {
                parallelism: 1,
                fail_fast: false,
            },
        )
        .unwrap();
        let four = verify_complete_mub(
            &fam,
            VerifyOptions {
                parallelism: 4,
                fail_fast: false,
            },
        )
        .unwrap();
        assert_eq!(one, four);
    }
}
