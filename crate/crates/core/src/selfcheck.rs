//! The invariant suite behind `mubforge selfcheck`.
//!
//! Every check is exact and sized to run in seconds. The report holds no
//! timings, so it is byte-identical across runs and worker counts.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bent::{
    is_bent_odd, is_bent_z4, search_mubent, verify_mubent, walsh_bent_oracle, FunctionTable,
    SearchConfig,
};
use crate::cli::{generate_files, verify_documents, Construction, GenerateArgs, GenerateContext};
use crate::constructions::{
    mubent_from_spread_z2, quadratic_z4, scalar_spread_set_z2, trace_family_odd,
};
use crate::engine::{
    build_basis, build_family, build_real_mub_family, verify_complete_mub, verify_mub_family,
    MubFamily, VerifyOptions,
};
use crate::error::Result;
use crate::io::from_json;
use crate::zmod::{
    find_self_dual_basis_with, FieldTable, SymMatrix, VectorSpace, DEFAULT_SEARCH_BUDGET,
};

/// Fields of at most this order get their axioms checked.
pub const AXIOM_CHECK_MAX_ORDER: usize = 4096;

#[derive(Debug, Clone)]
pub struct SelfcheckOptions {
    pub fields: FieldTable,
    pub seed: u64,
    pub parallelism: usize,
}

impl Default for SelfcheckOptions {
    fn default() -> Self {
        Self {
            fields: FieldTable::builtin(),
            seed: crate::zmod::DEFAULT_SEARCH_SEED,
            parallelism: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

fn result(name: &str, outcome: Result<(bool, String)>) -> CheckResult {
    let (ok, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckResult {
        name: name.to_string(),
        ok,
        detail,
    }
}

pub fn run_selfcheck(opts: &SelfcheckOptions) -> Vec<CheckResult> {
    let verify = VerifyOptions {
        parallelism: opts.parallelism,
        fail_fast: false,
    };
    vec![
        result("field axioms", check_field_axioms(opts)),
        result(
            "odd trace family, N=3",
            check_odd_family(opts, &[(3, 1)], verify),
        ),
        result(
            "odd trace families, N=9 and N=5",
            check_odd_family(opts, &[(3, 2), (5, 1)], verify),
        ),
        result("Z4 families, N=2,4,8", check_z4_families(opts, verify)),
        result("Z4 quadratic forms", check_z4_quadratics()),
        result("bent test vs character sums", check_walsh(opts.seed)),
        result("real family bound, N=4", check_real_bound(verify)),
        result("mutation sensitivity, N=3", check_mutations(opts, verify)),
        result("determinism across worker counts", check_determinism(opts)),
    ]
}

fn check_field_axioms(opts: &SelfcheckOptions) -> Result<(bool, String)> {
    let mut checked = 0;
    for (p, n) in opts.fields.fields() {
        let Some(order) = (p as usize).checked_pow(n as u32) else {
            continue;
        };
        if order > AXIOM_CHECK_MAX_ORDER {
            continue;
        }
        let field = match opts.fields.field(p, n) {
            Ok(f) => f,
            Err(e) => return Ok((false, format!("GF({p}^{n}): {e}"))),
        };
        if let Err(v) = field.check_axioms(1_000_000, 2_000, opts.seed) {
            return Ok((false, format!("GF({p}^{n}): {v}")));
        }
        checked += 1;
    }
    Ok((
        true,
        format!("{checked} fields of order <= {AXIOM_CHECK_MAX_ORDER}"),
    ))
}

fn complete_ok(family: &MubFamily, verify: VerifyOptions) -> Result<(bool, String)> {
    let dim = family.dim().unwrap_or(0);
    let r = verify_complete_mub(family, verify)?;
    let pairs = (dim + 1) * dim / 2;
    let ok = r.ok && r.bases_checked == dim + 1 && r.pairs_checked == pairs;
    Ok((
        ok,
        format!(
            "N={dim}: {} bases, {} pairs, {} inner products",
            r.bases_checked, r.pairs_checked, r.inner_products_checked
        ),
    ))
}

fn check_odd_family(
    opts: &SelfcheckOptions,
    cases: &[(u32, usize)],
    verify: VerifyOptions,
) -> Result<(bool, String)> {
    let mut ok = true;
    let mut details = Vec::new();
    for &(p, n) in cases {
        let field = opts.fields.field(p, n)?;
        let set = trace_family_odd(&field)?;
        let (good, detail) = complete_ok(&build_family(set.functions())?, verify)?;
        ok &= good;
        details.push(detail);
    }
    Ok((ok, details.join("; ")))
}

fn check_z4_families(opts: &SelfcheckOptions, verify: VerifyOptions) -> Result<(bool, String)> {
    let mut ok = true;
    let mut details = Vec::new();
    for n in 1..=3 {
        let field = opts.fields.field(2, n)?;
        let basis = find_self_dual_basis_with(&field, opts.seed, DEFAULT_SEARCH_BUDGET)?;
        let spread = scalar_spread_set_z2(&field, &basis)?;
        let set = mubent_from_spread_z2(&spread)?;
        let (good, detail) = complete_ok(&build_family(set.functions())?, verify)?;
        ok &= good;
        details.push(detail);
    }
    Ok((ok, details.join("; ")))
}

/// Every symmetric matrix over `Z_4` of size at most 2: bentness when the
/// reduction mod 2 is nonsingular, and the cocycle identity
/// `B(u+v) = B(u) + B(v) + 2 u^ M v^T` for all of them.
fn check_z4_quadratics() -> Result<(bool, String)> {
    let mut matrices = 0;
    let mut nonsingular = 0;
    for n in 1..=2usize {
        let space = VectorSpace::new(2, n)?;
        let free: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        for code in 0..4u32.pow(free.len() as u32) {
            let mut rows = vec![vec![0i64; n]; n];
            let mut c = code;
            for &(i, j) in &free {
                rows[i][j] = (c % 4) as i64;
                rows[j][i] = (c % 4) as i64;
                c /= 4;
            }
            let m = SymMatrix::new(&rows, 4)?;
            let b = quadratic_z4(&m)?;
            matrices += 1;
            if m.reduce_mod2()?.is_nonsingular()? {
                nonsingular += 1;
                if !is_bent_z4(&b)? {
                    return Ok((
                        false,
                        format!("{rows:?} has nonsingular reduction but is not bent"),
                    ));
                }
            }
            for u in 0..space.size() {
                for v in 0..space.size() {
                    let cross = m.as_matrix().bilinear_raw(space.coords(u), space.coords(v));
                    let lhs = b.value(space.add(u, v));
                    let rhs = (b.value(u) + b.value(v) + 2 * cross) % 4;
                    if lhs != rhs {
                        return Ok((false, format!("cocycle fails for {rows:?} at ({u}, {v})")));
                    }
                }
            }
        }
    }
    Ok((
        true,
        format!("{matrices} matrices, {nonsingular} with nonsingular reduction all bent"),
    ))
}

fn check_walsh(seed: u64) -> Result<(bool, String)> {
    let mut disagreements = 0;
    let mut checked = 0;
    let mut compare = |f: &FunctionTable| -> Result<()> {
        checked += 1;
        if is_bent_odd(f)? != walsh_bent_oracle(f)? {
            disagreements += 1;
        }
        Ok(())
    };
    for idx in 0..27i64 {
        compare(&FunctionTable::new(
            3,
            1,
            3,
            vec![idx / 9, (idx / 3) % 3, idx % 3],
        )?)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10_000 {
        let values = (0..9).map(|_| rng.gen_range(0..3i64)).collect();
        compare(&FunctionTable::new(3, 2, 3, values)?)?;
    }
    Ok((
        disagreements == 0,
        format!("{checked} functions, {disagreements} disagreements"),
    ))
}

fn check_real_bound(verify: VerifyOptions) -> Result<(bool, String)> {
    let outcome = search_mubent(&SearchConfig::exhaustive(2, 2, 2))?;
    if !outcome.exhaustive || outcome.max_family_size != 2 {
        return Ok((
            false,
            format!(
                "largest family {} (exhaustive={})",
                outcome.max_family_size, outcome.exhaustive
            ),
        ));
    }
    let family = &outcome.families[0];
    let real = build_real_mub_family(2, family)?;
    let report = verify_mub_family(&real, verify)?;
    if !report.ok || real.len() != 3 {
        return Ok((
            false,
            format!("{} real bases, ok={}", real.len(), report.ok),
        ));
    }
    let mut extended_ok = 0;
    let mut candidates = 0;
    for code in 0..16i64 {
        let g = FunctionTable::new(2, 2, 2, (0..4).map(|v| (code >> (3 - v)) & 1).collect())?;
        if family.contains(&g) {
            continue;
        }
        candidates += 1;
        let mut bases = real.bases().to_vec();
        bases.push(build_basis(&g)?);
        if verify_mub_family(&MubFamily::from_bases(bases, Vec::new())?, verify)?.ok {
            extended_ok += 1;
        }
    }
    Ok((
        extended_ok == 0,
        format!("largest family 2, 3 real bases, {extended_ok} of {candidates} extensions verify"),
    ))
}

fn check_mutations(opts: &SelfcheckOptions, verify: VerifyOptions) -> Result<(bool, String)> {
    let set = trace_family_odd(&opts.fields.field(3, 1)?)?;
    let family = build_family(set.functions())?;
    let mut exponent_caught = 0;
    let mut exponent_total = 0;
    for b in 1..family.len() {
        for r in 0..family.dim().unwrap_or(0) {
            for c in 0..family.dim().unwrap_or(0) {
                exponent_total += 1;
                let mut mutated = family.clone();
                mutated.replace_basis(b, family.bases()[b].with_bumped_entry(r, c))?;
                if !verify_complete_mub(&mutated, verify)?.ok {
                    exponent_caught += 1;
                }
            }
        }
    }
    let mut table_caught = 0;
    let mut table_total = 0;
    for i in 0..set.len() {
        for v in 0..3 {
            for delta in 1..3u32 {
                table_total += 1;
                let mut tables = set.functions().to_vec();
                let mut values: Vec<i64> = tables[i].values().iter().map(|&x| x as i64).collect();
                values[v] = ((values[v] as u32 + delta) % 3) as i64;
                tables[i] = FunctionTable::new(3, 1, 3, values)?;
                let caught = !verify_mubent(&tables)?.ok
                    || !verify_complete_mub(&build_family(&tables)?, verify)?.ok;
                if caught {
                    table_caught += 1;
                }
            }
        }
    }
    Ok((
        exponent_caught == exponent_total && table_caught == table_total,
        format!(
            "{exponent_caught}/{exponent_total} exponent and {table_caught}/{table_total} table mutations rejected"
        ),
    ))
}

/// Generates and verifies in memory with one worker and with eight, and
/// compares every file and report byte for byte.
fn check_determinism(opts: &SelfcheckOptions) -> Result<(bool, String)> {
    let cases = [
        (3, 2, Construction::TraceOdd),
        (2, 3, Construction::SpreadZ2),
    ];
    let ctx = GenerateContext {
        fields: opts.fields.clone(),
        seed: opts.seed,
        budget: None,
    };
    let mut compared = 0;
    for (p, n, construction) in cases {
        let args = GenerateArgs {
            p: Some(p),
            n: Some(n),
            construction,
            input: None,
            output: PathBuf::new(),
        };
        let mut runs = Vec::new();
        for parallelism in [1, 8] {
            let generated =
                generate_files(&args, &ctx).map_err(|e| crate::Error::Invalid(e.message))?;
            let docs = generated
                .files
                .iter()
                .map(|(name, text)| Ok((name.clone(), from_json(text)?)))
                .collect::<Result<Vec<_>>>()?;
            let report = verify_documents(
                &docs,
                false,
                VerifyOptions {
                    parallelism,
                    fail_fast: false,
                },
            )
            .map_err(|e| crate::Error::Invalid(e.message))?;
            if !report.ok {
                return Ok((false, format!("p={p} n={n}: verification failed")));
            }
            let report = serde_json::to_string_pretty(&report).expect("serializes");
            runs.push((generated.files, report));
        }
        if runs[0] != runs[1] {
            return Ok((false, format!("p={p} n={n}: outputs differ")));
        }
        compared += runs[0].0.len() + 1;
    }
    Ok((true, format!("{compared} outputs identical")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_and_real_checks_pass() {
        assert!(check_z4_quadratics().unwrap().0);
        assert!(check_real_bound(VerifyOptions::default()).unwrap().0);
    }

    #[test]
    fn reducible_modulus_names_the_axiom() {
        // x^2 + 2 = (x + 1)(x + 2) over Z_3
        let fields = FieldTable::parse("3 2 2 0 1\n").unwrap();
        let opts = SelfcheckOptions {
            fields,
            ..SelfcheckOptions::default()
        };
        let (ok, detail) = check_field_axioms(&opts).unwrap();
        assert!(!ok);
        assert!(detail.contains("multiplicative group order"), "{detail}");
    }
}
