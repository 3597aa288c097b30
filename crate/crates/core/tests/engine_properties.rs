use mubforge::bent::FunctionTable;
use mubforge::constructions::{mubent_from_spread_z2, scalar_spread_set_z2, trace_family_odd};
use mubforge::engine::{
    build_basis, build_family, build_real_mub_family, inner_product, verify_complete_mub,
    verify_mub_family, MubFamily, PhaseMatrix, VerifyOptions,
};
use mubforge::zmod::{find_self_dual_basis, FieldTable, Matrix, VectorSpace};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn odd_family(p: u32, n: usize) -> MubFamily {
    let field = FieldTable::builtin().field(p, n).unwrap();
    build_family(trace_family_odd(&field).unwrap().functions()).unwrap()
}

fn even_family(n: usize) -> MubFamily {
    let field = FieldTable::builtin().field(2, n).unwrap();
    let basis = find_self_dual_basis(&field).unwrap();
    let spread = scalar_spread_set_z2(&field, &basis).unwrap();
    build_family(mubent_from_spread_z2(&spread).unwrap().functions()).unwrap()
}

fn shipped() -> Vec<MubFamily> {
    let mut out: Vec<MubFamily> = [(3, 1), (3, 2), (5, 1), (5, 2)]
        .into_iter()
        .map(|(p, n)| odd_family(p, n))
        .collect();
    out.extend((1..=3).map(even_family));
    out
}

#[test]
fn shipped_constructions_are_complete() {
    for family in shipped() {
        let n = family.dim().unwrap();
        let r = verify_complete_mub(&family, VerifyOptions::default()).unwrap();
        assert!(r.ok, "N={n}: {:?}", r.first_failure);
        assert_eq!(r.bases_checked, n + 1);
        assert_eq!(r.pairs_checked, (n + 1) * n / 2);
        let self_products = (n + 1) * n * (n + 1) / 2;
        assert_eq!(
            r.inner_products_checked as usize,
            self_products + r.pairs_checked * n * n
        );
    }
}

#[test]
fn cross_products_have_norm_n_exactly() {
    for family in shipped() {
        let n = family.dim().unwrap();
        let bases = &family.bases()[1..];
        for i in 0..bases.len() {
            for j in i + 1..bases.len() {
                for a in 0..n {
                    for b in 0..n {
                        let alpha = inner_product(&bases[i], a, &bases[j], b).unwrap();
                        assert!(alpha.norm_sq().equals_integer(n as u64));
                    }
                }
            }
        }
    }
}

#[test]
fn zero_function_gives_the_character_table() {
    for (p, n) in [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1)] {
        let space = VectorSpace::new(p, n).unwrap();
        let basis = build_basis(&FunctionTable::zero(p, n, p).unwrap()).unwrap();
        for a in 0..space.size() {
            for v in 0..space.size() {
                assert_eq!(basis.root_exponent(a, v), Some(space.dot(a, v)));
            }
            for b in 0..space.size() {
                let alpha = inner_product(&basis, a, &basis, b).unwrap();
                let expected = if a == b { space.size() as u64 } else { 0 };
                assert!(alpha.equals_integer(expected), "p={p} n={n} a={a} b={b}");
            }
        }
    }
}

fn relabel(family: &MubFamily, perm: &[usize]) -> MubFamily {
    let bases = family
        .bases()
        .iter()
        .map(|b| b.permuted(perm, perm).unwrap())
        .collect();
    MubFamily::from_bases(bases, Vec::new()).unwrap()
}

#[test]
fn relabeling_the_index_set_preserves_reports() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for family in shipped() {
        let n = family.dim().unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let before = verify_complete_mub(&family, VerifyOptions::default()).unwrap();
        let after =
            verify_complete_mub(&relabel(&family, &perm), VerifyOptions::default()).unwrap();
        assert_eq!(before.ok, after.ok);
        assert_eq!(before.bases_checked, after.bases_checked);
        assert_eq!(before.pairs_checked, after.pairs_checked);
        assert_eq!(before.inner_products_checked, after.inner_products_checked);

        let mut broken = family.clone();
        broken
            .replace_basis(1, family.bases()[1].with_bumped_entry(0, n - 1))
            .unwrap();
        let before = verify_complete_mub(&broken, VerifyOptions::default()).unwrap();
        let after =
            verify_complete_mub(&relabel(&broken, &perm), VerifyOptions::default()).unwrap();
        assert!(!before.ok && !after.ok);
        assert_eq!(before.inner_products_checked, after.inner_products_checked);
    }
}

#[test]
fn linear_change_of_variables_in_the_tables_keeps_a_complete_family() {
    // v -> v A for an invertible A maps bent functions to bent functions
    let field = FieldTable::builtin().field(3, 2).unwrap();
    let set = trace_family_odd(&field).unwrap();
    let space = VectorSpace::new(3, 2).unwrap();
    let a = Matrix::new(&[vec![1, 1], vec![0, 2]], 3).unwrap();
    let rows = a.rows();
    let perm: Vec<usize> = (0..space.size())
        .map(|v| {
            let c = space.coords(v);
            let image: Vec<u32> = (0..2)
                .map(|j| (0..2).map(|i| c[i] * rows[i][j]).sum::<u32>() % 3)
                .collect();
            space.index_of(&image)
        })
        .collect();
    let tables: Vec<FunctionTable> = set
        .functions()
        .iter()
        .map(|f| f.permute(&perm).unwrap())
        .collect();
    let r = verify_complete_mub(&build_family(&tables).unwrap(), VerifyOptions::default()).unwrap();
    assert!(r.ok);
    assert_eq!(r.pairs_checked, 45);
}

fn normalized_rows(m: &PhaseMatrix) -> Vec<Vec<Complex64>> {
    let scale = 1.0 / (m.row_norm_sq() as f64).sqrt();
    (0..m.dim())
        .map(|r| {
            (0..m.dim())
                .map(|c| {
                    let (re, im) = m.entry_f64(r, c);
                    Complex64::new(re, im) * scale
                })
                .collect()
        })
        .collect()
}

/// Float verdict: orthonormal bases, |<u, v>|^2 = 1/N across bases, to 1e-9.
fn float_verdict(family: &MubFamily) -> bool {
    let n = family.dim().unwrap() as f64;
    let rows: Vec<Vec<Vec<Complex64>>> = family.bases().iter().map(normalized_rows).collect();
    let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
        x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
    };
    for (i, bi) in rows.iter().enumerate() {
        for (j, bj) in rows.iter().enumerate().skip(i) {
            for (a, u) in bi.iter().enumerate() {
                for (b, v) in bj.iter().enumerate() {
                    let target = match (i == j, a == b) {
                        (true, true) => 1.0,
                        (true, false) => 0.0,
                        (false, _) => 1.0 / n,
                    };
                    if (dot(u, v).norm_sqr() - target).abs() > 1e-9 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[test]
fn float_evaluation_agrees_with_exact_verdicts() {
    let mut families = shipped();
    let real = build_real_mub_family(
        2,
        &[
            FunctionTable::zero(2, 2, 2).unwrap(),
            FunctionTable::new(2, 2, 2, vec![0, 0, 0, 1]).unwrap(),
        ],
    )
    .unwrap();
    families.push(real);
    let mut broken = Vec::new();
    for f in &families {
        let n = f.dim().unwrap();
        let mut g = f.clone();
        g.replace_basis(
            f.len() - 1,
            f.bases()[f.len() - 1].with_bumped_entry(n - 1, 0),
        )
        .unwrap();
        broken.push(g);
    }
    families.extend(broken);
    for family in &families {
        let exact = verify_mub_family(family, VerifyOptions::default())
            .unwrap()
            .ok;
        assert_eq!(exact, float_verdict(family), "N={:?}", family.dim());
    }
}
