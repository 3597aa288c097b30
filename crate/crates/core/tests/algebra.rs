use mubforge::zmod::{
    find_self_dual_basis_with, FieldTable, GaloisField, GfElement, DEFAULT_SEARCH_BUDGET,
};

/// Trace as the constant coefficient of `x + x^p + ... + x^(p^(n-1))`,
/// computed by repeated powering rather than through the library's trace.
fn trace_by_powers(field: &GaloisField, x: &GfElement) -> u32 {
    let p = field.characteristic() as u64;
    let mut acc = field.zero();
    let mut term = x.clone();
    for _ in 0..field.degree() {
        acc = field.add(&acc, &term);
        term = field.pow(&term, p);
    }
    assert!(
        acc.coeffs()[1..].iter().all(|&c| c == 0),
        "trace left the prime field"
    );
    acc.coeffs()[0]
}

#[test]
fn small_fields_satisfy_the_axioms() {
    let table = FieldTable::builtin();
    for p in [2, 3, 5, 7] {
        for n in 1..=3 {
            let field = table.field(p, n).unwrap();
            // exhaustive when q^3 <= 10^6, else 10^4 random triples
            field
                .check_axioms(1_000_000, 10_000, 17)
                .unwrap_or_else(|v| panic!("GF({p}^{n}): {v}"));
        }
    }
}

#[test]
fn trace_matches_frobenius_powers() {
    let table = FieldTable::builtin();
    for (p, n) in [(2, 4), (3, 3), (5, 2), (7, 2)] {
        let field = table.field(p, n).unwrap();
        for x in field.elements() {
            assert_eq!(field.trace(&x).value(), trace_by_powers(&field, &x));
        }
    }
}

#[test]
fn trace_form_is_nondegenerate_up_to_64() {
    let table = FieldTable::builtin();
    for (p, n) in [
        (2, 1),
        (2, 2),
        (2, 3),
        (2, 4),
        (2, 5),
        (2, 6),
        (3, 1),
        (3, 2),
        (3, 3),
        (5, 1),
        (5, 2),
        (7, 1),
        (7, 2),
    ] {
        let field = table.field(p, n).unwrap();
        for x in field.elements().filter(|x| !x.is_zero()) {
            assert!(
                field
                    .elements()
                    .any(|y| field.trace(&field.mul(&x, &y)).value() != 0),
                "GF({p}^{n}): {x} is orthogonal to everything"
            );
        }
    }
}

#[test]
fn self_dual_bases_have_identity_gram_matrix() {
    let table = FieldTable::builtin();
    for n in 1..=8 {
        let field = table.field(2, n).unwrap();
        for seed in [1, 2, 3] {
            let basis = find_self_dual_basis_with(&field, seed, DEFAULT_SEARCH_BUDGET).unwrap();
            let b = basis.elements();
            assert_eq!(b.len(), n);
            for i in 0..n {
                for j in 0..n {
                    let t = trace_by_powers(&field, &field.mul(&b[i], &b[j]));
                    assert_eq!(t, u32::from(i == j), "n={n} seed={seed} ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn self_dual_coordinates_turn_trace_into_dot_product() {
    let field = FieldTable::builtin().field(2, 5).unwrap();
    let basis = find_self_dual_basis_with(&field, 11, DEFAULT_SEARCH_BUDGET).unwrap();
    for x in field.elements() {
        let cx = basis.coordinates(&field, &x);
        for y in field.elements().step_by(3) {
            let cy = basis.coordinates(&field, &y);
            let dot = cx.iter().zip(&cy).map(|(a, b)| a * b).sum::<u32>() % 2;
            assert_eq!(dot, trace_by_powers(&field, &field.mul(&x, &y)));
        }
    }
}
