// Characteristic 2: the scalar spread set {cI} of GF(8), written in a
// self-dual basis, lifted to Z_4-valued quadratic forms. Gives 9 MUBs in C^8.

use mubforge::constructions::{mubent_from_spread_z2, scalar_spread_set_z2};
use mubforge::engine::{build_family, verify_complete_mub, VerifyOptions};
use mubforge::zmod::{find_self_dual_basis, FieldTable};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let field = FieldTable::builtin().field(2, 3)?;
    let basis = find_self_dual_basis(&field)?;
    for b in basis.elements() {
        println!("basis element {b}");
    }

    let spread = scalar_spread_set_z2(&field, &basis)?;
    // every member is symmetric because the basis is self-dual
    for m in spread.matrices().iter().take(3) {
        println!("{:?}", m.rows());
    }

    let set = mubent_from_spread_z2(&spread)?;
    let family = build_family(set.functions())?;
    let report = verify_complete_mub(&family, VerifyOptions::default())?;
    println!(
        "N = {}, bases = {}, ok = {}",
        report.dimension,
        family.len(),
        report.ok
    );
    assert!(report.ok);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
