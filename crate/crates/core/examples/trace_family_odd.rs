// Complete set of 10 MUBs in C^9 from the quadratic trace family over GF(9).
//
//     cargo run --example trace_family_odd

use mubforge::constructions::trace_family_odd;
use mubforge::engine::{build_family, verify_complete_mub, VerifyOptions};
use mubforge::zmod::FieldTable;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let field = FieldTable::builtin().field(3, 2)?;
    println!("field: {field}");

    let set = trace_family_odd(&field)?;
    println!("mubent set: {} functions", set.len());
    for f in set.functions().iter().take(3) {
        println!("  {:?}", f.values());
    }

    let family = build_family(set.functions())?;
    let report = verify_complete_mub(&family, VerifyOptions::default())?;
    println!(
        "{} bases, {} basis pairs, {} exact inner products, ok = {}",
        report.bases_checked, report.pairs_checked, report.inner_products_checked, report.ok
    );
    assert!(report.ok && report.complete);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
