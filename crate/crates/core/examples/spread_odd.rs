// Symmetric spread set over Z_5 from the trace form, checked and turned
// into a mubent set.

use mubforge::constructions::{mubent_from_spread_odd, trace_spread_set, verify_spread_set};
use mubforge::zmod::FieldTable;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let field = FieldTable::builtin().field(5, 2)?;
    let spread = trace_spread_set(&field)?;
    let report = verify_spread_set(spread.matrices())?;
    println!(
        "{} matrices, {} differences checked, ok = {}",
        report.size, report.pairs_checked, report.ok
    );

    let set = mubent_from_spread_odd(&spread)?;
    println!("mubent set of {} functions on Z_5^2", set.len());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
