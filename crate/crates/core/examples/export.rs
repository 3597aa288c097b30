// JSON round trip of a basis and the lossy CSV view.

use mubforge::bent::FunctionTable;
use mubforge::engine::{build_basis, PhaseMatrix};
use mubforge::io::{from_json, phase_matrix_csv, to_json, Document, PhaseMatrixDoc};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let b = FunctionTable::new(2, 1, 4, vec![0, 1])?;
    let basis = build_basis(&b)?;

    let json = to_json(&Document::PhaseMatrix(PhaseMatrixDoc::from(&basis)));
    print!("{json}");
    let Document::PhaseMatrix(doc) = from_json(&json)? else {
        return Err("expected a phase matrix".into());
    };
    assert_eq!(PhaseMatrix::try_from(doc)?, basis);

    print!("{}", phase_matrix_csv(&basis));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
