// Trace map and a self-dual basis of GF(16): in its coordinates
// Tr(xy) becomes the dot product.

use mubforge::zmod::{find_self_dual_basis_with, trace_gram, FieldTable, DEFAULT_SEARCH_BUDGET};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let field = FieldTable::builtin().field(2, 4)?;
    let g = field.generator();
    for k in 0..4 {
        let x = field.pow(&g, k);
        println!("Tr({x}) = {}", field.trace(&x).value());
    }

    let basis = find_self_dual_basis_with(&field, 7, DEFAULT_SEARCH_BUDGET)?;
    println!(
        "Gram matrix: {:?}",
        trace_gram(&field, basis.elements()).rows()
    );

    let x = field.pow(&g, 5);
    let y = field.pow(&g, 11);
    let (cx, cy) = (basis.coordinates(&field, &x), basis.coordinates(&field, &y));
    let dot: u32 = cx.iter().zip(&cy).map(|(a, b)| a * b).sum::<u32>() % 2;
    println!(
        "Tr(xy) = {}, coordinate dot product = {dot}",
        field.trace(&field.mul(&x, &y)).value()
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
