// Exhaustive search for Z_4-valued families on Z_2^2 and Z_3-valued ones on Z_3.

use mubforge::bent::{search_mubent, verify_mubent, SearchConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (p, n, codomain) in [(2, 2, 4), (3, 1, 3)] {
        let outcome = search_mubent(&SearchConfig::exhaustive(p, n, codomain))?;
        println!(
            "Z_{p}^{n} -> Z_{codomain}: largest family {}, {} found, exhaustive = {}",
            outcome.max_family_size,
            outcome.families.len(),
            outcome.exhaustive
        );
        let first = &outcome.families[0];
        for f in first {
            println!("  {:?}", f.values());
        }
        println!("  {}", verify_mubent(first)?.summary());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
