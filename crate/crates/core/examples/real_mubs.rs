// Real MUBs in R^4: the largest family of Z_2-valued functions with bent
// differences has 2 members, giving 3 real bases, and no further basis of
// the same kind can be added.

use mubforge::bent::{search_mubent, FunctionTable, SearchConfig};
use mubforge::engine::{
    build_basis, build_real_mub_family, verify_mub_family, MubFamily, VerifyOptions,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let outcome = search_mubent(&SearchConfig::exhaustive(2, 2, 2))?;
    println!(
        "largest family: {} (exhaustive = {}, {} bent tables)",
        outcome.max_family_size, outcome.exhaustive, outcome.bent_candidates
    );
    let family = &outcome.families[0];
    let real = build_real_mub_family(2, family)?;
    let opts = VerifyOptions::default();
    println!(
        "{} real bases, ok = {}",
        real.len(),
        verify_mub_family(&real, opts)?.ok
    );

    let mut extensions = 0;
    for code in 0..16i64 {
        let g = FunctionTable::new(2, 2, 2, (0..4).map(|v| (code >> (3 - v)) & 1).collect())?;
        let mut bases = real.bases().to_vec();
        bases.push(build_basis(&g)?);
        if verify_mub_family(&MubFamily::from_bases(bases, Vec::new())?, opts)?.ok {
            extensions += 1;
        }
    }
    println!("extensions that verify: {extensions}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
