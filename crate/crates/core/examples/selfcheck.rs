use mubforge::selfcheck::{run_selfcheck, SelfcheckOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let results = run_selfcheck(&SelfcheckOptions::default());
    for r in &results {
        println!(
            "{} {} ({})",
            if r.ok { "ok  " } else { "FAIL" },
            r.name,
            r.detail
        );
    }
    if results.iter().any(|r| !r.ok) {
        return Err("selfcheck failed".into());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
