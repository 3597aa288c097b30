// Derivative histograms and the three bent tests, with the character-sum
// oracle alongside.

use mubforge::bent::{
    derivative_histogram, is_bent_odd, is_bent_z4, walsh_bent_oracle, FunctionTable,
};
use mubforge::zmod::ZVec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let square = FunctionTable::new(3, 1, 3, vec![0, 1, 1])?;
    let u = ZVec::new(&[1], 3)?;
    let h = derivative_histogram(&square, &u)?;
    println!("x^2 on Z_3, direction 1: counts {:?}", h.counts);
    println!(
        "bent: {} (oracle: {})",
        is_bent_odd(&square)?,
        walsh_bent_oracle(&square)?
    );

    let linear = FunctionTable::new(3, 1, 3, vec![0, 1, 2])?;
    println!("x on Z_3 bent: {}", is_bent_odd(&linear)?);

    // v1 v2 + ... as a Z_4-valued form on Z_2^2
    let z4 = FunctionTable::new(2, 2, 4, vec![0, 1, 1, 2])?;
    for d in 1..4 {
        let u = ZVec::from_index(d, 2, 2);
        println!(
            "Z_4 form, direction {:?}: {:?}",
            u.coords(),
            derivative_histogram(&z4, &u)?.counts
        );
    }
    println!("Z_4 bent: {}", is_bent_z4(&z4)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
