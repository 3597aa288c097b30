// Exact arithmetic in Z[ζ_p] and Z[i].

use mubforge::cyclotomic::{root_power, CyclotomicInt, GaussianInt};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // quadratic Gauss sum Σ ζ^(x^2) over Z_5
    let mut g = CyclotomicInt::zero(5)?;
    for x in 0..5i64 {
        g = g.checked_add(&root_power(5, x * x)?)?;
    }
    println!("g = {g}");
    println!("|g|^2 = {}", g.norm_sq());
    // p = 1 mod 4: the sum is the real number sqrt(p)
    let (re, _) = g.to_f64_pair();
    println!("g ≈ {re:.9}, sqrt(5) ≈ {:.9}", 5f64.sqrt());

    let sum_of_roots = CyclotomicInt::from_exponent_counts(7, &[1; 7])?;
    println!("1 + ζ + ... + ζ^6 = {sum_of_roots}");

    let z = GaussianInt::new(1, 1);
    println!("(1+i)^2 = {}", &z * &z);
    println!("|1+i|^2 = {}", z.norm_sq());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
