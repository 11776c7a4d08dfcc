//! Prints the Adams coefficients as exact fractions next to their `f64`
//! values, and checks the partial-sum relation between the two families.

use abmd::coeffs::{exact_coefficients, CoefficientTable};

fn main() {
    let k = 13;
    let (c, gamma) = exact_coefficients(k);
    let table = CoefficientTable::new(k);
    println!("{:>2}  {:>28}  {:>24}  {:>24}", "j", "c_j", "c_j (f64)", "gamma_j (f64)");
    for (j, ((exact, cj), gj)) in c.iter().zip(table.c()).zip(table.gamma()).enumerate() {
        println!("{j:>2}  {:>28}  {cj:>24.17e}  {gj:>24.17e}", exact.to_string());
    }
    let partial: Vec<_> = c.iter().scan(num_rational::BigRational::from_integer(0.into()), |acc, cj| {
        *acc += cj;
        Some(acc.clone())
    })
    .collect();
    assert_eq!(partial, gamma);
    println!("gamma_j = c_0 + ... + c_j holds exactly through j = {k}");
}
