// Exact Laurent polynomial arithmetic: parsing, products, exact division
// and substitution.

use clusterlab::laurent::{LaurentPoly, VarContext};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = VarContext::standard(2);
    let num: LaurentPoly = "1 + x1 + x2".parse()?;
    let den: LaurentPoly = "x1*x2".parse()?;
    let q = num.exact_div(&den)?;
    println!("(1 + x1 + x2) / (x1 x2) = {}", q.display(&ctx));

    let f: LaurentPoly = "1 + x2".parse()?;
    let g: LaurentPoly = "1 - x2 + x2^2".parse()?;
    let cube = &f * &g;
    println!("(1 + x2)(1 - x2 + x2^2) = {cube}");
    println!("back again: {}", cube.exact_div(&g)?);

    match "1 + x1".parse::<LaurentPoly>()?.exact_div(&"1 + x2".parse()?) {
        Ok(p) => println!("unexpected quotient {p}"),
        Err(e) => println!("(1 + x1) / (1 + x2): {e}"),
    }

    // Substitute x1 := 1 + x1, x2 := x1 into (1 + x2)/x1.
    let h: LaurentPoly = "x1^-1 + x1^-1*x2".parse()?;
    let images = ["1 + x1".parse()?, "x1".parse()?];
    println!("substitution gives {}", h.substitute(&images)?);
    println!("positive coefficients: {}", q.is_positive());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
