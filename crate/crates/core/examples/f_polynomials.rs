// F-polynomials through principal coefficients.

use clusterlab::builders::{build_gamma_ell, build_rank2, DynkinType, GammaSpec};
use clusterlab::explore::{f_polynomials, EnumerateOptions};
use clusterlab::laurent::VarContext;
use clusterlab::seed::Seed;

fn table(name: &str, seed: &Seed) -> Result<(), Box<dyn std::error::Error>> {
    let t = f_polynomials(seed, EnumerateOptions::default())?;
    let ctx = VarContext::standard(seed.n());
    println!("{name}:");
    for e in &t.entries {
        println!("  {:<40} F = {}", e.variable.display(&ctx).to_string(), e.f.display(t.coefficient_count));
    }
    Ok(())
}

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    table("rank 2, a = 1", &build_rank2(1)?)?;
    table("Γ_1(A2)", &build_gamma_ell(&GammaSpec::new(DynkinType::a(2), 1))?)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
