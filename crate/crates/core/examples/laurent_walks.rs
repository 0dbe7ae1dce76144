// Random mutation walks; every exchange must divide exactly.

use clusterlab::builders::{build_gamma_ell, build_rank2, build_unitriangular_seed, DynkinType, GammaSpec};
use clusterlab::explore::random_walk_laurent_check;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let seeds = [
        ("SL4", build_unitriangular_seed(3)?.seed, 8),
        ("Γ_1(A2)", build_gamma_ell(&GammaSpec::new(DynkinType::a(2), 1))?, 8),
        ("rank 2, a = 2", build_rank2(2)?, 12),
    ];
    for (name, seed, depth) in seeds {
        let walks = 50;
        let failures = (0..walks)
            .filter(|&w| !random_walk_laurent_check(&seed, depth, w).is_ok())
            .count();
        println!("{name}: {walks} walks of depth {depth}, {failures} failures");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
