// The grid quivers `Γ_ℓ`: type `A_ℓ` for `A1`, the type of `g` at level 1,
// and `D4` with 50 clusters for `(A2, 2)`.

use clusterlab::builders::{build_gamma_ell, DynkinType, GammaSpec};
use clusterlab::explore::{classify_finite_type, enumerate_exchange_graph, EnumerateOptions};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        (DynkinType::a(1), 1),
        (DynkinType::a(1), 2),
        (DynkinType::a(1), 3),
        (DynkinType::a(1), 4),
        (DynkinType::a(2), 1),
        (DynkinType::a(3), 1),
        (DynkinType::a(2), 2),
    ];
    for (g, ell) in cases {
        let seed = build_gamma_ell(&GammaSpec::new(g, ell))?;
        let verdict = classify_finite_type(seed.quiver())?;
        let report = enumerate_exchange_graph(&seed, EnumerateOptions::default())?;
        println!(
            "({g}, {ell}): {} vertices, type {}, {} clusters, {} variables ({} frozen)",
            seed.n(),
            verdict.type_name().unwrap_or_else(|| "?".into()),
            report.cluster_count(),
            report.variable_count(),
            report.frozen_variables.len()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
