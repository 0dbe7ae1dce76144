// Finite-type classification of a few quivers.

use clusterlab::builders::{build_dynkin_quiver, build_rank2, build_unitriangular_seed, DynkinType, Orientation};
use clusterlab::explore::{classify_finite_type, TypeVerdict};
use clusterlab::seed::Quiver;

fn show(name: &str, q: &Quiver) -> Result<(), Box<dyn std::error::Error>> {
    let verdict = classify_finite_type(q)?;
    let text = match &verdict {
        TypeVerdict::Finite(_) => format!("finite, {}", verdict.type_name().unwrap_or_default()),
        TypeVerdict::Infinite { witness } => format!("infinite (arrow of multiplicity {})", witness.max_multiplicity()),
        TypeVerdict::Inconclusive { explored } => format!("inconclusive after {explored} quivers"),
    };
    println!("{name:<28} {text}");
    Ok(())
}

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    show("rank 2, a = 1", build_rank2(1)?.quiver())?;
    show("rank 2, a = 2", build_rank2(2)?.quiver())?;
    show("SL4 unitriangular", build_unitriangular_seed(3)?.seed.quiver())?;
    show("SL5 unitriangular", build_unitriangular_seed(4)?.seed.quiver())?;
    show("E6 bipartite", &build_dynkin_quiver(DynkinType::e(6), &Orientation::Bipartite)?)?;
    let triangle = Quiver::from_arrows(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)], &[])?;
    show("acyclic triangle", &triangle)?;
    let two_pieces = Quiver::from_arrows(4, &[(0, 1, 1), (2, 3, 1)], &[])?;
    show("A2 + A2", &two_pieces)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
