// Exchange graph of the unitriangular seed of `SL_4`: 14 clusters, 12
// variables, 3 of them frozen.

use clusterlab::builders::build_unitriangular_seed;
use clusterlab::explore::{enumerate_exchange_graph, verify_positivity, EnumerateOptions};
use clusterlab::laurent::VarContext;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let sl4 = build_unitriangular_seed(3)?;
    let report = enumerate_exchange_graph(&sl4.seed, EnumerateOptions::default())?;
    println!(
        "clusters: {}, variables: {} ({} frozen), edges: {}",
        report.cluster_count(),
        report.variable_count(),
        report.frozen_variables.len(),
        report.edges.len()
    );
    println!("3-regular: {}", report.is_regular());
    println!("negative coefficients: {}", verify_positivity(&report).len());

    let ctx = VarContext::standard(6);
    for v in report.mutable_variables() {
        println!("  {}", v.display(&ctx));
    }
    if std::env::args().any(|a| a == "--dot") {
        print!("{}", report.to_dot());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
