// Exchange relations of the unitriangular seeds checked as identities
// between minors of a generic unitriangular matrix.

use clusterlab::builders::build_unitriangular_seed;
use clusterlab::minors::{minor_symbolic, numeric_spot_check, verify_exchange_identities, GenericUnitriangular};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = GenericUnitriangular::new(3).context();
    let d = |r: &[usize], c: &[usize]| minor_symbolic(3, r, c);
    let lhs = &d(&[1], &[2])? * &d(&[2], &[3])?;
    let rhs = &d(&[1], &[3])? + &d(&[1, 2], &[2, 3])?;
    println!("D_{{1,2}} D_{{2,3}} = {}", lhs.display(&ctx));
    println!("D_{{1,3}} + D_{{12,23}} = {}", rhs.display(&ctx));

    for n in [2, 3] {
        let seed = build_unitriangular_seed(n)?.seed;
        let report = verify_exchange_identities(&seed, usize::MAX)?;
        println!(
            "SL{}: {} exchanges checked over {} clusters, {} failed, {} non-polynomial variables",
            n + 1,
            report.checked,
            report.clusters,
            report.failed,
            report.non_polynomial
        );
        for m in &report.single_minors {
            println!("  mutations {:?} then {} give {}", m.path, m.vertex, m.minor);
        }
        let spot = numeric_spot_check(&seed, usize::MAX, 100, 1)?;
        println!("  numeric: {} agree, {} disagree, {} skipped", spot.agree, spot.disagree, spot.skipped);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
