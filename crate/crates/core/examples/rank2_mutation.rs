// Rank-2 seeds: the five-periodic recurrence for `a = 1` and unbounded
// growth for `a = 2`.

use clusterlab::builders::build_rank2;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let mut seed = build_rank2(1)?;
    println!("a = 1, alternating mutations:");
    for step in 0..6 {
        let k = step % 2;
        seed = seed.mutate(k)?;
        println!("  mu_{} -> x = {}", k + 1, seed.var(k));
    }

    let mut seed = build_rank2(2)?;
    println!("a = 2, term counts along the alternating walk:");
    let mut counts = Vec::new();
    for step in 0..8 {
        let k = step % 2;
        seed = seed.mutate(k)?;
        counts.push(seed.var(k).num_terms());
    }
    println!("  {counts:?}");

    let back = seed.mutate(1)?.mutate(1)?;
    println!("mutating twice at the same vertex is the identity: {}", back == seed);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
