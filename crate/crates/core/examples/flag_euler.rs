// Euler characteristics of the composition-flag varieties of a small `A3`
// module, by counting points over finite fields.

use clusterlab::flagvar::{count_flags, enumerate_types, euler_characteristic, format_flag_type, GradedModule};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let text = include_str!("a3_flag.json");
    let module = GradedModule::from_json_str(text)?;
    let mut total = 0i64;
    for ty in enumerate_types(&module)? {
        let c = euler_characteristic(&module, &ty)?;
        println!(
            "type ({}): counts {:?}, polynomial {}, chi = {}",
            format_flag_type(&ty),
            c.samples,
            c.polynomial,
            c.euler
        );
        total += i64::try_from(c.euler)?;
    }
    println!("total chi = {total}");
    println!("type (1,2,2,3) over GF(2): {} flags", count_flags(&module, &[0, 1, 1, 2], 2)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
