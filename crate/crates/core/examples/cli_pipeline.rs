// The command line driven in-process: `build | enumerate`, `classify` and
// `euler`.

use clusterlab::cli::run_cli;

fn call(args: &[&str], stdin: &str) -> Result<String, Box<dyn std::error::Error>> {
    let mut argv = vec!["clusterlab"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)).into());
    }
    Ok(String::from_utf8(out)?)
}

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let sl4 = call(&["build", "--family", "unitriangular", "--n", "3"], "")?;
    print!("{}", call(&["enumerate"], &sl4)?);
    let gamma = call(&["build", "--family", "gamma", "--type", "A2", "--ell", "2"], "")?;
    print!("{}", call(&["classify"], &gamma)?);
    print!("{}", call(&["mutate", "--at", "1,2"], &call(&["build", "--family", "rank2"], "")?)?);
    let module = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/a3_flag.json");
    print!("{}", call(&["euler", "--module", module, "--type", "2,2,1,3"], "")?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
