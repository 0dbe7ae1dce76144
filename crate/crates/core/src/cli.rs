//! The `clusterlab` command line. Data goes to stdout, diagnostics to
//! stderr. Exit status is 0 on success, 1 on domain errors and 2 on usage
//! errors.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::builders::{build_unitriangular_seed, FamilySpec};
use crate::explore::{
    classify_finite_type, enumerate_exchange_graph, f_polynomials, random_walk_laurent_check, verify_positivity,
    EnumerateOptions, Limits, TypeVerdict, WalkOutcome,
};
use crate::flagvar::{enumerate_types, euler_characteristic, format_flag_type, parse_flag_type, GradedModule};
use crate::laurent::VarContext;
use crate::minors::{numeric_spot_check, verify_exchange_identities};
use crate::seed::Seed;
use crate::serve::{ServeConfig, DEFAULT_PORT, PORT_ENV};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "clusterlab", version, about = "Exact cluster algebra computations")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Read the input seed from this file instead of stdin.
    #[arg(long, short, global = true)]
    pub input: Option<PathBuf>,
    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a seed from a named family and print it as JSON.
    Build(BuildArgs),
    /// Mutate the input seed at a sequence of 1-based vertices.
    Mutate {
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<usize>,
    },
    /// Enumerate the exchange graph of the input seed.
    Enumerate(EnumerateArgs),
    /// Decide finite type of the input seed's quiver.
    Classify,
    /// F-polynomials of every cluster variable of the input seed.
    Fpoly {
        #[arg(long, value_parser = parse_limits)]
        limits: Option<Limits>,
    },
    /// Verification passes.
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// Euler characteristics of flag varieties of a module.
    Euler {
        #[arg(long)]
        module: PathBuf,
        /// 1-based flag type such as `2,2,1,3`; all nonempty types if absent.
        #[arg(long = "type")]
        flag_type: Option<String>,
    },
    /// Run the HTTP session service.
    Serve {
        /// Defaults to $CLUSTERLAB_PORT, then 7878.
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        state_dir: Option<PathBuf>,
        /// Idle time in seconds before a session is dropped.
        #[arg(long, default_value_t = 1800)]
        idle_timeout: u64,
    },
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, value_parser = ["rank2", "unitriangular", "gamma", "dynkin"])]
    pub family: String,
    /// Number of arrows for `rank2`.
    #[arg(long)]
    pub a: Option<i64>,
    /// Rank for `unitriangular` (the seed of `SL_{n+1}`).
    #[arg(long)]
    pub n: Option<usize>,
    /// Dynkin type for `gamma` and `dynkin`, such as `A2` or `D4`.
    #[arg(long = "type")]
    pub dynkin: Option<String>,
    #[arg(long)]
    pub ell: Option<usize>,
    /// 1-based source side of the bipartition for `gamma`.
    #[arg(long, value_delimiter = ',')]
    pub sources: Option<Vec<usize>>,
    /// `bipartite` or arrows like `1->2,3->2` for `dynkin`.
    #[arg(long)]
    pub orientation: Option<String>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// `max_clusters=N,max_depth=D`; either key may be omitted.
    #[arg(long, value_parser = parse_limits)]
    pub limits: Option<Limits>,
    /// BFS worker threads; 1 runs on the calling thread, 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Include every variable in JSON output.
    #[arg(long)]
    pub variables: bool,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Random mutation walks, checking every exchange divides exactly.
    Laurent {
        #[arg(long, required = true)]
        rng_seed: Option<u64>,
        #[arg(long, default_value_t = 200)]
        walks: usize,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Enumerate and scan every variable for negative coefficients.
    Positivity {
        #[arg(long, value_parser = parse_limits)]
        limits: Option<Limits>,
    },
    /// Exchange identities of a unitriangular seed in the matrix entries.
    Minors {
        /// Build the `SL_{n+1}` seed instead of reading one.
        #[arg(long)]
        n: Option<usize>,
        /// BFS depth; the whole class if absent.
        #[arg(long)]
        depth: Option<usize>,
        /// Also compare with this many random numeric evaluations.
        #[arg(long, default_value_t = 0)]
        spot_checks: usize,
        #[arg(long)]
        rng_seed: Option<u64>,
    },
}

pub fn parse_limits(s: &str) -> Result<Limits, String> {
    let mut limits = Limits::default();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("expected key=value, got {part:?}"))?;
        let v: usize = v.trim().parse().map_err(|_| format!("bad number in {part:?}"))?;
        match k.trim() {
            "max_clusters" => limits.max_clusters = v,
            "max_depth" => limits.max_depth = v,
            other => return Err(format!("unknown limit {other:?}")),
        }
    }
    Ok(limits)
}

/// Failure of a command: `Usage` exits with 2, `Domain` with 1.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

struct Io<'a> {
    input: Option<PathBuf>,
    stdin: &'a mut dyn Read,
}

impl Io<'_> {
    fn read_text(&mut self) -> Result<String, Failure> {
        let mut text = String::new();
        match &self.input {
            Some(p) => text = std::fs::read_to_string(p).map_err(|e| domain(format!("{}: {e}", p.display())))?,
            None => {
                self.stdin.read_to_string(&mut text).map_err(domain)?;
            }
        }
        Ok(text)
    }

    fn read_seed(&mut self) -> Result<Seed, Failure> {
        let text = self.read_text()?;
        if text.trim().is_empty() {
            return Err(Failure::Usage("expected a seed as JSON on stdin or via --input".into()));
        }
        Seed::from_json_str(text.trim()).map_err(domain)
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("output serializes");
    s.push('\n');
    s
}

/// Parses `argv` (program name first) and runs the command. Returns the
/// process exit status.
pub fn run_cli<I, S>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };
    let format = cli.format.unwrap_or_default();
    let mut io = Io {
        input: cli.input.clone(),
        stdin,
    };
    match execute(cli.command, format, &mut io) {
        Ok(out) => {
            let written = match &cli.output {
                Some(p) => std::fs::write(p, out.as_bytes()),
                None => stdout.write_all(out.as_bytes()),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    1
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

fn execute(command: Command, format: Format, io: &mut Io<'_>) -> Result<String, Failure> {
    match command {
        Command::Build(args) => {
            let seed = family_from_args(&args)?.build().map_err(domain)?;
            Ok(match format {
                Format::Dot => seed.to_dot(),
                Format::Text | Format::Json => seed.to_json_string() + "\n",
            })
        }
        Command::Mutate { at } => {
            let seed = io.read_seed()?;
            if let Some(&bad) = at.iter().find(|&&k| k == 0 || k > seed.n()) {
                return Err(Failure::Usage(format!("vertex {bad} does not exist (seed has {} vertices)", seed.n())));
            }
            let ks: Vec<usize> = at.iter().map(|k| k - 1).collect();
            let out = seed.mutate_sequence(&ks).map_err(domain)?;
            Ok(match format {
                Format::Dot => out.to_dot(),
                Format::Text | Format::Json => out.to_json_string() + "\n",
            })
        }
        Command::Enumerate(args) => {
            let seed = io.read_seed()?;
            let opts = EnumerateOptions {
                limits: args.limits.unwrap_or_default(),
                workers: args.workers,
            };
            let report = enumerate_exchange_graph(&seed, opts).map_err(domain)?;
            log::info!(
                "visited {} seeds in {:?}",
                report.stats.seeds_visited,
                report.stats.wall_time
            );
            Ok(match format {
                Format::Text => {
                    let mut s = format!(
                        "clusters: {}, variables: {} ({} frozen)\n",
                        report.cluster_count(),
                        report.variable_count(),
                        report.frozen_variables.len()
                    );
                    if report.truncated {
                        s.push_str("truncated: limits reached\n");
                    }
                    s
                }
                Format::Json => to_json(&report.to_json(args.variables)),
                Format::Dot => report.to_dot(),
            })
        }
        Command::Classify => {
            let seed = io.read_seed()?;
            let verdict = classify_finite_type(seed.quiver()).map_err(domain)?;
            Ok(match format {
                Format::Json => to_json(&verdict_json(&verdict)),
                _ => match &verdict {
                    TypeVerdict::Finite(_) => format!("finite type: {}\n", verdict.type_name().unwrap()),
                    TypeVerdict::Infinite { witness } => format!(
                        "infinite type: mutation class contains an arrow of multiplicity {}\n",
                        witness.max_multiplicity()
                    ),
                    TypeVerdict::Inconclusive { explored } => {
                        format!("inconclusive: budget exhausted after {explored} quivers\n")
                    }
                },
            })
        }
        Command::Fpoly { limits } => {
            let seed = io.read_seed()?;
            let table = f_polynomials(&seed, limits.unwrap_or_default().into()).map_err(domain)?;
            let ctx = VarContext::standard(seed.ambient_rank());
            let rows: Vec<FpolyRow> = table
                .entries
                .iter()
                .map(|e| FpolyRow {
                    variable: e.variable.display(&ctx).to_string(),
                    f: e.f.display(table.coefficient_count),
                })
                .collect();
            Ok(match format {
                Format::Json => to_json(&rows),
                _ => rows.iter().map(|r| format!("{}  ->  F = {}\n", r.variable, r.f)).collect(),
            })
        }
        Command::Verify { check } => verify(check, format, io),
        Command::Euler { module, flag_type } => {
            let text = std::fs::read_to_string(&module).map_err(|e| domain(format!("{}: {e}", module.display())))?;
            let m = GradedModule::from_json_str(&text).map_err(domain)?;
            let types = match flag_type {
                Some(t) => vec![parse_flag_type(&t).map_err(|e| Failure::Usage(e.to_string()))?],
                None => enumerate_types(&m).map_err(domain)?,
            };
            let mut rows = Vec::new();
            for t in &types {
                let c = euler_characteristic(&m, t).map_err(domain)?;
                rows.push(EulerRow {
                    flag_type: format_flag_type(t),
                    samples: c.samples.iter().map(|&(q, n)| [q as u128, n]).collect(),
                    polynomial: c.polynomial.to_string(),
                    chi: c.euler.to_string(),
                });
            }
            Ok(match format {
                Format::Json => to_json(&rows),
                _ if rows.len() == 1 => format!("chi = {}\n", rows[0].chi),
                _ => rows
                    .iter()
                    .map(|r| format!("type {}: chi = {} (count {})\n", r.flag_type, r.chi, r.polynomial))
                    .collect(),
            })
        }
        Command::Serve {
            port,
            state_dir,
            idle_timeout,
        } => {
            let port = match port {
                Some(p) => p,
                None => match std::env::var(PORT_ENV) {
                    Ok(v) => v.parse().map_err(|_| Failure::Usage(format!("{PORT_ENV}={v:?} is not a port")))?,
                    Err(_) => DEFAULT_PORT,
                },
            };
            let config = ServeConfig {
                port,
                state_dir,
                idle_timeout: Duration::from_secs(idle_timeout),
            };
            let rt = tokio::runtime::Runtime::new().map_err(domain)?;
            rt.block_on(crate::serve::serve(config)).map_err(domain)?;
            Ok(String::new())
        }
    }
}

fn verify(check: VerifyCommand, format: Format, io: &mut Io<'_>) -> Result<String, Failure> {
    match check {
        VerifyCommand::Laurent { rng_seed, walks, depth } => {
            let rng_seed = rng_seed.ok_or_else(|| Failure::Usage("--rng-seed is required".into()))?;
            let seed = io.read_seed()?;
            let mut failures = Vec::new();
            for w in 0..walks {
                if let WalkOutcome::Failure { path, error } = random_walk_laurent_check(&seed, depth, rng_seed.wrapping_add(w as u64)) {
                    failures.push(LaurentFailure {
                        walk: w,
                        path: path.iter().map(|k| k + 1).collect(),
                        error: error.to_string(),
                    });
                }
            }
            let report = LaurentReport {
                walks,
                depth,
                failed: failures.len(),
                failures,
            };
            let text = match format {
                Format::Json => to_json(&report),
                _ => format!("walks: {walks}, depth: {depth}, failures: {}\n", report.failed),
            };
            if report.failed > 0 {
                return Err(Failure::Domain(format!("{}exchange not divisible in {} walk(s)", text, report.failed)));
            }
            Ok(text)
        }
        VerifyCommand::Positivity { limits } => {
            let seed = io.read_seed()?;
            let report = enumerate_exchange_graph(&seed, limits.unwrap_or_default().into()).map_err(domain)?;
            let ctx = VarContext::standard(seed.ambient_rank());
            let bad: Vec<String> = verify_positivity(&report).iter().map(|v| v.display(&ctx).to_string()).collect();
            let out = PositivityReport {
                variables: report.variable_count(),
                truncated: report.truncated,
                violations: bad,
            };
            Ok(match format {
                Format::Json => to_json(&out),
                _ => format!(
                    "variables: {}, negative: {}{}\n",
                    out.variables,
                    out.violations.len(),
                    if out.truncated { " (truncated)" } else { "" }
                ),
            })
        }
        VerifyCommand::Minors {
            n,
            depth,
            spot_checks,
            rng_seed,
        } => {
            let seed = match n {
                Some(n) => build_unitriangular_seed(n).map_err(domain)?.seed,
                None => io.read_seed()?,
            };
            let depth = depth.unwrap_or(usize::MAX);
            let report = verify_exchange_identities(&seed, depth).map_err(domain)?;
            let spot = if spot_checks > 0 {
                let rng = rng_seed.ok_or_else(|| Failure::Usage("--spot-checks requires --rng-seed".into()))?;
                Some(numeric_spot_check(&seed, depth, spot_checks, rng).map_err(domain)?)
            } else {
                None
            };
            let text = match format {
                Format::Json => to_json(&MinorsJson {
                    report: &report,
                    spot_checks: spot,
                }),
                _ => {
                    let mut s = format!(
                        "checked: {}, failed: {}, single minors: {}, clusters: {}\n",
                        report.checked,
                        report.failed,
                        report.single_minors.len(),
                        report.clusters
                    );
                    if let Some(c) = spot {
                        s.push_str(&format!("spot checks: {} agree, {} disagree, {} skipped\n", c.agree, c.disagree, c.skipped));
                    }
                    s
                }
            };
            let spot_failed = spot.is_some_and(|c| c.disagree > 0);
            if report.failed > 0 || spot_failed {
                let first = report.clone().into_result().err().map(|e| e.to_string()).unwrap_or_else(|| "numeric spot check disagreed".into());
                return Err(Failure::Domain(format!("{text}{first}")));
            }
            Ok(text)
        }
    }
}

fn family_from_args(a: &BuildArgs) -> Result<FamilySpec, Failure> {
    let need = |what: &str| Failure::Usage(format!("--family {} needs --{what}", a.family));
    Ok(match a.family.as_str() {
        "rank2" => FamilySpec::Rank2 { a: a.a.unwrap_or(1) },
        "unitriangular" => FamilySpec::Unitriangular {
            n: a.n.ok_or_else(|| need("n"))?,
        },
        "gamma" => FamilySpec::Gamma {
            dynkin: a.dynkin.clone().ok_or_else(|| need("type"))?,
            ell: a.ell.ok_or_else(|| need("ell"))?,
            sources: a.sources.clone(),
        },
        "dynkin" => FamilySpec::Dynkin {
            dynkin: a.dynkin.clone().ok_or_else(|| need("type"))?,
            orientation: a.orientation.clone(),
        },
        other => return Err(Failure::Usage(format!("unknown family {other:?}"))),
    })
}

#[derive(Serialize)]
struct FpolyRow {
    variable: String,
    f: String,
}

#[derive(Serialize)]
struct EulerRow {
    #[serde(rename = "type")]
    flag_type: String,
    samples: Vec<[u128; 2]>,
    polynomial: String,
    chi: String,
}

#[derive(Serialize)]
struct LaurentFailure {
    walk: usize,
    path: Vec<usize>,
    error: String,
}

#[derive(Serialize)]
struct LaurentReport {
    walks: usize,
    depth: usize,
    failed: usize,
    failures: Vec<LaurentFailure>,
}

#[derive(Serialize)]
struct MinorsJson<'a> {
    #[serde(flatten)]
    report: &'a crate::minors::MinorReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    spot_checks: Option<crate::minors::SpotCheck>,
}

#[derive(Serialize)]
struct PositivityReport {
    variables: usize,
    truncated: bool,
    violations: Vec<String>,
}

#[derive(Serialize)]
struct VerdictJson {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    types: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<crate::seed::SeedJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    explored: Option<usize>,
}

fn verdict_json(v: &TypeVerdict) -> VerdictJson {
    match v {
        TypeVerdict::Finite(types) => VerdictJson {
            verdict: "finite",
            types: types.iter().map(|t| t.to_string()).collect(),
            witness: None,
            explored: None,
        },
        TypeVerdict::Infinite { witness } => VerdictJson {
            verdict: "infinite",
            types: Vec::new(),
            witness: Some(Seed::initial(witness.clone()).to_json()),
            explored: None,
        },
        TypeVerdict::Inconclusive { explored } => VerdictJson {
            verdict: "inconclusive",
            types: Vec::new(),
            witness: None,
            explored: Some(*explored),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut input = stdin.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["clusterlab"];
        argv.extend_from_slice(args);
        let code = run_cli(argv, &mut input, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn build_then_enumerate() {
        let (code, seed, _) = run(&["build", "--family", "unitriangular", "--n", "3"], "");
        assert_eq!(code, 0);
        let (code, out, _) = run(&["enumerate"], &seed);
        assert_eq!(code, 0);
        assert_eq!(out, "clusters: 14, variables: 12 (3 frozen)\n");
    }

    #[test]
    fn mutate_sequences_and_errors() {
        let (_, seed, _) = run(&["build", "--family", "rank2", "--a", "1"], "");
        let (code, out, _) = run(&["mutate", "--at", "1"], &seed);
        assert_eq!(code, 0);
        assert!(out.contains("x1^-1 + x1^-1*x2"));
        let (_, back, _) = run(&["mutate", "--at", "1,1"], &seed);
        assert_eq!(back, seed);
        assert_eq!(run(&["mutate", "--at", "3"], &seed).0, 2);
        assert_eq!(run(&["mutate"], &seed).0, 2);
        assert_eq!(run(&["enumerate", "--bogus"], &seed).0, 2);
        assert_eq!(run(&["enumerate"], "{\"n\":2,\"arrows\":[[1,1,1]]}").0, 1);
    }

    #[test]
    fn limits_flag() {
        assert_eq!(parse_limits("max_depth=3").unwrap().max_depth, 3);
        assert!(parse_limits("depth=3").is_err());
        let (_, seed, _) = run(&["build", "--family", "rank2", "--a", "2"], "");
        let (code, out, _) = run(&["enumerate", "--limits", "max_depth=2"], &seed);
        assert_eq!(code, 0);
        assert!(out.contains("truncated"));
    }

    #[test]
    fn classify_and_verify() {
        let (_, seed, _) = run(&["build", "--family", "rank2", "--a", "2"], "");
        assert!(run(&["classify"], &seed).1.starts_with("infinite type"));
        let (_, sl4, _) = run(&["build", "--family", "unitriangular", "--n", "3"], "");
        assert_eq!(run(&["classify"], &sl4).1, "finite type: A3\n");
        assert_eq!(run(&["verify", "laurent"], &sl4).0, 2);
        let (code, out, _) = run(&["verify", "laurent", "--rng-seed", "5", "--walks", "5"], &sl4);
        assert_eq!(code, 0, "{out}");
        let (code, out, _) = run(&["verify", "minors", "--n", "2", "--format", "json"], "");
        assert_eq!(code, 0);
        assert!(out.starts_with("{\"checked\":2,\"failed\":0,\"witnesses\":[]"));
        let (code, out, _) = run(&["verify", "positivity"], &sl4);
        assert_eq!(code, 0);
        assert_eq!(out, "variables: 12, negative: 0\n");
    }

    #[test]
    fn json_output_is_deterministic() {
        let (_, seed, _) = run(&["build", "--family", "gamma", "--type", "A2", "--ell", "1"], "");
        let a = run(&["enumerate", "--format", "json", "--variables", "--workers", "1"], &seed).1;
        let b = run(&["enumerate", "--format", "json", "--variables", "--workers", "3"], &seed).1;
        assert_eq!(a, b);
        let (_, sl4, _) = run(&["build", "--family", "unitriangular", "--n", "3"], "");
        let x = run(&["verify", "laurent", "--rng-seed", "9", "--walks", "3", "--format", "json"], &sl4).1;
        let y = run(&["verify", "laurent", "--rng-seed", "9", "--walks", "3", "--format", "json"], &sl4).1;
        assert_eq!(x, y);
    }
}
