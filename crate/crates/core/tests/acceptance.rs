//! Acceptance suite. Prints one PASS/FAIL line per criterion with its wall
//! time and limit, and exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use clusterlab::builders::{build_gamma_ell, build_rank2, build_unitriangular_seed, DynkinType, GammaSpec};
use clusterlab::explore::{
    classify_finite_type, enumerate_exchange_graph, f_polynomials, random_walk_laurent_check, verify_positivity,
    EnumerateOptions, MutationClassReport, TypeVerdict, WalkOutcome,
};
use clusterlab::flagvar::{a3_example_module, count_flags, enumerate_types, euler_characteristic, format_flag_type};
use clusterlab::laurent::LaurentPoly;
use clusterlab::minors::{minor_symbolic, verify_exchange_identities};
use clusterlab::seed::Seed;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p(s: &str) -> LaurentPoly {
    s.parse().expect("valid polynomial")
}

fn enumerate(seed: &Seed) -> Result<MutationClassReport, String> {
    enumerate_exchange_graph(seed, EnumerateOptions::default()).map_err(|e| e.to_string())
}

fn gamma(g: DynkinType, ell: usize) -> Result<Seed, String> {
    build_gamma_ell(&GammaSpec::new(g, ell)).map_err(|e| e.to_string())
}

fn rank2_a1() -> Check {
    let report = enumerate(&build_rank2(1).map_err(|e| e.to_string())?)?;
    ensure(!report.truncated, || "enumeration truncated".into())?;
    ensure(report.cluster_count() == 5, || format!("{} clusters", report.cluster_count()))?;
    let expected: BTreeSet<LaurentPoly> = [
        p("x1"),
        p("x2"),
        p("x1^-1 + x1^-1*x2"),
        p("x1^-1*x2^-1 + x1^-1 + x2^-1"),
        p("x2^-1 + x1*x2^-1"),
    ]
    .into_iter()
    .collect();
    ensure(report.variables == expected, || {
        format!("variables {:?}", report.variables.iter().map(|v| v.to_string()).collect::<Vec<_>>())
    })
}

fn rank2_a2() -> Check {
    let mut seed = build_rank2(2).map_err(|e| e.to_string())?;
    let mut seen: Vec<LaurentPoly> = seed.vars().to_vec();
    for step in 0..12 {
        let k = step % 2;
        seed = seed.mutate(k).map_err(|e| e.to_string())?;
        let v = seed.var(k).clone();
        ensure(v.is_positive(), || format!("step {}: negative coefficient in {v}", step + 1))?;
        ensure(!seen.contains(&v), || format!("step {}: variable {v} repeats", step + 1))?;
        seen.push(v);
    }
    Ok(())
}

fn sl4() -> Check {
    let u = build_unitriangular_seed(3).map_err(|e| e.to_string())?;
    let report = enumerate(&u.seed)?;
    ensure(report.cluster_count() == 14, || format!("{} clusters", report.cluster_count()))?;
    ensure(report.variable_count() == 12, || format!("{} variables", report.variable_count()))?;
    ensure(report.frozen_variables.len() == 3, || format!("{} frozen", report.frozen_variables.len()))?;
    ensure(report.degrees().iter().all(|&d| d == 3), || format!("degrees {:?}", report.degrees()))
}

fn minors() -> Check {
    let u = build_unitriangular_seed(3).map_err(|e| e.to_string())?;
    let report = verify_exchange_identities(&u.seed, usize::MAX).map_err(|e| e.to_string())?;
    ensure(!report.truncated && report.clusters == 14, || format!("{} clusters checked", report.clusters))?;
    ensure(report.checked == 42, || format!("{} exchanges checked", report.checked))?;
    ensure(report.failed == 0, || format!("failures {:?}", report.witnesses))?;
    let first = report.single_minors.iter().find(|m| m.path.is_empty() && m.vertex == 1);
    ensure(first.is_some_and(|m| m.minor == "D_{2,3}"), || format!("vertex 1 gives {first:?}"))?;

    let d = |r: &[usize], c: &[usize]| minor_symbolic(3, r, c).map_err(|e| e.to_string());
    let lhs = &d(&[1], &[2])? * &d(&[2], &[3])?;
    let rhs = &d(&[1], &[3])? + &d(&[1, 2], &[2, 3])?;
    ensure(lhs == rhs, || format!("SL3: {lhs} != {rhs}"))?;
    let sl3 = build_unitriangular_seed(2).map_err(|e| e.to_string())?;
    let r3 = verify_exchange_identities(&sl3.seed, usize::MAX).map_err(|e| e.to_string())?;
    ensure(r3.failed == 0 && r3.checked == 2, || format!("SL3 report {r3:?}"))?;
    let m3 = r3.single_minors.iter().find(|m| m.path.is_empty() && m.vertex == 1);
    ensure(m3.is_some_and(|m| m.minor == "D_{2,3}"), || format!("SL3 vertex 1 gives {m3:?}"))
}

fn expect_finite(seed: &Seed, expected: &str) -> Check {
    let v = classify_finite_type(seed.quiver()).map_err(|e| e.to_string())?;
    match &v {
        TypeVerdict::Finite(_) if v.type_name().as_deref() == Some(expected) => Ok(()),
        other => Err(format!("expected Finite({expected}), got {other:?}")),
    }
}

fn gamma_classification() -> Check {
    let catalan = [2, 5, 14, 42];
    for ell in 1..=4 {
        let seed = gamma(DynkinType::a(1), ell)?;
        expect_finite(&seed, &format!("A{ell}"))?;
        let report = enumerate(&seed)?;
        let want = catalan[ell - 1];
        ensure(report.cluster_count() == want, || {
            format!("(A1, {ell}): {} clusters, type A{ell} has {want}", report.cluster_count())
        })?;
    }
    expect_finite(&gamma(DynkinType::a(2), 1)?, "A2")?;
    expect_finite(&gamma(DynkinType::a(3), 1)?, "A3")
}

fn gamma_a2_2() -> Check {
    let seed = gamma(DynkinType::a(2), 2)?;
    expect_finite(&seed, "D4")?;
    let report = enumerate(&seed)?;
    ensure(report.cluster_count() == 50, || format!("{} clusters", report.cluster_count()))?;
    let mutable = report.mutable_variables().count();
    ensure(mutable == 16, || format!("{mutable} non-frozen variables"))?;
    ensure(report.frozen_variables.len() == 2, || format!("{} frozen", report.frozen_variables.len()))
}

fn flag_euler() -> Check {
    let m = a3_example_module();
    let types = enumerate_types(&m).map_err(|e| e.to_string())?;
    let names: Vec<String> = types.iter().map(|t| format_flag_type(t)).collect();
    ensure(names == ["2,1,2,3", "2,2,1,3", "2,2,3,1", "2,3,2,1"], || format!("types {names:?}"))?;
    let mut chis = Vec::new();
    for ty in &types {
        let c = euler_characteristic(&m, ty).map_err(|e| e.to_string())?;
        chis.push(i64::try_from(&c.euler).map_err(|e| e.to_string())?);
    }
    ensure(chis == [1, 2, 2, 1], || format!("chi values {chis:?}"))?;
    ensure(chis.iter().sum::<i64>() == 6, || "total is not 6".into())?;
    for (ty, &chi) in types.iter().zip(&chis) {
        if chi != 2 {
            continue;
        }
        for q in [2u32, 3, 5] {
            let n = count_flags(&m, ty, q).map_err(|e| e.to_string())?;
            ensure(n == u128::from(q) + 1, || format!("type ({}) at q = {q}: {n}", format_flag_type(ty)))?;
        }
    }
    Ok(())
}

fn laurent_walks() -> Check {
    let seeds = [
        ("SL4", build_unitriangular_seed(3).map_err(|e| e.to_string())?.seed),
        ("Γ1(A2)", gamma(DynkinType::a(2), 1)?),
    ];
    for (name, seed) in &seeds {
        for w in 0..200 {
            if let WalkOutcome::Failure { path, error } = random_walk_laurent_check(seed, 8, w) {
                return Err(format!("{name}, walk {w}: {error} after {path:?}"));
            }
        }
    }
    Ok(())
}

fn positivity() -> Check {
    let mut seeds = vec![
        ("rank 2, a = 1".to_string(), build_rank2(1).map_err(|e| e.to_string())?),
        ("SL4".to_string(), build_unitriangular_seed(3).map_err(|e| e.to_string())?.seed),
    ];
    for (g, ell) in [(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (3, 1), (2, 2)] {
        seeds.push((format!("Γ{ell}(A{g})"), gamma(DynkinType::a(g), ell)?));
    }
    for (name, seed) in &seeds {
        let report = enumerate(seed)?;
        let bad = verify_positivity(&report);
        ensure(bad.is_empty(), || format!("{name}: {} variables with negative coefficients", bad.len()))?;
    }
    Ok(())
}

fn fpolys() -> Check {
    let seeds = [
        ("rank 2, a = 1", build_rank2(1).map_err(|e| e.to_string())?),
        ("Γ1(A2)", gamma(DynkinType::a(2), 1)?),
    ];
    for (name, seed) in &seeds {
        let table = f_polynomials(seed, EnumerateOptions::default()).map_err(|e| e.to_string())?;
        for e in &table.entries {
            ensure(e.f.constant_term() == 1.into(), || format!("{name}: F of {} has constant term {}", e.variable, e.f.constant_term()))?;
        }
        let n = seed.n();
        let specialized: BTreeSet<LaurentPoly> =
            table.entries.iter().map(|e| e.principal.specialize_to_one(|v| v.index() >= n)).collect();
        let ordinary = enumerate(seed)?.variables;
        ensure(specialized == ordinary, || format!("{name}: specialization gives {} variables, expected {}", specialized.len(), ordinary.len()))?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 10] = [
        ("rank-2 a=1: 5 clusters, exact variables", rank2_a1, Duration::from_millis(100)),
        ("rank-2 a=2: depth-12 walk distinct and positive", rank2_a2, Duration::from_secs(1)),
        ("SL4: 14 clusters, 12 variables (3 frozen), 3-regular", sl4, Duration::from_secs(1)),
        ("minor identities: SL4 class, vertex 1 -> D_{2,3}, SL3 relation", minors, Duration::from_secs(5)),
        ("Γ classification: (A1,1..4), (A2,1), (A3,1)", gamma_classification, Duration::from_secs(5)),
        ("(A2,2): D4, 50 clusters, 16 + 2 frozen variables", gamma_a2_2, Duration::from_secs(30)),
        ("flag Euler: chi 1,2,2,1, total 6, q+1 counts", flag_euler, Duration::from_secs(10)),
        ("Laurent walks: 200 x depth 8 from SL4 and Γ1(A2)", laurent_walks, Duration::from_secs(60)),
        ("positivity across all finite enumerations", positivity, Duration::from_secs(60)),
        ("F-polynomials: constant term 1, specialization", fpolys, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = result.and_then(|()| {
            ensure(took <= limit, || format!("took {took:.3?}, limit {limit:?}"))
        });
        match result {
            Ok(()) => println!("PASS  {name}  ({took:.3?} / {limit:?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}  ({took:.3?} / {limit:?}): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
