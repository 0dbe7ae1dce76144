//! Minors of the generic upper unitriangular matrix and the exchange
//! identity oracle for seeds whose vertices carry minor labels.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::builders::{BuildError, MinorLabel};
use crate::explore::{enumerate_exchange_graph, EnumerateOptions, Limits, MutationClassReport};
use crate::laurent::{LaurentError, LaurentPoly, VarContext, VarId};
use crate::seed::{Seed, SeedError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinorError {
    #[error("bad minor index: {0}")]
    BadIndex(String),
    #[error("vertex {} carries no minor label", .0 + 1)]
    MissingLabel(usize),
    #[error("exchange identity failed at vertex {} after mutations {path:?}", .vertex + 1)]
    IdentityFailed { path: Vec<usize>, vertex: usize },
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// The `m x m` upper unitriangular matrix with one generator `a_ij` for
/// each `i < j` (1-based), numbered row by row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenericUnitriangular {
    m: usize,
}

impl GenericUnitriangular {
    pub fn new(m: usize) -> Self {
        GenericUnitriangular { m }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn generator_count(&self) -> usize {
        self.m * (self.m.saturating_sub(1)) / 2
    }

    /// Generator for entry `(i, j)`, `1 <= i < j <= m`.
    pub fn generator(&self, i: usize, j: usize) -> Option<VarId> {
        if i == 0 || i >= j || j > self.m {
            return None;
        }
        let before: usize = (1..i).map(|r| self.m - r).sum();
        Some(VarId::from(before + (j - i - 1)))
    }

    pub fn entry(&self, i: usize, j: usize) -> LaurentPoly {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => LaurentPoly::one(),
            std::cmp::Ordering::Greater => LaurentPoly::zero(),
            std::cmp::Ordering::Less => LaurentPoly::var(self.generator(i, j).expect("index in range")),
        }
    }

    /// Names `a12, a13, ...`; an underscore separates indices above 9.
    pub fn context(&self) -> VarContext {
        let mut names = Vec::with_capacity(self.generator_count());
        for i in 1..=self.m {
            for j in i + 1..=self.m {
                names.push(if self.m <= 9 { format!("a{i}{j}") } else { format!("a{i}_{j}") });
            }
        }
        VarContext::from_names(names)
    }

    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<LaurentPoly, MinorError> {
        minor_symbolic(self.m, rows, cols)
    }
}

/// Determinant of the submatrix with the given 1-based rows and columns, by
/// cofactor expansion along the first row.
pub fn minor_symbolic(m: usize, rows: &[usize], cols: &[usize]) -> Result<LaurentPoly, MinorError> {
    let bad = |why: &str| MinorError::BadIndex(format!("{why}: rows {rows:?}, cols {cols:?}, m = {m}"));
    if rows.len() != cols.len() {
        return Err(bad("row and column sets differ in size"));
    }
    if rows.iter().chain(cols).any(|&i| i == 0 || i > m) {
        return Err(bad("index out of range"));
    }
    let distinct = |v: &[usize]| {
        let mut s = v.to_vec();
        s.sort_unstable();
        s.windows(2).all(|w| w[0] != w[1])
    };
    if !distinct(rows) || !distinct(cols) {
        return Err(bad("repeated index"));
    }
    let g = GenericUnitriangular::new(m);
    let mut memo = HashMap::new();
    Ok(cofactor(&g, rows, cols, 0, (1u32 << cols.len()) - 1, &mut memo))
}

fn cofactor(
    g: &GenericUnitriangular,
    rows: &[usize],
    cols: &[usize],
    r: usize,
    free: u32,
    memo: &mut HashMap<(usize, u32), LaurentPoly>,
) -> LaurentPoly {
    if r == rows.len() {
        return LaurentPoly::one();
    }
    if let Some(v) = memo.get(&(r, free)) {
        return v.clone();
    }
    let mut total = LaurentPoly::zero();
    let mut sign_positive = true;
    for (c, &col) in cols.iter().enumerate() {
        if free & (1 << c) == 0 {
            continue;
        }
        let e = g.entry(rows[r], col);
        if !e.is_zero() {
            let sub = cofactor(g, rows, cols, r + 1, free & !(1 << c), memo);
            let t = &e * &sub;
            total = if sign_positive { &total + &t } else { &total - &t };
        }
        sign_positive = !sign_positive;
    }
    memo.insert((r, free), total.clone());
    total
}

pub fn minor_of_label(m: usize, label: &MinorLabel) -> Result<LaurentPoly, MinorError> {
    minor_symbolic(m, &label.rows, &label.cols)
}

/// Reads a minor label off every vertex label of the seed's quiver, and the
/// matrix size implied by the largest index.
pub fn seed_minor_labels(seed: &Seed) -> Result<(Vec<MinorLabel>, usize), MinorError> {
    let labels = seed.quiver().labels().ok_or(MinorError::MissingLabel(0))?;
    let parsed = labels
        .iter()
        .enumerate()
        .map(|(v, l)| l.parse::<MinorLabel>().map_err(|_| MinorError::MissingLabel(v)))
        .collect::<Result<Vec<_>, _>>()?;
    let m = parsed
        .iter()
        .flat_map(|l| l.rows.iter().chain(&l.cols))
        .copied()
        .max()
        .unwrap_or(1)
        .max(2);
    Ok((parsed, m))
}

/// All minors that are not identically constant, keyed by polynomial. When
/// two label sets give the same polynomial the one of smallest size (then
/// lexicographically first) is kept, so `a23` is `D_{2,3}`.
pub fn nonconstant_minors(m: usize) -> HashMap<LaurentPoly, MinorLabel> {
    let mut out: HashMap<LaurentPoly, MinorLabel> = HashMap::new();
    for size in 1..m {
        for rows in subsets(m, size) {
            for cols in subsets(m, size) {
                let p = minor_symbolic(m, &rows, &cols).expect("valid indices");
                if p.variables().is_empty() {
                    continue;
                }
                let label = MinorLabel::new(rows.clone(), cols.clone()).expect("valid label");
                out.entry(p).and_modify(|l| {
                    if (label.size(), &label) < (l.size(), &*l) {
                        *l = label.clone();
                    }
                }).or_insert(label);
            }
        }
    }
    out
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, m, k, &mut Vec::new(), &mut out);
    out
}

/// A mutation whose exchange identity failed in the `a_ij`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureWitness {
    /// 1-based mutation sequence leading to the seed that was mutated.
    pub path: Vec<usize>,
    /// 1-based vertex of the failing exchange.
    pub vertex: usize,
    pub reason: String,
}

/// A mutated variable that is a single minor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorMatch {
    pub path: Vec<usize>,
    pub vertex: usize,
    pub minor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorReport {
    pub checked: usize,
    pub failed: usize,
    pub witnesses: Vec<FailureWitness>,
    pub single_minors: Vec<MinorMatch>,
    /// Cluster variables that are not polynomials in the `a_ij`.
    pub non_polynomial: usize,
    pub clusters: usize,
    pub truncated: bool,
}

impl MinorReport {
    pub fn into_result(self) -> Result<MinorReport, MinorError> {
        match self.witnesses.first() {
            Some(w) => Err(MinorError::IdentityFailed {
                path: w.path.iter().map(|k| k - 1).collect(),
                vertex: w.vertex - 1,
            }),
            None => Ok(self),
        }
    }
}

struct EdgeOutcome {
    failure: Option<String>,
    new_var: Option<LaurentPoly>,
}

/// Substitutes each vertex's minor for its initial variable and checks, for
/// every mutation out of every cluster within `depth` mutations of `seed`,
/// that `old * new = in + out` holds in `Z[a_ij]` with `new` obtained by
/// substituting into its Laurent expression. The seed's variables must be
/// the initial generators.
pub fn verify_exchange_identities(seed: &Seed, depth: usize) -> Result<MinorReport, MinorError> {
    let (labels, m) = seed_minor_labels(seed)?;
    let images = labels
        .iter()
        .map(|l| minor_of_label(m, l))
        .collect::<Result<Vec<_>, _>>()?;
    let report = enumerate_exchange_graph(
        seed,
        EnumerateOptions::from(Limits {
            max_depth: depth,
            ..Limits::default()
        }),
    )?;
    let minors = nonconstant_minors(m);
    let mutable = seed.quiver().mutable();

    let tasks: Vec<(usize, usize)> = (0..report.cluster_count())
        .flat_map(|c| mutable.iter().map(move |&k| (c, k)))
        .collect();
    let outcomes: Vec<EdgeOutcome> = tasks
        .par_iter()
        .map(|&(c, k)| check_edge(&report.seeds[c], k, &images))
        .collect();

    let mut witnesses = Vec::new();
    let mut single_minors = Vec::new();
    let mut seen_vars = std::collections::HashSet::new();
    for (&(c, k), out) in tasks.iter().zip(&outcomes) {
        let path: Vec<usize> = report.path_to(c).iter().map(|v| v + 1).collect();
        if let Some(reason) = &out.failure {
            witnesses.push(FailureWitness {
                path: path.clone(),
                vertex: k + 1,
                reason: reason.clone(),
            });
        }
        if let Some(v) = &out.new_var {
            if seen_vars.insert(v.clone()) {
                if let Some(label) = minors.get(v) {
                    single_minors.push(MinorMatch {
                        path,
                        vertex: k + 1,
                        minor: label.to_string(),
                    });
                }
            }
        }
    }
    let non_polynomial = report
        .variables
        .iter()
        .filter(|v| !v.substitute(&images).map(|p| p.is_polynomial()).unwrap_or(false))
        .count();

    Ok(MinorReport {
        checked: tasks.len(),
        failed: witnesses.len(),
        witnesses,
        single_minors,
        non_polynomial,
        clusters: report.cluster_count(),
        truncated: report.truncated,
    })
}

fn check_edge(seed: &Seed, k: usize, images: &[LaurentPoly]) -> EdgeOutcome {
    let fail = |reason: String| EdgeOutcome {
        failure: Some(reason),
        new_var: None,
    };
    let mutated = match seed.mutate(k) {
        Ok(s) => s,
        Err(e) => return fail(e.to_string()),
    };
    let sub = |p: &LaurentPoly| p.substitute(images);
    let (incoming, outgoing) = seed.exchange_monomials(k);
    let parts = (sub(seed.var(k)), sub(mutated.var(k)), sub(&incoming), sub(&outgoing));
    match parts {
        (Ok(old), Ok(new), Ok(i), Ok(o)) => {
            let lhs = &old * &new;
            let rhs = &i + &o;
            if lhs != rhs {
                return fail("old * new differs from in + out".into());
            }
            if !new.is_polynomial() {
                return EdgeOutcome {
                    failure: Some("new variable is not a polynomial in the a_ij".into()),
                    new_var: Some(new),
                };
            }
            EdgeOutcome {
                failure: None,
                new_var: Some(new),
            }
        }
        (a, b, c, d) => {
            let e = [a.err(), b.err(), c.err(), d.err()].into_iter().flatten().next();
            fail(format!("substitution failed: {}", e.map(|e| e.to_string()).unwrap_or_default()))
        }
    }
}

/// Entries `a_ij` (1-based, `i < j`) drawn uniformly from `[-5, 5]`.
pub fn random_unitriangular_eval(m: usize, rng_seed: u64) -> BTreeMap<(usize, usize), i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut out = BTreeMap::new();
    for i in 1..=m {
        for j in i + 1..=m {
            out.insert((i, j), rng.random_range(-5..=5));
        }
    }
    out
}

fn assignment_lookup(m: usize, values: &BTreeMap<(usize, usize), i64>) -> Vec<BigRational> {
    let g = GenericUnitriangular::new(m);
    let mut out = vec![BigRational::from_integer(0.into()); g.generator_count()];
    for (&(i, j), &v) in values {
        if let Some(id) = g.generator(i, j) {
            out[id.index()] = BigRational::from_integer(v.into());
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SpotCheck {
    pub agree: usize,
    pub disagree: usize,
    /// Evaluations skipped because some minor vanished at a pole.
    pub skipped: usize,
}

/// Compares, at `trials` random integer matrices, each cluster variable of
/// the class evaluated numerically at the minors' values with its symbolic
/// substitution evaluated at the same matrix.
pub fn numeric_spot_check(seed: &Seed, depth: usize, trials: usize, rng_seed: u64) -> Result<SpotCheck, MinorError> {
    let (labels, m) = seed_minor_labels(seed)?;
    let images = labels
        .iter()
        .map(|l| minor_of_label(m, l))
        .collect::<Result<Vec<_>, _>>()?;
    let report: MutationClassReport = enumerate_exchange_graph(
        seed,
        EnumerateOptions::from(Limits {
            max_depth: depth,
            ..Limits::default()
        }),
    )?;
    let symbolic = report
        .variables
        .iter()
        .map(|v| Ok((v.clone(), v.substitute(&images)?)))
        .collect::<Result<Vec<_>, LaurentError>>()?;

    let mut result = SpotCheck::default();
    for t in 0..trials {
        let values = assignment_lookup(m, &random_unitriangular_eval(m, rng_seed.wrapping_add(t as u64)));
        let at_a = |p: &LaurentPoly| p.eval_with(|v| values.get(v.index()).cloned());
        let minor_values = images.iter().map(at_a).collect::<Result<Vec<_>, _>>()?;
        for (x_expr, a_expr) in &symbolic {
            let numeric = x_expr.eval_with(|v| minor_values.get(v.index()).cloned());
            match numeric {
                Err(LaurentError::ZeroAtPole(_)) => result.skipped += 1,
                Err(e) => return Err(e.into()),
                Ok(val) => {
                    if at_a(a_expr)? == val {
                        result.agree += 1;
                    } else {
                        result.disagree += 1;
                    }
                }
            }
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_unitriangular_seed;

    fn a(s: &str, m: usize) -> LaurentPoly {
        LaurentPoly::parse(s, &GenericUnitriangular::new(m).context()).unwrap()
    }

    #[test]
    fn minor_examples() {
        assert_eq!(minor_symbolic(4, &[1, 2], &[2, 3]).unwrap(), a("a12*a23 - a13", 4));
        assert_eq!(minor_symbolic(4, &[1], &[4]).unwrap(), a("a14", 4));
        assert!(minor_symbolic(4, &[1, 2, 3], &[1, 2, 3]).unwrap().is_one());
        assert!(minor_symbolic(4, &[2], &[1]).unwrap().is_zero());
        assert!(matches!(minor_symbolic(4, &[1], &[5]), Err(MinorError::BadIndex(_))));
        assert!(matches!(minor_symbolic(4, &[1, 2], &[3]), Err(MinorError::BadIndex(_))));
        assert!(matches!(minor_symbolic(4, &[1, 1], &[2, 3]), Err(MinorError::BadIndex(_))));
    }

    #[test]
    fn generic_matrix_indexing() {
        let g = GenericUnitriangular::new(4);
        assert_eq!(g.generator_count(), 6);
        assert_eq!(g.generator(1, 2), Some(VarId(0)));
        assert_eq!(g.generator(3, 4), Some(VarId(5)));
        assert_eq!(g.generator(2, 2), None);
        assert_eq!(a("a13*a24", 4).display(&g.context()).to_string(), "a13*a24");
    }

    #[test]
    fn sl3_relation() {
        let s = build_unitriangular_seed(2).unwrap().seed;
        let d = |r: &[usize], c: &[usize]| minor_symbolic(3, r, c).unwrap();
        assert_eq!(
            &d(&[1], &[2]) * &d(&[2], &[3]),
            &d(&[1], &[3]) + &d(&[1, 2], &[2, 3])
        );
        let r = verify_exchange_identities(&s, usize::MAX).unwrap();
        assert_eq!(r.failed, 0);
        assert_eq!(r.checked, 2);
        assert_eq!(r.single_minors[0].minor, "D_{2,3}");
    }

    #[test]
    fn sl4_first_mutation_gives_a23() {
        let s = build_unitriangular_seed(3).unwrap().seed;
        let r = verify_exchange_identities(&s, 1).unwrap();
        assert_eq!(r.failed, 0);
        let first = r.single_minors.iter().find(|m| m.path.is_empty() && m.vertex == 1).unwrap();
        assert_eq!(first.minor, "D_{2,3}");
    }

    #[test]
    fn wrong_label_is_caught() {
        let u = build_unitriangular_seed(2).unwrap();
        let mut labels: Vec<String> = u.minors.iter().map(|m| m.to_string()).collect();
        labels[0] = "D_{1,3}".into();
        let s = u.seed.clone().with_labels(labels);
        let r = verify_exchange_identities(&s, 2).unwrap();
        assert!(r.failed > 0);
        assert!(matches!(r.into_result(), Err(MinorError::IdentityFailed { .. })));
    }

    #[test]
    fn random_eval_is_deterministic() {
        let x = random_unitriangular_eval(4, 9);
        assert_eq!(x, random_unitriangular_eval(4, 9));
        assert_eq!(x.len(), 6);
        assert!(x.values().all(|v| (-5..=5).contains(v)));
        let zero: BTreeMap<(usize, usize), i64> = x.keys().map(|&k| (k, 0)).collect();
        let vals = assignment_lookup(4, &zero);
        let a14 = minor_symbolic(4, &[1], &[4]).unwrap();
        assert_eq!(a14.eval_with(|v| vals.get(v.index()).cloned()).unwrap(), BigRational::from_integer(0.into()));
    }

    #[test]
    fn spot_checks_agree() {
        let s = build_unitriangular_seed(2).unwrap().seed;
        let c = numeric_spot_check(&s, usize::MAX, 20, 3).unwrap();
        assert_eq!(c.disagree, 0);
        assert!(c.agree > 0);
    }
}
