//! Exchange-graph enumeration, finite-type classification, positivity and
//! Laurent checks, and F-polynomials via principal coefficients.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::builders::{DynkinFamily, DynkinType};
use crate::laurent::{LaurentPoly, VarContext, VarId};
use crate::seed::{Quiver, Seed, SeedError, DEFAULT_CANONICAL_BOUND};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_clusters: usize,
    pub max_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_clusters: 100_000,
            max_depth: 64,
        }
    }
}

/// Options for [`enumerate_exchange_graph`]. `workers == 1` runs the BFS on
/// the calling thread; `0` uses rayon's global pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub limits: Limits,
    pub workers: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            limits: Limits::default(),
            workers: 0,
        }
    }
}

impl From<Limits> for EnumerateOptions {
    fn from(limits: Limits) -> Self {
        EnumerateOptions { limits, workers: 0 }
    }
}

#[derive(Debug, Clone, Default)]
pub struct EnumerationStats {
    pub seeds_visited: usize,
    pub depth_reached: usize,
    pub wall_time: Duration,
}

/// Result of a breadth-first walk over the exchange graph. Clusters are
/// numbered in discovery order; cluster 0 is the initial one.
#[derive(Debug, Clone)]
pub struct MutationClassReport {
    /// Each cluster as a sorted variable list, frozen variables included.
    pub clusters: Vec<Vec<LaurentPoly>>,
    /// The first seed reached for each cluster.
    pub seeds: Vec<Seed>,
    /// For each cluster after the first, the cluster it was reached from
    /// and the vertex mutated.
    pub parents: Vec<Option<(usize, usize)>>,
    pub variables: BTreeSet<LaurentPoly>,
    pub frozen_variables: BTreeSet<LaurentPoly>,
    /// Undirected edges `(a, b)` with `a < b`.
    pub edges: BTreeSet<(usize, usize)>,
    pub mutable_count: usize,
    pub truncated: bool,
    pub stats: EnumerationStats,
}

impl MutationClassReport {
    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn mutable_variables(&self) -> impl Iterator<Item = &LaurentPoly> {
        self.variables.iter().filter(move |v| !self.frozen_variables.contains(v))
    }

    /// Mutation sequence (0-based vertices) from the initial seed to the
    /// stored seed of cluster `c`.
    pub fn path_to(&self, c: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut cur = c;
        while let Some((prev, k)) = self.parents[cur] {
            path.push(k);
            cur = prev;
        }
        path.reverse();
        path
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.clusters.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Every cluster has exactly one neighbour per mutable vertex.
    pub fn is_regular(&self) -> bool {
        self.degrees().iter().all(|&d| d == self.mutable_count)
    }

    pub fn to_json(&self, with_variables: bool) -> ReportJson {
        let ctx = VarContext::standard(self.seeds.first().map(|s| s.ambient_rank()).unwrap_or(0));
        ReportJson {
            clusters: self.cluster_count(),
            variables: self.variable_count(),
            frozen: self.frozen_variables.len(),
            edges: self.edges.len(),
            regular: self.is_regular(),
            truncated: self.truncated,
            seeds_visited: self.stats.seeds_visited,
            variable_list: with_variables
                .then(|| self.variables.iter().map(|v| v.display(&ctx).to_string()).collect()),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph exchange {\n");
        for i in 0..self.clusters.len() {
            let _ = writeln!(s, "  c{i};");
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "  c{a} -- c{b};");
        }
        s.push_str("}\n");
        s
    }
}

/// Wire form of a [`MutationClassReport`]. Wall time is left out so that
/// repeated runs serialize identically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportJson {
    pub clusters: usize,
    pub variables: usize,
    pub frozen: usize,
    pub edges: usize,
    pub regular: bool,
    pub truncated: bool,
    pub seeds_visited: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variable_list: Option<Vec<String>>,
}

/// Level-synchronous BFS over seeds, deduplicated by cluster. Mutations of a
/// level are computed in parallel and merged in a fixed order, so the
/// report does not depend on the worker count.
pub fn enumerate_exchange_graph(seed: &Seed, opts: EnumerateOptions) -> Result<MutationClassReport, SeedError> {
    let run = || enumerate_inner(seed, opts.limits, opts.workers != 1);
    if opts.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| SeedError::Malformed(format!("thread pool: {e}")))?;
        pool.install(run)
    } else {
        run()
    }
}

fn enumerate_inner(seed: &Seed, limits: Limits, parallel: bool) -> Result<MutationClassReport, SeedError> {
    let start = Instant::now();
    let mutable = seed.quiver().mutable();
    let frozen_variables: BTreeSet<LaurentPoly> = seed.quiver().frozen().into_iter().map(|v| seed.var(v).clone()).collect();

    let mut index: HashMap<Vec<LaurentPoly>, usize> = HashMap::new();
    let mut clusters = vec![seed.cluster()];
    let mut seeds = vec![seed.clone()];
    let mut parents = vec![None];
    index.insert(clusters[0].clone(), 0);
    let mut edges = BTreeSet::new();
    let mut truncated = false;
    let mut seeds_visited = 1;
    let mut frontier = vec![0usize];
    let mut depth = 0;

    while !frontier.is_empty() {
        if depth >= limits.max_depth {
            truncated = true;
            break;
        }
        let tasks: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&c| mutable.iter().map(move |&k| (c, k)))
            .collect();
        let step = |&(c, k): &(usize, usize)| seeds[c].mutate(k).map(|s| (c, k, s));
        let results: Vec<Result<(usize, usize, Seed), SeedError>> = if parallel {
            tasks.par_iter().map(step).collect()
        } else {
            tasks.iter().map(step).collect()
        };
        seeds_visited += results.len();

        let mut next = Vec::new();
        for r in results {
            let (from, k, s) = r?;
            let key = s.cluster();
            let to = match index.get(&key) {
                Some(&i) => i,
                None => {
                    if clusters.len() >= limits.max_clusters {
                        truncated = true;
                        continue;
                    }
                    let i = clusters.len();
                    index.insert(key.clone(), i);
                    clusters.push(key);
                    seeds.push(s);
                    parents.push(Some((from, k)));
                    next.push(i);
                    i
                }
            };
            if from != to {
                edges.insert((from.min(to), from.max(to)));
            }
        }
        frontier = next;
        depth += 1;
    }

    let variables = clusters.iter().flatten().cloned().collect();
    Ok(MutationClassReport {
        clusters,
        seeds,
        parents,
        variables,
        frozen_variables,
        edges,
        mutable_count: mutable.len(),
        truncated,
        stats: EnumerationStats {
            seeds_visited,
            depth_reached: depth,
            wall_time: start.elapsed(),
        },
    })
}

/// Outcome of finite-type classification of a quiver's principal part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeVerdict {
    /// One Dynkin type per connected component of the principal part,
    /// sorted.
    Finite(Vec<DynkinType>),
    /// A quiver in the mutation class with an arrow of multiplicity >= 2.
    Infinite { witness: Quiver },
    /// The node budget ran out before either kind of evidence turned up.
    Inconclusive { explored: usize },
}

impl TypeVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, TypeVerdict::Finite(_))
    }

    pub fn type_name(&self) -> Option<String> {
        match self {
            TypeVerdict::Finite(types) if types.is_empty() => Some("empty".into()),
            TypeVerdict::Finite(types) => Some(types.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" x ")),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Quivers explored per component before giving up.
    pub node_budget: usize,
    pub canonical_bound: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            node_budget: 100_000,
            canonical_bound: DEFAULT_CANONICAL_BOUND,
        }
    }
}

pub fn classify_finite_type(q: &Quiver) -> Result<TypeVerdict, SeedError> {
    classify_finite_type_with(q, ClassifyOptions::default())
}

/// Classifies the principal part (frozen vertices dropped) component by
/// component. Each component's quiver mutation class is searched breadth
/// first up to isomorphism; an arrow of multiplicity >= 2 proves infinite
/// type, and a member whose underlying graph is an ADE tree proves finite
/// type and names it.
pub fn classify_finite_type_with(q: &Quiver, opts: ClassifyOptions) -> Result<TypeVerdict, SeedError> {
    let principal = q.principal_part();
    let mut types = Vec::new();
    let mut inconclusive = None;
    for comp in principal.components() {
        let sub = principal.induced(&comp);
        match classify_component(&sub, opts)? {
            TypeVerdict::Finite(t) => types.extend(t),
            TypeVerdict::Infinite { witness } => return Ok(TypeVerdict::Infinite { witness }),
            TypeVerdict::Inconclusive { explored } => inconclusive = Some(explored),
        }
    }
    if let Some(explored) = inconclusive {
        return Ok(TypeVerdict::Inconclusive { explored });
    }
    types.sort();
    Ok(TypeVerdict::Finite(types))
}

fn classify_component(q: &Quiver, opts: ClassifyOptions) -> Result<TypeVerdict, SeedError> {
    let mut seen: HashSet<_> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(q.canonical_key_bounded(opts.canonical_bound)?);
    queue.push_back(q.clone());
    let mut explored = 0;
    while let Some(cur) = queue.pop_front() {
        if cur.max_multiplicity() >= 2 {
            return Ok(TypeVerdict::Infinite { witness: cur });
        }
        if let Some(t) = recognize_dynkin_tree(&cur) {
            return Ok(TypeVerdict::Finite(vec![t]));
        }
        explored += 1;
        if explored >= opts.node_budget {
            return Ok(TypeVerdict::Inconclusive { explored });
        }
        for k in cur.mutable() {
            let next = cur.mutate(k)?;
            if seen.insert(next.canonical_key_bounded(opts.canonical_bound)?) {
                queue.push_back(next);
            }
        }
    }
    // A finite class always contains a Dynkin member, so this is only
    // reachable for classes the criteria above cannot decide.
    Ok(TypeVerdict::Inconclusive { explored })
}

/// Names the Dynkin diagram formed by the underlying graph of a connected
/// quiver with simple arrows, if it is an ADE tree.
pub fn recognize_dynkin_tree(q: &Quiver) -> Option<DynkinType> {
    let n = q.n();
    if n == 0 || q.max_multiplicity() > 1 || q.components().len() != 1 {
        return None;
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|v| (0..n).filter(|&w| q.b(v, w) != 0).collect()).collect();
    let edge_count: usize = adj.iter().map(|a| a.len()).sum::<usize>() / 2;
    if edge_count != n - 1 {
        return None;
    }
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    match branch.as_slice() {
        [] => Some(DynkinType::a(n)),
        [b] if adj[*b].len() == 3 => {
            let mut legs: Vec<usize> = adj[*b]
                .iter()
                .map(|&start| {
                    let (mut prev, mut cur, mut len) = (*b, start, 1);
                    while let Some(&nxt) = adj[cur].iter().find(|&&w| w != prev) {
                        prev = cur;
                        cur = nxt;
                        len += 1;
                    }
                    len
                })
                .collect();
            legs.sort_unstable();
            match legs.as_slice() {
                [1, 1, r] => DynkinType::new(DynkinFamily::D, r + 3).ok(),
                [1, 2, 2] => Some(DynkinType::e(6)),
                [1, 2, 3] => Some(DynkinType::e(7)),
                [1, 2, 4] => Some(DynkinType::e(8)),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Variables of the report with a nonpositive coefficient (or zero).
pub fn verify_positivity(report: &MutationClassReport) -> Vec<LaurentPoly> {
    report.variables.iter().filter(|v| !v.is_positive()).cloned().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WalkOutcome {
    Ok { path: Vec<usize> },
    Failure { path: Vec<usize>, error: SeedError },
}

impl WalkOutcome {
    pub fn is_ok(&self) -> bool {
        matches!(self, WalkOutcome::Ok { .. })
    }

    pub fn path(&self) -> &[usize] {
        match self {
            WalkOutcome::Ok { path } | WalkOutcome::Failure { path, .. } => path,
        }
    }
}

/// Mutates at uniformly random mutable vertices `depth` times; any failure
/// of exact division is returned together with the mutation path (the last
/// entry is the vertex whose exchange failed).
pub fn random_walk_laurent_check(seed: &Seed, depth: usize, rng_seed: u64) -> WalkOutcome {
    let mutable = seed.quiver().mutable();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut path = Vec::with_capacity(depth);
    let mut cur = seed.clone();
    if mutable.is_empty() {
        return WalkOutcome::Ok { path };
    }
    for _ in 0..depth {
        let k = mutable[rng.random_range(0..mutable.len())];
        path.push(k);
        match cur.mutate(k) {
            Ok(s) => cur = s,
            Err(error) => return WalkOutcome::Failure { path, error },
        }
    }
    WalkOutcome::Ok { path }
}

/// A polynomial in the principal coefficients `y1, ..., ym`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FPoly(pub LaurentPoly);

impl FPoly {
    pub fn constant_term(&self) -> num_bigint::BigInt {
        self.0.constant_term()
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.0.terms().all(|(_, c)| c >= &num_bigint::BigInt::from(0))
    }

    pub fn display(&self, m: usize) -> String {
        self.0.display(&VarContext::with_prefix("y", m)).to_string()
    }
}

#[derive(Debug, Clone)]
pub struct FPolyEntry {
    /// The ordinary cluster variable.
    pub variable: LaurentPoly,
    /// The same variable in the principal-coefficient algebra; generators
    /// after the original ones are the coefficients `y1, ..., ym`.
    pub principal: LaurentPoly,
    pub f: FPoly,
}

#[derive(Debug, Clone)]
pub struct FPolyTable {
    /// Number of coefficient variables (one per mutable vertex).
    pub coefficient_count: usize,
    /// Entries sorted by ordinary variable.
    pub entries: Vec<FPolyEntry>,
    pub report: MutationClassReport,
}

impl FPolyTable {
    pub fn get(&self, variable: &LaurentPoly) -> Option<&FPoly> {
        self.entries.iter().find(|e| &e.variable == variable).map(|e| &e.f)
    }
}

/// The seed with one extra frozen vertex `i'` per mutable vertex `i` and a
/// single arrow `i' -> i`. Variables are fresh generators; the coefficient
/// of the `j`-th mutable vertex is generator `n + j`.
pub fn principal_extension(seed: &Seed) -> Seed {
    let q = seed.quiver();
    let n = q.n();
    let mutable = q.mutable();
    let total = n + mutable.len();
    let mut arrows = q.arrows();
    for (j, &i) in mutable.iter().enumerate() {
        arrows.push((n + j, i, 1));
    }
    let mut frozen = q.frozen();
    frozen.extend(n..total);
    let mut ext = Quiver::from_arrows(total, &arrows, &frozen).expect("principal extension is a valid quiver");
    if let Some(labels) = q.labels() {
        let mut l = labels.to_vec();
        l.extend(mutable.iter().map(|&i| format!("{}'", labels[i])));
        ext = ext.with_labels(l);
    }
    Seed::initial(ext)
}

/// F-polynomials of every cluster variable reachable from `seed`, taken
/// relative to the cluster of `seed` itself.
pub fn f_polynomials(seed: &Seed, opts: EnumerateOptions) -> Result<FPolyTable, SeedError> {
    let n = seed.n();
    let ext = principal_extension(seed);
    let m = ext.n() - n;
    let report = enumerate_exchange_graph(&ext, opts)?;
    let is_coefficient = |v: VarId| v.index() >= n;
    let coefficient_vars: BTreeSet<LaurentPoly> = (n..n + m).map(LaurentPoly::gen).collect();

    let mut by_var: BTreeMap<LaurentPoly, FPolyEntry> = BTreeMap::new();
    for principal in report.variables.iter().filter(|v| !coefficient_vars.contains(v)) {
        let variable = principal.specialize_to_one(is_coefficient);
        let f = principal
            .specialize_to_one(|v| !is_coefficient(v))
            .rename(|v| VarId::from(v.index() - n));
        by_var.insert(
            variable.clone(),
            FPolyEntry {
                variable,
                principal: principal.clone(),
                f: FPoly(f),
            },
        );
    }
    // Express ordinary variables in the cluster of `seed`, then map back to
    // its actual variables.
    let images: Vec<LaurentPoly> = seed.vars().to_vec();
    let entries = by_var
        .into_values()
        .map(|mut e| {
            e.variable = e.variable.substitute(&images)?;
            Ok(e)
        })
        .collect::<Result<Vec<_>, SeedError>>()?;
    let mut entries = entries;
    entries.sort_by(|a, b| a.variable.cmp(&b.variable));
    Ok(FPolyTable {
        coefficient_count: m,
        entries,
        report,
    })
}
