//! Quivers, seeds and Fomin–Zelevinsky mutation.
//!
//! A [`Quiver`] is stored as its skew-symmetric exchange matrix, so loops and
//! 2-cycles cannot be represented at all. Vertex indices are 0-based in the
//! API; the JSON and DOT encodings number vertices from 1.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly, VarContext};

/// Largest vertex count accepted by [`Quiver::canonical_key`] by default.
pub const DEFAULT_CANONICAL_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error("vertex {} is frozen and cannot be mutated", .0 + 1)]
    FrozenVertex(usize),
    #[error("vertex {} does not exist (quiver has {} vertices)", .0 + 1, .1)]
    NoSuchVertex(usize, usize),
    #[error("exchange relation at vertex {} is not divisible", .0 + 1)]
    NotDivisible(usize),
    #[error("invalid quiver: {}", format_violations(.0))]
    InvalidQuiver(Vec<Violation>),
    #[error("quiver with {n} vertices exceeds the canonical-form bound {bound}")]
    TooLarge { n: usize, bound: usize },
    #[error("malformed seed: {0}")]
    Malformed(String),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// One reason an integer matrix is not an exchange matrix of a quiver.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("row {} has length {len}, expected {n}", .row + 1)]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("loop at vertex {}", .0 + 1)]
    Loop(usize),
    #[error("skew-symmetry fails at ({}, {})", .0 + 1, .1 + 1)]
    SkewSymmetry(usize, usize),
    #[error("frozen vertex {} out of range", .0 + 1)]
    FrozenOutOfRange(usize),
}

impl Violation {
    /// Short category name (`"loop"`, `"skew-symmetry"`, ...).
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::NotSquare { .. } => "shape",
            Violation::Loop(_) => "loop",
            Violation::SkewSymmetry(..) => "skew-symmetry",
            Violation::FrozenOutOfRange(_) => "frozen-range",
        }
    }
}

/// Checks that `rows` is a square skew-symmetric matrix with zero diagonal.
pub fn validate_matrix(rows: &[Vec<i64>]) -> Result<(), Vec<Violation>> {
    let n = rows.len();
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            out.push(Violation::NotSquare { row: i, len: row.len(), n });
        }
    }
    if !out.is_empty() {
        return Err(out);
    }
    for i in 0..n {
        if rows[i][i] != 0 {
            out.push(Violation::Loop(i));
        }
        for j in i + 1..n {
            if rows[i][j] != -rows[j][i] {
                out.push(Violation::SkewSymmetry(i, j));
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// A quiver without loops or 2-cycles: `b(i, j) > 0` means `b(i, j)` arrows
/// `i -> j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    n: usize,
    b: Vec<i64>,
    frozen: Vec<bool>,
    labels: Option<Vec<String>>,
}

impl Quiver {
    /// `n` isolated mutable vertices.
    pub fn empty(n: usize) -> Self {
        Quiver {
            n,
            b: vec![0; n * n],
            frozen: vec![false; n],
            labels: None,
        }
    }

    pub fn from_matrix(rows: &[Vec<i64>], frozen: &[usize]) -> Result<Self, SeedError> {
        validate_matrix(rows).map_err(SeedError::InvalidQuiver)?;
        let n = rows.len();
        let mut q = Quiver::empty(n);
        for (i, row) in rows.iter().enumerate() {
            q.b[i * n..(i + 1) * n].copy_from_slice(row);
        }
        q.set_frozen(frozen)?;
        Ok(q)
    }

    /// Builds a quiver from `(source, target, multiplicity)` triples. Arrows
    /// in opposite directions between the same pair cancel.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize, i64)], frozen: &[usize]) -> Result<Self, SeedError> {
        let mut q = Quiver::empty(n);
        for &(s, t, m) in arrows {
            if s >= n || t >= n {
                return Err(SeedError::NoSuchVertex(s.max(t), n));
            }
            if s == t {
                return Err(SeedError::InvalidQuiver(vec![Violation::Loop(s)]));
            }
            q.b[s * n + t] += m;
            q.b[t * n + s] -= m;
        }
        q.set_frozen(frozen)?;
        Ok(q)
    }

    fn set_frozen(&mut self, frozen: &[usize]) -> Result<(), SeedError> {
        for &f in frozen {
            if f >= self.n {
                return Err(SeedError::InvalidQuiver(vec![Violation::FrozenOutOfRange(f)]));
            }
            self.frozen[f] = true;
        }
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n, "one label per vertex");
        self.labels = Some(labels);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self, i: usize, j: usize) -> i64 {
        self.b[i * self.n + j]
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.b.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_frozen(&self, v: usize) -> bool {
        self.frozen[v]
    }

    pub fn frozen(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.frozen[v]).collect()
    }

    pub fn mutable(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| !self.frozen[v]).collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => (v + 1).to_string(),
        }
    }

    /// Arrows with positive multiplicity, sorted by `(source, target)`.
    pub fn arrows(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let m = self.b(i, j);
                if m > 0 {
                    out.push((i, j, m));
                }
            }
        }
        out
    }

    pub fn arrow_count(&self) -> i64 {
        self.arrows().iter().map(|a| a.2).sum()
    }

    pub fn max_multiplicity(&self) -> i64 {
        self.b.iter().copied().max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        validate_matrix(&self.matrix())
    }

    /// Quiver mutation at `k`: compose paths through `k`, reverse arrows at
    /// `k`, cancel 2-cycles. Arrows between frozen vertices are updated by
    /// the same rule.
    pub fn mutate(&self, k: usize) -> Result<Quiver, SeedError> {
        self.check_mutable(k)?;
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                let v = if i == k || j == k {
                    -self.b(i, j)
                } else {
                    let bik = self.b(i, k);
                    let bkj = self.b(k, j);
                    self.b(i, j) + bik.signum() * (bik * bkj).max(0)
                };
                out.b[i * n + j] = v;
            }
        }
        Ok(out)
    }

    fn check_mutable(&self, k: usize) -> Result<(), SeedError> {
        if k >= self.n {
            return Err(SeedError::NoSuchVertex(k, self.n));
        }
        if self.frozen[k] {
            return Err(SeedError::FrozenVertex(k));
        }
        Ok(())
    }

    /// The full subquiver on `vertices` (in the given order), keeping frozen
    /// flags and labels.
    pub fn induced(&self, vertices: &[usize]) -> Quiver {
        let m = vertices.len();
        let mut q = Quiver::empty(m);
        for (a, &i) in vertices.iter().enumerate() {
            q.frozen[a] = self.frozen[i];
            for (c, &j) in vertices.iter().enumerate() {
                q.b[a * m + c] = self.b(i, j);
            }
        }
        q.labels = self
            .labels
            .as_ref()
            .map(|l| vertices.iter().map(|&v| l[v].clone()).collect());
        q
    }

    /// Mutable vertices and the arrows among them.
    pub fn principal_part(&self) -> Quiver {
        self.induced(&self.mutable())
    }

    /// Vertex sets of the connected components of the underlying graph, each
    /// sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut idx = 0;
            while idx < comp.len() {
                let v = comp[idx];
                idx += 1;
                for w in 0..self.n {
                    if !seen[w] && self.b(v, w) != 0 {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Whether the quiver has no oriented cycle.
    pub fn is_acyclic(&self) -> bool {
        let mut indeg: Vec<usize> = (0..self.n)
            .map(|j| (0..self.n).filter(|&i| self.b(i, j) > 0).count())
            .collect();
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = stack.pop() {
            removed += 1;
            for w in 0..self.n {
                if self.b(v, w) > 0 {
                    indeg[w] -= 1;
                    if indeg[w] == 0 {
                        stack.push(w);
                    }
                }
            }
        }
        removed == self.n
    }

    pub fn canonical_key(&self) -> Result<CanonicalKey, SeedError> {
        self.canonical_key_bounded(DEFAULT_CANONICAL_BOUND)
    }

    /// Canonical form up to relabelings that map mutable vertices to mutable
    /// ones and frozen to frozen.
    ///
    /// Vertices are first split into cells by colour refinement (frozen flag,
    /// then iterated multisets of signed neighbour colours). Positions are
    /// filled cell by cell and the lower triangle of the relabelled matrix is
    /// minimized lexicographically by branch and bound.
    pub fn canonical_key_bounded(&self, bound: usize) -> Result<CanonicalKey, SeedError> {
        if self.n > bound {
            return Err(SeedError::TooLarge { n: self.n, bound });
        }
        let colors = self.refined_colors();
        let mut cell_of_position: Vec<usize> = colors.clone();
        cell_of_position.sort_unstable();
        let mut search = CanonSearch {
            q: self,
            colors: &colors,
            cell_of_position: &cell_of_position,
            perm: Vec::with_capacity(self.n),
            used: vec![false; self.n],
            twin: self.twin_classes(&colors),
            cur: Vec::new(),
            best: None,
            generation: 0,
        };
        search.run(0, true);
        let best = search.best.unwrap_or_default();

        let mut bytes = Vec::with_capacity(4 + self.n + best.len());
        bytes.extend_from_slice(&(self.n as u32).to_le_bytes());
        let perm_frozen: Vec<u8> = {
            let mut flags: Vec<(usize, bool)> = (0..self.n).map(|v| (colors[v], self.frozen[v])).collect();
            flags.sort_unstable();
            flags.into_iter().map(|(_, f)| f as u8).collect()
        };
        bytes.extend_from_slice(&perm_frozen);
        for e in best {
            push_varint(&mut bytes, e);
        }
        Ok(CanonicalKey { bytes })
    }

    /// `twin[v]` is the smallest vertex `u` such that swapping `u` and `v`
    /// is an automorphism.
    fn twin_classes(&self, colors: &[usize]) -> Vec<usize> {
        let n = self.n;
        (0..n)
            .map(|v| {
                (0..v)
                    .find(|&u| {
                        colors[u] == colors[v]
                            && self.b(u, v) == 0
                            && (0..n).all(|w| w == u || w == v || self.b(u, w) == self.b(v, w))
                    })
                    .unwrap_or(v)
            })
            .collect()
    }

    fn refined_colors(&self) -> Vec<usize> {
        let n = self.n;
        let mut colors: Vec<usize> = (0..n).map(|v| self.frozen[v] as usize).collect();
        let mut distinct = count_distinct(&colors);
        loop {
            let sigs: Vec<(usize, Vec<(usize, i64)>)> = (0..n)
                .map(|v| {
                    let mut nb: Vec<(usize, i64)> = (0..n)
                        .filter(|&w| self.b(v, w) != 0)
                        .map(|w| (colors[w], self.b(v, w)))
                        .collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let mut sorted = sigs.clone();
            sorted.sort();
            sorted.dedup();
            let next: Vec<usize> = sigs
                .iter()
                .map(|s| sorted.binary_search(s).unwrap())
                .collect();
            let d = count_distinct(&next);
            colors = next;
            if d == distinct {
                return colors;
            }
            distinct = d;
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph quiver {\n");
        for v in 0..self.n {
            let shape = if self.frozen[v] { "box" } else { "ellipse" };
            let _ = writeln!(s, "  v{} [label=\"{}\", shape={}];", v + 1, self.label(v), shape);
        }
        for (i, j, m) in self.arrows() {
            if m == 1 {
                let _ = writeln!(s, "  v{} -> v{};", i + 1, j + 1);
            } else {
                let _ = writeln!(s, "  v{} -> v{} [label=\"{}\"];", i + 1, j + 1, m);
            }
        }
        s.push_str("}\n");
        s
    }
}

fn count_distinct(v: &[usize]) -> usize {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

fn push_varint(out: &mut Vec<u8>, v: i64) {
    let mut z = ((v << 1) ^ (v >> 63)) as u64;
    loop {
        let byte = (z & 0x7f) as u8;
        z >>= 7;
        if z == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

struct CanonSearch<'a> {
    q: &'a Quiver,
    colors: &'a [usize],
    cell_of_position: &'a [usize],
    perm: Vec<usize>,
    used: Vec<bool>,
    twin: Vec<usize>,
    cur: Vec<i64>,
    best: Option<Vec<i64>>,
    generation: u64,
}

impl CanonSearch<'_> {
    /// `equal` is true while the current prefix equals the best prefix.
    fn run(&mut self, t: usize, mut equal: bool) {
        let n = self.q.n;
        if t == n {
            if self.best.is_none() || !equal {
                self.best = Some(self.cur.clone());
                self.generation += 1;
            }
            return;
        }
        for v in 0..n {
            if self.used[v] || self.colors[v] != self.cell_of_position[t] {
                continue;
            }
            // Interchangeable vertices give identical subtrees.
            if (self.twin[v]..v).any(|u| !self.used[u] && self.twin[u] == self.twin[v]) {
                continue;
            }
            let base = self.cur.len();
            for s in 0..t {
                self.cur.push(self.q.b(v, self.perm[s]));
            }
            let mut child_equal = equal;
            let mut prune = false;
            if equal {
                if let Some(best) = &self.best {
                    match self.cur[base..].cmp(&best[base..base + t]) {
                        std::cmp::Ordering::Greater => prune = true,
                        std::cmp::Ordering::Less => child_equal = false,
                        std::cmp::Ordering::Equal => {}
                    }
                }
            }
            if !prune {
                let gen = self.generation;
                self.used[v] = true;
                self.perm.push(v);
                self.run(t + 1, child_equal);
                self.perm.pop();
                self.used[v] = false;
                if self.generation != gen {
                    // The best was replaced inside this subtree, so it now
                    // shares our prefix.
                    equal = true;
                }
            }
            self.cur.truncate(base);
        }
    }
}

/// Canonical encoding of a quiver up to frozen/mutable-preserving
/// relabeling.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    bytes: Vec<u8>,
}

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }
}

/// Cluster variables attached to the vertices of a quiver.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Seed {
    vars: Vec<LaurentPoly>,
    quiver: Quiver,
}

impl Seed {
    /// The seed whose variable at vertex `i` is the generator `x_{i+1}`.
    pub fn initial(quiver: Quiver) -> Self {
        let vars = (0..quiver.n()).map(LaurentPoly::gen).collect();
        Seed { vars, quiver }
    }

    pub fn new(vars: Vec<LaurentPoly>, quiver: Quiver) -> Result<Self, SeedError> {
        if vars.len() != quiver.n() {
            return Err(SeedError::Malformed(format!(
                "{} variables for {} vertices",
                vars.len(),
                quiver.n()
            )));
        }
        if let Some(i) = vars.iter().position(|v| v.is_zero()) {
            return Err(SeedError::Malformed(format!("variable at vertex {} is zero", i + 1)));
        }
        Ok(Seed { vars, quiver })
    }

    pub fn vars(&self) -> &[LaurentPoly] {
        &self.vars
    }

    pub fn var(&self, i: usize) -> &LaurentPoly {
        &self.vars[i]
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn n(&self) -> usize {
        self.quiver.n()
    }

    /// Number of generators of the ambient field the variables live in.
    pub fn ambient_rank(&self) -> usize {
        let used = self
            .vars
            .iter()
            .filter_map(|v| v.max_var())
            .map(|v| v.index() + 1)
            .max()
            .unwrap_or(0);
        used.max(self.n())
    }

    /// The two monomials of the exchange relation at `k`: the product over
    /// arrows into `k` and the product over arrows out of `k`, each variable
    /// raised to its arrow multiplicity.
    pub fn exchange_monomials(&self, k: usize) -> (LaurentPoly, LaurentPoly) {
        let mut incoming = LaurentPoly::one();
        let mut outgoing = LaurentPoly::one();
        for i in 0..self.n() {
            let m = self.quiver.b(i, k);
            if m > 0 {
                incoming = &incoming * &self.vars[i].pow(m as u32);
            } else if m < 0 {
                outgoing = &outgoing * &self.vars[i].pow((-m) as u32);
            }
        }
        (incoming, outgoing)
    }

    /// Seed mutation at `k`.
    pub fn mutate(&self, k: usize) -> Result<Seed, SeedError> {
        self.quiver.check_mutable(k)?;
        let (incoming, outgoing) = self.exchange_monomials(k);
        let new_var = (&incoming + &outgoing)
            .exact_div(&self.vars[k])
            .map_err(|e| match e {
                LaurentError::NotDivisible => SeedError::NotDivisible(k),
                other => SeedError::Laurent(other),
            })?;
        let mut vars = self.vars.clone();
        vars[k] = new_var;
        Ok(Seed {
            vars,
            quiver: self.quiver.mutate(k)?,
        })
    }

    /// Applies mutations in order.
    pub fn mutate_sequence(&self, ks: &[usize]) -> Result<Seed, SeedError> {
        let mut s = self.clone();
        for &k in ks {
            s = s.mutate(k)?;
        }
        Ok(s)
    }

    /// The cluster as a sorted list of variables (frozen ones included).
    pub fn cluster(&self) -> Vec<LaurentPoly> {
        let mut c = self.vars.clone();
        c.sort();
        c
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.quiver = self.quiver.with_labels(labels);
        self
    }

    pub fn to_json(&self) -> SeedJson {
        let ctx = VarContext::standard(self.ambient_rank());
        SeedJson {
            n: self.n(),
            frozen: self.quiver.frozen().iter().map(|v| v + 1).collect(),
            arrows: self
                .quiver
                .arrows()
                .into_iter()
                .map(|(i, j, m)| [i as i64 + 1, j as i64 + 1, m])
                .collect(),
            labels: self.quiver.labels().map(|l| l.to_vec()).unwrap_or_default(),
            vars: Some(self.vars.iter().map(|v| v.display(&ctx).to_string()).collect()),
        }
    }

    pub fn from_json(j: &SeedJson) -> Result<Seed, SeedError> {
        let mut arrows = Vec::with_capacity(j.arrows.len());
        for &[s, t, m] in &j.arrows {
            if s < 1 || t < 1 || m < 1 {
                return Err(SeedError::Malformed(format!(
                    "arrow [{s},{t},{m}]: vertices are 1-based and multiplicities positive"
                )));
            }
            arrows.push((s as usize - 1, t as usize - 1, m));
        }
        if j.frozen.contains(&0) {
            return Err(SeedError::Malformed("frozen vertices are 1-based".into()));
        }
        let frozen: Vec<usize> = j.frozen.iter().map(|v| v - 1).collect();
        let mut quiver = Quiver::from_arrows(j.n, &arrows, &frozen)?;
        if !j.labels.is_empty() {
            if j.labels.len() != j.n {
                return Err(SeedError::Malformed(format!(
                    "{} labels for {} vertices",
                    j.labels.len(),
                    j.n
                )));
            }
            quiver = quiver.with_labels(j.labels.clone());
        }
        match &j.vars {
            None => Ok(Seed::initial(quiver)),
            Some(texts) => {
                let vars = texts
                    .iter()
                    .map(|t| t.parse::<LaurentPoly>())
                    .collect::<Result<Vec<_>, _>>()?;
                Seed::new(vars, quiver)
            }
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("seed JSON serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Seed, SeedError> {
        let j: SeedJson = serde_json::from_str(s).map_err(|e| SeedError::Malformed(e.to_string()))?;
        Seed::from_json(&j)
    }

    /// DOT rendering of the quiver with each vertex labelled by its variable.
    pub fn to_dot(&self) -> String {
        let mut q = self.quiver.clone();
        let labels = (0..self.n())
            .map(|v| format!("{}: {}", q.label(v), self.vars[v]))
            .collect();
        q = q.with_labels(labels);
        q.to_dot()
    }
}

/// Wire form of a seed. Field order is fixed: `n, frozen, arrows, labels,
/// vars`; vertices are 1-based; `vars` uses the text form `x1^-1 + x1^-1*x2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedJson {
    pub n: usize,
    #[serde(default)]
    pub frozen: Vec<usize>,
    #[serde(default)]
    pub arrows: Vec<[i64; 3]>,
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
}
