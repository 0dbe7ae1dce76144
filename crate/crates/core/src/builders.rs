//! Constructors for the seed families used throughout the crate: rank-2
//! seeds, the unitriangular-minor seeds of `C[N]` in type `A_n`, the level-ℓ
//! grid quivers `Γ_ℓ`, and oriented Dynkin diagrams.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed::{Quiver, Seed};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("rank-2 seeds need at least one arrow")]
    NoArrows,
    #[error("unitriangular seeds are supported for 2 <= n <= 6, got {0}")]
    UnsupportedRank(usize),
    #[error("unknown or invalid Dynkin type {0:?}")]
    BadType(String),
    #[error("bipartition is not a proper 2-colouring: edge {} - {}", .0 + 1, .1 + 1)]
    BadBipartition(usize, usize),
    #[error("bad orientation: {0}")]
    BadOrientation(String),
    #[error("bad minor label {0:?}")]
    BadLabel(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DynkinFamily {
    A,
    D,
    E,
}

/// A simply-laced Dynkin type such as `A3`, `D4` or `E6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DynkinType {
    pub family: DynkinFamily,
    pub rank: usize,
}

impl DynkinType {
    pub fn new(family: DynkinFamily, rank: usize) -> Result<Self, BuildError> {
        let ok = match family {
            DynkinFamily::A => rank >= 1,
            DynkinFamily::D => rank >= 4,
            DynkinFamily::E => (6..=8).contains(&rank),
        };
        let t = DynkinType { family, rank };
        if ok {
            Ok(t)
        } else {
            Err(BuildError::BadType(t.to_string()))
        }
    }

    pub fn a(rank: usize) -> Self {
        Self::new(DynkinFamily::A, rank).expect("A_n needs n >= 1")
    }

    pub fn d(rank: usize) -> Self {
        Self::new(DynkinFamily::D, rank).expect("D_n needs n >= 4")
    }

    pub fn e(rank: usize) -> Self {
        Self::new(DynkinFamily::E, rank).expect("E_n needs 6 <= n <= 8")
    }

    /// Edges of the diagram (0-based, smaller endpoint first). Numbering:
    /// `A_n` is a path; `D_n` is a path `1..n-1` with `n` attached to
    /// `n-2`; `E_n` has `2` attached to `4` and the path `1,3,4,...,n`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.family {
            DynkinFamily::A => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
            DynkinFamily::D => {
                let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
                e.push((n - 3, n - 1));
                e
            }
            DynkinFamily::E => {
                let mut e = vec![(0, 2), (1, 3)];
                e.extend((2..n - 1).map(|i| (i, i + 1)));
                e
            }
        }
    }

    /// Proper 2-colouring with vertex 1 on the source side.
    pub fn default_sources(&self) -> Vec<usize> {
        let n = self.rank;
        let edges = self.edges();
        let mut color = vec![None; n];
        color[0] = Some(0u8);
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for &(a, b) in &edges {
                let w = if a == v { b } else if b == v { a } else { continue };
                if color[w].is_none() {
                    color[w] = Some(1 - color[v].unwrap());
                    stack.push(w);
                }
            }
        }
        (0..n).filter(|&v| color[v] == Some(0)).collect()
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for DynkinType {
    type Err = BuildError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BuildError::BadType(s.to_string());
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => DynkinFamily::A,
            Some('D') => DynkinFamily::D,
            Some('E') => DynkinFamily::E,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().trim_start_matches('_').parse().map_err(|_| bad())?;
        DynkinType::new(family, rank).map_err(|_| bad())
    }
}

/// How to orient the edges of a Dynkin diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Orientation {
    /// Sources on the side containing vertex 1.
    Bipartite,
    /// Every edge exactly once, as `(source, target)` (0-based).
    Edges(Vec<(usize, usize)>),
}

pub fn build_dynkin_quiver(t: DynkinType, orientation: &Orientation) -> Result<Quiver, BuildError> {
    let edges = t.edges();
    let arrows: Vec<(usize, usize, i64)> = match orientation {
        Orientation::Bipartite => {
            let sources = t.default_sources();
            edges
                .iter()
                .map(|&(a, b)| if sources.contains(&a) { (a, b, 1) } else { (b, a, 1) })
                .collect()
        }
        Orientation::Edges(list) => {
            let mut covered = vec![false; edges.len()];
            for &(s, d) in list {
                let key = (s.min(d), s.max(d));
                let idx = edges
                    .iter()
                    .position(|&e| e == key)
                    .ok_or_else(|| BuildError::BadOrientation(format!("{} - {} is not an edge of {t}", s + 1, d + 1)))?;
                if covered[idx] {
                    return Err(BuildError::BadOrientation(format!("edge {} - {} oriented twice", key.0 + 1, key.1 + 1)));
                }
                covered[idx] = true;
            }
            if let Some(missing) = covered.iter().position(|c| !c) {
                let (a, b) = edges[missing];
                return Err(BuildError::BadOrientation(format!("edge {} - {} not oriented", a + 1, b + 1)));
            }
            list.iter().map(|&(s, d)| (s, d, 1)).collect()
        }
    };
    Ok(Quiver::from_arrows(t.rank, &arrows, &[]).expect("Dynkin arrows are valid"))
}

/// Two vertices, `a` arrows `1 -> 2`, initial variables `(x1, x2)`.
pub fn build_rank2(a: i64) -> Result<Seed, BuildError> {
    if a < 1 {
        return Err(BuildError::NoArrows);
    }
    let q = Quiver::from_arrows(2, &[(0, 1, a)], &[]).expect("valid rank-2 quiver");
    Ok(Seed::initial(q))
}

/// Row and column sets of a minor `D_{I,J}`, 1-based and sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MinorLabel {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorLabel {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Result<Self, BuildError> {
        rows.sort_unstable();
        cols.sort_unstable();
        let distinct = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if rows.is_empty() || rows.len() != cols.len() || !distinct(&rows) || !distinct(&cols) || rows[0] == 0 || cols[0] == 0 {
            return Err(BuildError::BadLabel(format!("{rows:?},{cols:?}")));
        }
        Ok(MinorLabel { rows, cols })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }
}

impl fmt::Display for MinorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<String>();
        write!(f, "D_{{{},{}}}", join(&self.rows), join(&self.cols))
    }
}

impl FromStr for MinorLabel {
    type Err = BuildError;

    /// Parses `D_{12,34}` (single-digit indices).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BuildError::BadLabel(s.to_string());
        let inner = s
            .trim()
            .strip_prefix("D_{")
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(bad)?;
        let (r, c) = inner.split_once(',').ok_or_else(bad)?;
        let digits = |t: &str| -> Result<Vec<usize>, BuildError> {
            t.chars()
                .map(|ch| ch.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect()
        };
        MinorLabel::new(digits(r)?, digits(c)?).map_err(|_| bad())
    }
}

/// The initial seed of `C[N]` for `N` the upper unitriangular subgroup of
/// `SL_{n+1}`, together with the minor carried by each vertex.
#[derive(Debug, Clone)]
pub struct UnitriangularSeed {
    pub seed: Seed,
    pub minors: Vec<MinorLabel>,
    /// Grid coordinates `(k, j)` of each vertex.
    pub coords: Vec<(usize, usize)>,
}

/// Vertices `(k, j)` with `k + j <= n + 1` carry `D_{{1..k},{j+1..j+k}}`,
/// numbered anti-diagonal by anti-diagonal; the last anti-diagonal is
/// frozen. Arrows run `(k,j) -> (k,j+1)`, `(k,j) -> (k+1,j-1)` for `j >= 2`
/// and `(k,j) -> (k-1,j)` for `k >= 2`.
pub fn build_unitriangular_seed(n: usize) -> Result<UnitriangularSeed, BuildError> {
    if !(2..=6).contains(&n) {
        return Err(BuildError::UnsupportedRank(n));
    }
    let mut coords = Vec::new();
    for s in 2..=n + 1 {
        for k in 1..s {
            coords.push((k, s - k));
        }
    }
    let index = |k: usize, j: usize| coords.iter().position(|&c| c == (k, j));
    let mut arrows = Vec::new();
    for (v, &(k, j)) in coords.iter().enumerate() {
        let mut targets = vec![index(k, j + 1)];
        if j >= 2 {
            targets.push(index(k + 1, j - 1));
        }
        if k >= 2 {
            targets.push(index(k - 1, j));
        }
        for w in targets.into_iter().flatten() {
            arrows.push((v, w, 1));
        }
    }
    let frozen: Vec<usize> = (0..coords.len()).filter(|&v| coords[v].0 + coords[v].1 == n + 1).collect();
    let minors: Vec<MinorLabel> = coords
        .iter()
        .map(|&(k, j)| MinorLabel::new((1..=k).collect(), (j + 1..=j + k).collect()).unwrap())
        .collect();
    let quiver = Quiver::from_arrows(coords.len(), &arrows, &frozen)
        .expect("grid arrows are valid")
        .with_labels(minors.iter().map(|m| m.to_string()).collect());
    Ok(UnitriangularSeed {
        seed: Seed::initial(quiver),
        minors,
        coords,
    })
}

/// Parameters of a `Γ_ℓ` quiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaSpec {
    pub dynkin: DynkinType,
    pub ell: usize,
    /// Source side `I₀` of the bipartite orientation (0-based Dynkin
    /// vertices); `None` puts vertex 1 in `I₀`.
    pub sources: Option<Vec<usize>>,
}

impl GammaSpec {
    pub fn new(dynkin: DynkinType, ell: usize) -> Self {
        GammaSpec { dynkin, ell, sources: None }
    }
}

/// Vertex `(i, k)` of `Γ_ℓ` (both 1-based) has index `(k-1)·rank + (i-1)`.
pub fn gamma_vertex(rank: usize, i: usize, k: usize) -> usize {
    (k - 1) * rank + (i - 1)
}

/// The grid quiver `Γ_ℓ` with the top row `(i, ℓ+1)` frozen and fresh
/// generators as initial variables.
pub fn build_gamma_ell(spec: &GammaSpec) -> Result<Seed, BuildError> {
    let rank = spec.dynkin.rank;
    let sources = spec.sources.clone().unwrap_or_else(|| spec.dynkin.default_sources());
    let mut q_arrows = Vec::new();
    for (a, b) in spec.dynkin.edges() {
        match (sources.contains(&a), sources.contains(&b)) {
            (true, false) => q_arrows.push((a, b)),
            (false, true) => q_arrows.push((b, a)),
            _ => return Err(BuildError::BadBipartition(a, b)),
        }
    }
    let levels = spec.ell + 1;
    let v = |i: usize, k: usize| gamma_vertex(rank, i + 1, k);
    let mut arrows = Vec::new();
    for &(i, j) in &q_arrows {
        for k in 1..=levels {
            arrows.push((v(i, k), v(j, k), 1));
        }
        for k in 1..levels {
            arrows.push((v(j, k), v(i, k + 1), 1));
        }
    }
    for i in 0..rank {
        for k in 1..levels {
            arrows.push((v(i, k + 1), v(i, k), 1));
        }
    }
    let frozen: Vec<usize> = (0..rank).map(|i| v(i, levels)).collect();
    let mut labels = vec![String::new(); rank * levels];
    for k in 1..=levels {
        for i in 0..rank {
            labels[v(i, k)] = format!("({},{})", i + 1, k);
        }
    }
    let quiver = Quiver::from_arrows(rank * levels, &arrows, &frozen)
        .expect("grid arrows are valid")
        .with_labels(labels);
    Ok(Seed::initial(quiver))
}

/// Parses `bipartite` or a comma-separated list of 1-based arrows such as
/// `1->2,3->2`.
pub fn parse_orientation(s: &str) -> Result<Orientation, BuildError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("bipartite") {
        return Ok(Orientation::Bipartite);
    }
    let bad = || BuildError::BadOrientation(format!("cannot parse {s:?}"));
    s.split(',')
        .map(|e| {
            let (a, b) = e.split_once("->").ok_or_else(bad)?;
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            if a == 0 || b == 0 {
                return Err(bad());
            }
            Ok((a - 1, b - 1))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Orientation::Edges)
}

/// A named family with its parameters, as accepted by the command line and
/// the session service: `{"family":"gamma","type":"A2","ell":2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilySpec {
    Rank2 {
        a: i64,
    },
    Unitriangular {
        n: usize,
    },
    Gamma {
        #[serde(rename = "type")]
        dynkin: String,
        ell: usize,
        /// 1-based source side of the bipartition.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sources: Option<Vec<usize>>,
    },
    Dynkin {
        #[serde(rename = "type")]
        dynkin: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        orientation: Option<String>,
    },
}

impl FamilySpec {
    pub fn build(&self) -> Result<Seed, BuildError> {
        match self {
            FamilySpec::Rank2 { a } => build_rank2(*a),
            FamilySpec::Unitriangular { n } => build_unitriangular_seed(*n).map(|u| u.seed),
            FamilySpec::Gamma { dynkin, ell, sources } => {
                let dynkin: DynkinType = dynkin.parse()?;
                if sources.as_ref().is_some_and(|s| s.contains(&0)) {
                    return Err(BuildError::BadType("source vertices are 1-based".into()));
                }
                build_gamma_ell(&GammaSpec {
                    dynkin,
                    ell: *ell,
                    sources: sources.as_ref().map(|s| s.iter().map(|v| v - 1).collect()),
                })
            }
            FamilySpec::Dynkin { dynkin, orientation } => {
                let t: DynkinType = dynkin.parse()?;
                let o = match orientation {
                    Some(o) => parse_orientation(o)?,
                    None => Orientation::Bipartite,
                };
                Ok(Seed::initial(build_dynkin_quiver(t, &o)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_based(q: &Quiver) -> Vec<(usize, usize)> {
        let mut a: Vec<_> = q.arrows().into_iter().map(|(i, j, _)| (i + 1, j + 1)).collect();
        a.sort();
        a
    }

    #[test]
    fn dynkin_types_parse_and_print() {
        assert_eq!("D4".parse::<DynkinType>().unwrap(), DynkinType::d(4));
        assert_eq!("e_6".parse::<DynkinType>().unwrap().to_string(), "E6");
        for bad in ["D3", "E9", "B2", "A0", "A"] {
            assert!(bad.parse::<DynkinType>().is_err(), "{bad}");
        }
        assert_eq!(DynkinType::d(5).edges(), vec![(0, 1), (1, 2), (2, 3), (2, 4)]);
        assert_eq!(DynkinType::e(6).edges().len(), 5);
        assert_eq!(DynkinType::a(3).default_sources(), vec![0, 2]);
    }

    #[test]
    fn rank2_family() {
        let s = build_rank2(1).unwrap();
        assert!(s.quiver().validate().is_ok());
        assert_eq!(s.quiver().arrows(), vec![(0, 1, 1)]);
        assert_eq!(build_rank2(0).unwrap_err(), BuildError::NoArrows);
        let q = build_dynkin_quiver(DynkinType::a(2), &Orientation::Bipartite).unwrap();
        assert_eq!(&q, s.quiver());
    }

    #[test]
    fn sl4_seed_matches_the_triangular_figure() {
        let u = build_unitriangular_seed(3).unwrap();
        let labels: Vec<String> = u.minors.iter().map(|m| m.to_string()).collect();
        assert_eq!(labels, ["D_{1,2}", "D_{1,3}", "D_{12,23}", "D_{1,4}", "D_{12,34}", "D_{123,234}"]);
        assert_eq!(u.seed.quiver().frozen(), vec![3, 4, 5]);
        assert_eq!(
            one_based(u.seed.quiver()),
            vec![(1, 2), (2, 3), (2, 4), (3, 1), (3, 5), (4, 5), (5, 2), (5, 6), (6, 3)]
        );
    }

    #[test]
    fn sl3_seed() {
        let u = build_unitriangular_seed(2).unwrap();
        let labels: Vec<String> = u.minors.iter().map(|m| m.to_string()).collect();
        assert_eq!(labels, ["D_{1,2}", "D_{1,3}", "D_{12,23}"]);
        assert_eq!(u.seed.quiver().frozen(), vec![1, 2]);
        assert_eq!(u.seed.quiver().mutable(), vec![0]);
        assert!(matches!(build_unitriangular_seed(7), Err(BuildError::UnsupportedRank(7))));
        assert!(matches!(build_unitriangular_seed(1), Err(BuildError::UnsupportedRank(1))));
    }

    #[test]
    fn minor_labels_round_trip() {
        let m: MinorLabel = "D_{123,234}".parse().unwrap();
        assert_eq!(m.rows, vec![1, 2, 3]);
        assert_eq!(m.to_string(), "D_{123,234}");
        for bad in ["D_{12,3}", "D_{1,}", "x1", "D_{11,23}", "D_{0,1}"] {
            assert!(bad.parse::<MinorLabel>().is_err(), "{bad}");
        }
    }

    #[test]
    fn gamma_a3_level3_counts() {
        let s = build_gamma_ell(&GammaSpec::new(DynkinType::a(3), 3)).unwrap();
        let q = s.quiver();
        assert_eq!(q.n(), 12);
        assert_eq!(q.arrow_count(), 23);
        let frozen: Vec<String> = q.frozen().iter().map(|&v| q.label(v)).collect();
        assert_eq!(frozen, ["(1,4)", "(2,4)", "(3,4)"]);
        // Type (c) arrows point down a column.
        let v = |i, k| gamma_vertex(3, i, k);
        assert_eq!(q.b(v(2, 3), v(2, 2)), 1);
        // Type (a) and (b) from the figure: (1,1) -> (2,1) -> (1,2).
        assert_eq!(q.b(v(1, 1), v(2, 1)), 1);
        assert_eq!(q.b(v(2, 1), v(1, 2)), 1);
        assert_eq!(q.b(v(2, 1), v(3, 2)), 1);
        assert_eq!(q.b(v(3, 1), v(2, 1)), 1);
    }

    #[test]
    fn gamma_arrow_count_formula() {
        for (t, ell) in [("A1", 3), ("A2", 2), ("D4", 1), ("E6", 2), ("A4", 0)] {
            let d: DynkinType = t.parse().unwrap();
            let q = build_gamma_ell(&GammaSpec::new(d, ell)).unwrap().quiver().clone();
            let edges = d.edges().len() as i64;
            let (l, r) = (ell as i64, d.rank as i64);
            assert_eq!(q.n(), d.rank * (ell + 1));
            assert_eq!(q.frozen().len(), d.rank);
            assert_eq!(q.arrow_count(), (l + 1) * edges + l * edges + l * r, "{t} level {ell}");
            assert!(q.validate().is_ok());
        }
    }

    #[test]
    fn gamma_a1_is_a_path() {
        let s = build_gamma_ell(&GammaSpec::new(DynkinType::a(1), 3)).unwrap();
        assert_eq!(one_based(s.quiver()), vec![(2, 1), (3, 2), (4, 3)]);
    }

    #[test]
    fn improper_bipartition_is_rejected() {
        let mut spec = GammaSpec::new(DynkinType::a(3), 1);
        spec.sources = Some(vec![0, 1]);
        assert_eq!(build_gamma_ell(&spec).unwrap_err(), BuildError::BadBipartition(0, 1));
        spec.sources = Some(vec![1]);
        assert!(build_gamma_ell(&spec).is_ok());
    }

    #[test]
    fn explicit_orientations() {
        let t = DynkinType::a(3);
        let q = build_dynkin_quiver(t, &Orientation::Edges(vec![(0, 1), (1, 2)])).unwrap();
        assert_eq!(one_based(&q), vec![(1, 2), (2, 3)]);
        assert!(build_dynkin_quiver(t, &Orientation::Edges(vec![(0, 1)])).is_err());
        assert!(build_dynkin_quiver(t, &Orientation::Edges(vec![(0, 2), (1, 2)])).is_err());
        assert!(build_dynkin_quiver(t, &Orientation::Edges(vec![(0, 1), (1, 0), (1, 2)])).is_err());
    }
}
