//! Sparse multivariate Laurent polynomials with arbitrary-precision integer
//! coefficients.
//!
//! Every cluster variable, F-polynomial and symbolic minor in this crate is a
//! [`LaurentPoly`]. Values are immutable once built; all arithmetic returns
//! fresh values, so polynomials can be shared freely between threads.
//!
//! Monomials are ordered lexicographically on their dense exponent vectors
//! (the exponent of `x1` is compared first, then `x2`, ...). This order is a
//! monomial order, so it drives both the leading-term choice in exact
//! division and the deterministic term order used when printing.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("not divisible: no Laurent polynomial quotient exists")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("variable {0} is assigned 0 but appears with a negative exponent")]
    ZeroAtPole(VarId),
    #[error("variable {0} has no assigned value")]
    Unassigned(VarId),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Index of one generator of the ambient field. Displayed 1-based (`x1` is
/// `VarId(0)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VarId {
    fn from(i: usize) -> Self {
        VarId(i as u32)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0 + 1)
    }
}

/// Display names for the generators of one ambient field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarContext {
    names: Vec<String>,
}

impl VarContext {
    /// `x1, ..., xn`.
    pub fn standard(n: usize) -> Self {
        Self::with_prefix("x", n)
    }

    pub fn with_prefix(prefix: &str, n: usize) -> Self {
        VarContext {
            names: (1..=n).map(|i| format!("{prefix}{i}")).collect(),
        }
    }

    pub fn from_names(names: Vec<String>) -> Self {
        VarContext { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: VarId) -> String {
        self.names
            .get(v.index())
            .cloned()
            .unwrap_or_else(|| v.to_string())
    }

    fn lookup(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name).map(VarId::from)
    }
}

/// A Laurent monomial: sparse exponent list sorted by variable, with no zero
/// exponents stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<(VarId, i64)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: VarId) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: VarId, e: i64) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial { exps: vec![(v, e)] }
        }
    }

    /// Builds a monomial from arbitrary `(var, exponent)` pairs; repeated
    /// variables are combined and zero exponents dropped.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, i64)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<VarId, i64> = BTreeMap::new();
        for (v, e) in pairs {
            *acc.entry(v).or_insert(0) += e;
        }
        Monomial {
            exps: acc.into_iter().filter(|&(_, e)| e != 0).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, v: VarId) -> i64 {
        self.exps
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, i64)> + '_ {
        self.exps.iter().copied()
    }

    fn combine(&self, other: &Monomial, sign: i64) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() || j < other.exps.len() {
            let a = self.exps.get(i);
            let b = other.exps.get(j);
            match (a, b) {
                (Some(&(va, ea)), Some(&(vb, eb))) if va == vb => {
                    let e = ea + sign * eb;
                    if e != 0 {
                        out.push((va, e));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(va, ea)), Some(&(vb, _))) if va < vb => {
                    out.push((va, ea));
                    i += 1;
                }
                (Some(&(va, ea)), None) => {
                    out.push((va, ea));
                    i += 1;
                }
                (_, Some(&(vb, eb))) => {
                    out.push((vb, sign * eb));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial { exps: out }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.combine(other, 1)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.combine(other, -1)
    }

    /// True when every exponent of `self` is at least the matching exponent
    /// of `other`. On ordinary monomials this means `other` divides `self`.
    fn dominates(&self, other: &Monomial) -> bool {
        other.exps.iter().all(|&(v, e)| self.exponent(v) >= e)
    }

    pub fn has_negative(&self) -> bool {
        self.exps.iter().any(|&(_, e)| e < 0)
    }

    pub fn degree(&self) -> i64 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, ctx: Option<&VarContext>) -> fmt::Result {
        for (idx, &(v, e)) in self.exps.iter().enumerate() {
            if idx > 0 {
                f.write_str("*")?;
            }
            match ctx {
                Some(c) => f.write_str(&c.name(v))?,
                None => write!(f, "{v}")?,
            }
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl Ord for Monomial {
    /// Lexicographic on dense exponent vectors, lowest variable first.
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            let a = self.exps.get(i);
            let b = other.exps.get(j);
            let ord = match (a, b) {
                (None, None) => return Ordering::Equal,
                (Some(&(va, ea)), Some(&(vb, eb))) if va == vb => {
                    i += 1;
                    j += 1;
                    ea.cmp(&eb)
                }
                (Some(&(va, ea)), Some(&(vb, _))) if va < vb => {
                    i += 1;
                    ea.cmp(&0)
                }
                (Some(&(_, ea)), None) => {
                    i += 1;
                    ea.cmp(&0)
                }
                (_, Some(&(_, eb))) => {
                    j += 1;
                    0.cmp(&eb)
                }
            };
            if ord != Ordering::Equal {
                return ord;
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse Laurent polynomial with `BigInt` coefficients. The zero polynomial
/// has no terms; no stored coefficient is ever zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: VarId) -> Self {
        Self::term(1, Monomial::var(v))
    }

    /// The generator with index `i` (0-based).
    pub fn gen(i: usize) -> Self {
        Self::var(VarId::from(i))
    }

    pub fn term<C: Into<BigInt>>(c: C, m: Monomial) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(it: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&Monomial::one())
    }

    /// No negative exponent anywhere.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| !m.has_negative())
    }

    /// Returns `Some(m)` when the polynomial is a single monomial with
    /// coefficient 1.
    pub fn as_monomial(&self) -> Option<&Monomial> {
        match self.terms.iter().next() {
            Some((m, c)) if self.terms.len() == 1 && c.is_one() => Some(m),
            _ => None,
        }
    }

    /// Largest variable index occurring, if any.
    pub fn max_var(&self) -> Option<VarId> {
        self.terms
            .keys()
            .filter_map(|m| m.exps.last().map(|&(v, _)| v))
            .max()
    }

    /// Variables that occur in some term.
    pub fn variables(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self
            .terms
            .keys()
            .flat_map(|m| m.exps.iter().map(|&(v, _)| v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Component-wise minimum exponent over all terms (the largest monomial
    /// dividing every term in the Laurent sense).
    fn min_monomial(&self) -> Monomial {
        let mut mins: BTreeMap<VarId, i64> = BTreeMap::new();
        for v in self.variables() {
            mins.insert(v, i64::MAX);
        }
        for m in self.terms.keys() {
            for (v, cur) in mins.iter_mut() {
                *cur = (*cur).min(m.exponent(*v));
            }
        }
        Monomial::from_pairs(mins)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> LaurentPoly {
        let mut result = LaurentPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact quotient `self / den` in the Laurent polynomial ring.
    ///
    /// Both operands are first shifted by their minimal monomials so that
    /// the problem becomes ordinary polynomial division in `Z[x]`, where a
    /// quotient exists iff leading-term division succeeds at every step.
    pub fn exact_div(&self, den: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        if den.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        if den.terms.len() == 1 {
            let (m, c) = den.terms.iter().next().unwrap();
            let mut terms = BTreeMap::new();
            for (k, v) in &self.terms {
                let (q, r) = v.div_rem(c);
                if !r.is_zero() {
                    return Err(LaurentError::NotDivisible);
                }
                terms.insert(k.div(m), q);
            }
            return Ok(LaurentPoly { terms });
        }

        let den_shift = den.min_monomial();
        let num_shift = self.min_monomial();
        let den_p = den.mul_monomial(&Monomial::one().div(&den_shift));
        let mut rem = self.mul_monomial(&Monomial::one().div(&num_shift));
        let (den_lm, den_lc) = den_p.terms.iter().next_back().unwrap();
        let mut quotient = LaurentPoly::zero();
        while let Some((lm, lc)) = rem.terms.iter().next_back() {
            if !lm.dominates(den_lm) {
                return Err(LaurentError::NotDivisible);
            }
            let (qc, r) = lc.div_rem(den_lc);
            if !r.is_zero() {
                return Err(LaurentError::NotDivisible);
            }
            let qm = lm.div(den_lm);
            for (m, c) in &den_p.terms {
                rem.add_term(m.mul(&qm), -(c * &qc));
            }
            quotient.add_term(qm, qc);
        }
        Ok(quotient.mul_monomial(&num_shift.div(&den_shift)))
    }

    /// Exact rational value at `assignment`.
    pub fn eval(&self, assignment: &BTreeMap<VarId, BigRational>) -> Result<BigRational, LaurentError> {
        self.eval_with(|v| assignment.get(&v).cloned())
    }

    pub fn eval_with<F>(&self, value: F) -> Result<BigRational, LaurentError>
    where
        F: Fn(VarId) -> Option<BigRational>,
    {
        let mut values: BTreeMap<VarId, BigRational> = BTreeMap::new();
        for v in self.variables() {
            values.insert(v, value(v).ok_or(LaurentError::Unassigned(v))?);
        }
        for m in self.terms.keys() {
            for (v, e) in m.iter() {
                if e < 0 && values[&v].is_zero() {
                    return Err(LaurentError::ZeroAtPole(v));
                }
            }
        }
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (v, e) in m.iter() {
                t *= num_traits::pow::Pow::pow(&values[&v], e as i32);
            }
            total += t;
        }
        Ok(total)
    }

    /// Every coefficient is strictly positive and the polynomial is nonzero.
    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.terms.values().all(|c| c.is_positive())
    }

    /// Substitutes `1` for every variable selected by `pred`.
    pub fn specialize_to_one<P: Fn(VarId) -> bool>(&self, pred: P) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let kept = Monomial {
                exps: m.exps.iter().copied().filter(|&(v, _)| !pred(v)).collect(),
            };
            (kept, c.clone())
        }))
    }

    /// Renames variables through `f` (which must be injective on the
    /// variables present).
    pub fn rename<F: Fn(VarId) -> VarId>(&self, f: F) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (Monomial::from_pairs(m.iter().map(|(v, e)| (f(v), e))), c.clone())),
        )
    }

    /// Composes with the substitution `x_i := images[i]`. Negative powers are
    /// resolved by clearing a common denominator and dividing exactly, so the
    /// result exists only when the composite is again a Laurent polynomial.
    pub fn substitute(&self, images: &[LaurentPoly]) -> Result<LaurentPoly, LaurentError> {
        let mut denom_exp: BTreeMap<VarId, i64> = BTreeMap::new();
        for m in self.terms.keys() {
            for (v, e) in m.iter() {
                if v.index() >= images.len() {
                    return Err(LaurentError::Unassigned(v));
                }
                if e < 0 {
                    let d = denom_exp.entry(v).or_insert(0);
                    *d = (*d).max(-e);
                }
            }
        }
        let mut pow_cache: BTreeMap<(VarId, i64), LaurentPoly> = BTreeMap::new();
        let mut power = |v: VarId, e: i64| -> LaurentPoly {
            pow_cache
                .entry((v, e))
                .or_insert_with(|| images[v.index()].pow(e as u32))
                .clone()
        };
        let mut numerator = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut t = LaurentPoly::constant(c.clone());
            let mut seen: Vec<VarId> = Vec::new();
            for (v, e) in m.iter() {
                let shifted = e + denom_exp.get(&v).copied().unwrap_or(0);
                if shifted > 0 {
                    t = &t * &power(v, shifted);
                }
                seen.push(v);
            }
            for (&v, &d) in &denom_exp {
                if !seen.contains(&v) {
                    t = &t * &power(v, d);
                }
            }
            numerator = &numerator + &t;
        }
        if denom_exp.is_empty() {
            return Ok(numerator);
        }
        let mut denominator = LaurentPoly::one();
        for (&v, &d) in &denom_exp {
            if images[v.index()].is_zero() {
                return Err(LaurentError::ZeroAtPole(v));
            }
            denominator = &denominator * &power(v, d);
        }
        numerator.exact_div(&denominator)
    }

    pub fn display<'a>(&'a self, ctx: &'a VarContext) -> impl fmt::Display + 'a {
        Named { poly: self, ctx }
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, ctx: Option<&VarContext>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let abs = c.abs();
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                m.fmt_with(f, ctx)?;
            }
        }
        Ok(())
    }

    /// Parses the text form, resolving variable names through `ctx`.
    pub fn parse(s: &str, ctx: &VarContext) -> Result<LaurentPoly, LaurentError> {
        parse_poly(s, &|name| ctx.lookup(name))
    }
}

struct Named<'a> {
    poly: &'a LaurentPoly,
    ctx: &'a VarContext,
}

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt_with(f, Some(self.ctx))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, None)
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    /// Accepts the default names `x1, x2, ...`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s, &|name| {
            let idx: u32 = name.strip_prefix('x')?.parse().ok()?;
            idx.checked_sub(1).map(VarId)
        })
    }
}

fn parse_poly(s: &str, lookup: &dyn Fn(&str) -> Option<VarId>) -> Result<LaurentPoly, LaurentError> {
    let err = |msg: &str| LaurentError::Parse(format!("{msg} in {s:?}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty input"));
    }
    // Split into signed terms at top-level '+'/'-' that are not exponent signs.
    let bytes = compact.as_bytes();
    let mut pieces: Vec<(bool, &str)> = Vec::new();
    let mut negative = false;
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let after_caret = i > 0 && matches!(bytes[i - 1], b'^' | b'(');
        if (c == b'+' || c == b'-') && !after_caret {
            if i > start {
                pieces.push((negative, &compact[start..i]));
                negative = false;
            } else if i > 0 && !matches!(bytes[i - 1], b'+' | b'-') {
                return Err(err("misplaced sign"));
            }
            if c == b'-' {
                negative = !negative;
            }
            start = i + 1;
        }
        i += 1;
    }
    if start >= compact.len() {
        return Err(err("dangling sign"));
    }
    pieces.push((negative, &compact[start..]));

    let mut poly = LaurentPoly::zero();
    for (neg, body) in pieces {
        let mut coeff = BigInt::one();
        let mut pairs = Vec::new();
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(err("empty factor"));
            }
            if factor.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                let n: BigInt = factor.parse().map_err(|_| err("bad coefficient"))?;
                coeff *= n;
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e = e.trim_start_matches('(').trim_end_matches(')');
                    (n, e.parse::<i64>().map_err(|_| err("bad exponent"))?)
                }
                None => (factor, 1),
            };
            let v = lookup(name).ok_or_else(|| err(&format!("unknown variable {name:?}")))?;
            pairs.push((v, exp));
        }
        if neg {
            coeff = -coeff;
        }
        poly.add_term(Monomial::from_pairs(pairs), coeff);
    }
    Ok(poly)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_default() += ca * cb;
            }
        }
        LaurentPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |a, b| &a + &b)
    }
}

impl std::iter::Product for LaurentPoly {
    fn product<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::one(), |a, b| &a * &b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn x(i: usize) -> LaurentPoly {
        LaurentPoly::gen(i - 1)
    }

    #[test]
    fn product_examples() {
        let inv = LaurentPoly::term(1, Monomial::var_pow(VarId(0), -1));
        assert!((&x(1) * &inv).is_one());
        let lhs = &(&LaurentPoly::one() + &x(2)) * &inv;
        assert_eq!(lhs, p("x1^-1 + x1^-1*x2"));
        let sq = (&x(1) + &x(2)).pow(2);
        assert_eq!(sq, p("x1^2 + 2*x1*x2 + x2^2"));
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(p("x1*x2 + x2").exact_div(&x(2)).unwrap(), p("x1 + 1"));
        assert_eq!(
            p("1 + x1 + x2").exact_div(&x(1)).unwrap(),
            p("x1^-1 + 1 + x1^-1*x2")
        );
        assert_eq!(
            p("x1 + x2").exact_div(&p("1 + x1")),
            Err(LaurentError::NotDivisible)
        );
        assert_eq!(
            p("x1").exact_div(&LaurentPoly::zero()),
            Err(LaurentError::DivisionByZero)
        );
    }

    #[test]
    fn division_by_laurent_denominator() {
        let den = p("x1^-2 + x2");
        let q = p("3*x1^-1*x2^4 - x2 + 7");
        assert_eq!((&q * &den).exact_div(&den).unwrap(), q);
        assert_eq!(p("2*x1 + 4").exact_div(&p("2")).unwrap(), p("x1 + 2"));
        assert_eq!(p("3*x1").exact_div(&p("2")), Err(LaurentError::NotDivisible));
    }

    #[test]
    fn eval_examples() {
        let mut a = BTreeMap::new();
        a.insert(VarId(0), BigRational::from_integer(2.into()));
        a.insert(VarId(1), BigRational::from_integer(3.into()));
        assert_eq!(
            p("x1^-1 + x1^-1*x2").eval(&a).unwrap(),
            BigRational::from_integer(2.into())
        );
        a.insert(VarId(0), BigRational::from_integer(5.into()));
        a.insert(VarId(1), BigRational::from_integer(7.into()));
        assert_eq!(p("x1*x2").eval(&a).unwrap(), BigRational::from_integer(35.into()));
        a.insert(VarId(0), BigRational::zero());
        assert_eq!(p("x1^-1").eval(&a), Err(LaurentError::ZeroAtPole(VarId(0))));
        assert_eq!(p("x3").eval(&a), Err(LaurentError::Unassigned(VarId(2))));
    }

    #[test]
    fn positivity_examples() {
        assert!(p("x1^-1 + x1^-1*x2").is_positive());
        assert!(!p("x1 - x2").is_positive());
        assert!(!LaurentPoly::zero().is_positive());
    }

    #[test]
    fn printing_is_canonical() {
        assert_eq!(p("x1^-1*x2 + x1^-1").to_string(), "x1^-1 + x1^-1*x2");
        assert_eq!(p("x2 + 1 + x1").to_string(), "1 + x2 + x1");
        assert_eq!(p("-x1 + 3 - 2*x2^-3").to_string(), "-2*x2^-3 + 3 - x1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(p("x1 + -x1").to_string(), "0");
        let ctx = VarContext::with_prefix("y", 2);
        assert_eq!(p("1 + x1*x2^2").display(&ctx).to_string(), "1 + y1*y2^2");
        assert_eq!(LaurentPoly::parse("1 + y1*y2^2", &ctx).unwrap(), p("1 + x1*x2^2"));
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "x1 +", "x1**x2", "x1^a", "z7", "+"] {
            assert!(bad.parse::<LaurentPoly>().is_err(), "{bad:?} parsed");
        }
        assert_eq!(p("x1^(-2)"), p("x1^-2"));
        assert_eq!(p("-1"), LaurentPoly::constant(-1));
    }

    #[test]
    fn substitution_clears_denominators() {
        // (1 + x2) / x1 at x1 := 1 + y, x2 := y(1 + y) - 1 gives y.
        let f = p("x1^-1 + x1^-1*x2");
        let images = [p("1 + x1"), p("x1 + x1^2 - 1")];
        assert_eq!(f.substitute(&images).unwrap(), p("x1"));
        assert_eq!(
            f.substitute(&[p("x1 + 1"), p("x1 + 2")]),
            Err(LaurentError::NotDivisible)
        );
    }

    #[test]
    fn specialization() {
        let f = p("x1^-1*x3 + 2*x2*x3^2");
        assert_eq!(f.specialize_to_one(|v| v == VarId(2)), p("x1^-1 + 2*x2"));
    }

    fn small_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec(
            (prop::collection::vec(-3i64..=3, 4), -9i64..=9),
            0..5,
        )
        .prop_map(|terms| {
            LaurentPoly::from_terms(terms.into_iter().map(|(exps, c)| {
                let m = Monomial::from_pairs(
                    exps.into_iter().enumerate().map(|(i, e)| (VarId::from(i), e)),
                );
                (m, BigInt::from(c))
            }))
        })
    }

    fn small_assignment() -> impl Strategy<Value = BTreeMap<VarId, BigRational>> {
        prop::collection::vec((1i64..=5, prop::bool::ANY), 4).prop_map(|vals| {
            vals.into_iter()
                .enumerate()
                .map(|(i, (v, neg))| {
                    let v = if neg { -v } else { v };
                    (VarId::from(i), BigRational::from_integer(v.into()))
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }

        #[test]
        fn exact_division_round_trip(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
        }

        #[test]
        fn canonical_form_independent_of_construction(a in small_poly(), b in small_poly()) {
            let left = &a + &b;
            let right = LaurentPoly::from_terms(
                b.terms().chain(a.terms()).map(|(m, c)| (m.clone(), c.clone())).collect::<Vec<_>>().into_iter().rev(),
            );
            prop_assert_eq!(left.to_string(), right.to_string());
            prop_assert_eq!(&left, &right);
            prop_assert_eq!(left.to_string().parse::<LaurentPoly>().unwrap(), left);
        }

        #[test]
        fn eval_is_multiplicative(a in small_poly(), b in small_poly(), at in small_assignment()) {
            let lhs = (&a * &b).eval(&at).unwrap();
            prop_assert_eq!(lhs, a.eval(&at).unwrap() * b.eval(&at).unwrap());
        }
    }
}
