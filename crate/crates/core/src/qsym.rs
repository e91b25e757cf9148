//! Degree-truncated quasisymmetric series in the monomial basis, with
//! coefficients in `Q[q]`, and the change of basis machinery.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, factorial, fmt_rat, parse_rat, rat_int, stirling2, BigRat, QPoly};
use crate::error::Error;

/// A composition; parts are positive.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Composition(pub Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<usize>) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "composition parts must be positive");
        Composition(parts)
    }

    pub fn empty() -> Self {
        Composition(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn reversed(&self) -> Self {
        Composition(self.0.iter().rev().cloned().collect())
    }

    pub fn sorted(&self) -> Partition {
        Partition::new(self.0.clone())
    }

    /// `I(alpha)`: partial sums, excluding the total.
    pub fn descent_set(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut s = 0;
        for &p in &self.0[..self.0.len().saturating_sub(1)] {
            s += p;
            out.push(s);
        }
        out
    }

    /// Inverse of `descent_set` for a given total `n`.
    pub fn from_descents(n: usize, set: &[usize]) -> Self {
        let mut parts = Vec::new();
        let mut prev = 0;
        for &s in set {
            parts.push(s - prev);
            prev = s;
        }
        if n > prev {
            parts.push(n - prev);
        }
        Composition(parts)
    }

    /// All compositions of `n`, in lex order.
    pub fn all_of(n: usize) -> Vec<Composition> {
        let mut out = Vec::new();
        fn go(left: usize, cur: &mut Vec<usize>, out: &mut Vec<Composition>) {
            if left == 0 {
                out.push(Composition(cur.clone()));
                return;
            }
            for k in 1..=left {
                cur.push(k);
                go(left - k, cur, out);
                cur.pop();
            }
        }
        go(n, &mut Vec::new(), &mut out);
        out
    }
}

impl Ord for Composition {
    /// Degree ascending, then length descending, then lex ascending.
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| o.len().cmp(&self.len()))
            .then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

fn write_parts(f: &mut fmt::Formatter<'_>, parts: &[usize]) -> fmt::Result {
    write!(f, "[")?;
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{p}")?;
    }
    write!(f, "]")
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.0)
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.0)
    }
}

impl From<&[usize]> for Composition {
    fn from(p: &[usize]) -> Self {
        Composition::new(p.to_vec())
    }
}

/// A partition: parts sorted in decreasing order.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Partition(pub Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// `r_i(lambda)`, the number of parts equal to `i`.
    pub fn mult(&self, i: usize) -> usize {
        self.0.iter().filter(|&&p| p == i).count()
    }

    /// Distinct parts with their multiplicities, largest part first.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.0.first().copied().unwrap_or(0);
        Partition((1..=w).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect())
    }

    pub fn as_composition(&self) -> Composition {
        Composition(self.0.clone())
    }

    /// Partitions of `n` in lexicographically decreasing order.
    pub fn all_of(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        fn go(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if left == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for k in (1..=left.min(max)).rev() {
                cur.push(k);
                go(left - k, k, cur, out);
                cur.pop();
            }
        }
        go(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Distinct rearrangements of the parts.
    pub fn rearrangements(&self) -> Vec<Composition> {
        let mut parts = self.0.clone();
        parts.sort_unstable();
        let mut out = vec![Composition(parts.clone())];
        // next_permutation over the sorted multiset
        loop {
            let n = parts.len();
            if n < 2 {
                break;
            }
            let mut i = n - 1;
            while i > 0 && parts[i - 1] >= parts[i] {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            let mut j = n - 1;
            while parts[j] <= parts[i - 1] {
                j -= 1;
            }
            parts.swap(i - 1, j);
            parts[i..].reverse();
            out.push(Composition(parts.clone()));
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.0)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.0)
    }
}

/// Quasisymmetric series truncated above x-degree `trunc`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TruncatedSeries {
    trunc: usize,
    terms: BTreeMap<Composition, QPoly>,
}

impl TruncatedSeries {
    pub fn zero(trunc: usize) -> Self {
        TruncatedSeries { trunc, terms: BTreeMap::new() }
    }

    pub fn one(trunc: usize) -> Self {
        Self::monomial(Composition::empty(), QPoly::one(), trunc)
    }

    /// `c * M_alpha`, or zero if `|alpha| > trunc`.
    pub fn monomial(alpha: Composition, c: QPoly, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(alpha, &c);
        s
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Composition, &QPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &Composition) -> QPoly {
        self.terms.get(alpha).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, alpha: &Composition) -> Option<&QPoly> {
        self.terms.get(alpha)
    }

    /// Adds `c * M_alpha`, silently dropping it above the truncation.
    pub fn add_term(&mut self, alpha: Composition, c: &QPoly) {
        if alpha.degree() > self.trunc || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&alpha) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&alpha);
                }
            }
            None => {
                self.terms.insert(alpha, c.clone());
            }
        }
    }

    fn check_trunc(&self, o: &Self) -> Result<(), Error> {
        if self.trunc != o.trunc {
            return Err(Error::TruncMismatch(self.trunc, o.trunc));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, Error> {
        self.check_trunc(o)?;
        let mut r = self.clone();
        r.add_assign(o);
        Ok(r)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, Error> {
        self.check_trunc(o)?;
        let mut r = self.clone();
        r.add_scaled(o, &-QPoly::one());
        Ok(r)
    }

    /// In-place sum; the other series is read up to this truncation.
    pub fn add_assign(&mut self, o: &Self) {
        for (a, c) in &o.terms {
            self.add_term(a.clone(), c);
        }
    }

    /// `self += c * o`
    pub fn add_scaled(&mut self, o: &Self, c: &QPoly) {
        if c.is_zero() {
            return;
        }
        for (a, x) in &o.terms {
            if a.degree() <= self.trunc {
                self.add_term(a.clone(), &(x * c));
            }
        }
    }

    pub fn scale(&self, c: &QPoly) -> Self {
        let mut r = Self::zero(self.trunc);
        r.add_scaled(self, c);
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(&-QPoly::one())
    }

    /// Quasi-shuffle product.
    pub fn mul(&self, o: &Self) -> Result<Self, Error> {
        self.check_trunc(o)?;
        let mut r = Self::zero(self.trunc);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if a.degree() + b.degree() > self.trunc {
                    continue;
                }
                let xy = x * y;
                for (g, m) in quasi_shuffle(&a.0, &b.0) {
                    r.add_term(Composition(g), &xy.scale(&rat_int(BigInt::from(m))));
                }
            }
        }
        Ok(r)
    }

    /// Drops everything above the new (smaller) truncation.
    pub fn retrunc(&self, n: usize) -> Self {
        let mut r = Self::zero(n);
        r.add_assign(self);
        r
    }

    /// Homogeneous component of degree `d`.
    pub fn component(&self, d: usize) -> Self {
        let mut r = Self::zero(self.trunc);
        for (a, c) in &self.terms {
            if a.degree() == d {
                r.add_term(a.clone(), c);
            }
        }
        r
    }

    /// Lowest degree present, if any.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|a| a.degree()).min()
    }

    /// Deconcatenation coproduct.
    pub fn coproduct(&self) -> TensorSeries {
        let mut r = TensorSeries::zero(self.trunc);
        for (a, c) in &self.terms {
            for k in 0..=a.len() {
                r.add_term(Composition(a.0[..k].to_vec()), Composition(a.0[k..].to_vec()), c);
            }
        }
        r
    }

    /// Symmetry test; on failure returns two rearrangements with different coefficients.
    pub fn is_symmetric(&self) -> Result<(), (Composition, Composition)> {
        for d in 0..=self.trunc {
            for lam in Partition::all_of(d) {
                let rs = lam.rearrangements();
                let c0 = self.coeff(&rs[0]);
                for r in &rs[1..] {
                    if self.coeff(r) != c0 {
                        let mut pair = [rs[0].clone(), r.clone()];
                        pair.sort_by(|x, y| x.0.cmp(&y.0));
                        let [x, y] = pair;
                        return Err((x, y));
                    }
                }
            }
        }
        Ok(())
    }

    /// Reverses every composition.
    pub fn rho(&self) -> Self {
        let mut r = Self::zero(self.trunc);
        for (a, c) in &self.terms {
            r.add_term(a.reversed(), c);
        }
        r
    }

    /// Replaces each coefficient `c(q)` by `q^degq c(1/q)`.
    pub fn tau(&self, degq: usize) -> Result<Self, Error> {
        let mut r = Self::zero(self.trunc);
        for (a, c) in &self.terms {
            r.add_term(a.clone(), &c.reverse(degq)?);
        }
        Ok(r)
    }

    pub fn map_coeffs(&self, f: impl Fn(&QPoly) -> QPoly) -> Self {
        let mut r = Self::zero(self.trunc);
        for (a, c) in &self.terms {
            r.add_term(a.clone(), &f(c));
        }
        r
    }

    /// Specializes `q = 1`.
    pub fn at_q_one(&self) -> Self {
        self.map_coeffs(|c| QPoly::constant(c.at_one()))
    }

    pub fn max_q_degree(&self) -> Option<usize> {
        self.terms.values().filter_map(|c| c.degree()).max()
    }

    /// All coefficients lie in `N[q]`.
    pub fn is_natural(&self) -> bool {
        self.terms.values().all(|c| c.is_natural())
    }

    /// First key (in canonical order) where the series differ.
    pub fn first_difference(&self, o: &Self) -> Option<(Composition, QPoly, QPoly)> {
        let mut keys: Vec<&Composition> = self.terms.keys().chain(o.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let (x, y) = (self.coeff(k), o.coeff(k));
            if x != y {
                return Some((k.clone(), x, y));
            }
        }
        None
    }

    /// Canonical text form: `c * M[a,b] + ...`, or `0`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(a, c)| {
                let cs = c.to_string();
                if c.coeffs().iter().filter(|x| !x.is_zero()).count() > 1 {
                    format!("({cs}) * M{a}")
                } else {
                    format!("{cs} * M{a}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_json_value(&self) -> SeriesJson {
        SeriesJson {
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| TermJson { alpha: a.0.clone(), poly: c.coeffs().iter().map(fmt_rat).collect() })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        let v: SeriesJson = serde_json::from_str(s).map_err(|e| Error::Invalid(e.to_string()))?;
        Self::from_json_value(&v)
    }

    pub fn from_json_value(v: &SeriesJson) -> Result<Self, Error> {
        let mut s = Self::zero(v.trunc);
        for t in &v.terms {
            if t.alpha.contains(&0) {
                return Err(Error::Invalid("zero part in composition".into()));
            }
            if t.alpha.iter().sum::<usize>() > v.trunc {
                return Err(Error::Invalid(format!("term {:?} above truncation", t.alpha)));
            }
            let c = QPoly::from_coeffs(t.poly.iter().map(|x| parse_rat(x)).collect::<Result<_, _>>()?);
            s.add_term(Composition(t.alpha.clone()), &c);
        }
        Ok(s)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[N={}] {}", self.trunc, self.to_text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub trunc: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub alpha: Vec<usize>,
    pub poly: Vec<String>,
}

/// All quasi-shuffles of `a` and `b` with multiplicities.
pub fn quasi_shuffle(a: &[usize], b: &[usize]) -> Vec<(Vec<usize>, u64)> {
    let mut memo: HashMap<(usize, usize), Vec<(Vec<usize>, u64)>> = HashMap::new();
    fn go(a: &[usize], b: &[usize], i: usize, j: usize, memo: &mut HashMap<(usize, usize), Vec<(Vec<usize>, u64)>>) -> Vec<(Vec<usize>, u64)> {
        if i == a.len() {
            return vec![(b[j..].to_vec(), 1)];
        }
        if j == b.len() {
            return vec![(a[i..].to_vec(), 1)];
        }
        if let Some(v) = memo.get(&(i, j)) {
            return v.clone();
        }
        let mut acc: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for (head, ni, nj) in [(a[i], i + 1, j), (b[j], i, j + 1), (a[i] + b[j], i + 1, j + 1)] {
            for (tail, m) in go(a, b, ni, nj, memo) {
                let mut w = Vec::with_capacity(tail.len() + 1);
                w.push(head);
                w.extend(tail);
                *acc.entry(w).or_insert(0) += m;
            }
        }
        let v: Vec<_> = acc.into_iter().collect();
        memo.insert((i, j), v.clone());
        v
    }
    go(a, b, 0, 0, &mut memo)
}

/// Truncated element of the completed tensor square.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TensorSeries {
    trunc: usize,
    terms: BTreeMap<(Composition, Composition), QPoly>,
}

impl TensorSeries {
    pub fn zero(trunc: usize) -> Self {
        TensorSeries { trunc, terms: BTreeMap::new() }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Composition, Composition), &QPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: &Composition, b: &Composition) -> QPoly {
        self.terms.get(&(a.clone(), b.clone())).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, a: Composition, b: Composition, c: &QPoly) {
        if a.degree() + b.degree() > self.trunc || c.is_zero() {
            return;
        }
        let key = (a, b);
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, o: &Self) {
        for ((a, b), c) in &o.terms {
            self.add_term(a.clone(), b.clone(), c);
        }
    }

    /// `self += c * (f ⊗ g)`
    pub fn add_tensor(&mut self, f: &TruncatedSeries, g: &TruncatedSeries, c: &QPoly) {
        for (a, x) in f.iter() {
            let xc = x * c;
            for (b, y) in g.iter() {
                if a.degree() + b.degree() <= self.trunc {
                    self.add_term(a.clone(), b.clone(), &(&xc * y));
                }
            }
        }
    }

    pub fn tensor(f: &TruncatedSeries, g: &TruncatedSeries, trunc: usize) -> Self {
        let mut r = Self::zero(trunc);
        r.add_tensor(f, g, &QPoly::one());
        r
    }

    /// Componentwise product `(a⊗b)(c⊗d) = ac ⊗ bd`.
    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.trunc);
        for ((a1, b1), x) in &self.terms {
            for ((a2, b2), y) in &o.terms {
                if a1.degree() + b1.degree() + a2.degree() + b2.degree() > self.trunc {
                    continue;
                }
                let xy = x * y;
                let left = quasi_shuffle(&a1.0, &a2.0);
                let right = quasi_shuffle(&b1.0, &b2.0);
                for (l, m) in &left {
                    for (rr, n) in &right {
                        let c = xy.scale(&rat_int(BigInt::from(m * n)));
                        r.add_term(Composition(l.clone()), Composition(rr.clone()), &c);
                    }
                }
            }
        }
        r
    }

    pub fn first_difference(&self, o: &Self) -> Option<((Composition, Composition), QPoly, QPoly)> {
        let mut keys: Vec<&(Composition, Composition)> = self.terms.keys().chain(o.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let x = self.terms.get(k).cloned().unwrap_or_default();
            let y = o.terms.get(k).cloned().unwrap_or_default();
            if x != y {
                return Some((k.clone(), x, y));
            }
        }
        None
    }
}

impl fmt::Debug for TensorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[N={}] ", self.trunc)?;
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|((a, b), c)| format!("({c}) M{a}⊗M{b}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Named bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisId {
    M,
    Lbar,
    E,
    Ebar,
    Mono,
    Mtilde,
    Sbar,
}

impl BasisId {
    pub const ALL: [BasisId; 7] = [BasisId::M, BasisId::Lbar, BasisId::E, BasisId::Ebar, BasisId::Mono, BasisId::Mtilde, BasisId::Sbar];

    pub fn name(self) -> &'static str {
        match self {
            BasisId::M => "M",
            BasisId::Lbar => "Lbar",
            BasisId::E => "e",
            BasisId::Ebar => "ebar",
            BasisId::Mono => "m",
            BasisId::Mtilde => "mtilde",
            BasisId::Sbar => "sbar",
        }
    }

    /// Indexed by partitions (and only meaningful for symmetric series).
    pub fn is_symmetric(self) -> bool {
        !matches!(self, BasisId::M | BasisId::Lbar)
    }

    pub fn parse(s: &str) -> Option<BasisId> {
        Some(match s {
            "M" => BasisId::M,
            "Lbar" | "L" => BasisId::Lbar,
            "e" => BasisId::E,
            "ebar" => BasisId::Ebar,
            "m" | "mono" => BasisId::Mono,
            "mtilde" => BasisId::Mtilde,
            "sbar" => BasisId::Sbar,
            _ => return None,
        })
    }
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

type BasisCache = Mutex<HashMap<(BasisId, Vec<usize>, usize), Arc<TruncatedSeries>>>;

fn basis_cache() -> &'static BasisCache {
    static C: OnceLock<BasisCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// Truncation at `n` of the basis element `b` indexed by `idx`. Symmetric
/// bases sort `idx` into a partition first.
pub fn basis_element(b: BasisId, idx: &[usize], n: usize) -> Arc<TruncatedSeries> {
    let idx: Vec<usize> = if b.is_symmetric() { Partition::new(idx.to_vec()).0 } else { idx.to_vec() };
    let key = (b, idx.clone(), n);
    if let Some(s) = basis_cache().lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return s.clone();
    }
    let s = Arc::new(build_basis_element(b, &idx, n));
    basis_cache().lock().unwrap_or_else(|e| e.into_inner()).insert(key, s.clone());
    s
}

fn build_basis_element(b: BasisId, idx: &[usize], n: usize) -> TruncatedSeries {
    match b {
        BasisId::M => TruncatedSeries::monomial(Composition::new(idx.to_vec()), QPoly::one(), n),
        BasisId::Lbar => crate::orientation::multifundamental(&Composition::new(idx.to_vec()), n),
        BasisId::E => {
            let mut acc = TruncatedSeries::one(n);
            for &k in idx {
                let ek = TruncatedSeries::monomial(Composition(vec![1; k]), QPoly::one(), n);
                acc = acc.mul(&ek).expect("same truncation");
            }
            acc
        }
        BasisId::Ebar => {
            let mut acc = TruncatedSeries::one(n);
            for &k in idx {
                acc = acc.mul(&ebar_single(k, n)).expect("same truncation");
            }
            acc
        }
        BasisId::Mono => monomial_symmetric(&Partition(idx.to_vec()), n),
        BasisId::Mtilde => mtilde(&Partition(idx.to_vec()), n),
        BasisId::Sbar => crate::tableaux::grothendieck_series(&Partition(idx.to_vec()), n),
    }
}

/// `ē_k = sum_{j >= k} binom(j-1, k-1) e_j`, with `ē_0 = 1`.
fn ebar_single(k: usize, n: usize) -> TruncatedSeries {
    if k == 0 {
        return TruncatedSeries::one(n);
    }
    let mut s = TruncatedSeries::zero(n);
    for j in k..=n {
        s.add_term(Composition(vec![1; j]), &QPoly::constant(rat_int(binomial(j - 1, k - 1))));
    }
    s
}

/// `m_lambda` in the monomial quasisymmetric basis.
pub fn monomial_symmetric(lam: &Partition, n: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(n);
    for a in lam.rearrangements() {
        s.add_term(a, &QPoly::one());
    }
    s
}

/// The augmented monomial function built from Stirling numbers.
pub fn mtilde(lam: &Partition, n: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(n);
    if lam.is_empty() {
        return TruncatedSeries::one(n);
    }
    let mults = lam.multiplicities();
    // choose r_i(nu) >= r_i(lam) for each distinct part, subject to |nu| <= n
    fn go(i: usize, mults: &[(usize, usize)], left: usize, cur: &mut Vec<(usize, usize)>, s: &mut TruncatedSeries, n: usize) {
        if i == mults.len() {
            let mut nu = Vec::new();
            let mut c = BigInt::one();
            for (k, &(part, r)) in cur.iter().enumerate() {
                nu.extend(std::iter::repeat(part).take(r));
                c *= stirling2(r, mults[k].1) * factorial(mults[k].1);
            }
            let nu = Partition::new(nu);
            s.add_scaled(&monomial_symmetric(&nu, n), &QPoly::constant(rat_int(c)));
            return;
        }
        let (part, r0) = mults[i];
        let mut r = r0;
        while part * r <= left {
            cur.push((part, r));
            go(i + 1, mults, left - part * r, cur, s, n);
            cur.pop();
            r += 1;
        }
    }
    go(0, &mults, n, &mut Vec::new(), &mut s, n);
    s
}

/// Result of a change of basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Expansion {
    pub basis: BasisId,
    pub trunc: usize,
    /// Indices are compositions for `M`/`Lbar` and partitions otherwise.
    pub terms: BTreeMap<Composition, QPoly>,
    /// True when the expansion reproduces the input through degree `trunc`.
    pub residual_zero: bool,
}

impl Expansion {
    pub fn coeff(&self, idx: &[usize]) -> QPoly {
        self.terms.get(&Composition(idx.to_vec())).cloned().unwrap_or_default()
    }

    /// `2 e[2] + 6 e[3]`; the empty index renders as the bare coefficient.
    pub fn render(&self) -> String {
        render_terms(self.basis.name(), self.terms.iter())
    }

    /// Re-assembles the series from its coefficients.
    pub fn resum(&self) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(self.trunc);
        for (idx, c) in &self.terms {
            s.add_scaled(&basis_element(self.basis, &idx.0, self.trunc), c);
        }
        s
    }
}

pub fn render_terms<'a>(name: &str, terms: impl Iterator<Item = (&'a Composition, &'a QPoly)>) -> String {
    let parts: Vec<String> = terms
        .map(|(idx, c)| {
            let nz = c.coeffs().iter().filter(|x| !x.is_zero()).count();
            let cs = if nz > 1 { format!("({c})") } else { c.to_string() };
            if idx.is_empty() {
                cs
            } else {
                format!("{cs} {name}{idx}")
            }
        })
        .collect();
    parts.join(" + ")
}

/// Expands `f` in basis `b`, using triangularity degree by degree.
pub fn expand_in_basis(f: &TruncatedSeries, b: BasisId) -> Result<Expansion, Error> {
    if b.is_symmetric() {
        if let Err((x, y)) = f.is_symmetric() {
            return Err(Error::NotSymmetric(x.to_string(), y.to_string()));
        }
    }
    let n = f.trunc();
    let mut res = f.clone();
    let mut terms = BTreeMap::new();
    let take = |res: &mut TruncatedSeries, idx: Vec<usize>, c: QPoly, terms: &mut BTreeMap<Composition, QPoly>| {
        if c.is_zero() {
            return;
        }
        res.add_scaled(&basis_element(b, &idx, n), &-&c);
        terms.insert(Composition(idx), c);
    };
    match b {
        BasisId::M => {
            terms = f.terms.clone();
            res = TruncatedSeries::zero(n);
        }
        BasisId::Lbar => {
            for d in 0..=n {
                let mut comps = Composition::all_of(d);
                comps.sort_by_key(|a| a.len());
                for a in comps {
                    let c = res.coeff(&a);
                    take(&mut res, a.0, c, &mut terms);
                }
            }
        }
        BasisId::Mono => {
            for d in 0..=n {
                for lam in Partition::all_of(d) {
                    let c = res.coeff(&lam.as_composition());
                    take(&mut res, lam.0, c, &mut terms);
                }
            }
        }
        BasisId::E => {
            for d in 0..=n {
                for mu in Partition::all_of(d) {
                    let c = res.coeff(&mu.as_composition());
                    take(&mut res, mu.conjugate().0, c, &mut terms);
                }
            }
        }
        BasisId::Sbar => {
            for d in 0..=n {
                for mu in Partition::all_of(d) {
                    let c = res.coeff(&mu.as_composition());
                    take(&mut res, mu.0, c, &mut terms);
                }
            }
        }
        BasisId::Mtilde => {
            for d in 0..=n {
                for mu in Partition::all_of(d) {
                    let lead: BigInt = mu.multiplicities().iter().map(|&(_, r)| factorial(r)).product();
                    let c = res.coeff(&mu.as_composition()).scale(&BigRat::new(BigInt::one(), lead));
                    take(&mut res, mu.0, c, &mut terms);
                }
            }
        }
        BasisId::Ebar => {
            for d in 0..=n {
                // e-expand the degree-d part of the residual, then subtract ebar's
                let mut part = res.component(d);
                let mut coeffs = Vec::new();
                for mu in Partition::all_of(d) {
                    let c = part.coeff(&mu.as_composition());
                    if c.is_zero() {
                        continue;
                    }
                    let lam = mu.conjugate();
                    part.add_scaled(&basis_element(BasisId::E, &lam.0, n).component(d), &-&c);
                    coeffs.push((lam, c));
                }
                for (lam, c) in coeffs {
                    take(&mut res, lam.0, c, &mut terms);
                }
            }
        }
    }
    Ok(Expansion { basis: b, trunc: n, terms, residual_zero: res.is_zero() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(parts: &[usize], n: usize) -> TruncatedSeries {
        TruncatedSeries::monomial(Composition(parts.to_vec()), QPoly::one(), n)
    }

    fn p(s: &str) -> QPoly {
        s.parse().unwrap()
    }

    fn series(n: usize, terms: &[(&[usize], &str)]) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(n);
        for (a, c) in terms {
            s.add_term(Composition(a.to_vec()), &p(c));
        }
        s
    }

    // oracle: expand the product of two monomial quasisymmetric functions in
    // k variables as polynomials and read off coefficients.
    fn mono_poly(a: &[usize], k: usize) -> HashMap<Vec<usize>, i64> {
        let mut out = HashMap::new();
        fn choose(start: usize, k: usize, a: &[usize], cur: &mut Vec<usize>, out: &mut HashMap<Vec<usize>, i64>) {
            if cur.len() == a.len() {
                let mut e = vec![0; k];
                for (i, &v) in cur.iter().enumerate() {
                    e[v] = a[i];
                }
                *out.entry(e).or_insert(0) += 1;
                return;
            }
            for v in start..k {
                cur.push(v);
                choose(v + 1, k, a, cur, out);
                cur.pop();
            }
        }
        choose(0, k, a, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn quasi_shuffle_matches_polynomial_product() {
        for (a, b) in [(vec![1], vec![1]), (vec![1], vec![2]), (vec![2, 1], vec![1, 3]), (vec![1, 1], vec![2])] {
            let k = a.len() + b.len();
            let pa = mono_poly(&a, k);
            let pb = mono_poly(&b, k);
            let mut prod: HashMap<Vec<usize>, i64> = HashMap::new();
            for (ea, ca) in &pa {
                for (eb, cb) in &pb {
                    let e: Vec<usize> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                    *prod.entry(e).or_insert(0) += ca * cb;
                }
            }
            for (g, mult) in quasi_shuffle(&a, &b) {
                // coefficient of x_1^g1 x_2^g2 ... in the product
                let mut e = g.clone();
                e.resize(k, 0);
                assert_eq!(prod.get(&e).copied().unwrap_or(0), mult as i64, "{a:?} * {b:?} at {g:?}");
            }
        }
    }

    #[test]
    fn products() {
        let n = 4;
        assert_eq!(m(&[1], n).mul(&m(&[1], n)).unwrap(), series(n, &[(&[1, 1], "2"), (&[2], "1")]));
        assert_eq!(m(&[1], n).mul(&m(&[2], n)).unwrap(), series(n, &[(&[1, 2], "1"), (&[2, 1], "1"), (&[3], "1")]));
        let f = series(n, &[(&[1, 2], "q"), (&[3], "1+q")]);
        assert_eq!(TruncatedSeries::one(n).mul(&f).unwrap(), f);
        assert!(m(&[1], 3).mul(&m(&[1], 4)).is_err());
    }

    #[test]
    fn sums() {
        let n = 3;
        assert_eq!(m(&[1], n).add(&m(&[1], n)).unwrap(), series(n, &[(&[1], "2")]));
        assert!(m(&[1], n).sub(&m(&[1], n)).unwrap().is_zero());
        let f = series(n, &[(&[2, 1], "q")]);
        assert_eq!(f.add(&TruncatedSeries::zero(n)).unwrap(), f);
    }

    #[test]
    fn coproducts() {
        let d = m(&[2], 4).coproduct();
        assert_eq!(d.len(), 2);
        assert!(d.coeff(&Composition::empty(), &Composition(vec![2])).is_one());
        assert!(d.coeff(&Composition(vec![2]), &Composition::empty()).is_one());
        let d = TruncatedSeries::one(2).coproduct();
        assert_eq!(d.len(), 1);
        let d = m(&[1, 2], 3).coproduct();
        assert_eq!(d.len(), 3);
        assert!(d.coeff(&Composition(vec![1]), &Composition(vec![2])).is_one());
    }

    #[test]
    fn symmetry() {
        let n = 3;
        assert!(series(n, &[(&[1, 2], "1"), (&[2, 1], "1")]).is_symmetric().is_ok());
        assert_eq!(m(&[1, 2], n).is_symmetric(), Err((Composition(vec![1, 2]), Composition(vec![2, 1]))));
        // M_112 vs M_211 from the first row of the L-bar table
        let f = series(4, &[(&[1, 1, 2], "5q"), (&[1, 2, 1], "5q"), (&[2, 1, 1], "1+3q+q^2")]);
        assert_eq!(f.is_symmetric(), Err((Composition(vec![1, 1, 2]), Composition(vec![2, 1, 1]))));
    }

    #[test]
    fn rho_tau() {
        assert_eq!(m(&[1, 2], 3).rho(), m(&[2, 1], 3));
        let f = series(4, &[(&[1, 1, 2], "1"), (&[3], "2")]);
        assert_eq!(f.rho(), series(4, &[(&[2, 1, 1], "1"), (&[3], "2")]));
        assert_eq!(series(2, &[(&[1], "q")]).tau(1).unwrap(), m(&[1], 2));
        assert_eq!(series(2, &[(&[1, 1], "1+q")]).tau(1).unwrap(), series(2, &[(&[1, 1], "1+q")]));
        assert_eq!(series(2, &[(&[2], "1+2q")]).tau(2).unwrap(), series(2, &[(&[2], "q^2+2q")]));
        assert!(series(2, &[(&[2], "q^3")]).tau(2).is_err());
    }

    #[test]
    fn basis_elements() {
        assert_eq!(*basis_element(BasisId::Lbar, &[1], 3), series(3, &[(&[1], "1"), (&[1, 1], "1"), (&[1, 1, 1], "1")]));
        let eb = basis_element(BasisId::Ebar, &[2], 4);
        assert_eq!(*eb, series(4, &[(&[1, 1], "1"), (&[1, 1, 1], "2"), (&[1, 1, 1, 1], "3")]));
        assert_eq!(*basis_element(BasisId::Sbar, &[1], 3), series(3, &[(&[1], "1"), (&[1, 1], "-1"), (&[1, 1, 1], "1")]));
        assert_eq!(*basis_element(BasisId::Mtilde, &[2], 4), series(4, &[(&[2], "1"), (&[2, 2], "1")]));
    }

    #[test]
    fn expansions() {
        let f = series(3, &[(&[1], "1"), (&[1, 1], "1"), (&[1, 1, 1], "1")]);
        let ex = expand_in_basis(&f, BasisId::Lbar).unwrap();
        assert_eq!(ex.terms.len(), 1);
        assert!(ex.coeff(&[1]).is_one());
        assert!(ex.residual_zero);
        assert!(matches!(expand_in_basis(&m(&[1, 2], 3), BasisId::E), Err(Error::NotSymmetric(..))));
    }

    #[test]
    fn partitions() {
        assert_eq!(Partition::all_of(4).len(), 5);
        assert_eq!(Partition::all_of(4)[0].0, vec![4]);
        assert_eq!(Partition::new(vec![1, 3, 1]).conjugate().0, vec![3, 1, 1]);
        assert_eq!(Partition::new(vec![2, 1, 1]).rearrangements().len(), 3);
        assert_eq!(Composition(vec![1, 2, 1]).descent_set(), vec![1, 3]);
        assert_eq!(Composition::from_descents(4, &[1, 3]), Composition(vec![1, 2, 1]));
        let mut v = vec![Composition(vec![2]), Composition(vec![1, 1]), Composition(vec![1]), Composition(vec![2, 1]), Composition(vec![1, 2])];
        v.sort();
        assert_eq!(v, vec![Composition(vec![1]), Composition(vec![1, 1]), Composition(vec![2]), Composition(vec![1, 2]), Composition(vec![2, 1])]);
    }

    #[test]
    fn json_roundtrip() {
        let f = series(4, &[(&[1, 1], "1/2+q"), (&[3], "-2q^2")]);
        assert_eq!(TruncatedSeries::from_json(&f.to_json()).unwrap(), f);
        assert_eq!(f.to_text(), "(1/2 + q) * M[1,1] + -2q^2 * M[3]");
    }
}
