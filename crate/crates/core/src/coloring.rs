//! Enumeration of proper (set-valued) colorings.
//!
//! The engine works colour by colour: colour `c` is given to a nonempty
//! independent set of vertices that may still take colours. Each node of the
//! search is therefore a surjective colouring onto `[c]`, and the sizes of
//! the colour classes (weighted by `omega`) form the composition whose
//! monomial quasisymmetric function it contributes to.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::arith::{q_factorial, rat_int, BigRat, QPoly};
use crate::error::{Check, Discrepancy, DiscrepancyKind};
use crate::graph::{bits, full_mask, Graph, Mask};
use crate::qsym::{Composition, TruncatedSeries};

/// Largest truncation the packed composition keys support.
pub const MAX_TRUNC: usize = 24;

/// Which exponent of `q` a colouring carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColoringStat {
    None,
    /// `asc` of a single-valued colouring.
    AscClassic,
    AscMax,
    AscMin,
    DesMax,
    DesMin,
    /// Tuples `(u,v,i,j)` with `u<v` adjacent, `i ∈ κ(u)`, `j ∈ κ(v)`, `i<j`.
    AscSetValued,
    DesSetValued,
}

/// The four versions of the L-bar series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    AscMax,
    AscMin,
    DesMax,
    DesMin,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::AscMax, Variant::AscMin, Variant::DesMax, Variant::DesMin];

    fn stat(self) -> ColoringStat {
        match self {
            Variant::AscMax => ColoringStat::AscMax,
            Variant::AscMin => ColoringStat::AscMin,
            Variant::DesMax => ColoringStat::DesMax,
            Variant::DesMin => ColoringStat::DesMin,
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        Some(match s {
            "asc-max" | "asc_max" => Variant::AscMax,
            "asc-min" | "asc_min" => Variant::AscMin,
            "des-max" | "des_max" => Variant::DesMax,
            "des-min" | "des_min" => Variant::DesMin,
            _ => return None,
        })
    }
}

/// Constraint on the number of colours per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SizeProfile {
    /// Exactly one colour.
    Single,
    /// Any finite nonempty set.
    Unconstrained,
    /// `|κ(v)| = mu[v]`.
    Fixed(Vec<usize>),
}

/// Restricts which composition keys are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyFilter {
    All,
    /// Only weakly decreasing compositions; enough for symmetric series.
    Partitions,
}

/// Full description of one enumeration.
#[derive(Debug, Clone)]
pub struct ColoringSpec<'a> {
    pub graph: &'a Graph,
    pub weights: Option<&'a [usize]>,
    pub sizes: SizeProfile,
    pub stat: ColoringStat,
    pub trunc: usize,
    pub filter: KeyFilter,
}

impl<'a> ColoringSpec<'a> {
    pub fn new(graph: &'a Graph, sizes: SizeProfile, stat: ColoringStat, trunc: usize) -> Self {
        ColoringSpec { graph, weights: None, sizes, stat, trunc, filter: KeyFilter::All }
    }
}

pub(crate) type Counts = HashMap<u128, Vec<u64>>;

pub(crate) fn pack_push(key: u128, part: usize) -> u128 {
    debug_assert!(part > 0 && part < 32);
    (key << 5) | part as u128
}

pub(crate) fn unpack(mut key: u128) -> Composition {
    let mut parts = Vec::new();
    while key != 0 {
        parts.push((key & 31) as usize);
        key >>= 5;
    }
    parts.reverse();
    Composition(parts)
}

pub(crate) fn record(counts: &mut Counts, key: u128, stat: usize) {
    let v = counts.entry(key).or_default();
    if v.len() <= stat {
        v.resize(stat + 1, 0);
    }
    v[stat] += 1;
}

pub(crate) fn merge_counts(mut a: Counts, b: Counts) -> Counts {
    for (k, v) in b {
        let e = a.entry(k).or_default();
        if e.len() < v.len() {
            e.resize(v.len(), 0);
        }
        for (x, y) in e.iter_mut().zip(v) {
            *x += y;
        }
    }
    a
}

pub(crate) fn counts_to_series(counts: Counts, trunc: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(trunc);
    for (k, v) in counts {
        s.add_term(unpack(k), &QPoly::from_counts(&v));
    }
    s
}

struct Ctx<'a> {
    n: usize,
    adj: &'a [Mask],
    w: Vec<usize>,
    mu: Option<Vec<usize>>,
    single: bool,
    stat: ColoringStat,
    trunc: usize,
    filter: KeyFilter,
    edges: Vec<(usize, usize)>,
}

#[derive(Clone)]
struct State {
    cnt: [u8; 32],
    first: [u8; 32],
    last: [u8; 32],
    covered: Mask,
    deg: usize,
    key: u128,
    colors: u8,
    last_part: usize,
    asc: usize,
    des: usize,
}

impl Ctx<'_> {
    fn eligible(&self, st: &State) -> Mask {
        if self.single {
            return full_mask(self.n) & !st.covered;
        }
        match &self.mu {
            None => full_mask(self.n),
            Some(mu) => (0..self.n).filter(|&v| (st.cnt[v] as usize) < mu[v]).fold(0, |m, v| m | 1 << v),
        }
    }

    fn complete(&self, st: &State) -> bool {
        match &self.mu {
            Some(mu) => (0..self.n).all(|v| st.cnt[v] as usize == mu[v]),
            None => st.covered == full_mask(self.n),
        }
    }

    /// Minimal weight still needed to finish.
    fn required(&self, st: &State) -> usize {
        match &self.mu {
            Some(mu) => (0..self.n).map(|v| (mu[v] - st.cnt[v] as usize) * self.w[v]).sum(),
            None => bits(full_mask(self.n) & !st.covered).map(|v| self.w[v]).sum(),
        }
    }

    fn stat_value(&self, st: &State) -> usize {
        let cmp = |f: &[u8; 32], asc: bool| {
            self.edges.iter().filter(|&&(u, v)| if asc { f[u] < f[v] } else { f[u] > f[v] }).count()
        };
        match self.stat {
            ColoringStat::None => 0,
            ColoringStat::AscClassic | ColoringStat::AscMin => cmp(&st.first, true),
            ColoringStat::DesMin => cmp(&st.first, false),
            ColoringStat::AscMax => cmp(&st.last, true),
            ColoringStat::DesMax => cmp(&st.last, false),
            ColoringStat::AscSetValued => st.asc,
            ColoringStat::DesSetValued => st.des,
        }
    }

    fn apply(&self, st: &mut State, s: Mask, weight: usize) {
        let c = st.colors + 1;
        for v in bits(s) {
            for u in bits(self.adj[v]) {
                if u < v {
                    st.asc += st.cnt[u] as usize;
                } else {
                    st.des += st.cnt[u] as usize;
                }
            }
        }
        for v in bits(s) {
            if st.cnt[v] == 0 {
                st.first[v] = c;
            }
            st.cnt[v] += 1;
            st.last[v] = c;
        }
        st.covered |= s;
        st.colors = c;
        st.deg += weight;
        st.key = pack_push(st.key, weight);
        st.last_part = weight;
    }

    fn max_part(&self, st: &State) -> usize {
        let room = self.trunc - st.deg;
        match self.filter {
            KeyFilter::All => room,
            KeyFilter::Partitions if st.colors == 0 => room,
            KeyFilter::Partitions => room.min(st.last_part),
        }
    }

    /// Calls `f` for every admissible colour class at this node.
    fn classes(&self, st: &State, f: &mut dyn FnMut(Mask, usize)) {
        let elig: Vec<usize> = bits(self.eligible(st)).collect();
        let max = self.max_part(st);
        let need = self.required(st);
        let room = self.trunc - st.deg;
        // weight already counted in `need` for vertices that are still uncovered
        let w = &self.w;
        let single = self.single;
        let mu = &self.mu;
        let covered = st.covered;
        fn go(
            i: usize,
            elig: &[usize],
            adj: &[Mask],
            chosen: Mask,
            forb: Mask,
            weight: usize,
            relief: usize,
            lim: (usize, usize, usize),
            f: &mut dyn FnMut(Mask, usize),
            wt: &dyn Fn(usize) -> (usize, usize),
        ) {
            let (max, need, room) = lim;
            if i == elig.len() {
                if chosen != 0 && room - weight >= need - relief {
                    f(chosen, weight);
                }
                return;
            }
            go(i + 1, elig, adj, chosen, forb, weight, relief, lim, f, wt);
            let v = elig[i];
            if forb >> v & 1 == 0 {
                let (wv, rv) = wt(v);
                if weight + wv <= max {
                    go(i + 1, elig, adj, chosen | 1 << v, forb | adj[v], weight + wv, relief + rv, lim, f, wt);
                }
            }
        }
        // weight of v, and how much of the remaining requirement it discharges
        let wt = |v: usize| -> (usize, usize) {
            let r = if single || mu.is_some() || covered >> v & 1 == 0 { w[v] } else { 0 };
            (w[v], r)
        };
        go(0, &elig, self.adj, 0, 0, 0, 0, (max, need, room), f, &wt);
    }

    fn dfs(&self, st: &mut State, out: &mut Counts) {
        if self.complete(st) {
            record(out, st.key, self.stat_value(st));
        }
        let mut choices = Vec::new();
        self.classes(st, &mut |s, w| choices.push((s, w)));
        for (s, w) in choices {
            let saved = st.clone();
            self.apply(st, s, w);
            self.dfs(st, out);
            *st = saved;
        }
    }
}

/// Runs one enumeration; the root frontier is split across the rayon pool.
pub fn enumerate(spec: &ColoringSpec) -> TruncatedSeries {
    let g = spec.graph;
    assert!(spec.trunc <= MAX_TRUNC, "truncation above {MAX_TRUNC} is not supported");
    let n = g.n();
    let adj: Vec<Mask> = (0..n).map(|v| g.adj(v)).collect();
    let w = spec.weights.map(|w| w.to_vec()).unwrap_or_else(|| vec![1; n]);
    assert!(w.len() == n && w.iter().all(|&x| x > 0), "weights must be positive");
    let (single, mu) = match &spec.sizes {
        SizeProfile::Single => (true, None),
        SizeProfile::Unconstrained => (false, None),
        SizeProfile::Fixed(mu) => {
            assert!(mu.len() == n && mu.iter().all(|&x| x > 0 && x < 256), "sizes must be positive");
            (false, Some(mu.clone()))
        }
    };
    let ctx = Ctx { n, adj: &adj, w, mu, single, stat: spec.stat, trunc: spec.trunc, filter: spec.filter, edges: g.edges() };
    let root = State { cnt: [0; 32], first: [0; 32], last: [0; 32], covered: 0, deg: 0, key: 0, colors: 0, last_part: 0, asc: 0, des: 0 };
    if ctx.required(&root) > ctx.trunc {
        return TruncatedSeries::zero(spec.trunc);
    }
    let mut counts = Counts::new();
    if ctx.complete(&root) {
        record(&mut counts, 0, 0);
    }
    let mut frontier = Vec::new();
    ctx.classes(&root, &mut |s, w| frontier.push((s, w)));
    let merged = frontier
        .par_iter()
        .map(|&(s, w)| {
            let mut st = root.clone();
            ctx.apply(&mut st, s, w);
            let mut c = Counts::new();
            ctx.dfs(&mut st, &mut c);
            c
        })
        .reduce(Counts::new, merge_counts);
    counts = merge_counts(counts, merged);
    counts_to_series(counts, spec.trunc)
}

/// `X_G`, or `X_G(q)` with `q` marking ascents.
pub fn chromatic(g: &Graph, n: usize, q_on: bool) -> TruncatedSeries {
    let stat = if q_on { ColoringStat::AscClassic } else { ColoringStat::None };
    enumerate(&ColoringSpec::new(g, SizeProfile::Single, stat, n))
}

/// Kromatic function: proper set-valued colourings.
pub fn kromatic(g: &Graph, n: usize) -> TruncatedSeries {
    enumerate(&ColoringSpec::new(g, SizeProfile::Unconstrained, ColoringStat::None, n))
}

/// Weighted kromatic function: colour `i` at `v` contributes `x_i^{omega(v)}`.
pub fn kromatic_weighted(g: &Graph, omega: &[usize], n: usize) -> TruncatedSeries {
    let mut spec = ColoringSpec::new(g, SizeProfile::Unconstrained, ColoringStat::None, n);
    spec.weights = Some(omega);
    enumerate(&spec)
}

/// L-bar series: `q` marks ascents (or descents) of `max ∘ κ` (or `min ∘ κ`).
pub fn kromatic_l(g: &Graph, n: usize, variant: Variant) -> TruncatedSeries {
    enumerate(&ColoringSpec::new(g, SizeProfile::Unconstrained, variant.stat(), n))
}

/// Set-valued ascent series.
pub fn kromatic_x(g: &Graph, n: usize) -> TruncatedSeries {
    enumerate(&ColoringSpec::new(g, SizeProfile::Unconstrained, ColoringStat::AscSetValued, n))
}

/// Set-valued descent series.
pub fn kromatic_x_des(g: &Graph, n: usize) -> TruncatedSeries {
    enumerate(&ColoringSpec::new(g, SizeProfile::Unconstrained, ColoringStat::DesSetValued, n))
}

/// Set-valued ascent series restricted to `|κ(v)| = mu[v]`.
pub fn hwang_fixed_sizes(g: &Graph, mu: &[usize], n: usize) -> TruncatedSeries {
    enumerate(&ColoringSpec::new(g, SizeProfile::Fixed(mu.to_vec()), ColoringStat::AscSetValued, n))
}

/// All `alpha: V -> P` with `sum alpha <= n`, in lex order.
pub fn type_maps(nv: usize, n: usize, max_entry: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(i: usize, nv: usize, left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == nv {
            out.push(cur.clone());
            return;
        }
        let need = nv - i - 1;
        for a in 1..=max {
            if a + need > left {
                break;
            }
            cur.push(a);
            go(i + 1, nv, left - a, max, cur, out);
            cur.pop();
        }
    }
    if nv <= n {
        go(0, nv, n, max_entry, &mut Vec::new(), &mut out);
    }
    out
}

fn diff(context: &str, a: &TruncatedSeries, b: &TruncatedSeries) -> Check {
    match a.first_difference(b) {
        None => Ok(()),
        Some((k, x, y)) => Err(Discrepancy::value(context, format!("M{k}"), &x, &y)),
    }
}

/// Kromatic function against the clan sum `sum_alpha (1/alpha!) X_{Cl_alpha(G)}`.
pub fn clan_identity_check(g: &Graph, n: usize) -> Check {
    let lhs = kromatic(g, n);
    let mut rhs = TruncatedSeries::zero(n);
    for alpha in type_maps(g.n(), n, n) {
        let fact: num_bigint::BigInt = alpha.iter().map(|&a| crate::arith::factorial(a)).product();
        let c = QPoly::constant(BigRat::new(1.into(), fact));
        rhs.add_scaled(&chromatic(&g.clan(&alpha), n, false), &c);
    }
    diff(&format!("clan identity for {g:?}"), &lhs, &rhs)
}

/// `[mu]_q! X_G(x,q,mu) = X_{Cl_mu(G)}(q)`, checking exact divisibility first.
pub fn hwang_identity_check(g: &Graph, mu: &[usize], n: usize) -> Check {
    let ctx = format!("fixed-size identity for {g:?}, mu={mu:?}");
    let fact = mu.iter().fold(QPoly::one(), |acc, &m| &acc * &q_factorial(m));
    let clan = chromatic(&g.clan(mu), n, true);
    let direct = hwang_fixed_sizes(g, mu, n);
    let mut quotient = TruncatedSeries::zero(n);
    for (a, c) in clan.iter() {
        let (quo, rem) = c.div_rem(&fact);
        if !rem.is_zero() {
            return Err(Discrepancy {
                kind: DiscrepancyKind::Remainder,
                context: ctx,
                key: format!("M{a}"),
                left: c.to_string(),
                right: fact.to_string(),
            });
        }
        quotient.add_term(a.clone(), &quo);
    }
    diff(&ctx, &direct, &quotient)
}

/// Outcome of the symmetry classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClusterOutcome {
    /// Symmetric through degree `trunc`.
    Symmetric { trunc: usize },
    /// `M_a` and `M_b` are rearrangements with different coefficients.
    Witness { degree: usize, a: Composition, b: Composition, ca: QPoly, cb: QPoly },
    /// No witness up to `trunc`.
    Inconclusive { trunc: usize },
}

/// Decides symmetry of the L-bar series through degree `n_max`, returning the
/// lowest-degree witness when it fails.
pub fn cluster_witness(g: &Graph, n_max: usize) -> ClusterOutcome {
    let l = kromatic_l(g, n_max, Variant::AscMax);
    match l.is_symmetric() {
        Ok(()) if g.is_cluster_graph() => ClusterOutcome::Symmetric { trunc: n_max },
        Ok(()) => ClusterOutcome::Inconclusive { trunc: n_max },
        Err((a, b)) => {
            let (ca, cb) = (l.coeff(&a), l.coeff(&b));
            ClusterOutcome::Witness { degree: a.degree(), a, b, ca, cb }
        }
    }
}

/// Independent vertex-major enumeration used as a differential oracle.
pub mod oracle {
    use super::*;

    /// Which of the five coloring series to compute.
    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum SeriesKind {
        /// `X_G`
        X,
        /// `X_G(q)`
        Xq,
        /// kromatic function
        Kx,
        /// L-bar series (asc of max)
        Kl,
        /// set-valued ascent series
        Kxq,
    }

    impl SeriesKind {
        pub const ALL: [SeriesKind; 5] = [SeriesKind::X, SeriesKind::Xq, SeriesKind::Kx, SeriesKind::Kl, SeriesKind::Kxq];

        pub fn parse(s: &str) -> Option<Self> {
            Some(match s {
                "x" => SeriesKind::X,
                "xq" => SeriesKind::Xq,
                "kx" => SeriesKind::Kx,
                "kl" => SeriesKind::Kl,
                "kxq" => SeriesKind::Kxq,
                _ => return None,
            })
        }

        pub fn name(self) -> &'static str {
            match self {
                SeriesKind::X => "x",
                SeriesKind::Xq => "xq",
                SeriesKind::Kx => "kx",
                SeriesKind::Kl => "kl",
                SeriesKind::Kxq => "kxq",
            }
        }
    }

    /// The same series from the optimized engine.
    pub fn engine(g: &Graph, kind: SeriesKind, n: usize) -> TruncatedSeries {
        match kind {
            SeriesKind::X => chromatic(g, n, false),
            SeriesKind::Xq => chromatic(g, n, true),
            SeriesKind::Kx => kromatic(g, n),
            SeriesKind::Kl => kromatic_l(g, n, Variant::AscMax),
            SeriesKind::Kxq => kromatic_x(g, n),
        }
    }

    pub const MAX_VERTICES: usize = 3;
    pub const MAX_TRUNC: usize = 5;

    /// Brute force over all maps `V -> nonempty subsets of [l]`, for each `l`,
    /// keeping proper colourings that use every colour. `None` if the input is
    /// too large.
    pub fn naive(g: &Graph, kind: SeriesKind, n: usize) -> Option<TruncatedSeries> {
        if g.n() > MAX_VERTICES || n > MAX_TRUNC {
            return None;
        }
        let nv = g.n();
        let single = matches!(kind, SeriesKind::X | SeriesKind::Xq);
        let mut out = TruncatedSeries::zero(n);
        for l in 0..=n {
            let sets: Vec<u32> = (1u32..1 << l).filter(|s| !single || s.count_ones() == 1).collect();
            let mut idx = vec![0usize; nv];
            loop {
                if nv == 0 || !sets.is_empty() {
                    let kappa: Vec<u32> = idx.iter().map(|&i| sets[i]).collect();
                    let proper = g.edges().iter().all(|&(u, v)| kappa[u] & kappa[v] == 0);
                    let used = kappa.iter().fold(0, |a, &s| a | s);
                    if proper && used == (1u32 << l) - 1 {
                        let alpha: Vec<usize> = (0..l).map(|c| kappa.iter().filter(|&&s| s >> c & 1 == 1).count()).collect();
                        if alpha.iter().sum::<usize>() <= n {
                            let e = stat(g, kind, &kappa);
                            out.add_term(Composition(alpha), &QPoly::monomial(e, BigRat::from_integer(1.into())));
                        }
                    }
                }
                // odometer
                let mut i = 0;
                while i < nv {
                    idx[i] += 1;
                    if idx[i] < sets.len() {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if i == nv {
                    break;
                }
            }
        }
        Some(out)
    }

    fn stat(g: &Graph, kind: SeriesKind, kappa: &[u32]) -> usize {
        let max = |s: u32| 31 - s.leading_zeros();
        let min = |s: u32| s.trailing_zeros();
        let mut e = 0;
        for (u, v) in g.edges() {
            match kind {
                SeriesKind::X | SeriesKind::Kx => {}
                SeriesKind::Xq => e += (min(kappa[u]) < min(kappa[v])) as usize,
                SeriesKind::Kl => e += (max(kappa[u]) < max(kappa[v])) as usize,
                SeriesKind::Kxq => {
                    for i in 0..32 {
                        for j in 0..32 {
                            if kappa[u] >> i & 1 == 1 && kappa[v] >> j & 1 == 1 && i < j {
                                e += 1;
                            }
                        }
                    }
                }
            }
        }
        e
    }
}

/// Scalar helper: `c * q^0` from an integer.
pub fn int_poly(c: i64) -> QPoly {
    QPoly::constant(rat_int(c.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsym::{expand_in_basis, BasisId};

    fn p(s: &str) -> QPoly {
        s.parse().unwrap()
    }

    fn c(parts: &[usize]) -> Composition {
        Composition(parts.to_vec())
    }

    #[test]
    fn chromatic_examples() {
        let k2 = Graph::complete(2);
        let x = chromatic(&k2, 2, true);
        assert_eq!(x.len(), 1);
        assert_eq!(x.coeff(&c(&[1, 1])), p("1+q"));
        let e2 = chromatic(&Graph::empty(2), 2, false);
        assert_eq!(e2.coeff(&c(&[1, 1])), p("2"));
        assert_eq!(e2.coeff(&c(&[2])), p("1"));
        assert!(chromatic(&Graph::complete(3), 2, true).is_zero());
    }

    #[test]
    fn kromatic_examples() {
        let k1 = kromatic(&Graph::complete(1), 3);
        assert_eq!(k1.len(), 3);
        for k in 1..=3 {
            assert!(k1.coeff(&Composition(vec![1; k])).is_one());
        }
        let ex = expand_in_basis(&kromatic(&Graph::complete(2), 3), BasisId::E).unwrap();
        assert_eq!(ex.coeff(&[2]), p("2"));
        assert_eq!(ex.coeff(&[3]), p("6"));
        let w = kromatic_weighted(&Graph::complete(1), &[2], 4);
        assert_eq!(w.len(), 2);
        assert!(w.coeff(&c(&[2])).is_one() && w.coeff(&c(&[2, 2])).is_one());
    }

    #[test]
    fn l_examples() {
        // path with centre 2, the first row of the L-bar table
        let g = Graph::path(3);
        let l = kromatic_l(&g, 3, Variant::AscMax);
        assert_eq!(l.coeff(&c(&[1, 1, 1])), p("1+4q+q^2"));
        assert_eq!(l.coeff(&c(&[1, 2])), p("q"));
        assert_eq!(l.coeff(&c(&[2, 1])), p("q"));
        assert_eq!(l.len(), 3);
        let k2 = kromatic_l(&Graph::complete(2), 2, Variant::AscMax);
        assert_eq!(k2.coeff(&c(&[1, 1])), p("1+q"));
        let e = Graph::empty(3);
        assert_eq!(kromatic_l(&e, 5, Variant::AscMax), kromatic(&e, 5));
    }

    #[test]
    fn x_examples() {
        let x = kromatic_x(&Graph::path(3), 4);
        assert_eq!(x.coeff(&c(&[1, 1, 1, 1])), p("3+12q+16q^2+4q^3+q^4"));
        assert_eq!(kromatic_x(&Graph::complete(2), 2).coeff(&c(&[1, 1])), p("1+q"));
        assert_eq!(kromatic_x(&Graph::complete(3), 3).coeff(&c(&[1, 1, 1])), p("1+2q+2q^2+q^3"));
    }

    #[test]
    fn hwang_examples() {
        let k2 = Graph::complete(2);
        assert_eq!(hwang_fixed_sizes(&k2, &[1, 1], 2), chromatic(&k2, 2, true));
        let k1 = hwang_fixed_sizes(&Graph::complete(1), &[2], 2);
        assert_eq!(k1.coeff(&c(&[1, 1])), p("1"));
        assert!(k1.coeff(&c(&[2])).is_zero());
        // the sum over size profiles recovers the set-valued ascent series
        let g = Graph::path(3);
        let mut sum = TruncatedSeries::zero(5);
        for mu in type_maps(3, 5, 5) {
            sum.add_assign(&hwang_fixed_sizes(&g, &mu, 5));
        }
        assert_eq!(sum, kromatic_x(&g, 5));
    }

    #[test]
    fn clan_and_hwang_checks() {
        clan_identity_check(&Graph::complete(1), 3).unwrap();
        clan_identity_check(&Graph::complete(2), 4).unwrap();
        clan_identity_check(&Graph::empty(2), 4).unwrap();
        hwang_identity_check(&Graph::complete(2), &[1, 1], 2).unwrap();
        hwang_identity_check(&Graph::complete(1), &[2], 2).unwrap();
        hwang_identity_check(&Graph::path(3), &[2, 1, 1], 4).unwrap();
    }

    #[test]
    fn cluster_examples() {
        assert_eq!(cluster_witness(&Graph::complete(3), 6), ClusterOutcome::Symmetric { trunc: 6 });
        assert!(matches!(cluster_witness(&Graph::path(3), 6), ClusterOutcome::Witness { .. }));
        assert_eq!(cluster_witness(&Graph::empty(3), 5), ClusterOutcome::Symmetric { trunc: 5 });
    }

    #[test]
    fn partition_filter_agrees() {
        let g = Graph::complete(3);
        let mut spec = ColoringSpec::new(&g, SizeProfile::Unconstrained, ColoringStat::AscSetValued, 6);
        let full = enumerate(&spec);
        spec.filter = KeyFilter::Partitions;
        let part = enumerate(&spec);
        for (a, x) in part.iter() {
            assert!(a.0.windows(2).all(|w| w[0] >= w[1]));
            assert_eq!(&full.coeff(a), x);
        }
    }

    #[test]
    fn oracle_agrees_on_small_graphs() {
        use oracle::*;
        for g in [Graph::empty(0), Graph::complete(2), Graph::path(3), Graph::from_edges(3, &[(0, 2)])] {
            for kind in SeriesKind::ALL {
                assert_eq!(naive(&g, kind, 4).unwrap(), engine(&g, kind, 4), "{g:?} {kind:?}");
            }
        }
        assert!(naive(&Graph::empty(4), SeriesKind::X, 3).is_none());
    }

    #[test]
    fn key_packing() {
        let k = pack_push(pack_push(pack_push(0, 3), 1), 24);
        assert_eq!(unpack(k), c(&[3, 1, 24]));
        assert_eq!(unpack(0), Composition::empty());
    }
}
