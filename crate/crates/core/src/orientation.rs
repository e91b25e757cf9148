//! Acyclic (multi-)orientations, (set-valued) P-partitions, multilinear
//! extensions, multipermutations and the merge bijection.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;

use crate::coloring::{self, counts_to_series, kromatic, kromatic_l, merge_counts, pack_push, record, Counts, KeyFilter, Variant};
use crate::error::{Check, Discrepancy, Error};
use crate::graph::{bits, cover_decompositions, full_mask, ClanIndex, Dag, Graph, LabeledPoset, Mask, Poset};
use crate::qsym::{basis_element, expand_in_basis, BasisId, Composition, Partition, TruncatedSeries};
use crate::arith::{rat, QPoly};

/// Generating function of (set-valued) P-partitions of a DAG whose arcs are
/// marked weak (`false`) or strict (`true`).
///
/// Colours are handed out in increasing order. When `v` receives its first
/// colour `c`, every predecessor must already be finished: across a strict
/// arc it must have been started earlier, across a weak arc it may also take
/// `c` in the same step. Finished vertices take no further colours.
pub fn ppartitions(n: usize, arcs: &[(usize, usize, bool)], trunc: usize, setvalued: bool) -> TruncatedSeries {
    ppartitions_filtered(n, arcs, trunc, setvalued, KeyFilter::All)
}

/// As [`ppartitions`], optionally keeping only partition keys (weakly decreasing parts).
pub fn ppartitions_filtered(n: usize, arcs: &[(usize, usize, bool)], trunc: usize, setvalued: bool, filter: KeyFilter) -> TruncatedSeries {
    assert!(trunc <= coloring::MAX_TRUNC);
    let mut out = vec![0 as Mask; n];
    let mut strict = vec![0 as Mask; n];
    let mut weak = vec![0 as Mask; n];
    for &(u, v, s) in arcs {
        out[u] |= 1 << v;
        if s {
            strict[v] |= 1 << u;
        } else {
            weak[v] |= 1 << u;
        }
    }
    let order = crate::graph::topo_order(&out).expect("acyclic");
    let e = PEngine { n, order, strict, weak, trunc, setvalued, filter };
    e.run()
}

struct PEngine {
    n: usize,
    order: Vec<usize>,
    strict: Vec<Mask>,
    weak: Vec<Mask>,
    trunc: usize,
    setvalued: bool,
    filter: KeyFilter,
}

#[derive(Clone, Copy)]
struct PState {
    started: Mask,
    closed: Mask,
    deg: usize,
    last: usize,
    key: u128,
}

impl PEngine {
    fn run(&self) -> TruncatedSeries {
        let root = PState { started: 0, closed: 0, deg: 0, last: usize::MAX, key: 0 };
        if self.n > self.trunc {
            return TruncatedSeries::zero(self.trunc);
        }
        let mut counts = Counts::new();
        if self.n == 0 {
            record(&mut counts, 0, 0);
            return counts_to_series(counts, self.trunc);
        }
        let mut frontier = Vec::new();
        self.classes(&root, &mut |s| frontier.push(s));
        let merged = frontier
            .par_iter()
            .map(|&s| {
                let mut c = Counts::new();
                self.dfs(self.apply(&root, s), &mut c);
                c
            })
            .reduce(Counts::new, merge_counts);
        counts_to_series(merged, self.trunc)
    }

    fn apply(&self, st: &PState, s: Mask) -> PState {
        let fresh = s & !st.started;
        let mut closed = st.closed;
        for v in bits(fresh) {
            closed |= self.strict[v] | self.weak[v];
        }
        if !self.setvalued {
            closed |= s;
        }
        let w = s.count_ones() as usize;
        PState { started: st.started | s, closed, deg: st.deg + w, last: w, key: pack_push(st.key, w) }
    }

    fn dfs(&self, st: PState, out: &mut Counts) {
        if st.started == full_mask(self.n) {
            record(out, st.key, 0);
        }
        let mut choices = Vec::new();
        self.classes(&st, &mut |s| choices.push(s));
        for s in choices {
            self.dfs(self.apply(&st, s), out);
        }
    }

    fn classes(&self, st: &PState, f: &mut dyn FnMut(Mask)) {
        let room = self.trunc - st.deg;
        let cap = if self.filter == KeyFilter::Partitions { room.min(st.last) } else { room };
        let need = (self.n - st.started.count_ones() as usize) as isize;
        self.go(0, st, 0, (cap, room), need, f);
    }

    /// `limits` is (largest class allowed now, degree left overall).
    fn go(&self, i: usize, st: &PState, chosen: Mask, limits: (usize, usize), need: isize, f: &mut dyn FnMut(Mask)) {
        let (cap, room) = limits;
        let size = chosen.count_ones() as usize;
        if i == self.order.len() {
            if chosen != 0 && (room - size) as isize >= need - (chosen & !st.started).count_ones() as isize {
                f(chosen);
            }
            return;
        }
        self.go(i + 1, st, chosen, limits, need, f);
        let v = self.order[i];
        if size == cap || st.closed >> v & 1 == 1 {
            return;
        }
        if st.started >> v & 1 == 1 {
            if !self.setvalued {
                return;
            }
        } else {
            if self.strict[v] & !(st.started & !chosen) != 0 {
                return;
            }
            if self.weak[v] & !(st.started | chosen) != 0 {
                return;
            }
        }
        self.go(i + 1, st, chosen | 1 << v, limits, need, f);
    }
}

/// `Γ(D,γ)` or its set-valued version, truncated at `n`.
pub fn ppartition_gf(p: &LabeledPoset, n: usize, setvalued: bool) -> TruncatedSeries {
    ppartitions(p.dag.n(), &p.arcs_with_strictness(), n, setvalued)
}

/// Set-valued generating function with every arc strict.
pub fn gamma_bar(d: &Dag, n: usize) -> TruncatedSeries {
    let arcs: Vec<_> = d.arcs().into_iter().map(|(u, v)| (u, v, true)).collect();
    ppartitions(d.n(), &arcs, n, true)
}

/// Single-valued generating function with every arc strict.
pub fn gamma(d: &Dag, n: usize) -> TruncatedSeries {
    let arcs: Vec<_> = d.arcs().into_iter().map(|(u, v)| (u, v, true)).collect();
    ppartitions(d.n(), &arcs, n, false)
}

/// Multifundamental function: set-valued P-partitions of a chain whose
/// strict steps are the partial sums of `alpha`.
pub fn multifundamental(alpha: &Composition, n: usize) -> TruncatedSeries {
    let len = alpha.degree();
    let des: HashSet<usize> = alpha.descent_set().into_iter().collect();
    let arcs: Vec<_> = (1..len).map(|i| (i - 1, i, des.contains(&i))).collect();
    ppartitions(len, &arcs, n, true)
}

/// Decreasing labeling: repeatedly label the smallest-index sink 1, 2, ...
pub fn gamma_decr(d: &Dag) -> LabeledPoset {
    let n = d.n();
    let mut remaining = full_mask(n);
    let mut gamma = vec![0i64; n];
    for label in 1..=n {
        let v = bits(remaining).find(|&v| d.out(v) & remaining == 0).expect("acyclic");
        gamma[v] = label as i64;
        remaining &= !(1 << v);
    }
    LabeledPoset { dag: d.clone(), gamma }
}

/// The labeling built by taking, among the `<_D`-maximal remaining vertices,
/// the smallest under `less`. Checks the defining property on the way out.
pub fn sw_labeling_with(d: &Dag, less: &dyn Fn(usize, usize) -> bool) -> Result<LabeledPoset, Error> {
    let n = d.n();
    let mut remaining = full_mask(n);
    let mut gamma = vec![0i64; n];
    for label in 1..=n {
        let maxes: Vec<usize> = bits(remaining).filter(|&v| d.out(v) & remaining == 0).collect();
        for &a in &maxes {
            for &b in &maxes {
                if a != b && !less(a, b) && !less(b, a) {
                    return Err(Error::Invalid(format!("maximal vertices {a} and {b} are incomparable")));
                }
            }
        }
        let x = *maxes.iter().find(|&&a| maxes.iter().all(|&b| a == b || less(a, b))).expect("a least element exists");
        gamma[x] = label as i64;
        remaining &= !(1 << x);
    }
    for x in 0..n {
        for y in 0..n {
            let incomparable = x != y && d.reach(x) >> y & 1 == 0 && d.reach(y) >> x & 1 == 0;
            if incomparable && less(x, y) && gamma[x] >= gamma[y] {
                return Err(Error::Invalid(format!("labeling violates the order at ({x},{y})")));
            }
        }
    }
    LabeledPoset::new(d.clone(), gamma)
}

/// The labeling for an acyclic orientation of `inc(P)`; vertices are poset indices.
pub fn sw_labeling(p: &Poset, d: &Dag) -> Result<LabeledPoset, Error> {
    if d.underlying() != p.incomparability_graph() {
        return Err(Error::Invalid("not an orientation of the incomparability graph".into()));
    }
    sw_labeling_with(d, &|a, b| p.lt(a, b))
}

/// All acyclic orientations, ordered by the bitmask of reversed edges.
pub fn acyclic_orientations(g: &Graph) -> Vec<Dag> {
    let e = g.edges();
    let mut out = Vec::new();
    for code in 0..1u64 << e.len() {
        let arcs: Vec<_> = e.iter().enumerate().map(|(i, &(u, v))| if code >> i & 1 == 1 { (v, u) } else { (u, v) }).collect();
        if let Ok(d) = Dag::new(g.n(), &arcs) {
            out.push(d);
        }
    }
    out
}

/// An acyclic multi-orientation: an acyclic orientation of a clan graph of
/// `base` in which consecutive levels of a vertex are joined by two paths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiOrientation {
    base: Graph,
    clan: ClanIndex,
    dag: Dag,
}

pub type ClanVertex = (usize, usize);

impl MultiOrientation {
    /// Validates the orientation conditions.
    pub fn new(base: Graph, alpha: Vec<usize>, arcs: &[(ClanVertex, ClanVertex)]) -> Result<Self, Error> {
        if alpha.len() != base.n() || alpha.contains(&0) {
            return Err(Error::Invalid("type map must be positive on every vertex".into()));
        }
        let clan = ClanIndex::new(&alpha);
        let mut idx = Vec::with_capacity(arcs.len());
        for &((v, i), (w, j)) in arcs {
            if v >= base.n() || w >= base.n() || i == 0 || j == 0 || i > alpha[v] || j > alpha[w] {
                return Err(Error::Invalid(format!("arc ({v},{i})->({w},{j}) outside the clan")));
            }
            idx.push((clan.index(v, i), clan.index(w, j)));
        }
        let dag = Dag::new(clan.len(), &idx)?;
        let mo = MultiOrientation { base, clan, dag };
        mo.validate()?;
        Ok(mo)
    }

    fn from_parts(base: Graph, clan: ClanIndex, dag: Dag) -> Self {
        MultiOrientation { base, clan, dag }
    }

    /// Orientation of the whole clan graph, condition (a), condition (b).
    pub fn validate(&self) -> Result<(), Error> {
        let clan_graph = self.base.clan(self.clan.alpha());
        if self.dag.underlying() != clan_graph {
            return Err(Error::Invalid("not an orientation of the clan graph".into()));
        }
        for v in 0..self.base.n() {
            let a = self.alpha()[v];
            for i in 1..=a {
                for j in 1..i {
                    if !self.dag.has_arc(self.clan.index(v, i), self.clan.index(v, j)) {
                        return Err(Error::Invalid(format!("missing arc ({v},{i})->({v},{j})")));
                    }
                }
            }
            for i in 1..a {
                if !self.second_path(v, i) {
                    return Err(Error::Invalid(format!("no second path from ({v},{}) to ({v},{i})", i + 1)));
                }
            }
        }
        Ok(())
    }

    /// Path from `(v,i+1)` to `(v,i)` using no arc inside the clan of `v`.
    fn second_path(&self, v: usize, i: usize) -> bool {
        let own: Mask = (1..=self.alpha()[v]).fold(0, |m, k| m | 1 << self.clan.index(v, k));
        let target = self.clan.index(v, i);
        let mut seen: Mask = 1 << self.clan.index(v, i + 1);
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for x in bits(frontier) {
                let mut o = self.dag.out(x);
                if own >> x & 1 == 1 {
                    o &= !own;
                }
                next |= o;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen >> target & 1 == 1
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn alpha(&self) -> &[usize] {
        self.clan.alpha()
    }

    pub fn clan(&self) -> &ClanIndex {
        &self.clan
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn num_vertices(&self) -> usize {
        self.dag.n()
    }

    pub fn vertex(&self, idx: usize) -> ClanVertex {
        self.clan.vertex(idx)
    }

    pub fn arcs(&self) -> Vec<(ClanVertex, ClanVertex)> {
        self.dag.arcs().into_iter().map(|(a, b)| (self.clan.vertex(a), self.clan.vertex(b))).collect()
    }

    pub fn num_sources(&self) -> usize {
        self.dag.sources().count_ones() as usize
    }

    /// Arcs `(u,1) -> (v,1)` with `u < v`.
    pub fn align(&self) -> usize {
        self.arcs().iter().filter(|&&((u, i), (v, j))| u < v && i == 1 && j == 1).count()
    }
}

/// All elements of the multi-orientation set with at most `n` vertices.
pub fn multi_orientations(g: &Graph, n: usize) -> Vec<MultiOrientation> {
    let types = coloring::type_maps(g.n(), n, n);
    types.par_iter().flat_map_iter(|alpha| orientations_of_type(g, alpha)).collect()
}

/// Multi-orientations of a fixed type, by backtracking over the free arcs.
pub fn orientations_of_type(g: &Graph, alpha: &[usize]) -> Vec<MultiOrientation> {
    let clan = ClanIndex::new(alpha);
    let k = clan.len();
    let mut out_m = vec![0 as Mask; k];
    let mut free = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            let ((v, i), (w, j)) = (clan.vertex(a), clan.vertex(b));
            if v == w {
                // forced: higher level points to lower level
                if i > j {
                    out_m[a] |= 1 << b;
                } else {
                    out_m[b] |= 1 << a;
                }
            } else if g.has_edge(v, w) {
                free.push((a, b));
            }
        }
    }
    // transitive closure of the forced arcs
    let mut reach = closure(&out_m);
    let mut found = Vec::new();
    fn go(
        i: usize,
        free: &[(usize, usize)],
        out_m: &mut Vec<Mask>,
        reach: &mut Vec<Mask>,
        g: &Graph,
        clan: &ClanIndex,
        found: &mut Vec<MultiOrientation>,
    ) {
        if i == free.len() {
            let dag = Dag::from_out(out_m.clone()).expect("acyclic by construction");
            let mo = MultiOrientation::from_parts(g.clone(), clan.clone(), dag);
            let ok = (0..g.n()).all(|v| (1..clan.alpha()[v]).all(|l| mo.second_path(v, l)));
            if ok {
                found.push(mo);
            }
            return;
        }
        let (a, b) = free[i];
        for (x, y) in [(a, b), (b, a)] {
            if reach[y] >> x & 1 == 1 {
                continue;
            }
            let saved = reach.clone();
            out_m[x] |= 1 << y;
            let add = reach[y] | 1 << y;
            for z in 0..reach.len() {
                if z == x || reach[z] >> x & 1 == 1 {
                    reach[z] |= add;
                }
            }
            go(i + 1, free, out_m, reach, g, clan, found);
            out_m[x] &= !(1 << y);
            *reach = saved;
        }
    }
    go(0, &free, &mut out_m, &mut reach, g, &clan, &mut found);
    found
}

fn closure(out: &[Mask]) -> Vec<Mask> {
    let order = crate::graph::topo_order(out).expect("acyclic");
    let mut reach = vec![0; out.len()];
    for &v in order.iter().rev() {
        let mut r = out[v];
        for w in bits(out[v]) {
            r |= reach[w];
        }
        reach[v] = r;
    }
    reach
}

/// Words covering every vertex, with no equal neighbours, in which all copies
/// of `u` precede all copies of `v` whenever `u -> v`. Lengths up to `n`, lex order.
pub fn multilinear_extensions(d: &Dag, n: usize) -> Vec<Vec<usize>> {
    let k = d.n();
    let mut out = Vec::new();
    fn go(d: &Dag, k: usize, n: usize, word: &mut Vec<usize>, started: Mask, closed: Mask, out: &mut Vec<Vec<usize>>) {
        if started == full_mask(k) {
            out.push(word.clone());
        }
        if word.len() == n {
            return;
        }
        let missing = k - started.count_ones() as usize;
        for x in 0..k {
            if closed >> x & 1 == 1 || word.last() == Some(&x) {
                continue;
            }
            if d.inn(x) & !started != 0 {
                continue;
            }
            let fresh = started >> x & 1 == 0;
            // leave room for vertices that have not appeared yet
            if word.len() + 1 + missing - fresh as usize > n {
                continue;
            }
            word.push(x);
            go(d, k, n, word, started | 1 << x, closed | d.inn(x), out);
            word.pop();
        }
    }
    if k <= n {
        go(d, k, n, &mut Vec::new(), 0, 0, &mut out);
    }
    out.sort();
    out
}

/// `L̄_{m,S}` for a descent set `S ⊆ [m-1]`.
pub fn lbar_ms(m: usize, set: &[usize], n: usize) -> std::sync::Arc<TruncatedSeries> {
    let mut s = set.to_vec();
    s.sort_unstable();
    basis_element(BasisId::Lbar, &Composition::from_descents(m, &s).0, n)
}

fn diff(context: &str, a: &TruncatedSeries, b: &TruncatedSeries) -> Check {
    match a.first_difference(b) {
        None => Ok(()),
        Some((k, x, y)) => Err(Discrepancy::value(context, format!("M{k}"), &x, &y)),
    }
}

/// Set-valued P-partitions against the sum over multilinear extensions.
pub fn ml_expansion_check(p: &LabeledPoset, n: usize) -> Check {
    let lhs = ppartition_gf(p, n, true);
    let mut rhs = TruncatedSeries::zero(n);
    for w in multilinear_extensions(&p.dag, n) {
        let des: Vec<usize> = (1..w.len()).filter(|&i| p.gamma[w[i - 1]] > p.gamma[w[i]]).collect();
        rhs.add_assign(&lbar_ms(w.len(), &des, n));
    }
    diff(&format!("multilinear expansion of {:?} with labels {:?}", p.dag, p.gamma), &lhs, &rhs)
}

/// The two orientation-side expansions: kromatic as a sum of `Γ̄(D)`, and the
/// L-bar series as the `q^align`-weighted sum.
pub fn mao_expansion_check(g: &Graph, n: usize) -> Check {
    let maos = multi_orientations(g, n);
    let (k, l) = maos
        .par_iter()
        .map(|d| {
            let gb = gamma_bar(d.dag(), n);
            let l = gb.scale(&QPoly::monomial(d.align(), rat(1)));
            (gb, l)
        })
        .reduce(
            || (TruncatedSeries::zero(n), TruncatedSeries::zero(n)),
            |(mut a, mut b), (c, d)| {
                a.add_assign(&c);
                b.add_assign(&d);
                (a, b)
            },
        );
    diff(&format!("kromatic as orientation sum for {g:?}"), &kromatic(g, n), &k)?;
    diff(&format!("L-bar as orientation sum for {g:?}"), &kromatic_l(g, n, Variant::AscMax), &l)
}

/// `X_G = sum over acyclic orientations of Γ(D)`.
pub fn ao_expansion_check(g: &Graph, n: usize) -> Check {
    let mut rhs = TruncatedSeries::zero(n);
    for d in acyclic_orientations(g) {
        rhs.add_assign(&gamma(&d, n));
    }
    diff(&format!("chromatic as orientation sum for {g:?}"), &coloring::chromatic(g, n, false), &rhs)
}

/// Words over `1..=k` (as 0-based letters) using every letter, no equal neighbours, length `<= n`.
pub fn multipermutations(k: usize, n: usize) -> Vec<Vec<usize>> {
    let d = Dag::from_edges(k, &[]);
    multilinear_extensions(&d, n)
}

/// `(inv_G(w), S(w,P))` for a multipermutation over the poset's elements
/// (letters are poset indices; the natural order is index order).
pub fn inv_stats(w: &[usize], p: &Poset) -> (usize, Vec<usize>) {
    let g = p.incomparability_graph();
    let mut seen = 0u64;
    let mut firsts = Vec::new();
    for &x in w {
        if seen >> x & 1 == 0 {
            firsts.push(x);
            seen |= 1 << x;
        }
    }
    let mut inv = 0;
    for i in 0..firsts.len() {
        for j in i + 1..firsts.len() {
            if firsts[i] > firsts[j] && g.has_edge(firsts[i], firsts[j]) {
                inv += 1;
            }
        }
    }
    let m = w.len();
    let s: Vec<usize> = (1..m).filter(|&i| !p.lt(w[i], w[i - 1])).map(|i| m - i).collect();
    let mut s = s;
    s.sort_unstable();
    (inv, s)
}

/// L-bar series of `inc(P)` against the multipermutation sum.
pub fn multiperm_theorem_check(p: &Poset, n: usize) -> Check {
    let g = p.incomparability_graph();
    let mut rhs = TruncatedSeries::zero(n);
    for w in multipermutations(p.len(), n) {
        let (inv, s) = inv_stats(&w, p);
        rhs.add_scaled(&lbar_ms(w.len(), &s, n), &QPoly::monomial(inv, rat(1)));
    }
    diff(&format!("multipermutation expansion for {p:?}"), &kromatic_l(&g, n, Variant::AscMax), &rhs)
}

/// Input side of the merge bijection. `ds` and `dt` live on the induced
/// subgraphs `G|_S` and `G|_T` (vertices renumbered in increasing order).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MergeTuple {
    pub s: Mask,
    pub t: Mask,
    pub ds: MultiOrientation,
    pub dt: MultiOrientation,
}

/// Output side: a multi-orientation of `G` with a lower set and an upper set
/// of its vertices (bitmasks over clan indices).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MergeTriple {
    pub d: MultiOrientation,
    pub s_tilde: Mask,
    pub t_tilde: Mask,
}

impl MergeTriple {
    /// Lower/upper/antichain conditions and the covering condition.
    pub fn is_valid(&self) -> bool {
        let dag = self.d.dag();
        self.s_tilde | self.t_tilde == full_mask(dag.n())
            && dag.is_lower(self.s_tilde)
            && dag.is_upper(self.t_tilde)
            && dag.is_antichain(self.s_tilde & self.t_tilde)
    }

    pub fn names(&self, mask: Mask) -> Vec<ClanVertex> {
        bits(mask).map(|i| self.d.vertex(i)).collect()
    }
}

fn lift(mask: Mask, local: usize) -> usize {
    bits(mask).nth(local).expect("vertex in mask")
}

/// The merge map `(S,T,D_S,D_T) -> (D̃, S̃, T̃)`.
pub fn merge(g: &Graph, tup: &MergeTuple) -> Result<MergeTriple, Error> {
    let n = g.n();
    if tup.s | tup.t != full_mask(n) {
        return Err(Error::Invalid("S and T must cover the vertices".into()));
    }
    if *tup.ds.base() != g.induced(tup.s) || *tup.dt.base() != g.induced(tup.t) {
        return Err(Error::Invalid("orientations are not on the induced subgraphs".into()));
    }
    let mut alpha_s = vec![0; n];
    let mut alpha_t = vec![0; n];
    for (i, v) in bits(tup.s).enumerate() {
        alpha_s[v] = tup.ds.alpha()[i];
    }
    for (i, v) in bits(tup.t).enumerate() {
        alpha_t[v] = tup.dt.alpha()[i];
    }
    let local_s: HashMap<usize, usize> = bits(tup.s).enumerate().map(|(i, v)| (v, i)).collect();
    let local_t: HashMap<usize, usize> = bits(tup.t).enumerate().map(|(i, v)| (v, i)).collect();
    let mut d = vec![0; n];
    for v in bits(tup.s) {
        let merged = tup.t >> v & 1 == 1 && {
            let sink = tup.ds.dag().out(tup.ds.clan().index(local_s[&v], 1)) == 0;
            let src = tup.dt.dag().inn(tup.dt.clan().index(local_t[&v], alpha_t[v])) == 0;
            sink && src
        };
        d[v] = if merged { alpha_t[v] - 1 } else { alpha_t[v] };
    }
    let alpha: Vec<usize> = (0..n).map(|v| alpha_t[v].max(d[v] + alpha_s[v])).collect();
    let clan = ClanIndex::new(&alpha);
    let mut s_tilde: Mask = 0;
    let mut t_tilde: Mask = 0;
    for v in 0..n {
        for i in 1..=alpha_s[v] {
            s_tilde |= 1 << clan.index(v, i + d[v]);
        }
        for i in 1..=alpha_t[v] {
            t_tilde |= 1 << clan.index(v, i);
        }
    }
    let mut arcs: Vec<(ClanVertex, ClanVertex)> = Vec::new();
    for ((u, i), (v, j)) in tup.ds.arcs() {
        let (u, v) = (lift(tup.s, u), lift(tup.s, v));
        arcs.push(((u, i + d[u]), (v, j + d[v])));
    }
    for ((u, i), (v, j)) in tup.dt.arcs() {
        arcs.push(((lift(tup.t, u), i), (lift(tup.t, v), j)));
    }
    for a in bits(s_tilde & !t_tilde) {
        for b in bits(t_tilde) {
            let ((u, _), (v, _)) = (clan.vertex(a), clan.vertex(b));
            if u == v || g.has_edge(u, v) {
                arcs.push((clan.vertex(a), clan.vertex(b)));
            }
        }
    }
    arcs.sort();
    arcs.dedup();
    let mo = MultiOrientation::new(g.clone(), alpha, &arcs)?;
    Ok(MergeTriple { d: mo, s_tilde, t_tilde })
}

/// Restricts `d` to the clan vertices in `mask`, shifting levels of `v` down by `shift[v]`.
fn restrict(g: &Graph, d: &MultiOrientation, mask: Mask, shift: &[usize]) -> Result<(Mask, MultiOrientation), Error> {
    let n = g.n();
    let mut levels: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in bits(mask) {
        let (v, i) = d.vertex(a);
        levels[v].push(i);
    }
    let support: Mask = (0..n).filter(|&v| !levels[v].is_empty()).fold(0, |m, v| m | 1 << v);
    let mut alpha = Vec::new();
    let mut pos = vec![usize::MAX; n];
    for v in bits(support) {
        let mut ls = levels[v].clone();
        ls.sort_unstable();
        let expect: Vec<usize> = (shift[v] + 1..=shift[v] + ls.len()).collect();
        if ls != expect {
            return Err(Error::Invalid(format!("levels of vertex {v} are not contiguous from {}", shift[v] + 1)));
        }
        pos[v] = alpha.len();
        alpha.push(ls.len());
    }
    let mut arcs = Vec::new();
    for ((u, i), (v, j)) in d.arcs() {
        let (a, b) = (d.clan().index(u, i), d.clan().index(v, j));
        if mask >> a & 1 == 1 && mask >> b & 1 == 1 {
            arcs.push(((pos[u], i - shift[u]), (pos[v], j - shift[v])));
        }
    }
    Ok((support, MultiOrientation::new(g.induced(support), alpha, &arcs)?))
}

/// Inverse of [`merge`]. The level shift of `v` in `S̃` is recovered as
/// `min{i : (v,i) ∈ S̃} - 1`.
pub fn merge_inverse(g: &Graph, tri: &MergeTriple) -> Result<MergeTuple, Error> {
    if tri.d.base() != g {
        return Err(Error::Invalid("orientation is not on G".into()));
    }
    if !tri.is_valid() {
        return Err(Error::Invalid("S̃ must be a lower set, T̃ an upper set, covering, with antichain intersection".into()));
    }
    let n = g.n();
    let (t, dt) = restrict(g, &tri.d, tri.t_tilde, &vec![0; n])?;
    let mut shift = vec![0; n];
    for v in 0..n {
        shift[v] = bits(tri.s_tilde).filter_map(|a| {
            let (w, i) = tri.d.vertex(a);
            (w == v).then_some(i)
        }).min().map_or(0, |m| m - 1);
    }
    let (s, ds) = restrict(g, &tri.d, tri.s_tilde, &shift)?;
    Ok(MergeTuple { s, t, ds, dt })
}

/// All lower sets of a DAG.
pub fn lower_sets(d: &Dag) -> Vec<Mask> {
    (0..=full_mask(d.n())).filter(|&m| d.is_lower(m)).collect()
}

/// Report of the merge bijection sweep.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MergeReport {
    pub tuples: usize,
    pub triples: usize,
}

/// Checks that merge is a bijection between tuples with at most `max_total`
/// clan vertices on both sides and triples with `|V(D̃)| + |S̃ ∩ T̃| <= max_total`,
/// and that `merge ∘ merge_inverse` is the identity on all triples with at most
/// `max_total` vertices.
pub fn merge_bijection_check(g: &Graph, max_total: usize) -> Result<MergeReport, Discrepancy> {
    let ctx = format!("merge bijection for {g:?}");
    let n = g.n();
    let mut images: HashSet<MergeTriple> = HashSet::new();
    let mut report = MergeReport::default();
    for (s, t) in cover_decompositions(n) {
        let gs = g.induced(s);
        let gt = g.induced(t);
        let ms = multi_orientations(&gs, max_total);
        let mt = multi_orientations(&gt, max_total);
        for ds in &ms {
            for dt in &mt {
                if ds.num_vertices() + dt.num_vertices() > max_total {
                    continue;
                }
                let tup = MergeTuple { s, t, ds: ds.clone(), dt: dt.clone() };
                let tri = merge(g, &tup).map_err(|e| Discrepancy::property(&ctx, format!("merge failed on {tup:?}: {e}")))?;
                if !tri.is_valid() {
                    return Err(Discrepancy::property(&ctx, format!("image of {tup:?} violates lower/upper/antichain")));
                }
                let back = merge_inverse(g, &tri).map_err(|e| Discrepancy::property(&ctx, format!("inverse failed: {e}")))?;
                if back != tup {
                    return Err(Discrepancy::property(&ctx, format!("inverse(merge(x)) != x for {tup:?}")));
                }
                if !images.insert(tri) {
                    return Err(Discrepancy::property(&ctx, format!("merge is not injective at {tup:?}")));
                }
                report.tuples += 1;
            }
        }
    }
    for d in multi_orientations(g, max_total) {
        let dag = d.dag().clone();
        let full = full_mask(dag.n());
        for s_tilde in lower_sets(&dag) {
            for t_tilde in 0..=full {
                let tri = MergeTriple { d: d.clone(), s_tilde, t_tilde };
                if !tri.is_valid() {
                    continue;
                }
                let tup = merge_inverse(g, &tri).map_err(|e| Discrepancy::property(&ctx, format!("inverse failed on {tri:?}: {e}")))?;
                let again = merge(g, &tup).map_err(|e| Discrepancy::property(&ctx, format!("merge failed: {e}")))?;
                if again != tri {
                    return Err(Discrepancy::property(&ctx, format!("merge(inverse(y)) != y for {tri:?}")));
                }
                let size = dag.n() + (s_tilde & t_tilde).count_ones() as usize;
                if size <= max_total && !images.contains(&tri) {
                    return Err(Discrepancy::property(&ctx, format!("{tri:?} is not in the image")));
                }
                report.triples += 1;
            }
        }
    }
    Ok(report)
}

/// Counts of multi-orientations by `(sources, vertices)`.
pub fn source_counts(g: &Graph, n: usize) -> BTreeMap<(usize, usize), u64> {
    let mut m = BTreeMap::new();
    for d in multi_orientations(g, n) {
        *m.entry((d.num_sources(), d.num_vertices())).or_insert(0) += 1;
    }
    m
}

/// Source counts against sums of ē-coefficients of the kromatic function.
pub fn source_count_check(g: &Graph, n: usize) -> Check {
    let ctx = format!("source counts for {g:?}");
    let ex = expand_in_basis(&kromatic(g, n), BasisId::Ebar).map_err(|e| Discrepancy::internal(e.to_string()))?;
    let counts = source_counts(g, n);
    for k in 0..=n {
        for j in 0..=k {
            let mut sum = QPoly::zero();
            for lam in Partition::all_of(k) {
                if lam.len() == j {
                    sum += &ex.coeff(&lam.0);
                }
            }
            let direct = QPoly::from_counts(&[counts.get(&(j, k)).copied().unwrap_or(0)]);
            if sum != direct {
                return Err(Discrepancy::value(&ctx, format!("j={j} k={k}"), &sum, &direct));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> QPoly {
        s.parse().unwrap()
    }

    fn c(parts: &[usize]) -> Composition {
        Composition(parts.to_vec())
    }

    #[test]
    fn orientation_counts() {
        assert_eq!(acyclic_orientations(&Graph::complete(2)).len(), 2);
        assert_eq!(acyclic_orientations(&Graph::complete(3)).len(), 6);
        assert_eq!(acyclic_orientations(&Graph::empty(3)).len(), 1);
    }

    #[test]
    fn multi_orientation_counts() {
        let e = multi_orientations(&Graph::empty(2), 5);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].alpha(), &[1, 1]);
        let k2 = multi_orientations(&Graph::complete(2), 3);
        assert_eq!(k2.len(), 4);
        assert_eq!(k2.iter().filter(|d| d.num_vertices() == 3).count(), 2);
        assert_eq!(multi_orientations(&Graph::complete(2), 7).len(), 12);
    }

    #[test]
    fn ppartition_examples() {
        let single = Dag::from_edges(1, &[]);
        let s = gamma_bar(&single, 3);
        assert_eq!(s, *basis_element(BasisId::Lbar, &[1], 3));
        let chain = LabeledPoset::new(Dag::from_edges(2, &[(0, 1)]), vec![2, 1]).unwrap();
        let s = ppartition_gf(&chain, 2, true);
        assert_eq!(s.len(), 1);
        assert!(s.coeff(&c(&[1, 1])).is_one());
        let chain4 = Dag::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(gamma_bar(&chain4, 7), *basis_element(BasisId::Ebar, &[4], 7));
    }

    #[test]
    fn decreasing_labels() {
        assert_eq!(gamma_decr(&Dag::from_edges(2, &[(0, 1)])).gamma, vec![2, 1]);
        assert_eq!(gamma_decr(&Dag::from_edges(2, &[])).gamma, vec![1, 2]);
    }

    #[test]
    fn sw_examples() {
        let chain = Poset::chain(3);
        let l = sw_labeling(&chain, &Dag::from_edges(3, &[])).unwrap();
        assert!(l.gamma[0] < l.gamma[1] && l.gamma[1] < l.gamma[2]);
        let anti = Poset::antichain(2);
        let l = sw_labeling(&anti, &Dag::from_edges(2, &[(1, 0)])).unwrap();
        assert!(l.is_decreasing());
        let p = Poset::on_range(3, &[(1, 3)]);
        let l = sw_labeling(&p, &Dag::from_edges(3, &[(1, 0), (1, 2)])).unwrap();
        assert!(l.gamma[0] < l.gamma[2]);
        assert!(l.is_decreasing());
    }

    #[test]
    fn multilinear_examples() {
        assert_eq!(multilinear_extensions(&Dag::from_edges(1, &[]), 3), vec![vec![0]]);
        let ab = multilinear_extensions(&Dag::from_edges(2, &[]), 3);
        assert_eq!(ab, vec![vec![0, 1], vec![0, 1, 0], vec![1, 0], vec![1, 0, 1]]);
        assert_eq!(multilinear_extensions(&Dag::from_edges(2, &[(0, 1)]), 3), vec![vec![0, 1]]);
    }

    #[test]
    fn ml_examples() {
        ml_expansion_check(&gamma_decr(&Dag::from_edges(1, &[])), 4).unwrap();
        ml_expansion_check(&LabeledPoset::new(Dag::from_edges(2, &[(0, 1)]), vec![2, 1]).unwrap(), 4).unwrap();
        ml_expansion_check(&LabeledPoset::new(Dag::from_edges(2, &[]), vec![1, 2]).unwrap(), 4).unwrap();
    }

    #[test]
    fn align_examples() {
        let e = multi_orientations(&Graph::empty(3), 4);
        assert_eq!(e[0].align(), 0);
        let up = MultiOrientation::new(Graph::complete(2), vec![1, 1], &[((0, 1), (1, 1))]).unwrap();
        assert_eq!(up.align(), 1);
        let down = MultiOrientation::new(Graph::complete(2), vec![1, 1], &[((1, 1), (0, 1))]).unwrap();
        assert_eq!(down.align(), 0);
    }

    #[test]
    fn mao_examples() {
        mao_expansion_check(&Graph::complete(1), 3).unwrap();
        mao_expansion_check(&Graph::complete(2), 4).unwrap();
        mao_expansion_check(&Graph::path(3), 4).unwrap();
        ao_expansion_check(&Graph::path(3), 4).unwrap();
    }

    #[test]
    fn multiperm_examples() {
        assert_eq!(multipermutations(1, 3), vec![vec![0]]);
        assert_eq!(multipermutations(2, 3), vec![vec![0, 1], vec![0, 1, 0], vec![1, 0], vec![1, 0, 1]]);
        assert_eq!(inv_stats(&[1, 0], &Poset::antichain(2)), (1, vec![1]));
        multiperm_theorem_check(&Poset::chain(2), 4).unwrap();
        multiperm_theorem_check(&Poset::antichain(2), 4).unwrap();
        multiperm_theorem_check(&Poset::on_range(3, &[(1, 3)]), 4).unwrap();
    }

    #[test]
    fn merge_empty_graph() {
        let g = Graph::empty(0);
        let e = multi_orientations(&g, 0).pop().unwrap();
        let tup = MergeTuple { s: 0, t: 0, ds: e.clone(), dt: e.clone() };
        let tri = merge(&g, &tup).unwrap();
        assert_eq!(tri.d.num_vertices(), 0);
        assert_eq!(merge_inverse(&g, &tri).unwrap(), tup);
    }

    #[test]
    fn merge_small_sweeps() {
        let r = merge_bijection_check(&Graph::complete(2), 4).unwrap();
        assert!(r.tuples > 0 && r.triples > 0);
        merge_bijection_check(&Graph::path(3), 4).unwrap();
    }

    #[test]
    fn source_count_examples() {
        source_count_check(&Graph::complete(2), 5).unwrap();
        let c = source_counts(&Graph::complete(2), 5);
        for k in 2..=5 {
            assert_eq!(c.get(&(1, k)), Some(&2));
        }
        let c3 = source_counts(&Graph::complete(3), 5);
        assert!(c3.keys().all(|&(_, k)| k >= 3));
        source_count_check(&Graph::empty(2), 4).unwrap();
        assert_eq!(source_counts(&Graph::empty(2), 4).into_iter().collect::<Vec<_>>(), vec![((2, 2), 1)]);
    }

    #[test]
    fn lbar_lowest_degree_is_fundamental() {
        // L̄_(2,1) at degree 3 is M_21 + M_111
        let l = basis_element(BasisId::Lbar, &[2, 1], 3);
        assert_eq!(l.coeff(&c(&[2, 1])), p("1"));
        assert_eq!(l.coeff(&c(&[1, 1, 1])), p("1"));
        assert_eq!(l.len(), 2);
    }
}
