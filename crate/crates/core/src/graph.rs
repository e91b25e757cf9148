//! Graphs, DAGs, posets and the constructions between them.
//!
//! Vertices are positional (`0..n`); the vertex order of an ordered graph is
//! index order. Adjacency is kept as bitmasks, so graphs have at most 32 vertices.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;

pub type Mask = u32;

pub const MAX_VERTICES: usize = 32;

pub fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub fn full_mask(n: usize) -> Mask {
    if n >= 32 {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

/// Simple undirected graph. The vertex order is the index order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<Mask>,
}

/// Graphs are ordered by index; the alias documents intent at call sites.
pub type OrderedGraph = Graph;

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        Graph { n, adj: vec![0; n] }
    }

    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        if n > MAX_VERTICES {
            return Err(Error::Invalid(format!("at most {MAX_VERTICES} vertices")));
        }
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Invalid(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::Invalid(format!("loop at {u}")));
            }
            g.adj[u] |= 1 << v;
            g.adj[v] |= 1 << u;
        }
        Ok(g)
    }

    /// Convenience constructor for trusted literals.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        Self::new(n, edges).expect("valid edge list")
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for v in 0..n {
            g.adj[v] = full_mask(n) & !(1 << v);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &e)
    }

    /// Labeled graph on `n` vertices from an edge-subset bitmask over `all_pairs(n)`.
    pub fn from_code(n: usize, code: u64) -> Self {
        let pairs = all_pairs(n);
        let e: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| code >> i & 1 == 1).map(|(_, &p)| p).collect();
        Self::from_edges(n, &e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adj(&self, v: usize) -> Mask {
        self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    /// Edges `(u,v)` with `u < v`, in lex order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in bits(self.adj[u]) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn is_independent(&self, s: Mask) -> bool {
        bits(s).all(|v| self.adj[v] & s == 0)
    }

    /// Induced subgraph on the vertices of `s`, relabeled in increasing order.
    pub fn induced(&self, s: Mask) -> Graph {
        let verts: Vec<usize> = bits(s).collect();
        let mut g = Graph::empty(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate() {
                if self.has_edge(u, v) {
                    g.adj[i] |= 1 << j;
                }
            }
        }
        g
    }

    /// Disjoint union; `o`'s vertices come after ours.
    pub fn disjoint_union(&self, o: &Graph) -> Graph {
        let mut e = self.edges();
        e.extend(o.edges().into_iter().map(|(u, v)| (u + self.n, v + self.n)));
        Self::from_edges(self.n + o.n, &e)
    }

    pub fn components(&self) -> Vec<Mask> {
        let mut seen = 0;
        let mut out = Vec::new();
        for v in 0..self.n {
            if seen >> v & 1 == 1 {
                continue;
            }
            let mut comp = 1 << v;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0;
                for u in bits(frontier) {
                    next |= self.adj[u];
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    /// Every component is a clique.
    pub fn is_cluster_graph(&self) -> bool {
        self.components().into_iter().all(|c| bits(c).all(|v| self.adj[v] | (1 << v) == c))
    }

    /// The clan graph: vertex `v` becomes `alpha[v]` pairwise adjacent copies.
    /// Copies are ordered by `(v, i)`.
    pub fn clan(&self, alpha: &[usize]) -> Graph {
        let cl = ClanIndex::new(alpha);
        let mut g = Graph::empty(cl.len());
        for a in 0..cl.len() {
            for b in 0..cl.len() {
                let ((v, i), (w, j)) = (cl.vertex(a), cl.vertex(b));
                if (v == w && i != j) || self.has_edge(v, w) {
                    g.adj[a] |= 1 << b;
                }
            }
        }
        g
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("graph n={}\n", self.n);
        for (u, v) in self.edges() {
            s.push_str(&format!("edge {} {}\n", u + 1, v + 1));
        }
        s
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.edges().iter().map(|(u, v)| format!("{}-{}", u + 1, v + 1)).collect();
        write!(f, "G{}{{{}}}", self.n, e.join(","))
    }
}

pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            out.push((u, v));
        }
    }
    out
}

/// All labeled graphs on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let m = all_pairs(n).len();
    (0..1u64 << m).map(|c| Graph::from_code(n, c)).collect()
}

/// Index map between clan vertices `(v,i)` (levels 1-based) and positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClanIndex {
    alpha: Vec<usize>,
    offset: Vec<usize>,
}

impl ClanIndex {
    pub fn new(alpha: &[usize]) -> Self {
        let mut offset = Vec::with_capacity(alpha.len());
        let mut s = 0;
        for &a in alpha {
            offset.push(s);
            s += a;
        }
        ClanIndex { alpha: alpha.to_vec(), offset }
    }

    pub fn len(&self) -> usize {
        self.alpha.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn index(&self, v: usize, i: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.alpha[v]);
        self.offset[v] + i - 1
    }

    pub fn vertex(&self, idx: usize) -> (usize, usize) {
        let v = self.offset.partition_point(|&o| o <= idx) - 1;
        // skip base vertices with alpha = 0 sharing the same offset
        let v = (0..=v).rev().find(|&w| self.alpha[w] > 0 && self.offset[w] <= idx).unwrap_or(v);
        (v, idx - self.offset[v] + 1)
    }
}

/// Directed acyclic graph with cached reachability.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dag {
    n: usize,
    out: Vec<Mask>,
    inn: Vec<Mask>,
    reach: Vec<Mask>,
}

impl Dag {
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self, Error> {
        if n > MAX_VERTICES {
            return Err(Error::Invalid(format!("at most {MAX_VERTICES} vertices")));
        }
        let mut out = vec![0; n];
        for &(u, v) in arcs {
            if u >= n || v >= n || u == v {
                return Err(Error::Invalid(format!("bad arc ({u},{v})")));
            }
            out[u] |= 1 << v;
        }
        Self::from_out(out)
    }

    pub fn from_edges(n: usize, arcs: &[(usize, usize)]) -> Self {
        Self::new(n, arcs).expect("valid acyclic arc list")
    }

    /// From out-neighbourhood masks; rejects cycles.
    pub fn from_out(out: Vec<Mask>) -> Result<Self, Error> {
        let n = out.len();
        let order = topo_order(&out).ok_or_else(|| Error::Invalid("directed cycle".into()))?;
        let mut reach = vec![0; n];
        for &v in order.iter().rev() {
            let mut r = out[v];
            for w in bits(out[v]) {
                r |= reach[w];
            }
            reach[v] = r;
        }
        let mut inn = vec![0; n];
        for u in 0..n {
            for v in bits(out[u]) {
                inn[v] |= 1 << u;
            }
        }
        Ok(Dag { n, out, inn, reach })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn out(&self, v: usize) -> Mask {
        self.out[v]
    }

    pub fn inn(&self, v: usize) -> Mask {
        self.inn[v]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u] >> v & 1 == 1
    }

    /// Vertices reachable from `v` by a nonempty path.
    pub fn reach(&self, v: usize) -> Mask {
        self.reach[v]
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut a = Vec::new();
        for u in 0..self.n {
            for v in bits(self.out[u]) {
                a.push((u, v));
            }
        }
        a
    }

    pub fn num_arcs(&self) -> usize {
        self.out.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn sources(&self) -> Mask {
        (0..self.n).filter(|&v| self.inn[v] == 0).fold(0, |m, v| m | 1 << v)
    }

    pub fn sinks(&self) -> Mask {
        (0..self.n).filter(|&v| self.out[v] == 0).fold(0, |m, v| m | 1 << v)
    }

    /// Topological order with smallest-index tiebreak.
    pub fn topo_order(&self) -> Vec<usize> {
        topo_order(&self.out).expect("acyclic")
    }

    /// Underlying undirected graph.
    pub fn underlying(&self) -> Graph {
        Graph::from_edges(self.n, &self.arcs())
    }

    /// Sub-DAG induced on `s`, relabeled in increasing order.
    pub fn induced(&self, s: Mask) -> Dag {
        let verts: Vec<usize> = bits(s).collect();
        let mut out = vec![0; verts.len()];
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate() {
                if self.has_arc(u, v) {
                    out[i] |= 1 << j;
                }
            }
        }
        Dag::from_out(out).expect("induced subgraph of a DAG is acyclic")
    }

    /// If a path runs from `v` into `s`, then `v` is in `s`.
    pub fn is_lower(&self, s: Mask) -> bool {
        (0..self.n).all(|v| s >> v & 1 == 1 || self.reach[v] & s == 0)
    }

    /// If a path runs from `s` to `v`, then `v` is in `s`.
    pub fn is_upper(&self, s: Mask) -> bool {
        bits(s).all(|v| self.reach[v] & !s & full_mask(self.n) == 0)
    }

    /// No path joins two members of `s`.
    pub fn is_antichain(&self, s: Mask) -> bool {
        bits(s).all(|v| self.reach[v] & s == 0)
    }

    pub fn predicates(&self, s: Mask) -> DagPredicates {
        DagPredicates { is_lower: self.is_lower(s), is_upper: self.is_upper(s), is_antichain: self.is_antichain(s) }
    }
}

impl fmt::Debug for Dag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.arcs().iter().map(|(u, v)| format!("{u}->{v}")).collect();
        write!(f, "Dag{}{{{}}}", self.n, a.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DagPredicates {
    pub is_lower: bool,
    pub is_upper: bool,
    pub is_antichain: bool,
}

pub fn topo_order(out: &[Mask]) -> Option<Vec<usize>> {
    let n = out.len();
    let mut indeg = vec![0usize; n];
    for &m in out {
        for v in bits(m) {
            indeg[v] += 1;
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for w in bits(out[v]) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.insert(w);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// DAG together with an injective labeling.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledPoset {
    pub dag: Dag,
    pub gamma: Vec<i64>,
}

impl LabeledPoset {
    pub fn new(dag: Dag, gamma: Vec<i64>) -> Result<Self, Error> {
        if gamma.len() != dag.n() {
            return Err(Error::Invalid("labeling has the wrong length".into()));
        }
        let distinct: BTreeSet<_> = gamma.iter().collect();
        if distinct.len() != gamma.len() {
            return Err(Error::Invalid("labeling is not injective".into()));
        }
        Ok(LabeledPoset { dag, gamma })
    }

    /// Arcs with a flag: true when the arc is strict (label decreases along it).
    pub fn arcs_with_strictness(&self) -> Vec<(usize, usize, bool)> {
        self.dag.arcs().into_iter().map(|(u, v)| (u, v, self.gamma[u] > self.gamma[v])).collect()
    }

    /// Every arc has decreasing labels.
    pub fn is_decreasing(&self) -> bool {
        self.dag.arcs().iter().all(|&(u, v)| self.gamma[u] > self.gamma[v])
    }
}

/// Clan of a labeled DAG: `(v,i) -> (w,j)` if `v -> w`, or `v = w` and `i > j`.
/// The labels order `(v,i)` by `(gamma(v), i)`.
pub fn dag_clan(d: &Dag, gamma: &[i64], alpha: &[usize]) -> LabeledPoset {
    let cl = ClanIndex::new(alpha);
    let mut arcs = Vec::new();
    for a in 0..cl.len() {
        for b in 0..cl.len() {
            let ((v, i), (w, j)) = (cl.vertex(a), cl.vertex(b));
            if d.has_arc(v, w) || (v == w && i > j) {
                arcs.push((a, b));
            }
        }
    }
    let mut keys: Vec<(i64, usize, usize)> = (0..cl.len()).map(|a| {
        let (v, i) = cl.vertex(a);
        (gamma[v], i, a)
    }).collect();
    keys.sort();
    let mut g = vec![0i64; cl.len()];
    for (rank, &(_, _, a)) in keys.iter().enumerate() {
        g[a] = rank as i64 + 1;
    }
    LabeledPoset::new(Dag::from_edges(cl.len(), &arcs), g).expect("injective")
}

/// Finite poset on distinct integer labels; `less[i]` is the mask of `j` with `e_i < e_j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    elements: Vec<i64>,
    less: Vec<Mask>,
}

impl Poset {
    /// Takes the transitive closure of the given relations `(a, b)` meaning `a < b`
    /// (indices into `elements`). Elements are sorted by label.
    pub fn new(elements: Vec<i64>, rels: &[(usize, usize)]) -> Result<Self, Error> {
        let n = elements.len();
        if n > MAX_VERTICES {
            return Err(Error::Invalid(format!("at most {MAX_VERTICES} elements")));
        }
        let distinct: BTreeSet<_> = elements.iter().collect();
        if distinct.len() != n {
            return Err(Error::Invalid("repeated poset element".into()));
        }
        let mut out = vec![0; n];
        for &(a, b) in rels {
            if a >= n || b >= n || a == b {
                return Err(Error::Invalid(format!("bad relation ({a},{b})")));
            }
            out[a] |= 1 << b;
        }
        let dag = Dag::from_out(out).map_err(|_| Error::Invalid("relations contain a cycle".into()))?;
        // sort by label
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by_key(|&i| elements[i]);
        let mut pos = vec![0; n];
        for (p, &i) in idx.iter().enumerate() {
            pos[i] = p;
        }
        let mut less = vec![0; n];
        for i in 0..n {
            for j in bits(dag.reach(i)) {
                less[pos[i]] |= 1 << pos[j];
            }
        }
        Ok(Poset { elements: idx.iter().map(|&i| elements[i]).collect(), less })
    }

    /// Poset on `1..=n` with relations given by labels.
    pub fn on_range(n: usize, rels: &[(i64, i64)]) -> Self {
        let r: Vec<_> = rels.iter().map(|&(a, b)| (a as usize - 1, b as usize - 1)).collect();
        Self::new((1..=n as i64).collect(), &r).expect("valid poset")
    }

    pub fn chain(n: usize) -> Self {
        let r: Vec<_> = (1..n as i64).map(|i| (i, i + 1)).collect();
        Self::on_range(n, &r)
    }

    pub fn antichain(n: usize) -> Self {
        Self::on_range(n, &[])
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    /// `e_i <_P e_j`
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.less[i] >> j & 1 == 1
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.lt(i, j) || self.lt(j, i)
    }

    pub fn dual(&self) -> Poset {
        let n = self.len();
        let mut less = vec![0; n];
        for i in 0..n {
            for j in bits(self.less[i]) {
                less[j] |= 1 << i;
            }
        }
        Poset { elements: self.elements.clone(), less }
    }

    /// Edges join incomparable elements; vertices ordered by label.
    pub fn incomparability_graph(&self) -> OrderedGraph {
        let n = self.len();
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !self.comparable(i, j) {
                    e.push((i, j));
                }
            }
        }
        Graph::from_edges(n, &e)
    }

    /// If `x <_P z` then `x < z`, and every `y` incomparable to both lies strictly between.
    pub fn is_natural_unit_interval_order(&self) -> bool {
        let n = self.len();
        let el = &self.elements;
        for x in 0..n {
            for z in 0..n {
                if !self.lt(x, z) {
                    continue;
                }
                if el[x] >= el[z] {
                    return false;
                }
                for y in 0..n {
                    if y != x && y != z && !self.comparable(x, y) && !self.comparable(y, z) && !(el[x] < el[y] && el[y] < el[z]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// No chain `a<b<c` with some `d` incomparable to all three.
    pub fn is_three_plus_one_free(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            for b in bits(self.less[a]) {
                for c in bits(self.less[b]) {
                    for d in 0..n {
                        if ![a, b, c].iter().any(|&x| x == d || self.comparable(x, d)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// No pair of disjoint 2-chains with all cross pairs incomparable.
    pub fn is_two_plus_two_free(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            for b in bits(self.less[a]) {
                for c in 0..n {
                    for d in bits(self.less[c]) {
                        if [c, d].iter().any(|&x| x == a || x == b) {
                            continue;
                        }
                        if !self.comparable(a, c) && !self.comparable(a, d) && !self.comparable(b, c) && !self.comparable(b, d) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn to_text(&self) -> String {
        let els: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        let mut s = format!("poset elements={}\n", els.join(","));
        for i in 0..self.len() {
            for j in bits(self.less[i]) {
                s.push_str(&format!("rel {} {}\n", self.elements[i], self.elements[j]));
            }
        }
        s
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut r = Vec::new();
        for i in 0..self.len() {
            for j in bits(self.less[i]) {
                r.push(format!("{}<{}", self.elements[i], self.elements[j]));
            }
        }
        write!(f, "P{:?}{{{}}}", self.elements, r.join(","))
    }
}

/// All labeled posets on `1..=n`.
pub fn all_posets(n: usize) -> Vec<Poset> {
    // enumerate strict orders as transitive, antisymmetric relations
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut less = vec![0 as Mask; n];
    fn go(k: usize, pairs: &[(usize, usize)], less: &mut Vec<Mask>, out: &mut Vec<Poset>, n: usize) {
        if k == pairs.len() {
            // transitivity
            for a in 0..n {
                for b in bits(less[a]) {
                    if less[b] & !less[a] != 0 {
                        return;
                    }
                }
            }
            out.push(Poset { elements: (1..=n as i64).collect(), less: less.clone() });
            return;
        }
        let (i, j) = pairs[k];
        go(k + 1, pairs, less, out, n);
        if less[j] >> i & 1 == 0 {
            less[i] |= 1 << j;
            go(k + 1, pairs, less, out, n);
            less[i] &= !(1 << j);
        }
    }
    go(0, &pairs, &mut less, &mut out, n);
    out
}

/// All ordered pairs `(S, T)` of vertex masks with `S ∪ T = V`, in bitmask order.
pub fn cover_decompositions(n: usize) -> Vec<(Mask, Mask)> {
    let full = full_mask(n);
    let mut out = Vec::new();
    for s in 0..=full {
        let rest = full & !s;
        // T = rest ∪ (any subset of S)
        let mut sub = s;
        let mut subs = Vec::new();
        loop {
            subs.push(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & s;
        }
        subs.reverse();
        for x in subs {
            out.push((s, rest | x));
        }
        if n == 0 {
            break;
        }
    }
    out
}

/// Input parsed from the text format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Graph { graph: Graph, weights: Vec<usize> },
    Poset(Poset),
    Dag(LabeledPoset),
}

impl Input {
    /// The ordered graph the series commands operate on.
    pub fn graph(&self) -> Graph {
        match self {
            Input::Graph { graph, .. } => graph.clone(),
            Input::Poset(p) => p.incomparability_graph(),
            Input::Dag(lp) => lp.dag.underlying(),
        }
    }

    pub fn weights(&self) -> Vec<usize> {
        match self {
            Input::Graph { weights, .. } => weights.clone(),
            other => vec![1; other.graph().n()],
        }
    }
}

/// Parses the line-oriented input format (`#` starts a comment):
///
/// ```text
/// graph n=3        | poset elements=1,2,3 | dag n=2
/// edge 1 2         | rel 1 3              | arc 1 2
/// weight 1 2       |                      | label 1 5
/// ```
///
/// Vertex numbers in files are 1-based.
pub fn parse_input(text: &str) -> Result<Input, Error> {
    enum Kind {
        None,
        Graph(usize, Vec<(usize, usize)>, Vec<usize>),
        Poset(Vec<i64>, Vec<(i64, i64)>),
        Dag(usize, Vec<(usize, usize)>, Vec<Option<i64>>),
    }
    let err = |line: usize, msg: String| Error::Parse { line, msg };
    let mut kind = Kind::None;
    let mut header_line = 0;
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let vert = |s: &str, n: usize| -> Result<usize, Error> {
            let v: usize = s.parse().map_err(|_| err(ln, format!("bad vertex `{s}`")))?;
            if v == 0 || v > n {
                return Err(err(ln, format!("vertex {v} out of range 1..={n}")));
            }
            Ok(v - 1)
        };
        let size = |t: &[&str]| -> Result<usize, Error> {
            let n: usize = t
                .get(1)
                .and_then(|s| s.strip_prefix("n="))
                .ok_or_else(|| err(ln, "expected n=K".into()))?
                .parse()
                .map_err(|_| err(ln, "bad vertex count".into()))?;
            if n > MAX_VERTICES {
                return Err(err(ln, format!("at most {MAX_VERTICES} vertices")));
            }
            Ok(n)
        };
        match (toks[0], &mut kind) {
            ("graph", Kind::None) => {
                let n = size(&toks)?;
                kind = Kind::Graph(n, Vec::new(), vec![1; n]);
                header_line = ln;
            }
            ("dag", Kind::None) => {
                let n = size(&toks)?;
                kind = Kind::Dag(n, Vec::new(), vec![None; n]);
                header_line = ln;
            }
            ("poset", Kind::None) => {
                let els = toks
                    .get(1)
                    .and_then(|s| s.strip_prefix("elements="))
                    .ok_or_else(|| err(ln, "expected elements=a,b,...".into()))?;
                let els: Vec<i64> = if els.is_empty() {
                    Vec::new()
                } else {
                    els.split(',').map(|x| x.trim().parse().map_err(|_| err(ln, format!("bad element `{x}`")))).collect::<Result<_, _>>()?
                };
                kind = Kind::Poset(els, Vec::new());
                header_line = ln;
            }
            ("graph" | "dag" | "poset", _) => return Err(err(ln, "only one header allowed".into())),
            ("edge", Kind::Graph(n, e, _)) if toks.len() == 3 => {
                let (u, v) = (vert(toks[1], *n)?, vert(toks[2], *n)?);
                if u == v {
                    return Err(err(ln, "loops are not allowed".into()));
                }
                e.push((u, v));
            }
            ("weight", Kind::Graph(n, _, w)) if toks.len() == 3 => {
                let v = vert(toks[1], *n)?;
                let x: usize = toks[2].parse().map_err(|_| err(ln, "bad weight".into()))?;
                if x == 0 {
                    return Err(err(ln, "weights must be positive".into()));
                }
                w[v] = x;
            }
            ("rel", Kind::Poset(_, r)) if toks.len() == 3 => {
                let a: i64 = toks[1].parse().map_err(|_| err(ln, "bad element".into()))?;
                let b: i64 = toks[2].parse().map_err(|_| err(ln, "bad element".into()))?;
                r.push((a, b));
            }
            ("arc", Kind::Dag(n, a, _)) if toks.len() == 3 => {
                let (u, v) = (vert(toks[1], *n)?, vert(toks[2], *n)?);
                a.push((u, v));
            }
            ("label", Kind::Dag(n, _, g)) if toks.len() == 3 => {
                let v = vert(toks[1], *n)?;
                g[v] = Some(toks[2].parse().map_err(|_| err(ln, "bad label".into()))?);
            }
            (d, _) => return Err(err(ln, format!("unexpected directive `{d}`"))),
        }
    }
    match kind {
        Kind::None => Err(err(1, "missing header (graph, poset or dag)".into())),
        Kind::Graph(n, e, w) => Ok(Input::Graph { graph: Graph::new(n, &e).map_err(|e| err(header_line, e.to_string()))?, weights: w }),
        Kind::Poset(els, rels) => {
            let find = |x: i64| els.iter().position(|&e| e == x).ok_or_else(|| err(header_line, format!("unknown element {x}")));
            let r: Vec<(usize, usize)> = rels.iter().map(|&(a, b)| Ok((find(a)?, find(b)?))).collect::<Result<_, Error>>()?;
            Ok(Input::Poset(Poset::new(els, &r).map_err(|e| err(header_line, e.to_string()))?))
        }
        Kind::Dag(n, a, g) => {
            let dag = Dag::new(n, &a).map_err(|e| err(header_line, e.to_string()))?;
            let gamma = if g.iter().all(|x| x.is_none()) {
                crate::orientation::gamma_decr(&dag).gamma
            } else {
                g.iter().map(|x| x.ok_or_else(|| err(header_line, "labels must be given for all vertices or none".into()))).collect::<Result<_, _>>()?
            };
            Ok(Input::Dag(LabeledPoset::new(dag, gamma).map_err(|e| err(header_line, e.to_string()))?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incomparability() {
        assert_eq!(Poset::on_range(3, &[(1, 3)]).incomparability_graph(), Graph::path(3));
        assert_eq!(Poset::antichain(3).incomparability_graph(), Graph::complete(3));
        assert_eq!(Poset::chain(3).incomparability_graph(), Graph::empty(3));
    }

    #[test]
    fn nuio_and_free() {
        assert!(!Poset::on_range(3, &[(1, 2)]).is_natural_unit_interval_order());
        assert!(Poset::on_range(3, &[(1, 3)]).is_natural_unit_interval_order());
        assert!(Poset::chain(4).is_natural_unit_interval_order());
        assert!(Poset::chain(4).is_three_plus_one_free());
        assert!(!Poset::on_range(4, &[(1, 2), (2, 3)]).is_three_plus_one_free());
        assert!(Poset::on_range(3, &[(1, 3)]).is_three_plus_one_free());
    }

    #[test]
    fn clans() {
        assert_eq!(Graph::complete(1).clan(&[2]), Graph::complete(2));
        assert_eq!(Graph::complete(2).clan(&[1, 1]), Graph::complete(2));
        assert_eq!(Graph::complete(2).clan(&[2, 1]), Graph::complete(3));
        let p = Graph::path(3).clan(&[1, 2, 1]);
        assert_eq!(p.num_edges(), 1 + 2 + 2);
    }

    #[test]
    fn dag_clans() {
        let single = dag_clan(&Dag::from_edges(1, &[]), &[1], &[2]);
        assert_eq!(single.dag.arcs(), vec![(1, 0)]);
        assert!(single.gamma[0] < single.gamma[1]);
        let ab = dag_clan(&Dag::from_edges(2, &[(0, 1)]), &[1, 2], &[1, 1]);
        assert_eq!(ab.dag.arcs(), vec![(0, 1)]);
        assert!(ab.gamma[0] < ab.gamma[1]);
        let ab = dag_clan(&Dag::from_edges(2, &[(0, 1)]), &[1, 2], &[2, 1]);
        // (a,1)=0, (a,2)=1, (b,1)=2
        let mut arcs = ab.dag.arcs();
        arcs.sort();
        assert_eq!(arcs, vec![(0, 2), (1, 0), (1, 2)]);
    }

    #[test]
    fn cluster() {
        assert!(Graph::complete(3).disjoint_union(&Graph::complete(2)).is_cluster_graph());
        assert!(!Graph::path(3).is_cluster_graph());
        assert!(Graph::empty(3).is_cluster_graph());
    }

    #[test]
    fn covers() {
        assert_eq!(cover_decompositions(0), vec![(0, 0)]);
        assert_eq!(cover_decompositions(1).len(), 3);
        assert_eq!(cover_decompositions(2).len(), 9);
        assert_eq!(cover_decompositions(4).len(), 81);
        for (s, t) in cover_decompositions(3) {
            assert_eq!(s | t, 7);
        }
    }

    #[test]
    fn predicates() {
        let d = Dag::from_edges(2, &[(0, 1)]);
        assert_eq!(d.predicates(0b10), DagPredicates { is_lower: false, is_upper: true, is_antichain: true });
        assert_eq!(d.predicates(0), DagPredicates { is_lower: true, is_upper: true, is_antichain: true });
        assert_eq!(d.predicates(0b11), DagPredicates { is_lower: true, is_upper: true, is_antichain: false });
        assert!(Dag::new(2, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| all_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 19, 219]);
        assert_eq!(all_graphs(4).len(), 64);
    }

    #[test]
    fn clan_index() {
        let c = ClanIndex::new(&[2, 0, 3]);
        assert_eq!(c.len(), 5);
        for idx in 0..5 {
            let (v, i) = c.vertex(idx);
            assert_eq!(c.index(v, i), idx);
        }
        assert_eq!(c.vertex(2), (2, 1));
    }

    #[test]
    fn parsing() {
        let i = parse_input("# star\ngraph n=3\nedge 1 2\nedge 1 3\nweight 2 2\n").unwrap();
        assert_eq!(i.graph(), Graph::from_edges(3, &[(0, 1), (0, 2)]));
        assert_eq!(i.weights(), vec![1, 2, 1]);
        let p = parse_input("poset elements=1,2,3\nrel 1 2\nrel 2 3\n").unwrap();
        match p {
            Input::Poset(p) => assert!(p.lt(0, 2)),
            _ => panic!(),
        }
        let e = parse_input("graph n=2\nedge 1 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(parse_input("graph n=2\nbogus\n").is_err());
        let d = parse_input("dag n=2\narc 1 2\n").unwrap();
        match d {
            Input::Dag(lp) => assert!(lp.is_decreasing()),
            _ => panic!(),
        }
    }
}
