//! Verification sweeps shared by the CLI `check` command and the acceptance tests.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{check_f_recurrence, factorial, q_factorial, rat_int, stirling2, QPoly};
use crate::coloring::{
    chromatic, clan_identity_check, hwang_identity_check, kromatic, kromatic_l, kromatic_x, kromatic_x_des, oracle, type_maps,
    ClusterOutcome, Variant,
};
use crate::error::{Check, Discrepancy};
use crate::graph::{all_graphs, all_posets, bits, Dag, Graph, LabeledPoset, Poset};
use crate::hopf::{delta_kromatic_check, ebar_coproduct_check, mtilde_coproduct_check, mtilde_kromatic_check, product_morphism_check};
use crate::orientation::{ao_expansion_check, mao_expansion_check, merge_bijection_check, ml_expansion_check, multiperm_theorem_check, source_count_check, source_counts};
use crate::qsym::{basis_element, expand_in_basis, BasisId, Composition, Partition, TruncatedSeries};
use crate::tableaux::{grothendieck_by_tableaux, grothendieck_expansion_check, grothendieck_series};

pub const SUITES: [&str; 10] = ["recurrence", "hopf", "cluster", "bijection", "orientations", "positivity", "tableaux", "identities", "oracle", "properties"];

/// Size caps for the sweeps.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub max_vertices: usize,
    pub seed: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_vertices: 4, seed: 0x5eed }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub passed: bool,
    pub failure: Option<Discrepancy>,
    pub millis: u128,
}

/// Runs a named suite; `None` for an unknown name.
pub fn run_suite(name: &str, caps: Caps) -> Option<SuiteReport> {
    let start = Instant::now();
    let res: Result<usize, Discrepancy> = match name {
        "recurrence" => recurrence(5, 10),
        "hopf" => hopf(),
        "cluster" => cluster(caps.max_vertices, 8),
        "bijection" => bijection(6),
        "orientations" => orientations(caps.max_vertices, 6),
        "positivity" => positivity(caps.max_vertices, 6),
        "tableaux" => tableaux(caps.max_vertices.min(4), 6),
        "identities" => complete_graphs(4).and_then(|a| clan_hwang(3, 5).map(|b| a + b)),
        "oracle" => oracle_agreement(3, 5),
        "properties" => properties(caps.seed, 40),
        _ => return None,
    };
    let (cases, failure) = match res {
        Ok(c) => (c, None),
        Err(d) => (0, Some(d)),
    };
    Some(SuiteReport { suite: name.to_string(), cases, passed: failure.is_none(), failure, millis: start.elapsed().as_millis() })
}

fn graphs_up_to(n: usize) -> Vec<Graph> {
    (0..=n).flat_map(all_graphs).collect()
}

fn first_err<T: Sync>(items: &[T], f: impl Fn(&T) -> Check + Sync + Send) -> Result<usize, Discrepancy> {
    // deterministic: the failure reported is the first one in input order
    let results: Vec<Check> = items.par_iter().map(f).collect();
    for r in results {
        r?;
    }
    Ok(items.len())
}

/// The F recurrence, the G recurrence and the F/G inclusion-exclusion.
pub fn recurrence(n_max: usize, r_max: usize) -> Result<usize, Discrepancy> {
    for n in 1..=n_max {
        check_f_recurrence(n, r_max)?;
    }
    Ok(n_max * (r_max + 1))
}

/// Weighted graph pool: all graphs on at most 3 vertices, weights in {1,2}.
pub fn weighted_pool() -> Vec<(Graph, Vec<usize>)> {
    let mut out = Vec::new();
    for g in graphs_up_to(3) {
        let n = g.n();
        for code in 0..1usize << n {
            out.push((g.clone(), (0..n).map(|v| 1 + (code >> v & 1)).collect()));
        }
    }
    out
}

pub fn product_pool() -> Vec<Graph> {
    vec![Graph::empty(0), Graph::complete(1), Graph::complete(2), Graph::path(3), Graph::empty(2)]
}

/// Coproduct identities and disjoint-union multiplicativity.
pub fn hopf() -> Result<usize, Discrepancy> {
    let mut cases = first_err(&weighted_pool(), |(g, w)| delta_kromatic_check(g, w, 5).check())?;
    for k in 1..=5 {
        ebar_coproduct_check(k, 8).check()?;
        cases += 1;
    }
    let nus: Vec<Partition> = (0..=4).flat_map(Partition::all_of).collect();
    cases += first_err(&nus, |nu| mtilde_coproduct_check(nu, 6).check())?;
    cases += first_err(&nus, |nu| mtilde_kromatic_check(nu, 6))?;
    let pool = product_pool();
    let pairs: Vec<(Graph, Graph)> = pool.iter().flat_map(|g| pool.iter().map(move |h| (g.clone(), h.clone()))).collect();
    cases += first_err(&pairs, |(g, h)| product_morphism_check(g, h, 5).check())?;
    Ok(cases)
}

/// Cluster graphs have symmetric L-bar series; every other graph has a witness.
pub fn cluster(max_vertices: usize, n: usize) -> Result<usize, Discrepancy> {
    let gs = graphs_up_to(max_vertices);
    first_err(&gs, |g| {
        let ctx = format!("cluster classification of {g:?}");
        match (g.is_cluster_graph(), crate::coloring::cluster_witness(g, n)) {
            (true, ClusterOutcome::Symmetric { .. }) => Ok(()),
            (false, ClusterOutcome::Witness { .. }) => Ok(()),
            (_, other) => Err(Discrepancy::property(ctx, format!("{other:?}"))),
        }
    })?;
    first_err(&gs, |g| cluster_lemmas(g, n))
}

fn min_max(g: &Graph) -> (usize, usize) {
    let n = g.n();
    let min = (0..n).filter(|&v| bits(g.adj(v)).all(|w| v < w)).count();
    let max = (0..n).filter(|&v| bits(g.adj(v)).all(|u| u < v)).count();
    (min, max)
}

fn max_independent(g: &Graph) -> usize {
    (0..1u32 << g.n()).filter(|&s| g.is_independent(s)).map(|s| s.count_ones() as usize).max().unwrap_or(0)
}

/// The three lemmas behind the classification, as implications checked on `g`.
pub fn cluster_lemmas(g: &Graph, n: usize) -> Check {
    let ctx = format!("cluster lemmas for {g:?}");
    let xq = chromatic(g, g.n(), true);
    let w = xq.map_coeffs(|c| QPoly::constant(c.coeff(0)));
    let w_sym = w.is_symmetric().is_ok();
    let (mn, mx) = min_max(g);
    if w_sym && mn != mx {
        return Err(Discrepancy::property(ctx, format!("W symmetric but |min|={mn}, |max|={mx}")));
    }
    let l_sym = kromatic_l(g, n, Variant::AscMax).is_symmetric().is_ok();
    let small = max_independent(g) <= mx;
    if l_sym && !(w_sym && small) {
        return Err(Discrepancy::property(ctx, "L-bar symmetric but the lemma's conclusion fails"));
    }
    if w_sym && small && !g.is_cluster_graph() {
        return Err(Discrepancy::property(ctx, "hypotheses hold for a non-cluster graph"));
    }
    Ok(())
}

/// Merge roundtrips for K_2 and the 3-path.
pub fn bijection(max_total: usize) -> Result<usize, Discrepancy> {
    let mut cases = 0;
    for g in [Graph::complete(2), Graph::path(3)] {
        let r = merge_bijection_check(&g, max_total)?;
        cases += r.tuples + r.triples;
    }
    Ok(cases)
}

/// Orientation-side expansions: acyclic orientations, multi-orientations,
/// multilinear extensions, multipermutations and source counts.
pub fn orientations(max_vertices: usize, n: usize) -> Result<usize, Discrepancy> {
    let mut cases = orientation_expansions(max_vertices, n)?;
    cases += multiperm_sweep(max_vertices, n)?;
    let labeled = all_labeled_dags(3);
    cases += first_err(&labeled, |lp| ml_expansion_check(lp, 5))?;
    cases += source_count_suite(n)?;
    Ok(cases)
}

/// Kromatic and L-bar series as sums over (multi-)orientations.
pub fn orientation_expansions(max_vertices: usize, n: usize) -> Result<usize, Discrepancy> {
    let gs = graphs_up_to(max_vertices);
    let cases = first_err(&gs, |g| mao_expansion_check(g, n))?;
    Ok(cases + first_err(&gs, |g| ao_expansion_check(g, n))?)
}

/// Multipermutation expansion for every poset on at most `max_elements` elements.
pub fn multiperm_sweep(max_elements: usize, n: usize) -> Result<usize, Discrepancy> {
    let posets: Vec<Poset> = (0..=max_elements).flat_map(all_posets).collect();
    first_err(&posets, |p| multiperm_theorem_check(p, n))
}

/// Source counts of multi-orientations for the four small graphs.
pub fn source_count_suite(n: usize) -> Result<usize, Discrepancy> {
    let gs = [Graph::complete(2), Graph::complete(3), Graph::path(3), Graph::empty(2)];
    let cases = first_err(&gs, |g| source_count_check(g, n))?;
    let k2 = source_counts(&Graph::complete(2), n);
    for k in 2..=n {
        if k2.get(&(1, k)) != Some(&2) {
            return Err(Discrepancy::value("sources of K_2", format!("k={k}"), &format!("{:?}", k2.get(&(1, k))), &"2"));
        }
    }
    Ok(cases)
}

/// Every DAG on `n` or fewer vertices with every injective labeling by `1..=n`.
pub fn all_labeled_dags(n_max: usize) -> Vec<LabeledPoset> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        for g in all_graphs(n) {
            for d in crate::orientation::acyclic_orientations(&g) {
                for perm in permutations(n) {
                    out.push(LabeledPoset::new(d.clone(), perm.iter().map(|&x| x as i64 + 1).collect()).expect("injective"));
                }
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Multifundamental positivity of the kromatic and L-bar series, and
/// Grothendieck positivity for natural unit interval orders.
pub fn positivity(max_vertices: usize, n: usize) -> Result<usize, Discrepancy> {
    let cases = lbar_positivity(max_vertices, n)?;
    Ok(cases + tableaux(max_vertices.min(4), n)?)
}

/// Every L-bar coefficient of the kromatic and L-bar series is in `N[q]`.
pub fn lbar_positivity(max_vertices: usize, n: usize) -> Result<usize, Discrepancy> {
    let gs = graphs_up_to(max_vertices);
    first_err(&gs, |g| {
        for (name, s) in [("kromatic", kromatic(g, n)), ("L-bar", kromatic_l(g, n, Variant::AscMax))] {
            let ex = expand_in_basis(&s, BasisId::Lbar).map_err(|e| Discrepancy::internal(e.to_string()))?;
            if let Some((a, c)) = ex.terms.iter().find(|(_, c)| !c.is_natural()) {
                return Err(Discrepancy::property(format!("{name} of {g:?}"), format!("Lbar{a} has coefficient {c}")));
            }
        }
        Ok(())
    })
}

/// s̄-expansion theorem over all natural unit interval orders, plus the
/// defining properties of s̄.
pub fn tableaux(max_elements: usize, n: usize) -> Result<usize, Discrepancy> {
    let posets: Vec<Poset> = (0..=max_elements).flat_map(all_posets).filter(|p| p.is_natural_unit_interval_order()).collect();
    let mut cases = first_err(&posets, |p| grothendieck_expansion_check(p, n).map(|_| ()))?;
    let lams: Vec<Partition> = (0..=4).flat_map(Partition::all_of).collect();
    cases += first_err(&lams, |lam| {
        let s = grothendieck_series(lam, n);
        let ctx = format!("sbar{}", lam.as_composition());
        if let Err((a, b)) = s.is_symmetric() {
            return Err(Discrepancy::property(ctx, format!("M{a} and M{b} differ")));
        }
        let c = s.coeff(&lam.as_composition());
        if !c.is_one() {
            return Err(Discrepancy::value(ctx, "leading coefficient", &c, &1));
        }
        if lam.degree() <= 3 {
            let t = grothendieck_by_tableaux(lam, 4);
            if let Some((k, x, y)) = s.retrunc(4).first_difference(&t) {
                return Err(Discrepancy::value(ctx, format!("M{k}"), &x, &y));
            }
        }
        Ok(())
    })?;
    Ok(cases)
}

/// Complete-graph closed forms in the `e`, `ē` and L-bar pictures.
pub fn complete_graphs(n_max: usize) -> Result<usize, Discrepancy> {
    for n in 1..=n_max {
        let trunc = n + 4;
        let g = Graph::complete(n);
        let kx = kromatic(&g, trunc);
        let ctx = format!("complete graph K_{n}");
        let e = expand_in_basis(&kx, BasisId::E).map_err(|x| Discrepancy::internal(x.to_string()))?;
        let eb = expand_in_basis(&kx, BasisId::Ebar).map_err(|x| Discrepancy::internal(x.to_string()))?;
        let mut want_e = TruncatedSeries::zero(trunc);
        let mut want_eb = TruncatedSeries::zero(trunc);
        for r in n..=trunc {
            let c = QPoly::constant(rat_int(factorial(n) * stirling2(r, n)));
            want_e.add_term(Composition(vec![r]), &c);
            let c = QPoly::constant(rat_int(factorial(n) * stirling2(r - 1, n - 1)));
            want_eb.add_term(Composition(vec![r]), &c);
        }
        for (name, got, want) in [("e", &e.terms, want_e), ("ebar", &eb.terms, want_eb)] {
            let mut got_s = TruncatedSeries::zero(trunc);
            for (a, c) in got {
                got_s.add_term(a.clone(), c);
            }
            if let Some((k, x, y)) = got_s.first_difference(&want) {
                return Err(Discrepancy::value(format!("{ctx} {name}-expansion"), format!("{name}{k}"), &x, &y));
            }
        }
        let l = kromatic_l(&g, trunc, Variant::AscMax);
        let scaled = kx.scale(&q_factorial(n).scale(&crate::arith::BigRat::new(1.into(), factorial(n))));
        if let Some((k, x, y)) = l.first_difference(&scaled) {
            return Err(Discrepancy::value(format!("{ctx} L-bar"), format!("M{k}"), &x, &y));
        }
    }
    Ok(n_max)
}

/// Clan identity and fixed-size identity over small graphs.
pub fn clan_hwang(max_vertices: usize, n: usize) -> Result<usize, Discrepancy> {
    let gs = graphs_up_to(max_vertices);
    let mut cases = first_err(&gs, |g| clan_identity_check(g, n))?;
    let cases_mu: Vec<(Graph, Vec<usize>)> = gs
        .iter()
        .flat_map(|g| type_maps(g.n(), n, 2).into_iter().map(move |mu| (g.clone(), mu)))
        .collect();
    cases += first_err(&cases_mu, |(g, mu)| hwang_identity_check(g, mu, n))?;
    Ok(cases)
}

/// Naive enumerator against the engine on every small graph, all five series.
pub fn oracle_agreement(max_vertices: usize, n_max: usize) -> Result<usize, Discrepancy> {
    let mut items = Vec::new();
    for g in graphs_up_to(max_vertices) {
        for kind in oracle::SeriesKind::ALL {
            for n in 0..=n_max {
                items.push((g.clone(), kind, n));
            }
        }
    }
    first_err(&items, |(g, kind, n)| {
        let a = oracle::engine(g, *kind, *n).to_text();
        let b = oracle::naive(g, *kind, *n).ok_or_else(|| Discrepancy::internal("oracle guard"))?.to_text();
        if a != b {
            return Err(Discrepancy::value(format!("oracle {} on {g:?} N={n}", kind.name()), "", &a, &b));
        }
        Ok(())
    })
}

fn random_series(rng: &mut StdRng, n: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(n);
    for _ in 0..rng.gen_range(0..5) {
        let d = rng.gen_range(0..=n);
        let comps = Composition::all_of(d);
        let a = comps[rng.gen_range(0..comps.len())].clone();
        let c = QPoly::from_ints(&(0..rng.gen_range(1..3)).map(|_| rng.gen_range(-3..=3)).collect::<Vec<i64>>());
        s.add_term(a, &c);
    }
    s
}

fn random_dag(rng: &mut StdRng, n: usize) -> LabeledPoset {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.4) {
                arcs.push((u, v));
            }
        }
    }
    let mut labels: Vec<i64> = (1..=n as i64).collect();
    for i in (1..n).rev() {
        labels.swap(i, rng.gen_range(0..=i));
    }
    LabeledPoset::new(Dag::from_edges(n, &arcs), labels).expect("injective")
}

fn same(ctx: &str, a: &TruncatedSeries, b: &TruncatedSeries) -> Check {
    match a.first_difference(b) {
        None => Ok(()),
        Some((k, x, y)) => Err(Discrepancy::value(ctx, format!("M{k}"), &x, &y)),
    }
}

/// Seeded algebraic properties: ring axioms of the quasi-shuffle product,
/// coassociativity and multiplicativity of the coproduct, basis roundtrips,
/// the rho/tau relations among the four L-bar variants, the multilinear
/// expansion on random DAGs, and asc/des agreement for unit interval orders.
pub fn properties(seed: u64, rounds: usize) -> Result<usize, Discrepancy> {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = 5;
    for _ in 0..rounds {
        let (a, b, c) = (random_series(&mut rng, n), random_series(&mut rng, n), random_series(&mut rng, n));
        let ab = a.mul(&b).expect("same trunc");
        same("commutativity", &ab, &b.mul(&a).expect("same trunc"))?;
        same("associativity", &ab.mul(&c).expect("same trunc"), &a.mul(&b.mul(&c).expect("same trunc")).expect("same trunc"))?;
        let bc = b.add(&c).expect("same trunc");
        same("distributivity", &a.mul(&bc).expect("same trunc"), &ab.add(&a.mul(&c).expect("same trunc")).expect("same trunc"))?;
        same("unit", &a.mul(&TruncatedSeries::one(n)).expect("same trunc"), &a)?;
        let da = a.coproduct();
        if let Some(k) = da.mul(&b.coproduct()).first_difference(&ab.coproduct()) {
            return Err(Discrepancy::property("coproduct multiplicative", format!("{k:?}")));
        }
        // coassociativity: (Δ⊗1)Δ and (1⊗Δ)Δ agree as triple splittings
        for (alpha, _) in a.iter() {
            let p = alpha.parts();
            let mut left = Vec::new();
            let mut right = Vec::new();
            for i in 0..=p.len() {
                for j in 0..=i {
                    left.push((p[..j].to_vec(), p[j..i].to_vec(), p[i..].to_vec()));
                }
                for j in i..=p.len() {
                    right.push((p[..i].to_vec(), p[i..j].to_vec(), p[j..].to_vec()));
                }
            }
            left.sort();
            right.sort();
            if left != right {
                return Err(Discrepancy::property("coassociativity", format!("{alpha}")));
            }
        }
        let lb = expand_in_basis(&a, BasisId::Lbar).map_err(|e| Discrepancy::internal(e.to_string()))?;
        same("Lbar roundtrip", &lb.resum(), &a)?;
        let size = rng.gen_range(1..=4);
        let lp = random_dag(&mut rng, size);
        ml_expansion_check(&lp, 5)?;
    }
    for b in [BasisId::E, BasisId::Ebar, BasisId::Mono, BasisId::Mtilde, BasisId::Sbar] {
        for d in 0..=4 {
            for lam in Partition::all_of(d) {
                let e = basis_element(b, &lam.0, 6);
                let ex = expand_in_basis(&e, b).map_err(|x| Discrepancy::internal(x.to_string()))?;
                let mut want = std::collections::BTreeMap::new();
                want.insert(lam.as_composition(), QPoly::one());
                if ex.terms != want {
                    return Err(Discrepancy::property(format!("{b} roundtrip"), format!("{lam:?} gave {}", ex.render())));
                }
            }
        }
    }
    let gs = graphs_up_to(4);
    first_err(&gs, |g| {
        let n = 5;
        let edges = g.num_edges();
        let l = kromatic_l(g, n, Variant::AscMax);
        let ctx = format!("rho/tau for {g:?}");
        same(&ctx, &l, &kromatic_l(g, n, Variant::DesMin).rho())?;
        let dm = kromatic_l(g, n, Variant::DesMax).tau(edges).map_err(|e| Discrepancy::internal(e.to_string()))?;
        same(&ctx, &l, &dm)?;
        let am = kromatic_l(g, n, Variant::AscMin).tau(edges).map_err(|e| Discrepancy::internal(e.to_string()))?;
        same(&ctx, &l, &am.rho())
    })?;
    let nuio: Vec<Poset> = (0..=4).flat_map(all_posets).filter(|p| p.is_natural_unit_interval_order()).collect();
    first_err(&nuio, |p| {
        let g = p.incomparability_graph();
        same(&format!("asc/des for {}", p.to_text().trim()), &kromatic_x(&g, 6), &kromatic_x_des(&g, 6))
    })?;
    Ok(rounds + gs.len() + nuio.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites() {
        assert_eq!(recurrence(3, 6).unwrap(), 21);
        complete_graphs(3).unwrap();
        clan_hwang(2, 4).unwrap();
        oracle_agreement(2, 4).unwrap();
        cluster(3, 6).unwrap();
        properties(7, 5).unwrap();
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", Caps::default()).is_none());
    }
}
