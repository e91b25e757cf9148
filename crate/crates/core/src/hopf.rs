//! Coproduct and product identities checked on truncated series.

use std::fmt;

use serde::Serialize;

use crate::arith::{multinomial, rat_int, QPoly};
use crate::coloring::{kromatic, kromatic_l, kromatic_weighted, kromatic_x, Variant};
use crate::error::{Check, Discrepancy};
use crate::graph::{bits, cover_decompositions, Graph};
use crate::qsym::{basis_element, mtilde, BasisId, Partition, TensorSeries, TruncatedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Everything of interest lies above the truncation.
    InconclusiveTruncation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoproductReport {
    pub identity: String,
    pub trunc: usize,
    pub status: Status,
    /// `(left key, right key, left side, right side)`
    pub mismatch: Option<(String, String, String, String)>,
}

impl CoproductReport {
    fn compare(identity: String, trunc: usize, lhs: &TensorSeries, rhs: &TensorSeries) -> Self {
        let mismatch = lhs.first_difference(rhs).map(|((a, b), x, y)| (a.to_string(), b.to_string(), x.to_string(), y.to_string()));
        let status = if mismatch.is_some() {
            Status::Fail
        } else if lhs.is_empty() {
            Status::InconclusiveTruncation
        } else {
            Status::Pass
        };
        CoproductReport { identity, trunc, status, mismatch }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Pass, or a discrepancy describing the first failing key.
    pub fn check(&self) -> Check {
        match &self.mismatch {
            None => Ok(()),
            Some((a, b, x, y)) => Err(Discrepancy::value(&self.identity, format!("M{a} ⊗ M{b}"), x, y)),
        }
    }
}

impl fmt::Display for CoproductReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let st = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::InconclusiveTruncation => "inconclusive (truncation)",
        };
        write!(f, "{} [N={}]: {st}", self.identity, self.trunc)?;
        if let Some((a, b, x, y)) = &self.mismatch {
            write!(f, " at M{a} ⊗ M{b}: {x} vs {y}")?;
        }
        Ok(())
    }
}

fn restrict_weights(omega: &[usize], s: u32) -> Vec<usize> {
    bits(s).map(|v| omega[v]).collect()
}

fn cover_sum(g: &Graph, omega: &[usize], n: usize, literal: bool) -> TensorSeries {
    let mut rhs = TensorSeries::zero(n);
    for (s, t) in cover_decompositions(g.n()) {
        let t = if literal { s } else { t };
        let fs = kromatic_weighted(&g.induced(s), &restrict_weights(omega, s), n);
        let ft = kromatic_weighted(&g.induced(t), &restrict_weights(omega, t), n);
        rhs.add_tensor(&fs, &ft, &QPoly::one());
    }
    rhs
}

/// Coproduct of the weighted kromatic function against the sum over covers
/// `S ∪ T = V` of `X̄_{G|S} ⊗ X̄_{G|T}`.
pub fn delta_kromatic_check(g: &Graph, omega: &[usize], n: usize) -> CoproductReport {
    let lhs = kromatic_weighted(g, omega, n).coproduct();
    CoproductReport::compare(format!("coproduct of kromatic {g:?} w={omega:?}"), n, &lhs, &cover_sum(g, omega, n, false))
}

/// The same with `X̄_{G|S} ⊗ X̄_{G|S}` on the right.
pub fn delta_kromatic_check_literal(g: &Graph, omega: &[usize], n: usize) -> CoproductReport {
    let lhs = kromatic_weighted(g, omega, n).coproduct();
    CoproductReport::compare(format!("coproduct of kromatic {g:?} w={omega:?}, S⊗S form"), n, &lhs, &cover_sum(g, omega, n, true))
}

fn ebar(i: usize, n: usize) -> TruncatedSeries {
    if i == 0 {
        TruncatedSeries::one(n)
    } else {
        (*basis_element(BasisId::Ebar, &[i], n)).clone()
    }
}

/// `Δ(ē_k) = Σ_{i+j=k} ē_i ⊗ ē_j + Σ_{i+j=k+1, i,j>0} ē_i ⊗ ē_j`.
pub fn ebar_coproduct_check(k: usize, n: usize) -> CoproductReport {
    let lhs = ebar(k, n).coproduct();
    let mut rhs = TensorSeries::zero(n);
    for i in 0..=k {
        rhs.add_tensor(&ebar(i, n), &ebar(k - i, n), &QPoly::one());
    }
    for i in 1..=k {
        rhs.add_tensor(&ebar(i, n), &ebar(k + 1 - i, n), &QPoly::one());
    }
    CoproductReport::compare(format!("coproduct of ebar[{k}]"), n, &lhs, &rhs)
}

/// Partitions built from the distinct parts of `nu` with multiplicities at most theirs.
fn sub_multisets(nu: &Partition) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &(_, r) in &nu.multiplicities() {
        out = out.into_iter().flat_map(|c: Vec<usize>| (0..=r).map(move |k| [c.clone(), vec![k]].concat())).collect();
    }
    out
}

fn from_mults(parts: &[(usize, usize)], r: &[usize]) -> Partition {
    Partition::new(parts.iter().zip(r).flat_map(|(&(p, _), &k)| std::iter::repeat(p).take(k)).collect())
}

/// `Δ(m̄~_ν)` against the multinomial formula.
pub fn mtilde_coproduct_check(nu: &Partition, n: usize) -> CoproductReport {
    let lhs = mtilde(nu, n).coproduct();
    let parts = nu.multiplicities();
    let subs = sub_multisets(nu);
    let mut rhs = TensorSeries::zero(n);
    for rl in &subs {
        for rm in &subs {
            let mut c = num_bigint::BigInt::from(1);
            for (i, &(_, r)) in parts.iter().enumerate() {
                if r > rl[i] + rm[i] {
                    c = 0.into();
                    break;
                }
                c *= multinomial(r, &[r - rl[i], r - rm[i], rl[i] + rm[i] - r]);
            }
            if c != 0.into() {
                let lam = from_mults(&parts, rl);
                let mu = from_mults(&parts, rm);
                rhs.add_tensor(&mtilde(&lam, n), &mtilde(&mu, n), &QPoly::constant(rat_int(c)));
            }
        }
    }
    CoproductReport::compare(format!("coproduct of mtilde{}", nu.as_composition()), n, &lhs, &rhs)
}

/// The Stirling formula for `m̄~_λ` against the weighted kromatic function of a complete graph.
pub fn mtilde_kromatic_check(lam: &Partition, n: usize) -> Check {
    let a = mtilde(lam, n);
    let b = kromatic_weighted(&Graph::complete(lam.len()), &lam.0, n);
    match a.first_difference(&b) {
        None => Ok(()),
        Some((k, x, y)) => Err(Discrepancy::value(format!("mtilde{} vs complete graph", lam.as_composition()), format!("M{k}"), &x, &y)),
    }
}

/// Multiplicativity under disjoint union for the kromatic, L-bar and set-valued `q` series.
pub fn product_morphism_check(g: &Graph, h: &Graph, n: usize) -> CoproductReport {
    let u = g.disjoint_union(h);
    let series: [(&str, fn(&Graph, usize) -> TruncatedSeries); 3] = [
        ("kromatic", kromatic),
        ("Lbar", |g, n| kromatic_l(g, n, Variant::AscMax)),
        ("Xbar(q)", kromatic_x),
    ];
    let mut last = None;
    for (name, f) in series {
        let lhs = f(&u, n);
        let rhs = f(g, n).mul(&f(h, n)).expect("same truncation");
        let id = format!("{name} of {g:?} ⊔ {h:?}");
        let to_tensor = |s: &TruncatedSeries| {
            let mut t = TensorSeries::zero(n);
            t.add_tensor(s, &TruncatedSeries::one(n), &QPoly::one());
            t
        };
        let r = CoproductReport::compare(id, n, &to_tensor(&lhs), &to_tensor(&rhs));
        if r.status != Status::Pass {
            return r;
        }
        last = Some(r);
    }
    let mut r = last.expect("three series");
    r.identity = format!("product of {g:?} and {h:?}");
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_examples() {
        let e = delta_kromatic_check(&Graph::empty(0), &[], 3);
        assert!(e.passed());
        assert!(delta_kromatic_check(&Graph::complete(1), &[1], 3).passed());
        assert!(delta_kromatic_check(&Graph::complete(2), &[1, 1], 4).passed());
        assert!(delta_kromatic_check(&Graph::complete(2), &[2, 1], 5).passed());
        assert_eq!(delta_kromatic_check_literal(&Graph::complete(1), &[1], 3).status, Status::Fail);
    }

    #[test]
    fn ebar_examples() {
        let r = ebar_coproduct_check(1, 4);
        assert!(r.passed(), "{r}");
        assert!(ebar_coproduct_check(2, 6).passed());
        assert!(ebar_coproduct_check(4, 8).passed());
        assert_eq!(ebar_coproduct_check(5, 4).status, Status::InconclusiveTruncation);
    }

    #[test]
    fn mtilde_examples() {
        assert!(mtilde_coproduct_check(&Partition(vec![1]), 4).passed());
        assert!(mtilde_coproduct_check(&Partition(vec![]), 3).passed());
        assert!(mtilde_coproduct_check(&Partition(vec![1, 1]), 5).passed());
        assert!(mtilde_coproduct_check(&Partition(vec![2, 1]), 6).passed());
        mtilde_kromatic_check(&Partition(vec![2, 1, 1]), 6).unwrap();
    }

    #[test]
    fn product_examples() {
        assert!(product_morphism_check(&Graph::complete(1), &Graph::complete(1), 3).passed());
        assert!(product_morphism_check(&Graph::complete(2), &Graph::complete(1), 4).passed());
        assert!(product_morphism_check(&Graph::path(3), &Graph::empty(0), 4).passed());
    }
}
