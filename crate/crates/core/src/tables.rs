//! Reference tables shipped in `data/` and the code that recomputes them.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arith::QPoly;
use crate::coloring::{kromatic_l, kromatic_x, Variant};
use crate::error::Error;
use crate::graph::{Graph, Poset};
use crate::qsym::{expand_in_basis, BasisId, Composition, Partition};
use crate::tableaux::{gpt_coefficients, kromatic_x_partitions, sbar_expand_partitions};

const TABLE1: &str = include_str!("../data/table1.txt");
const TABLE2: &str = include_str!("../data/table2.txt");
const TABLE3: &str = include_str!("../data/table3.txt");

/// One printed row. Vertices and poset elements are `1..=n` in the data files.
#[derive(Clone, Debug)]
pub struct ExpectedRow {
    pub index: usize,
    pub graph: Graph,
    pub poset: Option<Poset>,
    pub entries: Vec<(BasisId, Composition, QPoly)>,
}

#[derive(Clone, Debug)]
pub struct ExpectedTable {
    pub id: u8,
    pub rows: Vec<ExpectedRow>,
}

fn parse_pairs(s: &str, sep: char, line: usize) -> Result<Vec<(usize, usize)>, Error> {
    s.split_whitespace()
        .map(|t| {
            let (a, b) = t.split_once(sep).ok_or(Error::Parse { line, msg: format!("bad pair `{t}`") })?;
            let a: usize = a.parse().map_err(|_| Error::Parse { line, msg: format!("bad vertex `{a}`") })?;
            let b: usize = b.parse().map_err(|_| Error::Parse { line, msg: format!("bad vertex `{b}`") })?;
            if a == 0 || b == 0 {
                return Err(Error::Parse { line, msg: "vertices start at 1".into() });
            }
            Ok((a - 1, b - 1))
        })
        .collect()
}

fn parse_sized(rest: &str, line: usize) -> Result<(usize, &str), Error> {
    let (n, body) = rest.split_once(':').ok_or(Error::Parse { line, msg: "missing `:`".into() })?;
    let n = n.trim().parse().map_err(|_| Error::Parse { line, msg: format!("bad size `{n}`") })?;
    Ok((n, body))
}

/// Parses the data-file format (`row k`, `graph n: u-v ...`, `poset n: a<b ...`, `BASIS [parts]: poly`).
pub fn parse_table(id: u8, text: &str) -> Result<ExpectedTable, Error> {
    let mut rows: Vec<ExpectedRow> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line, msg };
        if let Some(r) = l.strip_prefix("row ") {
            let index = r.trim().parse().map_err(|_| err(format!("bad row `{r}`")))?;
            rows.push(ExpectedRow { index, graph: Graph::empty(0), poset: None, entries: vec![] });
            continue;
        }
        let row = rows.last_mut().ok_or_else(|| err("entry before first row".into()))?;
        if let Some(r) = l.strip_prefix("graph ") {
            let (n, body) = parse_sized(r, line)?;
            row.graph = Graph::new(n, &parse_pairs(body, '-', line)?)?;
        } else if let Some(r) = l.strip_prefix("poset ") {
            let (n, body) = parse_sized(r, line)?;
            let rels: Vec<(i64, i64)> = parse_pairs(body, '<', line)?.into_iter().map(|(a, b)| (a as i64 + 1, b as i64 + 1)).collect();
            row.poset = Some(Poset::on_range(n, &rels));
        } else {
            let (head, poly) = l.split_once(':').ok_or_else(|| err("missing `:`".into()))?;
            let (basis, idx) = head.split_once(' ').ok_or_else(|| err("missing basis".into()))?;
            let basis = BasisId::parse(basis).ok_or_else(|| err(format!("unknown basis `{basis}`")))?;
            let idx = idx.trim().trim_start_matches('[').trim_end_matches(']');
            let parts: Vec<usize> = idx.split(',').map(|p| p.trim().parse().map_err(|_| err(format!("bad part `{p}`")))).collect::<Result<_, _>>()?;
            let poly: QPoly = poly.trim().parse().map_err(|e: Error| err(e.to_string()))?;
            row.entries.push((basis, Composition(parts), poly));
        }
    }
    for r in &rows {
        if let Some(p) = &r.poset {
            if p.incomparability_graph() != r.graph {
                return Err(Error::Invalid(format!("table {id} row {}: graph is not inc(P)", r.index)));
            }
        }
    }
    Ok(ExpectedTable { id, rows })
}

pub fn expected(id: u8) -> Result<ExpectedTable, Error> {
    let text = match id {
        1 => TABLE1,
        2 => TABLE2,
        3 => TABLE3,
        _ => return Err(Error::Invalid(format!("no table {id}"))),
    };
    parse_table(id, text)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryDiff {
    pub key: String,
    pub expected: String,
    pub computed: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RowReport {
    pub row: usize,
    pub graph: String,
    pub checked: usize,
    /// Printed value differs from the computed one.
    pub mismatches: Vec<EntryDiff>,
    /// Nonzero computed value in the printed range with no printed entry.
    pub omitted: Vec<EntryDiff>,
    /// Disagreement between two independent computations of the same row.
    pub internal: Vec<EntryDiff>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub table: u8,
    pub trunc: Option<usize>,
    pub rows: Vec<RowReport>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.mismatches.is_empty() && r.internal.is_empty())
    }

    pub fn checked(&self) -> usize {
        self.rows.iter().map(|r| r.checked).sum()
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let st = if r.mismatches.is_empty() && r.internal.is_empty() { "ok" } else { "MISMATCH" };
            writeln!(f, "table {} row {} [{}]: {st}, {} entries", self.table, r.row, r.graph, r.checked)?;
            for d in &r.mismatches {
                writeln!(f, "  mismatch {}: printed {} computed {}", d.key, d.expected, d.computed)?;
            }
            for d in &r.internal {
                writeln!(f, "  sides differ {}: {} vs {}", d.key, d.expected, d.computed)?;
            }
            for d in &r.omitted {
                writeln!(f, "  not printed {}: computed {}", d.key, d.computed)?;
            }
        }
        let bad = self.rows.iter().filter(|r| !r.mismatches.is_empty() || !r.internal.is_empty()).count();
        write!(f, "table {}: {} rows, {} entries, {}", self.table, self.rows.len(), self.checked(), if bad == 0 { "pass".to_string() } else { format!("{bad} rows differ") })
    }
}

fn key(b: BasisId, a: &Composition) -> String {
    format!("{}{}", b.name(), a)
}

/// Recomputes tables 1 and 2 at truncation `trunc` (default `|V|+1`). Only
/// keys of size `<= |V|+1` are compared.
fn graph_table(t: &ExpectedTable, trunc: Option<usize>) -> Result<TableReport, Error> {
    let mut rows = Vec::new();
    for row in &t.rows {
        let nv = row.graph.n();
        let n = trunc.unwrap_or(nv + 1).max(nv + 1);
        let series = if t.id == 1 { kromatic_l(&row.graph, n, Variant::AscMax) } else { kromatic_x(&row.graph, n) };
        let lbar = expand_in_basis(&series, BasisId::Lbar)?;
        let mut rep = RowReport { row: row.index, graph: row.graph.to_text().trim().replace('\n', "; "), ..Default::default() };
        let mut printed: BTreeMap<(BasisId, Composition), &QPoly> = BTreeMap::new();
        for (b, a, c) in &row.entries {
            printed.insert((*b, a.clone()), c);
        }
        for ((b, a), c) in &printed {
            let got = if *b == BasisId::M { series.coeff(a) } else { lbar.coeff(&a.0) };
            rep.checked += 1;
            if got != **c {
                rep.mismatches.push(EntryDiff { key: key(*b, a), expected: c.to_string(), computed: got.to_string() });
            }
        }
        let visible = |a: &Composition| a.degree() <= nv + 1;
        for (a, c) in series.iter() {
            if visible(a) && !printed.contains_key(&(BasisId::M, a.clone())) {
                rep.omitted.push(EntryDiff { key: key(BasisId::M, a), expected: "0".into(), computed: c.to_string() });
            }
        }
        for (a, c) in &lbar.terms {
            if visible(a) && !printed.contains_key(&(BasisId::Lbar, a.clone())) {
                rep.omitted.push(EntryDiff { key: key(BasisId::Lbar, a), expected: "0".into(), computed: c.to_string() });
            }
        }
        rows.push(rep);
    }
    Ok(TableReport { table: t.id, trunc, rows })
}

/// Table 3 for partitions of size `<= max_weight`: the coloring side and the
/// tableau side are computed separately, compared with each other on every
/// partition and with the print on partitions with at most `|P|+1` parts.
fn grothendieck_table(t: &ExpectedTable, max_weight: usize) -> Result<TableReport, Error> {
    let mut rows = Vec::new();
    for row in &t.rows {
        let p = row.poset.as_ref().ok_or_else(|| Error::Invalid(format!("row {} has no poset", row.index)))?;
        let nv = p.len();
        let coloring = sbar_expand_partitions(&kromatic_x_partitions(&row.graph, max_weight));
        let tableaux = gpt_coefficients(p, max_weight);
        let mut rep = RowReport { row: row.index, graph: p.to_text().trim().replace('\n', "; "), ..Default::default() };
        let keys: std::collections::BTreeSet<&Partition> = coloring.keys().chain(tableaux.keys()).collect();
        for lam in keys {
            let a = coloring.get(lam).cloned().unwrap_or_default();
            let b = tableaux.get(lam).cloned().unwrap_or_default();
            if a != b {
                rep.internal.push(EntryDiff { key: key(BasisId::Sbar, &lam.as_composition()), expected: a.to_string(), computed: b.to_string() });
            }
        }
        let mut printed = BTreeMap::new();
        for (b, a, c) in &row.entries {
            if *b != BasisId::Sbar {
                return Err(Error::Invalid(format!("row {}: unexpected basis {b}", row.index)));
            }
            if a.degree() <= max_weight {
                printed.insert(Partition::new(a.0.clone()), c.clone());
            }
        }
        for (lam, c) in &printed {
            let got = coloring.get(lam).cloned().unwrap_or_default();
            rep.checked += 1;
            if got != *c {
                rep.mismatches.push(EntryDiff { key: key(BasisId::Sbar, &lam.as_composition()), expected: c.to_string(), computed: got.to_string() });
            }
        }
        for (lam, c) in &coloring {
            if lam.len() <= nv + 1 && !printed.contains_key(lam) {
                rep.omitted.push(EntryDiff { key: key(BasisId::Sbar, &lam.as_composition()), expected: "0".into(), computed: c.to_string() });
            }
        }
        rows.push(rep);
    }
    Ok(TableReport { table: t.id, trunc: Some(max_weight), rows })
}

/// Recomputes table `id`. For tables 1 and 2 `bound` overrides the truncation;
/// for table 3 it is the largest partition size compared (default 8).
pub fn check_table(id: u8, bound: Option<usize>) -> Result<TableReport, Error> {
    let t = expected(id)?;
    match id {
        3 => grothendieck_table(&t, bound.unwrap_or(8)),
        _ => graph_table(&t, bound),
    }
}
