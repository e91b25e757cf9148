//! One line per acceptance criterion. Runs with its own harness so the lines
//! always print; the process fails if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kromatik::arith::QPoly;
use kromatik::coloring::kromatic_x;
use kromatik::qsym::{expand_in_basis, BasisId, Composition};
use kromatik::suites;
use kromatik::tables::{check_table, expected, TableReport};
use kromatik::{kromatic_l, Graph, Variant};

type Outcome = Result<String, String>;

fn table(id: u8, bound: Option<usize>, rows: usize) -> Result<TableReport, String> {
    let rep = check_table(id, bound).map_err(|e| e.to_string())?;
    if rep.rows.len() != rows {
        return Err(format!("{} rows, expected {rows}", rep.rows.len()));
    }
    if !rep.passed() {
        let first = rep.rows.iter().find_map(|r| r.mismatches.first().or(r.internal.first()).map(|d| (r.row, d.clone()))).expect("a failing row");
        return Err(format!("row {}: {} printed {} computed {}", first.0, first.1.key, first.1.expected, first.1.computed));
    }
    Ok(rep)
}

fn omitted(rep: &TableReport) -> usize {
    rep.rows.iter().map(|r| r.omitted.len()).sum()
}

fn c1() -> Outcome {
    let rep = table(1, None, 9)?;
    let g = Graph::path(3);
    let l = kromatic_l(&g, 4, Variant::AscMax);
    let lb = expand_in_basis(&l, BasisId::Lbar).map_err(|e| e.to_string())?;
    let want = [
        (l.coeff(&Composition(vec![1, 1, 1])), QPoly::from_ints(&[1, 4, 1])),
        (l.coeff(&Composition(vec![1, 1, 1, 1])), QPoly::from_ints(&[6, 24, 6])),
        (lb.coeff(&[1, 1, 1, 1]), QPoly::from_ints(&[2, 5, 2])),
    ];
    for (got, w) in want {
        if got != w {
            return Err(format!("path row: got {got}, expected {w}"));
        }
    }
    Ok(format!("{} entries, {} unprinted", rep.checked(), omitted(&rep)))
}

fn c2() -> Outcome {
    let rep = table(2, None, 9)?;
    let t = expected(2).map_err(|e| e.to_string())?;
    let mut negative = 0;
    for row in &t.rows {
        let n = row.graph.n() + 1;
        let ex = expand_in_basis(&kromatic_x(&row.graph, n), BasisId::Lbar).map_err(|e| e.to_string())?;
        negative += ex.terms.values().filter(|c| c.coeffs().iter().any(|x| x < &kromatik::arith::rat(0))).count();
    }
    if negative == 0 {
        return Err("no negative multifundamental coefficient".into());
    }
    Ok(format!("{} entries, {negative} coefficients with negative terms", rep.checked()))
}

fn c3() -> Outcome {
    let rep = table(3, Some(8), 6)?;
    let start = Instant::now();
    let ext = table(3, Some(10), 6)?;
    Ok(format!("{} entries at |λ|<=8; extended |λ|<=10: {} entries in {:.1}s", rep.checked(), ext.checked(), start.elapsed().as_secs_f64()))
}

fn cases(r: Result<usize, kromatik::Discrepancy>) -> Outcome {
    r.map(|n| format!("{n} cases")).map_err(|d| d.to_string())
}

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let crits = [
        Criterion { id: 1, name: "table 1 (L-bar series)", budget: Duration::from_secs(30), run: c1 },
        Criterion { id: 2, name: "table 2 (kromatic series at q)", budget: Duration::from_secs(60), run: c2 },
        Criterion { id: 3, name: "table 3 (Grothendieck expansions)", budget: Duration::from_secs(300), run: c3 },
        Criterion { id: 4, name: "complete-graph identities", budget: Duration::from_secs(30), run: || cases(suites::complete_graphs(4)) },
        Criterion { id: 5, name: "cluster classification", budget: Duration::from_secs(300), run: || cases(suites::cluster(4, 8)) },
        Criterion {
            id: 6,
            name: "orientation expansions and positivity",
            budget: Duration::from_secs(300),
            run: || cases(suites::orientation_expansions(4, 6).and_then(|a| suites::lbar_positivity(4, 6).map(|b| a + b))),
        },
        Criterion { id: 7, name: "multipermutation expansion", budget: Duration::from_secs(120), run: || cases(suites::multiperm_sweep(4, 6)) },
        Criterion { id: 8, name: "source counts", budget: Duration::from_secs(60), run: || cases(suites::source_count_suite(6)) },
        Criterion { id: 9, name: "merge bijection", budget: Duration::from_secs(60), run: || cases(suites::bijection(6)) },
        Criterion { id: 10, name: "Hopf identities", budget: Duration::from_secs(120), run: || cases(suites::hopf()) },
        Criterion { id: 11, name: "q-number recurrences", budget: Duration::from_secs(10), run: || cases(suites::recurrence(5, 10)) },
        Criterion { id: 12, name: "clan and fixed-size identities", budget: Duration::from_secs(120), run: || cases(suites::clan_hwang(3, 5)) },
        Criterion { id: 13, name: "differential oracle", budget: Duration::from_secs(120), run: || cases(suites::oracle_agreement(3, 5)) },
        Criterion { id: 14, name: "property suites", budget: Duration::from_secs(300), run: || cases(suites::properties(0x5eed, 200)) },
    ];
    let mut failed = 0;
    for c in &crits {
        let start = Instant::now();
        let res = (c.run)();
        let took = start.elapsed();
        let (ok, detail) = match res {
            Ok(d) if took <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {}s budget", c.budget.as_secs())),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!("{} {:>2} {}: {} ({:.2}s)", if ok { "PASS" } else { "FAIL" }, c.id, c.name, detail, took.as_secs_f64());
    }
    println!("acceptance: {}/{} criteria pass", crits.len() - failed, crits.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
