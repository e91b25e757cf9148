use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kromatik::coloring::oracle::{self, SeriesKind};
use kromatik::suites::{self, Caps, SUITES};
use kromatik::{expand_in_basis, kromatic_weighted, parse_input, BasisId, TruncatedSeries, Variant};
use serde_json::json;

const EXIT_PARSE: u8 = 1;
const EXIT_ASYMMETRIC: u8 = 2;
const EXIT_TABLE: u8 = 3;
const EXIT_CHECK: u8 = 4;
const EXIT_GUARD: u8 = 5;

#[derive(Parser)]
#[command(name = "kromatik", version, about = "Exact set-valued coloring series of graphs and their basis expansions")]
struct Cli {
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true, env = "KROMATIK_THREADS")]
    threads: Option<usize>,
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Series {
    X,
    Xq,
    Kx,
    Kl,
    Kxq,
}

impl Series {
    fn kind(self) -> SeriesKind {
        match self {
            Series::X => SeriesKind::X,
            Series::Xq => SeriesKind::Xq,
            Series::Kx => SeriesKind::Kx,
            Series::Kl => SeriesKind::Kl,
            Series::Kxq => SeriesKind::Kxq,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    AscMax,
    AscMin,
    DesMax,
    DesMin,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a series for the input graph and expand it in a basis
    Expand {
        /// Input file (`-` for stdin)
        input: PathBuf,
        #[arg(long, value_enum)]
        series: Series,
        /// M, Lbar, e, ebar, m, mtilde or sbar
        #[arg(long, default_value = "M")]
        basis: String,
        #[arg(long)]
        trunc: usize,
        /// Statistic for `--series kl`
        #[arg(long, value_enum, default_value = "asc-max")]
        variant: VariantArg,
    },
    /// Recompute one of the reference tables and diff it against the stored data
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        /// Truncation for tables 1 and 2 (default |V|+1)
        #[arg(long)]
        trunc: Option<usize>,
        /// Largest partition size compared in table 3
        #[arg(long, default_value_t = 8)]
        max_weight: usize,
    },
    /// Run a verification suite
    Check {
        /// One of the suite names, or `all`
        suite: String,
        #[arg(long, default_value_t = 4)]
        max_vertices: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Brute-force reference computation for tiny inputs
    Oracle {
        input: PathBuf,
        #[arg(long, value_enum)]
        series: Series,
        #[arg(long)]
        trunc: usize,
    },
}

fn read_input(path: &PathBuf) -> Result<kromatik::Input, String> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| e.to_string())?
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?
    };
    parse_input(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn series_json(s: &TruncatedSeries) -> serde_json::Value {
    serde_json::to_value(s.to_json_value()).expect("serializable")
}

fn emit(out: &mut impl Write, line: &str) {
    // a closed pipe is not worth a panic
    let _ = writeln!(out, "{line}");
}

fn compute(input: &kromatik::Input, series: Series, variant: VariantArg, n: usize) -> TruncatedSeries {
    let g = input.graph();
    let w = input.weights();
    match series {
        Series::Kx if w.iter().any(|&x| x != 1) => kromatic_weighted(&g, &w, n),
        Series::Kl => {
            let v = match variant {
                VariantArg::AscMax => Variant::AscMax,
                VariantArg::AscMin => Variant::AscMin,
                VariantArg::DesMax => Variant::DesMax,
                VariantArg::DesMin => Variant::DesMin,
            };
            kromatik::kromatic_l(&g, n, v)
        }
        s => oracle::engine(&g, s.kind(), n),
    }
}

fn run(cli: Cli) -> u8 {
    let mut out = std::io::stdout().lock();
    let json = cli.json;
    match cli.cmd {
        Cmd::Expand { input, series, basis, trunc, variant } => {
            let input = match read_input(&input) {
                Ok(i) => i,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_PARSE;
                }
            };
            let Some(b) = BasisId::parse(&basis) else {
                eprintln!("error: unknown basis `{basis}`");
                return EXIT_PARSE;
            };
            let s = compute(&input, series, variant, trunc);
            let ex = match expand_in_basis(&s, b) {
                Ok(ex) => ex,
                Err(e @ kromatik::Error::NotSymmetric(..)) => {
                    eprintln!("error: {e}");
                    return EXIT_ASYMMETRIC;
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_CHECK;
                }
            };
            if json {
                let terms: Vec<_> = ex.terms.iter().map(|(a, c)| json!({"index": a.0, "poly": c.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>()})).collect();
                let v = json!({"basis": b.name(), "trunc": trunc, "expansion": terms, "series": series_json(&s)});
                emit(&mut out, &v.to_string());
            } else {
                emit(&mut out, &ex.render());
            }
            0
        }
        Cmd::Table { which, trunc, max_weight } => {
            let bound = if which == 3 { Some(max_weight) } else { trunc };
            let rep = match kromatik::tables::check_table(which, bound) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_PARSE;
                }
            };
            if json {
                emit(&mut out, &json!({"passed": rep.passed(), "report": rep}).to_string());
            } else {
                emit(&mut out, &rep.to_string());
            }
            if rep.passed() {
                0
            } else {
                EXIT_TABLE
            }
        }
        Cmd::Check { suite, max_vertices, seed } => {
            let caps = Caps { max_vertices, seed };
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut reports = Vec::new();
            for name in names {
                let Some(r) = suites::run_suite(name, caps) else {
                    eprintln!("error: unknown suite `{name}` (expected one of {} or all)", SUITES.join(", "));
                    return EXIT_PARSE;
                };
                if !json {
                    match &r.failure {
                        None => emit(&mut out, &format!("{}: pass ({} cases)", r.suite, r.cases)),
                        Some(d) => emit(&mut out, &format!("{}: FAIL {d}", r.suite)),
                    }
                }
                reports.push(r);
            }
            let ok = reports.iter().all(|r| r.passed);
            if json {
                // timings vary between runs; keep the JSON deterministic
                let v: Vec<_> = reports.iter().map(|r| json!({"suite": r.suite, "cases": r.cases, "passed": r.passed, "failure": r.failure})).collect();
                emit(&mut out, &json!({"passed": ok, "suites": v}).to_string());
            }
            if ok {
                0
            } else {
                EXIT_CHECK
            }
        }
        Cmd::Oracle { input, series, trunc } => {
            let input = match read_input(&input) {
                Ok(i) => i,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_PARSE;
                }
            };
            let Some(s) = oracle::naive(&input.graph(), series.kind(), trunc) else {
                eprintln!("error: oracle only runs on at most {} vertices with N <= {}", oracle::MAX_VERTICES, oracle::MAX_TRUNC);
                return EXIT_GUARD;
            };
            if json {
                emit(&mut out, &series_json(&s).to_string());
            } else {
                let ex = expand_in_basis(&s, BasisId::M).expect("M always applies");
                emit(&mut out, &ex.render());
            }
            0
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap uses 2 for usage errors, which is taken by the asymmetric-basis case
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("warning: {e}");
        }
    }
    ExitCode::from(run(cli))
}
