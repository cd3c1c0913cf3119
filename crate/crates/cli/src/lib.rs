//! The `fanocalc` command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage errors
//! and unreadable inputs.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value as Json};

use fanocalc_core::classify::{
    congruence_profile, enumerate_congruences, enumerate_type_c, enumerate_type_d, enumerate_type_p, exclude_1_4,
    exclude_2_1, family_table, to_csv, tuple_row, ExclusionReport, CSV_HEADER,
};
use fanocalc_core::context_file::ContextFile;
use fanocalc_core::dataset::{Dataset, DATA_ENV};
use fanocalc_core::exact::{fmt_rat, int};
use fanocalc_core::expr::{evaluate, parse_str};
use fanocalc_core::verify::{run_all, type_d_columns, DEFAULT_SEED};
use fanocalc_core::InvariantTuple;

pub const DEFAULT_N_MAX: u32 = 6;
pub const DEFAULT_TAU_PRIME_MAX: u32 = 8;
pub const DEFAULT_M_MAX: u32 = 19;

#[derive(Debug, Parser)]
#[command(
    name = "fanocalc",
    version,
    about = "Exact intersection calculus and case analysis for Fano bundles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the invariant suite.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Regenerate a classification table.
    Enumerate {
        #[arg(long = "type", value_enum)]
        kind: TableKind,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: u32,
        #[arg(long, default_value_t = DEFAULT_TAU_PRIME_MAX)]
        tau_prime_max: u32,
        #[arg(long, default_value_t = DEFAULT_M_MAX)]
        m_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Evaluate an expression in a ring context file.
    Eval {
        #[arg(long)]
        ctx: PathBuf,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Print an exclusion dossier.
    Exclusions {
        #[arg(long = "case", value_enum)]
        case: Case,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print the table of curve families.
    FamilyTable {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    #[value(name = "P")]
    P,
    #[value(name = "D")]
    D,
    #[value(name = "C")]
    C,
    #[value(name = "congruence")]
    Congruence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Case {
    #[value(name = "1-4")]
    OneFour,
    #[value(name = "2-1")]
    TwoOne,
}

/// Why a command did not succeed.
enum Failure {
    Usage(String),
    Check,
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

/// Runs the command line with `argv` (program name first) and returns the
/// exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(Failure::Check) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dataset() -> Result<Dataset, Failure> {
    Dataset::from_env().map_err(|e| match std::env::var_os(DATA_ENV) {
        Some(p) if !e.to_string().contains(&*p.to_string_lossy()) => {
            Failure::Usage(format!("{}: {e}", p.to_string_lossy()))
        }
        _ => usage(e),
    })
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Verify { seed } => verify(seed, out),
        Command::Enumerate {
            kind,
            n,
            n_max,
            tau_prime_max,
            m_max,
            format,
        } => {
            let bounds = format!("# bounds: n_max={n_max} tau_prime_max={tau_prime_max} m_max={m_max}");
            match format {
                Format::Table => wr(out, &format!("{bounds}\n"))?,
                _ => wr(err, &format!("{bounds}\n"))?,
            }
            match kind {
                TableKind::C => enumerate_c(n, n_max, format, out),
                TableKind::P => enumerate_p(n, n_max, format, out),
                TableKind::D => enumerate_d(n, n_max, tau_prime_max, format, out),
                TableKind::Congruence => enumerate_cong(m_max, format, out),
            }
        }
        Command::Eval { ctx, expr } => eval(&ctx, &expr, out, err),
        Command::Exclusions { case, format } => exclusions(case, format, out),
        Command::FamilyTable { format } => family(format, out),
    }
}

fn wr(w: &mut dyn Write, s: &str) -> Outcome {
    w.write_all(s.as_bytes()).map_err(usage)
}

// ---- Rendering ----

fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut s = line(header.to_vec());
    for r in rows {
        s.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    s
}

fn render_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn render_json(header: &[&str], rows: &[Vec<String>]) -> String {
    let arr: Vec<Json> = rows
        .iter()
        .map(|r| {
            let m: Map<String, Json> = header
                .iter()
                .zip(r)
                .map(|(h, c)| (h.to_string(), Json::String(c.clone())))
                .collect();
            Json::Object(m)
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&Json::Array(arr)).expect("plain strings");
    s.push('\n');
    s
}

fn render(format: Format, header: &[&str], rows: &[Vec<String>]) -> String {
    match format {
        Format::Table => render_table(header, rows),
        Format::Csv => render_csv(header, rows),
        Format::Json => render_json(header, rows),
    }
}

fn tuple_rows<'a>(ts: impl IntoIterator<Item = &'a InvariantTuple>) -> Vec<Vec<String>> {
    ts.into_iter().map(tuple_row).collect()
}

// ---- Commands ----

fn verify(seed: u64, out: &mut dyn Write) -> Outcome {
    let ds = dataset()?;
    let checks = run_all(&ds, seed);
    let mut failed = 0;
    for c in &checks {
        let line = match &c.result {
            Ok(detail) => format!("PASS  [{}] {}: {}\n", c.module, c.name, detail),
            Err(diff) => {
                failed += 1;
                format!("FAIL  [{}] {} ({}): {}\n", c.module, c.name, c.anchor, diff)
            }
        };
        wr(out, &line)?;
    }
    wr(
        out,
        &format!("{} checks, {} failed (seed {seed})\n", checks.len(), failed),
    )?;
    if failed > 0 {
        Err(Failure::Check)
    } else {
        Ok(())
    }
}

fn dims(n: Option<u32>, n_max: u32) -> Vec<u32> {
    match n {
        Some(n) => vec![n],
        None => [2, 3, 5].into_iter().filter(|&n| n <= n_max).collect(),
    }
}

fn enumerate_c(n: Option<u32>, n_max: u32, format: Format, out: &mut dyn Write) -> Outcome {
    let ds = dataset()?;
    let mut results = Vec::new();
    for n in dims(n, n_max) {
        results.push(enumerate_type_c(n, &ds).map_err(usage)?);
    }
    let rows: Vec<InvariantTuple> = results.iter().flat_map(|r| r.table_rows()).collect();
    if format == Format::Csv {
        return wr(out, &to_csv(rows.iter()));
    }
    wr(out, &render(format, &CSV_HEADER, &tuple_rows(&rows)))?;
    if format == Format::Table {
        for r in &results {
            for e in &r.exclusions {
                wr(out, &format!("\n{}", dossier_text(e)))?;
            }
            if !r.unrealized.is_empty() {
                let pairs: Vec<String> = r
                    .unrealized
                    .iter()
                    .map(|t| format!("({},{})", fmt_rat(&t.tau), fmt_rat(&t.tau_p)))
                    .collect();
                wr(
                    out,
                    &format!(
                        "\nn = {}: no manifolds of matching degrees for {}\n",
                        r.n,
                        pairs.join(" ")
                    ),
                )?;
            }
        }
    }
    Ok(())
}

fn enumerate_p(n: Option<u32>, n_max: u32, format: Format, out: &mut dyn Write) -> Outcome {
    let ds = dataset()?;
    let mut rows = Vec::new();
    for n in dims(n, n_max) {
        rows.extend(enumerate_type_p(n, &ds).map_err(usage)?);
    }
    if format == Format::Csv {
        return wr(out, &to_csv(rows.iter()));
    }
    wr(out, &render(format, &CSV_HEADER, &tuple_rows(&rows)))?;
    if format == Format::Table {
        for t in &rows {
            let line = format!(
                "{}: nu nu' = {} on n = {}, {} and {}\n",
                t.label.as_deref().unwrap_or("?"),
                t.nu * t.nu_p,
                t.n,
                t.name_x.as_deref().unwrap_or("?"),
                t.name_x_p.as_deref().unwrap_or("?")
            );
            wr(out, &line)?;
        }
    }
    Ok(())
}

const D_HEADER: [&str; 9] = ["n", "i", "tau", "c1", "c2", "d", "d_prime", "tau_prime", "i_prime"];

fn enumerate_d(n: Option<u32>, n_max: u32, tau_p_max: u32, format: Format, out: &mut dyn Write) -> Outcome {
    let ds = dataset()?;
    let res = enumerate_type_d(n_max, tau_p_max, &ds).map_err(usage)?;
    let keep = |t: &&InvariantTuple| n.is_none_or(|n| t.n == n);
    let rows: Vec<&InvariantTuple> = res.generated.iter().filter(keep).collect();
    if format == Format::Csv {
        return wr(out, &to_csv(rows));
    }
    if format == Format::Json {
        return wr(out, &render_json(&CSV_HEADER, &tuple_rows(rows)));
    }
    let raw: Vec<Vec<String>> = res
        .raw_table()
        .into_iter()
        .filter(keep)
        .filter_map(type_d_columns)
        .map(|r| r.iter().map(i64::to_string).collect())
        .collect();
    wr(out, "candidates with both manifolds present:\n")?;
    wr(out, &render_table(&D_HEADER, &raw))?;
    wr(out, "\nall candidates:\n")?;
    wr(out, &render_table(&CSV_HEADER, &tuple_rows(rows)))?;
    for e in res.exclusions.iter().filter(|e| keep(&&e.candidate)) {
        wr(out, &format!("\n{}", dossier_text(e)))?;
    }
    for t in res.survivors().into_iter().filter(keep) {
        let line = format!(
            "\n{}: {} and {}\n",
            t.label.as_deref().unwrap_or("?"),
            t.name_x.as_deref().unwrap_or("?"),
            t.name_x_p.as_deref().unwrap_or("?")
        );
        wr(out, &line)?;
    }
    let fin = &res.fin;
    let mut s = String::from("\nfinite branch:\n");
    for (tp, j) in &fin.vanishing {
        s.push_str(&format!(
            "  top Chern class factor vanishes only for tau' = {tp}, j = {j}\n"
        ));
    }
    for (n, delta) in &fin.rational_n {
        s.push_str(&format!("  rational tangent at n = {n}, Delta = {}\n", fmt_rat(delta)));
    }
    for (n, why) in &fin.contradictions {
        s.push_str(&format!("  n = {n} with a target other than projective space: {why}\n"));
    }
    for o in &fin.outcomes {
        s.push_str(&format!(
            "  {}: n = {}, {} and {} ({})\n",
            o.label, o.n, o.name_x, o.name_x_p, o.citation
        ));
    }
    wr(out, &s)
}

const CONGRUENCE_HEADER: [&str; 7] = ["alpha", "z", "m", "index", "components", "vmrt_dim", "bound"];

fn enumerate_cong(m_max: u32, format: Format, out: &mut dyn Write) -> Outcome {
    let mut rows = Vec::new();
    for t in enumerate_congruences(m_max) {
        // deg Z = bound − L^z·H; the columns below do not depend on L^z·H.
        let p = congruence_profile(t, &int(1)).map_err(usage)?;
        rows.push(vec![
            t.alpha.to_string(),
            t.z.to_string(),
            t.m.to_string(),
            p.index.to_string(),
            p.components.to_string(),
            p.vmrt_dim.to_string(),
            fmt_rat(&p.bound),
        ]);
    }
    wr(out, &render(format, &CONGRUENCE_HEADER, &rows))
}

fn eval(path: &std::path::Path, text: &str, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let file = ContextFile::load(path).map_err(|e| match e {
        fanocalc_core::context_file::ContextError::Io { .. } => usage(e),
        other => Failure::Usage(format!("{}: {other}", path.display())),
    })?;
    let bindings = file.bindings().map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let e = parse_str(text).map_err(usage)?;
    let v = evaluate(&e, &file.ctx, &bindings).map_err(usage)?;
    for note in &v.notes {
        wr(err, &format!("note: {note}\n"))?;
    }
    wr(out, &format!("{v}\n"))
}

fn dossier_text(r: &ExclusionReport) -> String {
    let t = &r.candidate;
    let mut s = format!(
        "excluded n = {}, tau = {}, tau' = {}: {}\n",
        t.n,
        fmt_rat(&t.tau),
        fmt_rat(&t.tau_p),
        r.rule
    );
    for (k, v) in &r.witness {
        s.push_str(&format!("  {k} = {v}\n"));
    }
    s.push_str(&format!("  citation: {}\n", r.citation));
    s
}

fn exclusions(case: Case, format: Format, out: &mut dyn Write) -> Outcome {
    let ds = dataset()?;
    let r = match case {
        Case::OneFour => exclude_1_4(&ds),
        Case::TwoOne => exclude_2_1(&ds),
    }
    .map_err(usage)?;
    match format {
        Format::Table => {
            let row = vec![tuple_row(&r.candidate)];
            wr(out, &render_table(&CSV_HEADER, &row))?;
            wr(out, &format!("\n{}", dossier_text(&r)))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .witness
                .iter()
                .map(|(k, v)| vec![k.clone(), v.to_string()])
                .chain([
                    vec!["rule".into(), r.rule.clone()],
                    vec!["citation".into(), r.citation.clone()],
                ])
                .collect();
            wr(out, &render_csv(&["key", "value"], &rows))
        }
        Format::Json => {
            let cand: Map<String, Json> = CSV_HEADER
                .iter()
                .zip(tuple_row(&r.candidate))
                .map(|(h, c)| (h.to_string(), Json::String(c)))
                .collect();
            let wit: Map<String, Json> = r
                .witness
                .iter()
                .map(|(k, v)| (k.clone(), Json::String(v.to_string())))
                .collect();
            let mut m = Map::new();
            m.insert("rule".into(), Json::String(r.rule.clone()));
            m.insert("candidate".into(), Json::Object(cand));
            m.insert("witness".into(), Json::Object(wit));
            m.insert("citation".into(), Json::String(r.citation.clone()));
            let mut s = serde_json::to_string_pretty(&Json::Object(m)).expect("plain strings");
            s.push('\n');
            wr(out, &s)
        }
    }
}

const FAMILY_HEADER: [&str; 6] = ["x_prime", "family", "tau_family", "x", "tau", "factor"];

fn family(format: Format, out: &mut dyn Write) -> Outcome {
    let rows: Vec<Vec<String>> = family_table()
        .into_iter()
        .map(|r| {
            vec![
                r.x_prime.to_string(),
                r.family.to_string(),
                r.tau_family.to_string(),
                r.x.to_string(),
                r.tau.to_string(),
                fmt_rat(&r.factor),
            ]
        })
        .collect();
    wr(out, &render(format, &FAMILY_HEADER, &rows))
}
