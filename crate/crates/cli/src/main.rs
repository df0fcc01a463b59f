use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ctk_core::arquiver::{build_cluster_category, OrbitQuiver};
use ctk_core::catalog::{predicted_functors, verify_catalog};
use ctk_core::classify::{periodic_classes, type_e, verify_census, Census};
use ctk_core::diagram::{build_diagram, DynkinDiagram, DynkinKind};
use ctk_core::homcalc::ExtTable;
use ctk_core::props::hom_properties;
use ctk_core::tilting::{enumerate_both, enumerate_brute, exchange_graph, initial_seed, quiver_of, AlgQuiver, CTObject};
use ctk_core::CtkError;

const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "ctk", version, about = "Cluster tilting objects in cluster and orbit categories of Dynkin type")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (falls back to CTK_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Lift the default rank budget (A <= 11, D <= 8).
    #[arg(long, global = true)]
    allow_large: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Mutation,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    #[value(name = "typeA")]
    TypeA,
    #[value(name = "typeD")]
    TypeD,
    #[value(name = "typeE")]
    TypeE,
    Catalog,
    Props,
}

#[derive(Args, Debug, Clone)]
struct Target {
    #[arg(long = "type", value_parser = parse_kind)]
    kind: DynkinKind,
    #[arg(long)]
    rank: usize,
}

#[derive(Args, Debug, Clone)]
struct OptTarget {
    #[arg(long = "type", value_parser = parse_kind)]
    kind: Option<DynkinKind>,
    #[arg(long)]
    rank: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the cluster tilting objects of C_m.
    Enumerate {
        #[command(flatten)]
        target: Target,
        #[arg(short = 'm', default_value_t = 2)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Classification records and theorem checks for every object of C_2.
    Classify {
        #[command(flatten)]
        target: Target,
    },
    /// Run a verification suite; exit code 0 iff there are no violations.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        target: OptTarget,
        #[arg(long)]
        rank_max: Option<usize>,
        #[arg(long, value_parser = parse_range)]
        a_range: Option<(i64, i64)>,
    },
    /// Orbit categories τ^a[b] with and without cluster tilting objects.
    Catalog {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_parser = parse_range)]
        a_range: Option<(i64, i64)>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0i64, 1])]
        b: Vec<i64>,
    },
    /// Ext tables of C_m, optionally restricted to one object.
    Hom {
        #[command(flatten)]
        target: Target,
        #[arg(short = 'm', default_value_t = 2)]
        m: usize,
        #[arg(long)]
        object: Option<String>,
    },
    /// Quiver of a cluster tilting object of C_2.
    Quiver {
        #[command(flatten)]
        target: Target,
        /// `seed`, `#<index>` into the sorted enumeration, or comma-separated vertex ids.
        #[arg(long, default_value = "seed")]
        object: String,
    },
}

fn parse_kind(s: &str) -> Result<DynkinKind, String> {
    s.parse().map_err(|e: CtkError| e.to_string())
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected LO..HI, got `{s}`"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok((lo, hi))
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<CtkError> for Failure {
    fn from(e: CtkError) -> Self {
        match e {
            CtkError::InvalidDiagram(_) | CtkError::UnknownObject(_) | CtkError::ExtDegree { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Run(e.to_string()),
        }
    }
}

/// What a command produced: the artifact and whether it found violations.
struct Outcome {
    body: String,
    clean: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| std::env::var("CTK_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out.body) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if out.clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn emit(cli: &Cli, body: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

fn diagram(cli: &Cli, kind: DynkinKind, rank: usize) -> Result<DynkinDiagram, Failure> {
    let limit = match kind {
        DynkinKind::A => 11,
        DynkinKind::D => 8,
        DynkinKind::E => 8,
    };
    if rank > limit && !cli.allow_large {
        return Err(Failure::Usage(format!("{kind}{rank} exceeds the rank budget ({kind} <= {limit}); pass --allow-large")));
    }
    Ok(build_diagram(kind, rank)?)
}

fn json_body(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serialisable")
}

fn only_json_or_text(cli: &Cli, what: &str) -> Result<(), Failure> {
    if cli.format == Format::Dot {
        return Err(Failure::Usage(format!("{what} has no DOT output")));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Enumerate { target, m, method } => cmd_enumerate(cli, target, *m, *method),
        Command::Classify { target } => cmd_classify(cli, target),
        Command::Verify { suite, target, rank_max, a_range } => cmd_verify(cli, *suite, target, *rank_max, *a_range),
        Command::Catalog { target, a_range, b } => cmd_catalog(cli, target, *a_range, b),
        Command::Hom { target, m, object } => cmd_hom(cli, target, *m, object.as_deref()),
        Command::Quiver { target, object } => cmd_quiver(cli, target, object),
    }
}

fn quiver_json(q: &AlgQuiver) -> Value {
    json!(q.labelled_arrows())
}

fn cmd_enumerate(cli: &Cli, t: &Target, m: usize, method: Method) -> Result<Outcome, Failure> {
    only_json_or_text(cli, "enumerate")?;
    let d = diagram(cli, t.kind, t.rank)?;
    let c = build_cluster_category(&d, m)?;
    let ext = ExtTable::new(&c)?;
    let (objects, graph) = match method {
        Method::Brute => (enumerate_brute(&c, &ext)?, None),
        Method::Mutation => {
            let g = exchange_graph(&c, &ext)?;
            (g.sorted_nodes(), Some(g))
        }
        Method::Both => {
            let (o, g) = enumerate_both(&c, &ext)?;
            (o, Some(g))
        }
    };
    if cli.format == Format::Text {
        let mut s = format!("{} (m = {m}): {} cluster tilting objects\n", d.name(), objects.len());
        for o in &objects {
            let labels: Vec<String> = o.members.iter().map(|&x| c.label(x)).collect();
            s.push_str(&format!("  {}\n", labels.join(" ")));
        }
        return Ok(Outcome { body: s, clean: true });
    }
    let items: Vec<Value> = objects
        .iter()
        .map(|o| {
            let q = graph.as_ref().and_then(|g| quiver_of(g, o).ok());
            json!({
                "members": o.members,
                "labels": o.members.iter().map(|&x| c.label(x)).collect::<Vec<_>>(),
                "quiver": q.as_ref().map(quiver_json),
            })
        })
        .collect();
    let v = json!({
        "schema": SCHEMA,
        "command": "enumerate",
        "diagram": d.name(),
        "m": m,
        "method": format!("{method:?}").to_lowercase(),
        "count": objects.len(),
        "objects": items,
        "violations": [],
    });
    Ok(Outcome { body: json_body(&v), clean: true })
}

fn cmd_classify(cli: &Cli, t: &Target) -> Result<Outcome, Failure> {
    only_json_or_text(cli, "classify")?;
    let d = diagram(cli, t.kind, t.rank)?;
    let census = Census::new(&d)?;
    let rep = verify_census(&census);
    let clean = rep.is_clean();
    if cli.format == Format::Text {
        let mut s = format!(
            "{}: {} objects, {} quiver classes, periods {:?}, {} violations\n",
            rep.diagram,
            rep.objects,
            rep.quiver_classes,
            rep.period_histogram,
            rep.violations.len()
        );
        for r in &rep.records {
            s.push_str(&format!(
                "  {:<40} s = {:<3} class {:<4} {:?}\n",
                r.labels.join(" "),
                r.min_period,
                r.quiver_class_id,
                r.symmetry
            ));
        }
        return Ok(Outcome { body: s, clean });
    }
    let mut v = to_value(&rep);
    v["schema"] = json!(SCHEMA);
    v["command"] = json!("classify");
    Ok(Outcome { body: json_body(&v), clean })
}

fn suite_targets(suite: Suite, t: &OptTarget, rank_max: Option<usize>) -> Result<Vec<(DynkinKind, usize)>, Failure> {
    if let (Some(k), Some(r)) = (t.kind, t.rank) {
        return Ok(vec![(k, r)]);
    }
    let kinds_ranks = |k: DynkinKind, lo: usize, hi: usize| (lo..=hi).map(move |r| (k, r));
    let out: Vec<(DynkinKind, usize)> = match suite {
        Suite::TypeA => kinds_ranks(DynkinKind::A, 2, rank_max.unwrap_or(9)).collect(),
        Suite::TypeD => kinds_ranks(DynkinKind::D, 4, rank_max.unwrap_or(7)).collect(),
        Suite::TypeE => kinds_ranks(DynkinKind::E, 6, rank_max.unwrap_or(8).min(8)).collect(),
        Suite::Catalog => kinds_ranks(DynkinKind::A, 1, 6)
            .chain(kinds_ranks(DynkinKind::D, 4, 6))
            .chain(kinds_ranks(DynkinKind::E, 6, 7))
            .filter(|&(_, r)| rank_max.is_none_or(|m| r <= m))
            .collect(),
        Suite::Props => kinds_ranks(DynkinKind::A, 1, 9)
            .chain(kinds_ranks(DynkinKind::D, 4, 7))
            .chain(kinds_ranks(DynkinKind::E, 6, 8))
            .filter(|&(_, r)| rank_max.is_none_or(|m| r <= m))
            .collect(),
    };
    match t.kind {
        Some(k) => Ok(out.into_iter().filter(|&(kk, _)| kk == k).collect()),
        None if t.rank.is_some() => Err(Failure::Usage("--rank needs --type".into())),
        None => Ok(out),
    }
}

/// Exponent range used by the catalog suite when none is given.
fn default_a_range(d: &DynkinDiagram) -> (i64, i64) {
    let n = d.rank as i64;
    let hi = match d.kind {
        DynkinKind::A => 2 * (n + 3),
        DynkinKind::D => 4 * n,
        DynkinKind::E => match n {
            6 => 14,
            7 => 20,
            _ => 16,
        },
    };
    (1, hi)
}

fn cmd_verify(
    cli: &Cli,
    suite: Suite,
    t: &OptTarget,
    rank_max: Option<usize>,
    a_range: Option<(i64, i64)>,
) -> Result<Outcome, Failure> {
    only_json_or_text(cli, "verify")?;
    let targets = suite_targets(suite, t, rank_max)?;
    let mut reports = Vec::new();
    let mut violations: Vec<String> = Vec::new();
    let mut lines = Vec::new();
    for (k, r) in targets {
        let d = diagram(cli, k, r)?;
        match suite {
            Suite::TypeA | Suite::TypeD | Suite::TypeE => {
                if !matches!((suite, k), (Suite::TypeA, DynkinKind::A) | (Suite::TypeD, DynkinKind::D) | (Suite::TypeE, DynkinKind::E)) {
                    return Err(Failure::Usage(format!("suite {suite:?} does not cover {}", d.name())));
                }
                let census = Census::new(&d)?;
                let rep = verify_census(&census);
                for v in &rep.violations {
                    violations.push(format!("{}: {}: {} {:?}", rep.diagram, v.check, v.detail, v.witness));
                }
                let mut entry = json!({
                    "diagram": rep.diagram,
                    "objects": rep.objects,
                    "quiver_classes": rep.quiver_classes,
                    "period_histogram": rep.period_histogram,
                    "checks": rep.checks,
                    "violations": rep.violations,
                });
                if let Some(tp) = type_e::table_period(r).filter(|_| k == DynkinKind::E) {
                    let periodic = periodic_classes(&census);
                    let cov = type_e::table_coverage(r, &periodic);
                    let by_period: BTreeMap<usize, usize> = periodic
                        .iter()
                        .map(|p| p.period)
                        .collect::<std::collections::BTreeSet<_>>()
                        .into_iter()
                        .map(|s| (s, type_e::TableCoverage::classes_with_period(&periodic, s)))
                        .collect();
                    entry["table"] = json!({
                        "period": tp,
                        "rows": type_e::TableCoverage::rows(r),
                        "directed_classes_by_period": by_period,
                        "coverage": cov,
                    });
                }
                lines.push(format!(
                    "{}: {} objects, {} classes, periods {:?}, {} violations",
                    rep.diagram,
                    rep.objects,
                    rep.quiver_classes,
                    rep.period_histogram,
                    rep.violations.len()
                ));
                reports.push(entry);
            }
            Suite::Catalog => {
                let census = Census::new(&d)?;
                let (lo, hi) = a_range.unwrap_or_else(|| default_a_range(&d));
                let rep = verify_catalog(&census, lo..=hi, &[0, 1])?;
                violations.extend(rep.violations.iter().map(|v| format!("{}: {v}", rep.diagram)));
                lines.push(format!("{}: {} entries, {} violations", rep.diagram, rep.entries.len(), rep.violations.len()));
                reports.push(to_value(&rep));
            }
            Suite::Props => {
                let rep = hom_properties(&d)?;
                violations.extend(rep.failures.iter().map(|v| format!("{}: {v}", rep.diagram)));
                lines.push(format!(
                    "{}: {} instances over {} checks, {} failures",
                    rep.diagram,
                    rep.checks.values().sum::<usize>(),
                    rep.checks.len(),
                    rep.failures.len()
                ));
                reports.push(to_value(&rep));
            }
        }
    }
    let clean = violations.is_empty();
    if cli.format == Format::Text {
        let mut s = lines.join("\n");
        s.push('\n');
        for v in &violations {
            s.push_str(&format!("VIOLATION {v}\n"));
        }
        return Ok(Outcome { body: s, clean });
    }
    let v = json!({
        "schema": SCHEMA,
        "command": "verify",
        "suite": format!("{suite:?}"),
        "reports": reports,
        "violations": violations,
    });
    Ok(Outcome { body: json_body(&v), clean })
}

fn cmd_catalog(cli: &Cli, t: &Target, a_range: Option<(i64, i64)>, bs: &[i64]) -> Result<Outcome, Failure> {
    only_json_or_text(cli, "catalog")?;
    let d = diagram(cli, t.kind, t.rank)?;
    let census = Census::new(&d)?;
    let (lo, hi) = a_range.unwrap_or_else(|| default_a_range(&d));
    let rep = verify_catalog(&census, lo..=hi, bs)?;
    let predicted = predicted_functors(&d, lo..=hi, bs)?;
    let clean = rep.is_clean();
    if cli.format == Format::Text {
        let mut s = format!("{}: {} entries, {} violations\n", rep.diagram, rep.entries.len(), rep.violations.len());
        for e in &rep.entries {
            let obs = match e.observed {
                Some(true) => "yes",
                Some(false) => "no",
                None => "out of scope",
            };
            s.push_str(&format!("  {:<10} predicted {:<5} observed {obs}\n", e.functor().to_string(), e.predicted));
        }
        for v in &rep.violations {
            s.push_str(&format!("VIOLATION {v}\n"));
        }
        return Ok(Outcome { body: s, clean });
    }
    let v = json!({
        "schema": SCHEMA,
        "command": "catalog",
        "diagram": rep.diagram,
        "predicted": predicted.iter().map(|f| json!({"a": f.a, "b": f.b})).collect::<Vec<_>>(),
        "entries": rep.entries,
        "violations": rep.violations,
    });
    Ok(Outcome { body: json_body(&v), clean })
}

fn select_object(c: &OrbitQuiver, ext: &ExtTable, objects: &[CTObject], sel: &str) -> Result<CTObject, Failure> {
    if sel == "seed" {
        return Ok(initial_seed(c, ext)?.0);
    }
    if let Some(i) = sel.strip_prefix('#') {
        let i: usize = i.parse().map_err(|_| Failure::Usage(format!("bad object index `{sel}`")))?;
        return objects
            .get(i)
            .cloned()
            .ok_or_else(|| Failure::Usage(format!("object index {i} out of range ({} objects)", objects.len())));
    }
    let members: Result<Vec<usize>, _> = sel.split(',').map(|p| p.trim().parse::<usize>()).collect();
    let members = members.map_err(|_| Failure::Usage(format!("unknown object selector `{sel}`")))?;
    let t = CTObject::new(members);
    if objects.binary_search(&t).is_err() {
        return Err(Failure::Usage(format!("{:?} is not a cluster tilting object", t.members)));
    }
    Ok(t)
}

fn cmd_hom(cli: &Cli, t: &Target, m: usize, object: Option<&str>) -> Result<Outcome, Failure> {
    let d = diagram(cli, t.kind, t.rank)?;
    let c = build_cluster_category(&d, m)?;
    let ext = ExtTable::new(&c)?;
    if cli.format == Format::Dot {
        return Ok(Outcome { body: c.to_dot(true), clean: true });
    }
    let rows: Vec<usize> = match object {
        None => (0..c.vertex_count()).collect(),
        Some(sel) => {
            let objects = enumerate_brute(&c, &ext)?;
            select_object(&c, &ext, &objects, sel)?.members
        }
    };
    let degrees: BTreeMap<String, Vec<Vec<u32>>> = (1..=ext.degrees)
        .map(|i| (i.to_string(), rows.iter().map(|&x| (0..c.vertex_count()).map(|y| ext.ext(x, y, i)).collect()).collect()))
        .collect();
    if cli.format == Format::Text {
        let mut s = format!("{} (m = {m}), Ext^i(x, y) for x in {:?}\n", d.name(), rows);
        for (i, table) in &degrees {
            s.push_str(&format!("degree {i}\n"));
            for (x, row) in rows.iter().zip(table) {
                let cells: Vec<String> = row.iter().map(u32::to_string).collect();
                s.push_str(&format!("  {:<8} {}\n", c.label(*x), cells.join(" ")));
            }
        }
        return Ok(Outcome { body: s, clean: true });
    }
    let vertices: Vec<Value> = (0..c.vertex_count())
        .map(|x| {
            let v = c.lift(x);
            json!({"id": x, "label": c.label(x), "lift": [v.row + 1, v.level]})
        })
        .collect();
    let v = json!({
        "schema": SCHEMA,
        "command": "hom",
        "diagram": d.name(),
        "m": m,
        "vertices": vertices,
        "rows": rows,
        "ext": degrees,
        "violations": [],
    });
    Ok(Outcome { body: json_body(&v), clean: true })
}

fn cmd_quiver(cli: &Cli, t: &Target, sel: &str) -> Result<Outcome, Failure> {
    let d = diagram(cli, t.kind, t.rank)?;
    let c = build_cluster_category(&d, 2)?;
    let ext = ExtTable::new(&c)?;
    let g = exchange_graph(&c, &ext)?;
    let objects = g.sorted_nodes();
    let obj = select_object(&c, &ext, &objects, sel)?;
    let q = quiver_of(&g, &obj)?;
    let proj: Vec<usize> = c.window.proj.iter().map(|&p| c.project(p)).collect();
    let name = |x: usize| match proj.iter().position(|&p| p == x).filter(|_| sel == "seed") {
        Some(i) => format!("P{}", i + 1),
        None => c.label(x),
    };
    match cli.format {
        Format::Dot => {
            let mut s = format!("digraph \"{}\" {{\n", d.name());
            for &x in &obj.members {
                s.push_str(&format!("  {x} [label=\"{}\"];\n", name(x)));
            }
            for (a, b) in q.labelled_arrows() {
                s.push_str(&format!("  {a} -> {b};\n"));
            }
            s.push_str("}\n");
            Ok(Outcome { body: s, clean: true })
        }
        Format::Text => {
            let mut s = format!("{} object {:?}\n", d.name(), obj.members);
            for (a, b) in q.labelled_arrows() {
                s.push_str(&format!("  {} -> {}\n", name(a), name(b)));
            }
            Ok(Outcome { body: s, clean: true })
        }
        Format::Json => {
            let v = json!({
                "schema": SCHEMA,
                "command": "quiver",
                "diagram": d.name(),
                "members": obj.members,
                "labels": obj.members.iter().map(|&x| name(x)).collect::<Vec<_>>(),
                "arrows": q.labelled_arrows(),
                "violations": [],
            });
            Ok(Outcome { body: json_body(&v), clean: true })
        }
    }
}
