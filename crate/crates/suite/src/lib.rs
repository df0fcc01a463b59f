//! Acceptance criteria over the full test matrix, one verdict per criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use ctk_core::arquiver::{build_cluster_category, build_window, default_width, FunctorSpec, OrbitQuiver};
use ctk_core::catalog::{correspondence, periodic_in_c2, verify_catalog};
use ctk_core::classify::type_e::{table, table_coverage, TableCoverage};
use ctk_core::classify::{minimal_period, periodic_classes, verify_census, Census, TheoremReport};
use ctk_core::diagram::{build_diagram, DynkinDiagram, DynkinKind};
use ctk_core::homcalc::ExtTable;
use ctk_core::props::hom_properties;
use ctk_core::tilting::{enumerate_brute, exchange_graph};

use DynkinKind::*;

const MATRIX: &[(DynkinKind, usize)] = &[
    (A, 1),
    (A, 2),
    (A, 3),
    (A, 4),
    (A, 5),
    (A, 6),
    (A, 7),
    (A, 8),
    (A, 9),
    (D, 4),
    (D, 5),
    (D, 6),
    (D, 7),
    (E, 6),
    (E, 7),
    (E, 8),
];

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of clusters of the cluster algebra of the given type.
fn cluster_number(k: DynkinKind, n: usize) -> usize {
    match k {
        A => binomial(2 * n + 2, n + 1) / (n + 2),
        D => (3 * n - 2) * binomial(2 * n - 2, n - 1) / n,
        E => match n {
            6 => 833,
            7 => 4160,
            _ => 25080,
        },
    }
}

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    fn new(problems: Vec<String>, summary: String) -> Self {
        if problems.is_empty() {
            Outcome { pass: true, detail: summary }
        } else {
            Outcome { pass: false, detail: format!("{summary}; {}", problems.join("; ")) }
        }
    }
}

struct Fixture {
    diagram: DynkinDiagram,
    census: Census,
    report: TheoremReport,
}

fn diagram(k: DynkinKind, n: usize) -> DynkinDiagram {
    build_diagram(k, n).expect("diagram in matrix")
}

fn expected_orbit_lengths(k: DynkinKind, n: usize) -> Vec<usize> {
    let mut v = match k {
        A => {
            let mut v = vec![n + 3; n / 2];
            if n % 2 == 1 {
                v.push((n + 3) / 2);
            }
            v
        }
        D if n.is_multiple_of(2) => vec![n; n],
        D => {
            let mut v = vec![n; n - 2];
            v.push(2 * n);
            v
        }
        E => match n {
            6 => vec![14, 14, 7, 7],
            7 => vec![10; 7],
            _ => vec![16; 8],
        },
    };
    v.sort_unstable();
    v
}

fn criterion_1() -> Outcome {
    let mut problems = Vec::new();
    let mut slowest = Duration::ZERO;
    for &(k, n) in MATRIX {
        let d = diagram(k, n);
        let start = Instant::now();
        let c = build_cluster_category(&d, 2);
        let took = start.elapsed();
        slowest = slowest.max(took);
        let c = match c {
            Ok(c) => c,
            Err(e) => {
                problems.push(format!("{}: {e}", d.name()));
                continue;
            }
        };
        let mut got = c.orbit_lengths();
        got.sort_unstable();
        let want = expected_orbit_lengths(k, n);
        if got != want {
            problems.push(format!("{}: orbit lengths {got:?}, expected {want:?}", d.name()));
        }
        if k == D {
            let alpha_len: BTreeSet<usize> =
                (0..c.vertex_count()).filter(|&x| c.is_alpha(x)).map(|x| c.orbits[c.orbit_of(x)].len).collect();
            let want: BTreeSet<usize> = [if n % 2 == 0 { n } else { 2 * n }].into();
            if alpha_len != want {
                problems.push(format!("{}: α-orbit lengths {alpha_len:?}", d.name()));
            }
        }
        if took > Duration::from_secs(1) {
            problems.push(format!("{}: built in {took:?}", d.name()));
        }
    }
    Outcome::new(problems, format!("{} categories, slowest build {slowest:.2?}", MATRIX.len()))
}

fn criterion_2() -> Outcome {
    let mut problems = Vec::new();
    let mut counts = Vec::new();
    let start = Instant::now();
    for &(k, n) in MATRIX {
        let want = cluster_number(k, n);
        let d = diagram(k, n);
        let c = build_cluster_category(&d, 2).expect("category");
        let ext = ExtTable::new(&c).expect("ext");
        let brute = enumerate_brute(&c, &ext).expect("clique search");
        let mut mutation = exchange_graph(&c, &ext).expect("mutation").sorted_nodes();
        mutation.dedup();
        counts.push(format!("{}={}/{}", d.name(), brute.len(), mutation.len()));
        if brute != mutation {
            problems.push(format!("{}: enumerators disagree", d.name()));
        }
        if brute.len() != want {
            problems.push(format!("{}: {} objects, expected {want}", d.name(), brute.len()));
        }
    }
    let took = start.elapsed();
    if took > Duration::from_secs(300) {
        problems.push(format!("took {took:?}"));
    }
    Outcome::new(problems, format!("clique/mutation counts {} in {took:.2?}", counts.join(" ")))
}

fn violations_of(f: &Fixture) -> Vec<String> {
    f.report.violations.iter().map(|v| format!("{}: {} ({})", f.diagram.name(), v.check, v.detail)).collect()
}

fn criterion_3(fixtures: &[Fixture]) -> Outcome {
    let mut problems = Vec::new();
    let mut summary = Vec::new();
    for f in fixtures.iter().filter(|f| f.diagram.kind == A && (2..=9).contains(&f.diagram.rank)) {
        let n = f.diagram.rank;
        problems.extend(violations_of(f));
        let checks = &f.report.checks;
        for (needed, name) in [
            (true, "period values in type A"),
            (n % 2 == 1, "half period iff 2-symmetric"),
            (n % 3 == 0, "third period iff 3-symmetric"),
        ] {
            if needed && checks.get(name).copied() != Some(f.report.objects) {
                problems.push(format!("{}: check {name:?} not run on every object", f.diagram.name()));
            }
        }
        summary.push(format!("{}:{:?}", f.diagram.name(), f.report.period_histogram));
    }
    Outcome::new(problems, format!("period histograms {}", summary.join(" ")))
}

fn criterion_4(fixtures: &[Fixture]) -> Outcome {
    let mut problems = Vec::new();
    let mut summary = Vec::new();
    let half = "subtype 2 half period iff 2-symmetric and 4 | n";
    for f in fixtures.iter().filter(|f| f.diagram.kind == D) {
        let n = f.diagram.rank;
        problems.extend(violations_of(f));
        let checks = &f.report.checks;
        if n % 2 == 0 && checks.get(half).copied().unwrap_or(0) == 0 {
            problems.push(format!("{}: {half:?} never exercised", f.diagram.name()));
        }
        if checks.get("subtype 3 period from l").copied().unwrap_or(0) == 0 {
            problems.push(format!("{}: subtype 3 never exercised", f.diagram.name()));
        }
        let halves = f.report.period_histogram.get(&(n / 2)).copied().unwrap_or(0);
        if n == 4 && halves == 0 {
            problems.push("D4: no object with period 2".into());
        }
        summary.push(format!("{}:{:?}", f.diagram.name(), f.report.period_histogram));
    }
    Outcome::new(problems, format!("period histograms {}", summary.join(" ")))
}

/// Table entries hit at period `s` plus unlisted classes of period `s`.
fn classes_at(cov: &TableCoverage, rank: usize, s: usize) -> usize {
    let hit = table(rank).iter().filter(|e| e.period == s && cov.hits.get(e.label).copied().unwrap_or(0) > 0).count();
    let unlisted: BTreeSet<_> = cov.unlisted.iter().filter(|p| p.period == s).map(|p| &p.class).collect();
    hit + unlisted.len()
}

fn table_problems(name: &str, cov: &TableCoverage) -> Vec<String> {
    let mut out = Vec::new();
    for l in &cov.unrealised {
        out.push(format!("{name}: entry {l} not realised"));
    }
    for p in &cov.unlisted {
        out.push(format!("{name}: unlisted class {} (s = {}) with arrows {:?}", p.distribution, p.period, p.class.arrows()));
    }
    for (l, p) in &cov.mismatched {
        out.push(format!("{name}: entry {l} matched by {} (s = {})", p.distribution, p.period));
    }
    out
}

fn criterion_5(fixtures: &[Fixture]) -> Outcome {
    let mut problems = Vec::new();
    let mut summary = Vec::new();
    for f in fixtures.iter().filter(|f| f.diagram.kind == E) {
        let n = f.diagram.rank;
        let name = f.diagram.name();
        let c = &f.census.category;
        match n {
            6 | 8 => {
                let periodic = periodic_classes(&f.census);
                let cov = table_coverage(n, &periodic);
                problems.extend(table_problems(&name, &cov));
                let rows: Vec<usize> = TableCoverage::rows(n).into_iter().map(|(_, k)| k).collect();
                let want_rows: Vec<usize> = if n == 6 { vec![4, 1, 1, 3] } else { vec![2, 1, 2, 2, 2, 2] };
                if rows != want_rows {
                    problems.push(format!("{name}: table rows {rows:?}"));
                }
                let want: &[(usize, usize)] = if n == 6 { &[(7, 9)] } else { &[(4, 2), (8, 9)] };
                for &(s, k) in want {
                    let got = classes_at(&cov, n, s);
                    if got != k {
                        problems.push(format!("{name}: {got} quiver classes with period {s}, expected {k}"));
                    }
                    summary.push(format!("{name} s={s}: {got} classes"));
                }
                if n == 8 {
                    let two = f.census.objects.iter().filter(|t| minimal_period(c, t) == 2).count();
                    if two > 0 {
                        problems.push(format!("{name}: {two} objects with period 2"));
                    }
                }
            }
            _ => {
                let other: BTreeMap<usize, usize> =
                    f.report.period_histogram.iter().filter(|(&s, _)| s != 10).map(|(&s, &k)| (s, k)).collect();
                if !other.is_empty() {
                    problems.push(format!("{name}: periods other than 10: {other:?}"));
                }
                summary.push(format!("{name}: all {} objects period 10", f.report.objects));
            }
        }
    }
    Outcome::new(problems, summary.join(", "))
}

fn catalog_matrix() -> Vec<(DynkinKind, usize, i64)> {
    let mut m: Vec<(DynkinKind, usize, i64)> = (1..=6).map(|n| (A, n, 2 * (n as i64 + 3))).collect();
    m.extend((4..=6).map(|n| (D, n, 4 * n as i64)));
    m.push((E, 6, 14));
    m.push((E, 7, 20));
    m
}

fn criterion_6(fixtures: &[Fixture]) -> Outcome {
    let mut problems = Vec::new();
    let (mut entries, mut both, mut out_of_scope) = (0, 0, 0);
    for (k, n, hi) in catalog_matrix() {
        let f = fixture(fixtures, k, n);
        let rep = match verify_catalog(&f.census, 1..=hi, &[0, 1]) {
            Ok(r) => r,
            Err(e) => {
                problems.push(format!("{}: {e}", f.diagram.name()));
                continue;
            }
        };
        problems.extend(rep.violations.iter().map(|v| format!("{}: {v}", rep.diagram)));
        for e in &rep.entries {
            entries += 1;
            match e.route_ii {
                Some(_) => both += 1,
                None if e.scope.is_some() => out_of_scope += 1,
                None => problems.push(format!("{}: τ^{}[{}] has no route (ii)", rep.diagram, e.a, e.b)),
            }
            if e.scope.is_none() && !e.agrees() {
                problems.push(format!("{}: τ^{}[{}] disagrees", rep.diagram, e.a, e.b));
            }
        }
    }
    Outcome::new(
        problems,
        format!("{entries} functors, {both} with both routes, {out_of_scope} non-free functors out of scope"),
    )
}

fn criterion_7(fixtures: &[Fixture]) -> Outcome {
    let windows: BTreeMap<String, Arc<_>> = fixtures
        .iter()
        .map(|f| (f.diagram.name(), Arc::new(build_window(&f.diagram, default_width(&f.diagram)).expect("window"))))
        .collect();
    let mut pool: Vec<(usize, FunctorSpec, usize)> = Vec::new();
    for (fi, f) in fixtures.iter().enumerate() {
        let d = &f.diagram;
        if !catalog_matrix().iter().any(|&(k, n, _)| k == d.kind && n == d.rank) {
            continue;
        }
        let w = &windows[&d.name()];
        let hi = 2 * d.coxeter_number() as i64 + 4;
        for b in [0, 1] {
            for a in 1..=hi {
                let fs = FunctorSpec::new(a, b);
                if OrbitQuiver::from_window(w.clone(), fs).is_err() {
                    continue;
                }
                for i in periodic_in_c2(&f.census, fs) {
                    pool.push((fi, fs, i));
                }
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let shuffled: Vec<_> = pool.choose_multiple(&mut rng, pool.len()).copied().collect();
    // Round robin over diagrams so that no type dominates the sample.
    let mut queues: BTreeMap<usize, Vec<(usize, FunctorSpec, usize)>> = BTreeMap::new();
    for p in shuffled.into_iter().rev() {
        queues.entry(p.0).or_default().push(p);
    }
    let mut sample = Vec::new();
    while queues.values().any(|q| !q.is_empty()) {
        sample.extend(queues.values_mut().filter_map(|q| q.pop()));
    }
    let mut problems = Vec::new();
    let mut taken = Vec::new();
    for (fi, fs, i) in sample {
        if taken.len() == 20 {
            break;
        }
        let f = &fixtures[fi];
        let w = &windows[&f.diagram.name()];
        let Ok(o) = OrbitQuiver::from_window(w.clone(), fs) else { continue };
        let o_ext = ExtTable::new(&o).expect("ext in orbit category");
        match correspondence(&f.census, &o, &o_ext, &f.census.objects[i]) {
            Ok(cor) if cor.holds() => {}
            Ok(cor) => problems.push(format!("{} {fs}: {:?} gives {:?}", f.diagram.name(), cor.object, cor.image)),
            Err(e) => problems.push(format!("{} {fs}: {e}", f.diagram.name())),
        }
        taken.push(format!("{} {fs}", f.diagram.name()));
    }
    if taken.len() < 20 {
        problems.push(format!("only {} pairs available", taken.len()));
    }
    let kinds: BTreeSet<char> = taken.iter().map(|s| s.chars().next().unwrap_or('?')).collect();
    if kinds.len() < 3 {
        problems.push(format!("sample covers types {kinds:?} only"));
    }
    Outcome::new(problems, format!("{} pairs from a pool of {}: {}", taken.len(), pool.len(), taken.join(", ")))
}

fn criterion_8() -> Outcome {
    let mut problems = Vec::new();
    let mut total = 0;
    for &(k, n) in MATRIX {
        let d = diagram(k, n);
        match hom_properties(&d) {
            Ok(rep) => {
                total += rep.checks.values().sum::<usize>();
                problems.extend(rep.failures.iter().map(|f| format!("{}: {f}", d.name())));
            }
            Err(e) => problems.push(format!("{}: {e}", d.name())),
        }
    }
    Outcome::new(problems, format!("{total} identity instances over {} categories", MATRIX.len()))
}

fn criterion_9(fixtures: &[Fixture]) -> Outcome {
    let battery: &[(DynkinKind, &[&str])] = &[
        (A, &["type A quiver shape", "orbit position from quiver"]),
        (D, &["quiver shape matches α-count", "α placement"]),
    ];
    let mut problems = Vec::new();
    let mut runs = 0;
    for f in fixtures {
        let Some((_, names)) = battery.iter().find(|(k, _)| *k == f.diagram.kind) else { continue };
        for &name in *names {
            let ran = f.report.checks.get(name).copied().unwrap_or(0);
            runs += ran;
            if ran != f.report.objects {
                problems.push(format!("{}: {name:?} ran on {ran} of {} objects", f.diagram.name(), f.report.objects));
            }
            let bad = f.report.violations.iter().filter(|v| v.check == name).count();
            if bad > 0 {
                problems.push(format!("{}: {bad} failures of {name:?}", f.diagram.name()));
            }
        }
    }
    Outcome::new(problems, format!("{runs} structural checks over A1..A9 and D4..D7"))
}

fn fixture(fixtures: &[Fixture], k: DynkinKind, n: usize) -> &Fixture {
    fixtures.iter().find(|f| f.diagram.kind == k && f.diagram.rank == n).expect("fixture in matrix")
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

/// Runs every criterion, printing one line each; returns the number that failed.
pub fn run() -> usize {
    let fixtures: Vec<Fixture> = MATRIX
        .iter()
        .map(|&(k, n)| {
            let d = diagram(k, n);
            let census = Census::new(&d).expect("census");
            let report = verify_census(&census);
            Fixture { diagram: d, census, report }
        })
        .collect();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("category shapes", Box::new(criterion_1)),
        ("dual enumeration", Box::new(criterion_2)),
        ("type A periods", Box::new(|| criterion_3(&fixtures))),
        ("type D periods", Box::new(|| criterion_4(&fixtures))),
        ("type E tables", Box::new(|| criterion_5(&fixtures))),
        ("orbit category catalog", Box::new(|| criterion_6(&fixtures))),
        ("correspondence", Box::new(|| criterion_7(&fixtures))),
        ("Hom calculus identities", Box::new(criterion_8)),
        ("structural batteries", Box::new(|| criterion_9(&fixtures))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!o.pass);
        println!("criterion {} [{name}]: {verdict} ({:.2?}) {}", i + 1, start.elapsed(), o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    failed
}
