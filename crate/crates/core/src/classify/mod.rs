//! Minimal τ-periods of cluster tilting objects, quiver symmetry detectors,
//! and exhaustive checks of the periodicity classification.

pub mod canon;
pub mod type_a;
pub mod type_d;
pub mod type_e;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arquiver::{build_cluster_category, lcm, MeshAutomorphism, OrbitQuiver};
use crate::diagram::{DynkinDiagram, DynkinKind};
use crate::error::Result;
use crate::homcalc::ExtTable;
use crate::tilting::{enumerate_both, quiver_of, AlgQuiver, CTObject};

pub use canon::{canonical_marked, quiver_canonical, quiver_iso, CanonicalQuiver};
pub use type_a::{detect_2symmetric_A, detect_3symmetric_A};
pub use type_d::detect_l_symmetric_D;

/// Every cluster tilting object of C_2 with its quiver, in canonical order.
pub struct Census {
    pub category: OrbitQuiver,
    pub ext: ExtTable,
    pub objects: Vec<CTObject>,
    pub quivers: Vec<AlgQuiver>,
}

impl Census {
    pub fn new(d: &DynkinDiagram) -> Result<Self> {
        let category = build_cluster_category(d, 2)?;
        let ext = ExtTable::new(&category)?;
        let (objects, graph) = enumerate_both(&category, &ext)?;
        let quivers = objects.iter().map(|t| quiver_of(&graph, t)).collect::<Result<Vec<_>>>()?;
        Ok(Census { category, ext, objects, quivers })
    }

    pub fn index_of(&self, t: &CTObject) -> Option<usize> {
        self.objects.binary_search(t).ok()
    }
}

pub fn tau_image(c: &OrbitQuiver, t: &CTObject, k: i64) -> CTObject {
    CTObject::new(t.members.iter().map(|&x| c.apply_functor(k, 0, x)).collect())
}

/// Least `s > 0` with `τ^s t = t`.
pub fn minimal_period(c: &OrbitQuiver, t: &CTObject) -> usize {
    let bound = t.members.iter().fold(1, |acc, &x| lcm(acc, c.orbits[c.orbit_of(x)].len));
    let mut cur = t.clone();
    for s in 1..=bound {
        cur = cur.map(&c.tau);
        if cur == *t {
            return s;
        }
    }
    bound
}

/// Summand count per τ-orbit.
pub fn orbit_counts(c: &OrbitQuiver, t: &CTObject) -> Vec<usize> {
    let mut v = vec![0; c.orbits.len()];
    for &x in &t.members {
        v[c.orbit_of(x)] += 1;
    }
    v
}

/// Count in one orbit, written as blocks of τ-translates: `"2"` for one pair
/// closed under half the orbit length, `"2+2"` for two such pairs, `"4"`.
pub fn refined_count(c: &OrbitQuiver, t: &CTObject, orbit: usize) -> String {
    let o = &c.orbits[orbit];
    let pos: BTreeSet<usize> = t.members.iter().filter(|&&x| c.orbit_of(x) == orbit).map(|&x| c.position(x)).collect();
    let k = pos.len();
    if k == 0 {
        return "0".into();
    }
    let d = (1..=o.len)
        .filter(|d| o.len.is_multiple_of(*d))
        .find(|&d| pos.iter().all(|&p| pos.contains(&((p + d) % o.len))))
        .unwrap_or(o.len);
    let piece = o.len / d;
    if piece == 1 {
        return k.to_string();
    }
    vec![piece.to_string(); k / piece].join("+")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Symmetry {
    A2sym,
    A3sym,
    Dsubtype { subtype: u8 },
    DlSym { l: usize, t: usize, p: usize },
    Generic,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub members: Vec<usize>,
    pub labels: Vec<String>,
    pub min_period: usize,
    pub distribution: Vec<String>,
    pub symmetry: Symmetry,
    pub quiver: Vec<(usize, usize)>,
    pub quiver_class_id: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub witness: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TheoremReport {
    pub diagram: String,
    pub objects: usize,
    pub quiver_classes: usize,
    pub period_histogram: BTreeMap<usize, usize>,
    /// Number of objects each check was applied to.
    pub checks: BTreeMap<String, usize>,
    pub records: Vec<ClassificationRecord>,
    pub violations: Vec<Violation>,
}

impl TheoremReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Per-object outcome before class ids are assigned.
struct Outcome {
    record: ClassificationRecord,
    class: CanonicalQuiver,
    checks: Vec<&'static str>,
    violations: Vec<Violation>,
}

struct Ctx<'a> {
    census: &'a Census,
    index: usize,
    s: usize,
    checks: Vec<&'static str>,
    violations: Vec<Violation>,
}

impl Ctx<'_> {
    fn check(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        self.checks.push(name);
        if !ok {
            self.violations.push(Violation {
                check: name.to_string(),
                witness: self.census.objects[self.index].members.clone(),
                detail: detail(),
            });
        }
    }

    fn all(&mut self, name: &'static str, problems: Vec<String>) {
        self.checks.push(name);
        for p in problems {
            self.violations.push(Violation {
                check: name.to_string(),
                witness: self.census.objects[self.index].members.clone(),
                detail: p,
            });
        }
    }
}

pub fn classify_object(census: &Census, index: usize) -> (ClassificationRecord, CanonicalQuiver) {
    let o = analyse(census, index);
    (o.record, o.class)
}

fn analyse(census: &Census, index: usize) -> Outcome {
    let c = &census.category;
    let t = &census.objects[index];
    let q = &census.quivers[index];
    let s = minimal_period(c, t);
    let class = quiver_canonical(q);
    let mut ctx = Ctx { census, index, s, checks: Vec::new(), violations: Vec::new() };
    let lcm_len = t.members.iter().fold(1, |acc, &x| lcm(acc, c.orbits[c.orbit_of(x)].len));
    ctx.check("period divides orbit lcm", lcm_len % s == 0, || format!("s = {s}, lcm = {lcm_len}"));
    let symmetry = match c.diagram.kind {
        DynkinKind::A => check_a(&mut ctx, q),
        DynkinKind::D => check_d(&mut ctx, q),
        DynkinKind::E => check_e(&mut ctx, q, &class),
    };
    let record = ClassificationRecord {
        members: t.members.clone(),
        labels: t.members.iter().map(|&x| c.label(x)).collect(),
        min_period: s,
        distribution: (0..c.orbits.len()).map(|o| refined_count(c, t, o)).collect(),
        symmetry,
        quiver: q.labelled_arrows(),
        quiver_class_id: 0,
    };
    Outcome { record, class, checks: ctx.checks, violations: ctx.violations }
}

fn check_a(ctx: &mut Ctx, q: &AlgQuiver) -> Symmetry {
    let census = ctx.census;
    let c = &census.category;
    let t = &census.objects[ctx.index];
    let n = c.rank();
    let s = ctx.s;
    ctx.all("type A quiver shape", type_a::type_a_shape_violations(q));
    ctx.all("orbit position from quiver", type_a::bow_perp_violations(c, q));
    let two = detect_2symmetric_A(q);
    let three = detect_3symmetric_A(q);
    let mut allowed = vec![n + 3];
    if n % 2 == 1 {
        allowed.push((n + 3) / 2);
    }
    if n.is_multiple_of(3) {
        allowed.push((n + 3) / 3);
    }
    ctx.check("period values in type A", allowed.contains(&s), || format!("s = {s}, allowed {allowed:?}"));
    if n % 2 == 1 {
        ctx.check("half period iff 2-symmetric", (s == (n + 3) / 2) == two, || {
            format!("s = {s}, 2-symmetric = {two}")
        });
        if s == (n + 3) / 2 {
            let l = (n - 1) / 2;
            let inner = t.members.iter().filter(|&&x| type_a::depth(c, x) == l).count();
            ctx.check("one summand in the innermost orbit", inner == 1, || format!("{inner} innermost summands"));
        }
    }
    if n.is_multiple_of(3) {
        ctx.check("third period iff 3-symmetric", (s == (n + 3) / 3) == three, || {
            format!("s = {s}, 3-symmetric = {three}")
        });
        let l = n / 3;
        if tau_image(c, t, (l + 1) as i64) == *t {
            let deep: Vec<String> =
                t.members.iter().filter(|&&x| type_a::depth(c, x) >= l).map(|&x| c.label(x)).collect();
            ctx.check("middle orbits empty", deep.is_empty(), || format!("summands {deep:?} beyond the outer {l} orbits"));
        }
    }
    if two {
        Symmetry::A2sym
    } else if three {
        Symmetry::A3sym
    } else {
        Symmetry::Generic
    }
}

fn check_d(ctx: &mut Ctx, q: &AlgQuiver) -> Symmetry {
    let c = &ctx.census.category;
    let n = c.rank();
    let s = ctx.s;
    let alphas: Vec<usize> = (0..q.len()).filter(|&v| c.is_alpha(q.labels[v])).collect();
    let member_alphas: Vec<usize> = alphas.iter().map(|&v| q.labels[v]).collect();
    let Some(subtype) = type_d::subtype_from_alpha(c, &member_alphas) else {
        ctx.check("at least two α-summands", false, || format!("{} α-summands", alphas.len()));
        return Symmetry::Generic;
    };
    let shape = type_d::d_shape(q, &alphas, subtype);
    ctx.check("quiver shape matches α-count", shape.is_some(), || {
        format!("subtype {subtype} by α-summands, quiver {:?}", q.labelled_arrows())
    });
    let Some(shape) = shape else { return Symmetry::Dsubtype { subtype } };
    ctx.all("α placement", type_d::alpha_distribution_violations(c, q, &shape));
    if subtype >= 2 {
        ctx.check("period even for subtypes 2 and 3", s.is_multiple_of(2), || format!("s = {s}"));
    }
    match shape {
        type_d::DShape::One => {
            ctx.check("subtype 1 period", s == n, || format!("s = {s}"));
            Symmetry::Dsubtype { subtype: 1 }
        }
        type_d::DShape::Two { q1, q2, .. } => {
            let two = q1.form == q2.form;
            if n.is_multiple_of(2) {
                let half = two && n.is_multiple_of(4);
                ctx.check("subtype 2 half period iff 2-symmetric and 4 | n", (s == n / 2) == half, || {
                    format!("s = {s}, 2-symmetric = {two}")
                });
                if !half {
                    ctx.check("subtype 2 period otherwise n", s == n, || format!("s = {s}"));
                }
            } else {
                ctx.check("subtype 2 period 2n for odd n", s == 2 * n, || format!("s = {s}"));
            }
            Symmetry::Dsubtype { subtype: 2 }
        }
        type_d::DShape::Three { spikes, .. } => {
            let (l, tt, p) = type_d::l_symmetry(&spikes);
            ctx.check("l-symmetry size relation", l * p == n, || format!("l = {l}, p = {p}"));
            let expect = if (n / l).is_multiple_of(2) { n / l } else { 2 * n / l };
            ctx.check("subtype 3 period from l", n.is_multiple_of(l) && s == expect, || {
                format!("l = {l}, expected {expect}, s = {s}")
            });
            Symmetry::DlSym { l, t: tt, p }
        }
    }
}

fn check_e(ctx: &mut Ctx, q: &AlgQuiver, class: &CanonicalQuiver) -> Symmetry {
    let census = ctx.census;
    let c = &census.category;
    let t = &census.objects[ctx.index];
    let s = ctx.s;
    let n = c.rank();
    let allowed: &[usize] = match n {
        6 => &[7, 14],
        7 => &[10],
        _ => &[4, 8, 16],
    };
    ctx.check("period values in type E", allowed.contains(&s), || format!("s = {s}"));
    if let Some(tp) = type_e::table_period(n) {
        let dist = type_e::distribution_vector_E(c, t);
        let hit = type_e::table_lookup(n, class);
        if tp % s == 0 {
            ctx.check("periodic object listed in table", hit.is_some(), || {
                format!("quiver {:?}, distribution {dist}", q.labelled_arrows())
            });
            if let Some(r) = &hit {
                ctx.check("table distribution", r.distribution == dist && r.period == s, || {
                    format!("table entry {} (s = {}), object {dist} (s = {s})", r.label, r.period)
                });
            }
        } else {
            ctx.check("non-periodic object absent from table", hit.is_none(), || {
                format!("quiver listed as {:?} but s = {s}", hit.map(|r| r.label))
            });
        }
    }
    Symmetry::Generic
}

/// Exhaustive check of every applicable periodicity statement over all
/// cluster tilting objects of C_2(d).
pub fn verify_theorems(d: &DynkinDiagram) -> Result<TheoremReport> {
    let census = Census::new(d)?;
    Ok(verify_census(&census))
}

pub fn verify_census(census: &Census) -> TheoremReport {
    let c = &census.category;
    let outcomes: Vec<Outcome> = (0..census.objects.len()).into_par_iter().map(|i| analyse(census, i)).collect();
    let mut classes: BTreeMap<CanonicalQuiver, usize> = BTreeMap::new();
    for o in &outcomes {
        let next = classes.len();
        classes.entry(o.class.clone()).or_insert(next);
    }
    let mut checks: BTreeMap<String, usize> = BTreeMap::new();
    let mut violations = Vec::new();
    let mut records = Vec::with_capacity(outcomes.len());
    let mut hist = BTreeMap::new();
    for o in outcomes {
        for name in o.checks {
            *checks.entry(name.to_string()).or_default() += 1;
        }
        violations.extend(o.violations);
        *hist.entry(o.record.min_period).or_default() += 1;
        let mut r = o.record;
        r.quiver_class_id = classes[&o.class];
        records.push(r);
    }
    let orbits = symmetry_orbits(census);
    *checks.entry("quiver classes match object orbits".into()).or_default() += 1;
    if orbits != classes.len() && c.diagram.kind != DynkinKind::E {
        violations.push(Violation {
            check: "quiver classes match object orbits".into(),
            witness: Vec::new(),
            detail: format!("{} quiver classes, {} orbits", classes.len(), orbits),
        });
    }
    if c.diagram.kind == DynkinKind::A {
        violations.extend(vertical_alignment_violations(c));
        *checks.entry("vertical alignment".into()).or_default() += 1;
    }
    if c.diagram.kind == DynkinKind::E {
        violations.extend(type_e::table_coverage_violations(c.rank(), &periodic_classes(census)));
        *checks.entry("table coverage".into()).or_default() += 1;
    }
    TheoremReport {
        diagram: c.diagram.name(),
        objects: census.objects.len(),
        quiver_classes: classes.len(),
        period_histogram: hist,
        checks,
        records,
        violations,
    }
}

/// Quiver classes of the objects a type-E table is meant to list.
pub fn periodic_classes(census: &Census) -> BTreeSet<type_e::PeriodicClass> {
    let c = &census.category;
    let Some(tp) = type_e::table_period(c.rank()).filter(|_| c.diagram.kind == DynkinKind::E) else {
        return BTreeSet::new();
    };
    (0..census.objects.len())
        .into_par_iter()
        .filter_map(|i| {
            let t = &census.objects[i];
            let s = minimal_period(c, t);
            (tp % s == 0).then(|| type_e::PeriodicClass {
                class: quiver_canonical(&census.quivers[i]),
                distribution: type_e::distribution_vector_E(c, t),
                period: s,
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Orbits of cluster tilting objects under τ and the diagram automorphisms
/// preserving the orientation; in type D_n, n ≥ 5, the latter is the flip.
pub fn symmetry_orbits(census: &Census) -> usize {
    let c = &census.category;
    let d = &c.diagram;
    let arrows: BTreeSet<(usize, usize)> = d.arrows.iter().copied().collect();
    let mut gens: Vec<Vec<usize>> = vec![c.tau.clone()];
    for g in d.automorphisms() {
        let mapped: BTreeSet<(usize, usize)> = d.arrows.iter().map(|&(s, t)| (g.perm[s], g.perm[t])).collect();
        if mapped == arrows {
            let lift = MeshAutomorphism { perm: g.perm.clone(), offset: vec![0; d.rank] };
            gens.push(c.induced(&lift));
        }
    }
    let mut seen = vec![false; census.objects.len()];
    let mut count = 0;
    for i in 0..census.objects.len() {
        if seen[i] {
            continue;
        }
        count += 1;
        seen[i] = true;
        let mut stack = vec![i];
        while let Some(j) = stack.pop() {
            for g in &gens {
                let k = census.index_of(&census.objects[j].map(g)).expect("closed under symmetries");
                if !seen[k] {
                    seen[k] = true;
                    stack.push(k);
                }
            }
        }
    }
    count
}

/// Objects in a full-length orbit are vertically aligned exactly when
/// τ^(l+2) exchanges them, for n = 2l + 1.
pub fn vertical_alignment_violations(c: &OrbitQuiver) -> Vec<Violation> {
    let n = c.rank();
    if n.is_multiple_of(2) {
        return Vec::new();
    }
    let l = (n - 1) / 2;
    let mut out = Vec::new();
    for x in 0..c.vertex_count() {
        if c.orbits[c.orbit_of(x)].len != n + 3 {
            continue;
        }
        let aligned = type_a::vertically_aligned(c, x);
        let ex = c.apply_functor((l + 2) as i64, 0, x);
        for y in c.orbits[c.orbit_of(x)].first..c.orbits[c.orbit_of(x)].first + n + 3 {
            if y == x {
                continue;
            }
            let va = aligned.contains(&y);
            let swap = ex == y && c.apply_functor((l + 2) as i64, 0, y) == x;
            if va != swap {
                out.push(Violation {
                    check: "vertical alignment".into(),
                    witness: vec![x, y],
                    detail: format!("aligned = {va}, exchanged = {swap}"),
                });
            }
        }
    }
    out
}

/// Distinct minimal periods over the census.
pub fn period_set(census: &Census) -> BTreeSet<usize> {
    census.objects.iter().map(|t| minimal_period(&census.category, t)).collect()
}
