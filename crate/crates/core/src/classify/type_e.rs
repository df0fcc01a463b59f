use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::arquiver::OrbitQuiver;
use crate::tilting::{AlgQuiver, CTObject};

use super::canon::{quiver_canonical, CanonicalQuiver};
use super::{refined_count, Violation};

/// Diagram rows naming the τ-orbits in the order used by the tables.
pub fn orbit_rows(rank: usize) -> Vec<usize> {
    match rank {
        6 => vec![0, 2, 1, 3],
        8 => vec![7, 6, 0],
        _ => (0..rank).collect(),
    }
}

/// Refined per-orbit counts, e.g. `(2+2,0,1,1)`.
#[allow(non_snake_case)]
pub fn distribution_vector_E(c: &OrbitQuiver, t: &CTObject) -> String {
    let mut orbits: Vec<usize> = Vec::new();
    for r in orbit_rows(c.rank()) {
        if let Some(o) = c.orbits.iter().position(|o| o.rows.contains(&r)) {
            if !orbits.contains(&o) {
                orbits.push(o);
            }
        }
    }
    let parts: Vec<String> = orbits.into_iter().map(|o| refined_count(c, t, o)).collect();
    format!("({})", parts.join(","))
}

/// Period after which the tables list every periodic object.
pub fn table_period(rank: usize) -> Option<usize> {
    match rank {
        6 => Some(7),
        8 => Some(8),
        _ => None,
    }
}

/// One drawn quiver of a table row.
///
/// Vertices are letters `a`, `b`, ... and arrows are written `xy` for x → y.
/// `free` holds edges drawn without an orientation; they are oriented all as
/// written or all reversed. `drawn` records the published arrows when they
/// had to be corrected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub label: &'static str,
    pub distribution: &'static str,
    pub period: usize,
    pub n: usize,
    pub arrows: &'static str,
    pub free: &'static str,
    pub drawn: Option<&'static str>,
}

pub fn parse_arrows(s: &str) -> Vec<(usize, usize)> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let b = p.as_bytes();
            (usize::from(b[0] - b'a'), usize::from(b[1] - b'a'))
        })
        .collect()
}

impl TableEntry {
    /// The quivers the entry stands for.
    pub fn quivers(&self) -> Vec<AlgQuiver> {
        let fixed = parse_arrows(self.arrows);
        let free = parse_arrows(self.free);
        let mut out = vec![AlgQuiver::unlabelled(self.n, &[fixed.clone(), free.clone()].concat())];
        if !free.is_empty() {
            let rev: Vec<(usize, usize)> = free.iter().map(|&(s, t)| (t, s)).collect();
            out.push(AlgQuiver::unlabelled(self.n, &[fixed, rev].concat()));
        }
        out
    }

    pub fn classes(&self) -> BTreeSet<CanonicalQuiver> {
        self.quivers().iter().map(quiver_canonical).collect()
    }

    pub fn corrected(&self) -> bool {
        self.drawn.is_some()
    }
}

const fn e(
    label: &'static str,
    distribution: &'static str,
    period: usize,
    n: usize,
    arrows: &'static str,
    free: &'static str,
    drawn: Option<&'static str>,
) -> TableEntry {
    TableEntry { label, distribution, period, n, arrows, free, drawn }
}

const E6: [TableEntry; 9] = [
    e("(2,2,1,1)-1", "(2,2,1,1)", 7, 6, "ab,bc,fe,ec", "cd", None),
    e("(2,2,1,1)-2", "(2,2,1,1)", 7, 6, "ab,cb,fe,ce", "cd", None),
    e("(2,2,1,1)-3", "(2,2,1,1)", 7, 6, "ba,bc,ef,ec", "cd", None),
    e("(2,2,1,1)-4", "(2,2,1,1)", 7, 6, "ba,cb,ef,ce", "cd", None),
    e("(2+2,0,1,1)", "(2+2,0,1,1)", 7, 6, "ab,bc,ca,db,be,ed", "bf", None),
    e("(2,2,2,0)", "(2,2,2,0)", 7, 6, "db,bc,cd,be,ed", "ca,ef", Some("bc,bd,be,ed,cd|ab,df")),
    e("(2+2,0,2,0)-1", "(2+2,0,2,0)", 7, 6, "ad,fd,ba,ef,bc,ec,cd,db,de", "", Some("ad,fd,ba,ef,cb,ce,cd,db,de")),
    e("(2+2,0,2,0)-2", "(2+2,0,2,0)", 7, 6, "da,df,ab,fe,cb,ce,dc,bd,ed", "", Some("da,df,ab,fe,bc,ec,dc,bd,ed")),
    e("(2+2,0,2,0)-3", "(2+2,0,2,0)", 7, 6, "da,df,ab,fe,bc,ec,cd", "", Some("da,df,ab,fe,bc,ec,dc")),
];

const E8: [TableEntry; 11] = [
    e("(4,4,0)-1", "(4,4,0)", 4, 8, "ab,bc,cd,da,ae,bf,cg,dh", "", None),
    e("(4,4,0)-2", "(4,4,0)", 4, 8, "ab,bc,cd,da,ea,fb,gc,hd", "", None),
    e("(2+2,4,0)", "(2+2,4,0)", 8, 8, "ab,bc,cd,da,ae,fb,cg,hd", "", None),
    e("(2,2,2+2)-1", "(2,2,2+2)", 8, 8, "ab,bc,cd,de,fe,eg,gh,hb", "", None),
    e("(2,2,2+2)-2", "(2,2,2+2)", 8, 8, "ba,bc,cd,de,ef,eg,gh,hb", "", None),
    e("(2+2,2,2)-1", "(2+2,2,2)", 8, 8, "ba,bc,cd,fe,gf,gh,fb,cg,af,hc", "", Some("ab,bc,dc,ef,gf,hg,fb,cg,af,hc")),
    e("(2+2,2,2)-2", "(2+2,2,2)", 8, 8, "ab,bc,dc,ef,gf,hg,fb,cg,be,gd", "", None),
    e("(4,2,2)-1", "(4,2,2)", 8, 8, "ba,bc,dc,ef,gf,gh,fb,cg,be,gd", "", None),
    e("(4,2,2)-2", "(4,2,2)", 8, 8, "ba,bc,dc,ef,gf,gh,fb,cg,af,hc", "", None),
    e(
        "(2+2,0,2+2)-1",
        "(2+2,0,2+2)",
        8,
        8,
        "ba,bc,cd,fe,fb,gf,gh,cg,ea,dh,af,hc",
        "",
        Some("ba,bc,cd,fe,gf,gh,ea,fb,cg,dh,be,gd"),
    ),
    e("(2+2,0,2+2)-2", "(2+2,0,2+2)", 8, 8, "ab,bc,dc,ef,gf,hg,ea,fb,cg,dh,be,gd", "", None),
];

/// Hand-encoded table of periodic quivers; empty for ranks without a table.
pub fn table(rank: usize) -> Vec<TableEntry> {
    match rank {
        6 => E6.to_vec(),
        8 => E8.to_vec(),
        _ => Vec::new(),
    }
}

/// Entry whose quivers include the class.
pub fn table_lookup(rank: usize, class: &CanonicalQuiver) -> Option<TableEntry> {
    table(rank).into_iter().find(|e| e.classes().contains(class))
}

/// A periodic quiver class seen in the category, with its distribution and period.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PeriodicClass {
    pub class: CanonicalQuiver,
    pub distribution: String,
    pub period: usize,
}

/// Comparison of the periodic classes of a category with its table.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct TableCoverage {
    /// Table label to the periodic classes it matched.
    pub hits: BTreeMap<String, usize>,
    /// Entries no periodic class matched.
    pub unrealised: Vec<String>,
    /// Periodic classes no entry lists.
    pub unlisted: Vec<PeriodicClass>,
    /// Classes matched by an entry with a different distribution or period.
    pub mismatched: Vec<(String, PeriodicClass)>,
}

impl TableCoverage {
    /// Number of directed classes of the given period.
    pub fn classes_with_period(periodic: &BTreeSet<PeriodicClass>, s: usize) -> usize {
        periodic.iter().filter(|p| p.period == s).map(|p| &p.class).collect::<BTreeSet<_>>().len()
    }

    /// Table entries per distribution, in table order.
    pub fn rows(rank: usize) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        for e in table(rank) {
            match out.last_mut() {
                Some((d, k)) if d == e.distribution => *k += 1,
                _ => out.push((e.distribution.to_string(), 1)),
            }
        }
        out
    }
}

pub fn table_coverage(rank: usize, periodic: &BTreeSet<PeriodicClass>) -> TableCoverage {
    let entries = table(rank);
    let mut cov = TableCoverage::default();
    for e in &entries {
        cov.hits.insert(e.label.to_string(), 0);
    }
    for p in periodic {
        match entries.iter().find(|e| e.classes().contains(&p.class)) {
            Some(e) => {
                *cov.hits.entry(e.label.to_string()).or_default() += 1;
                if e.distribution != p.distribution || e.period != p.period {
                    cov.mismatched.push((e.label.to_string(), p.clone()));
                }
            }
            None => cov.unlisted.push(p.clone()),
        }
    }
    cov.unrealised = cov.hits.iter().filter(|(_, &k)| k == 0).map(|(l, _)| l.clone()).collect();
    cov
}

pub fn table_coverage_violations(rank: usize, periodic: &BTreeSet<PeriodicClass>) -> Vec<Violation> {
    let cov = table_coverage(rank, periodic);
    let mut out = Vec::new();
    for l in &cov.unrealised {
        out.push(Violation {
            check: "table coverage".into(),
            witness: Vec::new(),
            detail: format!("table entry {l} matches no periodic object"),
        });
    }
    for p in &cov.unlisted {
        out.push(Violation {
            check: "table coverage".into(),
            witness: Vec::new(),
            detail: format!(
                "periodic class {} (s = {}) with arrows {:?} is not listed",
                p.distribution,
                p.period,
                p.class.arrows()
            ),
        });
    }
    for (l, p) in &cov.mismatched {
        out.push(Violation {
            check: "table coverage".into(),
            witness: Vec::new(),
            detail: format!("table entry {l} matched by a class with {} (s = {})", p.distribution, p.period),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::canon::blocks;

    fn has_unoriented_cycle(q: &AlgQuiver) -> bool {
        blocks(q).into_iter().filter(|b| b.len() > 2).any(|b| {
            b.iter().any(|&v| {
                let outs = b.iter().filter(|&&u| q.b[v][u] > 0).count();
                let ins = b.iter().filter(|&&u| q.b[v][u] < 0).count();
                outs != ins
            })
        })
    }

    #[test]
    fn row_shapes() {
        let shape = |r| TableCoverage::rows(r).into_iter().map(|(_, k)| k).collect::<Vec<_>>();
        assert_eq!(shape(6), vec![4, 1, 1, 3]);
        assert_eq!(shape(8), vec![2, 1, 2, 2, 2, 2]);
        assert!(table(7).is_empty());
    }

    #[test]
    fn entries_are_pairwise_distinct() {
        for r in [6, 8] {
            let mut all = BTreeSet::new();
            let mut total = 0;
            for e in table(r) {
                total += e.classes().len();
                all.extend(e.classes());
            }
            assert_eq!(all.len(), total);
        }
    }

    #[test]
    fn corrected_drawings_have_unoriented_cycles_or_collide() {
        for r in [6, 8] {
            let t = table(r);
            for e in t.iter().filter(|e| e.corrected()) {
                let drawn = e.drawn.expect("corrected").split('|').next().unwrap_or_default();
                let q = AlgQuiver::unlabelled(e.n, &parse_arrows(drawn));
                let collides = t.iter().any(|o| o.label != e.label && o.classes().contains(&quiver_canonical(&q)));
                assert!(has_unoriented_cycle(&q) || collides || q.arrows().len() < e.n - 1, "{}", e.label);
            }
        }
    }

    #[test]
    fn free_edges_give_two_orientations() {
        let e = &E6[0];
        assert_eq!(e.quivers().len(), 2);
        assert_eq!(e.classes().len(), 2);
    }
}
