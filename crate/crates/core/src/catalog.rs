//! Which orbit categories `D^b(Δ)/τ^a[b]` carry a 2-cluster tilting object,
//! computed twice: by reduction to τ-periodicity in C_2 and by direct search
//! in the orbit category.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arquiver::{build_window, default_width, DerivedWindow, FunctorSpec, OrbitQuiver};
use crate::classify::{minimal_period, Census};
use crate::diagram::{DynkinDiagram, DynkinKind};
use crate::error::{CtkError, Result};
use crate::homcalc::ExtTable;
use crate::tilting::{cluster_tilting_search, CTObject, Compat};

/// A family `τ^{t·step + a0}[b]`, `t ∈ Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub step: i64,
    pub a0: i64,
    pub b: i64,
}

/// The functor families whose orbit categories are listed as having a 2-cluster tilting object.
pub fn families(d: &DynkinDiagram) -> Vec<Family> {
    let n = d.rank as i64;
    let pair = |step: i64| [Family { step, a0: 0, b: 0 }, Family { step, a0: -1, b: 1 }];
    match d.kind {
        DynkinKind::A => {
            let mut steps = vec![n + 3];
            if n % 2 == 1 {
                steps.push((n - 1) / 2 + 2);
            }
            if n % 3 == 0 {
                steps.push(n / 3 + 1);
            }
            steps.into_iter().flat_map(pair).collect()
        }
        DynkinKind::D => {
            let mut out = vec![Family { step: 2, a0: 0, b: 0 }];
            if n % 2 == 1 {
                out.extend(pair(n));
                out.push(Family { step: 2, a0: -1, b: 1 });
            }
            out
        }
        DynkinKind::E => match n {
            6 => pair(7).to_vec(),
            7 => vec![Family { step: 10, a0: 0, b: 0 }],
            _ => vec![Family { step: 4, a0: 0, b: 0 }],
        },
    }
}

/// Whether `τ^a[b]` equals a member of a listed family as an automorphism of ZΔ.
pub fn is_predicted(w: &DerivedWindow, fams: &[Family], f: FunctorSpec) -> bool {
    let target = w.functor(f.a, f.b);
    let h = w.diagram.coxeter_number() as i64;
    let reach = f.a.abs() + (f.b.abs() + 2) * h + 2;
    fams.iter().any(|fam| {
        (-reach..=reach).any(|t| {
            let a = t * fam.step + fam.a0;
            a.abs() <= reach && w.functor(a, fam.b) == target
        })
    })
}

pub fn predicted_functors(d: &DynkinDiagram, a_range: std::ops::RangeInclusive<i64>, bs: &[i64]) -> Result<Vec<FunctorSpec>> {
    let w = build_window(d, default_width(d))?;
    let fams = families(d);
    let mut out = Vec::new();
    for &b in bs {
        for a in a_range.clone() {
            let f = FunctorSpec::new(a, b);
            if is_predicted(&w, &fams, f) {
                out.push(f);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Cluster tilting objects of the orbit category found by exhaustive search.
#[derive(Clone, Debug)]
pub struct DirectSearch {
    pub category: OrbitQuiver,
    pub objects: Vec<CTObject>,
    /// Summand count expected from the ratio of category sizes.
    pub expected_size: usize,
}

/// Route (ii): build `O_F` and enumerate its cluster tilting objects.
pub fn direct_search(w: &Arc<DerivedWindow>, c2_size: usize, f: FunctorSpec) -> Result<DirectSearch> {
    let category = OrbitQuiver::from_window(w.clone(), f)?;
    let ext = ExtTable::new(&category)?;
    let compat = Compat::new(&ext);
    let objects = cluster_tilting_search(&compat);
    let expected_size = category.rank() * category.vertex_count() / c2_size;
    Ok(DirectSearch { category, objects, expected_size })
}

/// Route (i): objects of C_2 fixed by `τ^a[b]`, which acts there as τ^{a+b}.
pub fn periodic_in_c2(census: &Census, f: FunctorSpec) -> Vec<usize> {
    let s = (f.a + f.b).unsigned_abs() as usize;
    (0..census.objects.len())
        .filter(|&i| s == 0 || s.is_multiple_of(minimal_period(&census.category, &census.objects[i])))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub a: i64,
    pub b: i64,
    pub predicted: bool,
    /// `None` when the functor does not act freely or the quotient is infinite.
    pub observed: Option<bool>,
    pub scope: Option<String>,
    /// Number of F-periodic cluster tilting objects of C_2.
    pub route_i: usize,
    /// Number of cluster tilting objects of O_F.
    pub route_ii: Option<usize>,
    pub vertices: Option<usize>,
    pub witness_members: Option<Vec<usize>>,
    /// The C_2 object the witness comes from.
    pub witness_preimage: Option<Vec<usize>>,
}

impl CatalogEntry {
    pub fn functor(&self) -> FunctorSpec {
        FunctorSpec::new(self.a, self.b)
    }

    pub fn agrees(&self) -> bool {
        self.observed.is_none_or(|o| o == self.predicted)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogReport {
    pub diagram: String,
    pub entries: Vec<CatalogEntry>,
    pub violations: Vec<String>,
}

impl CatalogReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn observed_has_ct(census: &Census, w: &Arc<DerivedWindow>, f: FunctorSpec) -> Result<(bool, Option<CTObject>)> {
    let direct = direct_search(w, census.category.vertex_count(), f)?;
    let periodic = periodic_in_c2(census, f);
    if periodic.len() != direct.objects.len() {
        return Err(CtkError::CountMismatch(format!(
            "{f}: {} periodic objects in C_2, {} cluster tilting objects in O_F",
            periodic.len(),
            direct.objects.len()
        )));
    }
    Ok((!periodic.is_empty(), direct.objects.first().cloned()))
}

fn entry(census: &Census, w: &Arc<DerivedWindow>, fams: &[Family], f: FunctorSpec) -> (CatalogEntry, Vec<String>) {
    let predicted = is_predicted(w, fams, f);
    let periodic = periodic_in_c2(census, f);
    let mut e = CatalogEntry {
        a: f.a,
        b: f.b,
        predicted,
        observed: None,
        scope: None,
        route_i: periodic.len(),
        route_ii: None,
        vertices: None,
        witness_members: None,
        witness_preimage: None,
    };
    let mut problems = Vec::new();
    match direct_search(w, census.category.vertex_count(), f) {
        Err(err @ (CtkError::NotFree(_) | CtkError::InfiniteQuotient)) => {
            e.scope = Some(format!("not an orbit category in scope: {err}"));
        }
        Err(err) => problems.push(format!("{f}: {err}")),
        Ok(direct) => {
            e.vertices = Some(direct.category.vertex_count());
            e.route_ii = Some(direct.objects.len());
            e.observed = Some(!direct.objects.is_empty());
            if direct.objects.len() != periodic.len() {
                problems.push(format!(
                    "{f}: route (i) finds {} periodic objects, route (ii) {} cluster tilting objects",
                    periodic.len(),
                    direct.objects.len()
                ));
            }
            if let Some(t) = direct.objects.iter().find(|t| t.len() != direct.expected_size) {
                problems.push(format!("{f}: cluster tilting object {:?} has {} summands, expected {}", t.members, t.len(), direct.expected_size));
            }
            if let Some(&i) = periodic.first() {
                let t = &census.objects[i];
                match push_forward(&census.category, &direct.category, t) {
                    Ok(img) if direct.objects.binary_search(&img).is_ok() => {
                        e.witness_members = Some(img.members);
                        e.witness_preimage = Some(t.members.clone());
                    }
                    Ok(img) => problems.push(format!("{f}: image {:?} of {:?} is not cluster tilting", img.members, t.members)),
                    Err(err) => problems.push(format!("{f}: {err}")),
                }
            }
            if predicted != !direct.objects.is_empty() {
                problems.push(format!("{f}: predicted {predicted}, observed {}", !direct.objects.is_empty()));
            }
        }
    }
    (e, problems)
}

/// Predicted against observed for every `(a, b)` in range, in `(a, b)` order.
pub fn verify_catalog(census: &Census, a_range: std::ops::RangeInclusive<i64>, bs: &[i64]) -> Result<CatalogReport> {
    let d = &census.category.diagram;
    let w = Arc::new(build_window(d, default_width(d))?);
    let fams = families(d);
    let mut functors: Vec<FunctorSpec> = bs.iter().flat_map(|&b| a_range.clone().map(move |a| FunctorSpec::new(a, b))).collect();
    functors.sort();
    functors.dedup();
    let results: Vec<(CatalogEntry, Vec<String>)> = functors.par_iter().map(|&f| entry(census, &w, &fams, f)).collect();
    let mut entries = Vec::with_capacity(results.len());
    let mut violations = Vec::new();
    for (e, p) in results {
        entries.push(e);
        violations.extend(p);
    }
    Ok(CatalogReport { diagram: d.name(), entries, violations })
}

/// Image in `O_F` of an F-periodic object of C_2.
pub fn push_forward(c2: &OrbitQuiver, o: &OrbitQuiver, t: &CTObject) -> Result<CTObject> {
    let f = o.functor;
    let moved = CTObject::new(t.members.iter().map(|&x| c2.apply_functor(f.a, f.b, x)).collect());
    if moved != *t {
        return Err(CtkError::NotPeriodic(format!("{:?} under {f}", t.members)));
    }
    let members: Vec<usize> = (0..o.vertex_count()).filter(|&y| t.contains(c2.project(o.lift(y)))).collect();
    Ok(CTObject::new(members))
}

/// Objects of C_2 whose lifts land in `y`; every lift in a few fundamental
/// domains must agree.
pub fn pull_back(c2: &OrbitQuiver, o: &OrbitQuiver, y: &CTObject) -> Result<CTObject> {
    let g = &c2.generator;
    let mut members = Vec::new();
    for x in 0..c2.vertex_count() {
        let v = c2.lift(x);
        let hits: Vec<bool> = (-2..=2).map(|k| y.contains(o.project(g.pow(k).apply(v)))).collect();
        if hits.iter().any(|&h| h != hits[0]) {
            return Err(CtkError::Invariant(format!("preimage of {:?} is not stable under the cluster functor", y.members)));
        }
        if hits[0] {
            members.push(x);
        }
    }
    Ok(CTObject::new(members))
}

/// One executable instance of the correspondence between periodic objects and
/// cluster tilting objects of the orbit category.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Correspondence {
    pub a: i64,
    pub b: i64,
    pub object: Vec<usize>,
    pub image: Vec<usize>,
    pub image_is_cluster_tilting: bool,
    pub image_size: usize,
    pub expected_size: usize,
    pub preimage: Vec<usize>,
    pub preimage_is_rigid: bool,
}

impl Correspondence {
    pub fn holds(&self) -> bool {
        self.image_is_cluster_tilting && self.preimage_is_rigid && self.image_size == self.expected_size
    }
}

pub fn correspondence(census: &Census, o: &OrbitQuiver, o_ext: &ExtTable, t: &CTObject) -> Result<Correspondence> {
    let c2 = &census.category;
    let img = push_forward(c2, o, t)?;
    let pre = pull_back(c2, o, &img)?;
    let compat = Compat::new(o_ext);
    let c2_compat = Compat::new(&census.ext);
    Ok(Correspondence {
        a: o.functor.a,
        b: o.functor.b,
        object: t.members.clone(),
        image_is_cluster_tilting: compat.is_cluster_tilting(&img.members),
        image_size: img.len(),
        expected_size: o.rank() * o.vertex_count() / c2.vertex_count(),
        image: img.members,
        preimage_is_rigid: c2_compat.is_rigid(&pre.members),
        preimage: pre.members,
    })
}

/// Checks that `τ^a[b]` acts on C_2 exactly as τ^{a+b}.
pub fn shift_acts_as_tau(c2: &OrbitQuiver, a: i64, b: i64) -> bool {
    (0..c2.vertex_count()).all(|x| c2.apply_functor(a, b, x) == c2.apply_functor(a + b, 0, x))
}

/// Catalog rows by `a + b` for C_2; entries with equal sums must agree.
pub fn observed_by_sum(entries: &[CatalogEntry]) -> BTreeMap<i64, Vec<(i64, i64, usize)>> {
    let mut out: BTreeMap<i64, Vec<(i64, i64, usize)>> = BTreeMap::new();
    for e in entries {
        out.entry(e.a + e.b).or_default().push((e.a, e.b, e.route_i));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::build_diagram;

    fn specs(d: &DynkinDiagram, r: std::ops::RangeInclusive<i64>, bs: &[i64]) -> Vec<(i64, i64)> {
        predicted_functors(d, r, bs).unwrap().into_iter().map(|f| (f.a, f.b)).collect()
    }

    #[test]
    fn predicted_a2() {
        let d = build_diagram(DynkinKind::A, 2).unwrap();
        assert_eq!(specs(&d, 1..=10, &[0, 1]), vec![(4, 1), (5, 0), (9, 1), (10, 0)]);
    }

    #[test]
    fn predicted_a3_contains_small_periods() {
        let d = build_diagram(DynkinKind::A, 3).unwrap();
        let p = specs(&d, 1..=6, &[0]);
        for a in [2, 3, 4, 6] {
            assert!(p.contains(&(a, 0)), "τ^{a}");
        }
        assert!(!p.contains(&(5, 0)));
    }

    #[test]
    fn predicted_e7() {
        let d = build_diagram(DynkinKind::E, 7).unwrap();
        assert_eq!(specs(&d, 1..=20, &[0]), vec![(10, 0), (20, 0)]);
    }

    #[test]
    fn even_d_shifted_family_is_a_tau_power() {
        let d = build_diagram(DynkinKind::D, 4).unwrap();
        let p = specs(&d, 1..=8, &[1]);
        assert_eq!(p, vec![(1, 1), (3, 1), (5, 1), (7, 1)]);
    }

    #[test]
    fn d5_tau2_has_oriented_cycle_witness() {
        let d = build_diagram(DynkinKind::D, 5).unwrap();
        let census = Census::new(&d).unwrap();
        let w = Arc::new(build_window(&d, default_width(&d)).unwrap());
        let (has, witness) = observed_has_ct(&census, &w, FunctorSpec::new(2, 0)).unwrap();
        assert!(has);
        assert_eq!(witness.unwrap().len(), 2);
        let cyc = census.quivers.iter().position(|q| q.arrows().len() == 5 && (0..5).all(|v| q.neighbours(v).len() == 2));
        assert!(cyc.is_some_and(|i| minimal_period(&census.category, &census.objects[i]) == 2));
    }

    #[test]
    fn a3_tau4() {
        let d = build_diagram(DynkinKind::A, 3).unwrap();
        let census = Census::new(&d).unwrap();
        let w = Arc::new(build_window(&d, default_width(&d)).unwrap());
        let (has, _) = observed_has_ct(&census, &w, FunctorSpec::new(4, 0)).unwrap();
        assert!(has);
        let (has5, w5) = observed_has_ct(&census, &w, FunctorSpec::new(5, 0)).unwrap();
        assert!(!has5 && w5.is_none());
    }

    #[test]
    fn push_forward_through_the_cluster_functor_is_identity() {
        let d = build_diagram(DynkinKind::A, 3).unwrap();
        let census = Census::new(&d).unwrap();
        let o = &census.category;
        for t in &census.objects {
            assert_eq!(&push_forward(o, o, t).unwrap(), t);
        }
    }

    #[test]
    fn non_periodic_input_is_rejected() {
        let d = build_diagram(DynkinKind::A, 3).unwrap();
        let census = Census::new(&d).unwrap();
        let o = build_orbit_category_for(&d, 3);
        let t = census.objects.iter().find(|t| minimal_period(&census.category, t) == 6).unwrap();
        assert!(matches!(push_forward(&census.category, &o, t), Err(CtkError::NotPeriodic(_))));
    }

    fn build_orbit_category_for(d: &DynkinDiagram, a: i64) -> OrbitQuiver {
        crate::arquiver::build_orbit_category(d, a, 0).unwrap()
    }

    #[test]
    fn shift_is_tau_in_c2() {
        for (k, n) in [(DynkinKind::A, 4), (DynkinKind::D, 5), (DynkinKind::E, 6)] {
            let c2 = crate::arquiver::build_cluster_category(&build_diagram(k, n).unwrap(), 2).unwrap();
            for a in -3..=3 {
                for b in -2..=2 {
                    assert!(shift_acts_as_tau(&c2, a, b));
                }
            }
        }
    }
}
