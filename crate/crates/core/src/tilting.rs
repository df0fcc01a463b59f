//! Cluster tilting objects: rigidity, enumeration by clique search and by
//! mutation, and quivers of the cluster-tilted algebras.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arquiver::OrbitQuiver;
use crate::bitset::BitSet;
use crate::error::{CtkError, Result};
use crate::homcalc::ExtTable;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CTObject {
    pub members: Vec<usize>,
}

impl CTObject {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        CTObject { members }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Image under a vertex permutation.
    pub fn map(&self, perm: &[usize]) -> Self {
        CTObject::new(self.members.iter().map(|&x| perm[x]).collect())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Quiver given by a skew-symmetric exchange matrix; `b[i][j] > 0` counts arrows `i -> j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgQuiver {
    pub labels: Vec<usize>,
    pub b: Vec<Vec<i32>>,
}

impl AlgQuiver {
    pub fn from_arrows(labels: Vec<usize>, arrows: &[(usize, usize)]) -> Self {
        let n = labels.len();
        let mut b = vec![vec![0; n]; n];
        for &(s, t) in arrows {
            b[s][t] += 1;
            b[t][s] -= 1;
        }
        AlgQuiver { labels, b }
    }

    /// Unlabelled quiver on `0..n`.
    pub fn unlabelled(n: usize, arrows: &[(usize, usize)]) -> Self {
        Self::from_arrows((0..n).collect(), arrows)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Arrows by position, repeated by multiplicity.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for _ in 0..self.b[i][j].max(0) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Arrows by label.
    pub fn labelled_arrows(&self) -> Vec<(usize, usize)> {
        let mut a: Vec<(usize, usize)> =
            self.arrows().into_iter().map(|(i, j)| (self.labels[i], self.labels[j])).collect();
        a.sort_unstable();
        a
    }

    pub fn position(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Same quiver with positions sorted by label.
    pub fn normalized(&self) -> Self {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by_key(|&i| self.labels[i]);
        AlgQuiver {
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            b: idx.iter().map(|&i| idx.iter().map(|&j| self.b[i][j]).collect()).collect(),
        }
    }

    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.b[i][j] != 0).collect()
    }

    /// Sub-quiver on the given positions, labels kept.
    pub fn induced(&self, keep: &[usize]) -> Self {
        AlgQuiver {
            labels: keep.iter().map(|&i| self.labels[i]).collect(),
            b: keep.iter().map(|&i| keep.iter().map(|&j| self.b[i][j]).collect()).collect(),
        }
    }

    pub fn opposite(&self) -> Self {
        AlgQuiver { labels: self.labels.clone(), b: self.b.iter().map(|r| r.iter().map(|&v| -v).collect()).collect() }
    }
}

/// Matrix mutation at position `k`; the label at `k` is kept.
pub fn fz_mutate(q: &AlgQuiver, k: usize) -> AlgQuiver {
    let n = q.len();
    let mut b = q.b.clone();
    for i in 0..n {
        for j in 0..n {
            b[i][j] = if i == k || j == k {
                -q.b[i][j]
            } else {
                let (bik, bkj) = (q.b[i][k], q.b[k][j]);
                q.b[i][j] + (bik.abs() * bkj + bik * bkj.abs()) / 2
            };
        }
    }
    AlgQuiver { labels: q.labels.clone(), b }
}

/// Compatibility data of a quotient: rigid vertices and Ext-orthogonality.
#[derive(Clone, Debug)]
pub struct Compat {
    pub n: usize,
    pub degrees: usize,
    pub rigid: BitSet,
    pub adj: Vec<BitSet>,
    /// `reach_out[x]`: vertices `y` with some `Ext^i(x, y) != 0`.
    reach_out: Vec<BitSet>,
    reach_in: Vec<BitSet>,
}

impl Compat {
    pub fn new(ext: &ExtTable) -> Self {
        let n = ext.len();
        let mut rigid = BitSet::new(n);
        let mut adj = vec![BitSet::new(n); n];
        let mut reach_out = vec![BitSet::new(n); n];
        let mut reach_in = vec![BitSet::new(n); n];
        for x in 0..n {
            if ext.compatible(x, x) {
                rigid.insert(x);
            }
            for y in 0..n {
                if x != y && ext.compatible(x, y) {
                    adj[x].insert(y);
                }
                if (1..=ext.degrees).any(|i| ext.ext(x, y, i) != 0) {
                    reach_out[x].insert(y);
                    reach_in[y].insert(x);
                }
            }
        }
        Compat { n, degrees: ext.degrees, rigid, adj, reach_out, reach_in }
    }

    pub fn is_rigid(&self, s: &[usize]) -> bool {
        s.iter().all(|&x| self.rigid.contains(x) && s.iter().all(|&y| x == y || self.adj[x].contains(y)))
    }

    /// Rigid, and every vertex outside has nonzero Ext from and to the set.
    pub fn is_cluster_tilting(&self, s: &[usize]) -> bool {
        if !self.is_rigid(s) {
            return false;
        }
        let mut set = BitSet::new(self.n);
        let mut from = BitSet::new(self.n);
        let mut to = BitSet::new(self.n);
        for &x in s {
            set.insert(x);
            from = from.or(&self.reach_out[x]);
            to = to.or(&self.reach_in[x]);
        }
        (0..self.n).all(|y| set.contains(y) || (from.contains(y) && to.contains(y)))
    }

    /// Vertices that may replace `k` in `t`.
    pub fn complements(&self, t: &CTObject, k: usize) -> Vec<usize> {
        let mut cand = self.rigid.clone();
        for &x in &t.members {
            if x != k {
                cand = cand.and(&self.adj[x]);
            }
        }
        cand.iter().filter(|&v| !t.contains(v) && v != k).collect()
    }
}

pub fn is_rigid(ext: &ExtTable, s: &[usize]) -> bool {
    Compat::new(ext).is_rigid(s)
}

pub fn is_cluster_tilting(ext: &ExtTable, s: &[usize]) -> bool {
    Compat::new(ext).is_cluster_tilting(s)
}

/// All maximal cliques of the compatibility graph on rigid vertices.
pub fn maximal_rigid(compat: &Compat) -> Vec<CTObject> {
    let mut order: Vec<usize> = compat.rigid.iter().collect();
    order.sort_by_key(|&v| (compat.adj[v].intersection_count(&compat.rigid), v));
    let mut rank = vec![usize::MAX; compat.n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut out: Vec<CTObject> = order
        .par_iter()
        .flat_map_iter(|&v| {
            let nb = compat.adj[v].and(&compat.rigid);
            let mut p = BitSet::new(compat.n);
            let mut x = BitSet::new(compat.n);
            for u in nb.iter() {
                if rank[u] > rank[v] {
                    p.insert(u);
                } else {
                    x.insert(u);
                }
            }
            let mut found = Vec::new();
            let mut r = vec![v];
            bron_kerbosch(compat, &mut r, p, x, &mut found);
            found
        })
        .collect();
    out.sort();
    out
}

fn bron_kerbosch(c: &Compat, r: &mut Vec<usize>, p: BitSet, x: BitSet, out: &mut Vec<CTObject>) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(CTObject::new(r.clone()));
        }
        return;
    }
    let pivot = p.or(&x).iter().max_by_key(|&u| (c.adj[u].intersection_count(&p), std::cmp::Reverse(u))).unwrap();
    let mut p = p;
    let mut x = x;
    for v in p.and_not(&c.adj[pivot]).iter().collect::<Vec<_>>() {
        r.push(v);
        bron_kerbosch(c, r, p.and(&c.adj[v]), x.and(&c.adj[v]), out);
        r.pop();
        p.remove(v);
        x.insert(v);
    }
}

/// Cluster tilting objects by a covering search: each vertex outside the
/// partial object must end up in it or receive Ext from it (and send Ext to
/// it); the search branches on the vertex with the fewest ways to achieve that.
pub fn cluster_tilting_search(compat: &Compat) -> Vec<CTObject> {
    let n = compat.n;
    let mut out = Vec::new();
    let state = Cover { r: Vec::new(), p: compat.rigid.clone(), from: BitSet::new(n), to: BitSet::new(n) };
    cover_search(compat, state, &mut out);
    out.sort();
    out
}

#[derive(Clone)]
struct Cover {
    r: Vec<usize>,
    p: BitSet,
    from: BitSet,
    to: BitSet,
}

fn cover_search(c: &Compat, s: Cover, out: &mut Vec<CTObject>) {
    let mut best: Option<(usize, Vec<usize>)> = None;
    for y in 0..c.n {
        if s.r.contains(&y) || (s.from.contains(y) && s.to.contains(y)) {
            continue;
        }
        let via = if s.from.contains(y) { &c.reach_out[y] } else { &c.reach_in[y] };
        let mut opts: Vec<usize> = s.p.and(via).iter().collect();
        if s.p.contains(y) {
            opts.push(y);
        }
        if best.as_ref().is_none_or(|(k, _)| opts.len() < *k) {
            let k = opts.len();
            best = Some((k, opts));
            if k == 0 {
                return;
            }
        }
    }
    let Some((_, opts)) = best else {
        out.push(CTObject::new(s.r));
        return;
    };
    let mut p = s.p;
    for z in opts {
        if !p.contains(z) {
            continue;
        }
        let mut next = Cover {
            r: s.r.clone(),
            p: p.and(&c.adj[z]),
            from: s.from.or(&c.reach_out[z]),
            to: s.to.or(&c.reach_in[z]),
        };
        next.r.push(z);
        cover_search(c, next, out);
        p.remove(z);
    }
}

/// Cluster tilting objects by exhaustive clique search.
pub fn enumerate_brute(c: &OrbitQuiver, ext: &ExtTable) -> Result<Vec<CTObject>> {
    let compat = Compat::new(ext);
    let all: Vec<CTObject> =
        maximal_rigid(&compat).into_iter().filter(|t| compat.is_cluster_tilting(&t.members)).collect();
    if c.m.is_some() {
        if let Some(t) = all.iter().find(|t| t.len() != c.rank()) {
            return Err(CtkError::Invariant(format!("cluster tilting object {:?} has {} summands", t.members, t.len())));
        }
    }
    Ok(all)
}

/// Image of the projective slice, with the quiver of the chosen orientation.
pub fn initial_seed(c: &OrbitQuiver, ext: &ExtTable) -> Result<(CTObject, AlgQuiver)> {
    let w = &c.window;
    let labels: Vec<usize> = w.proj.iter().map(|&p| c.project(p)).collect();
    let t = CTObject::new(labels.clone());
    if t.len() != c.rank() || !Compat::new(ext).is_cluster_tilting(&t.members) {
        return Err(CtkError::Invariant("projective slice is not cluster tilting".into()));
    }
    Ok((t, AlgQuiver::from_arrows(labels, &c.diagram.arrows)))
}

pub fn mutate(compat: &Compat, t: &CTObject, k: usize) -> Result<CTObject> {
    if !t.contains(k) {
        return Err(CtkError::Mutation(format!("{k} is not a summand of {:?}", t.members)));
    }
    let cands = compat.complements(t, k);
    if cands.len() != 1 {
        return Err(CtkError::Mutation(format!("complements of {k} in {:?}: {:?}", t.members, cands)));
    }
    let mut members = t.members.clone();
    members.retain(|&x| x != k);
    members.push(cands[0]);
    Ok(CTObject::new(members))
}

#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub nodes: Vec<CTObject>,
    /// Quivers are tracked for m = 2 only.
    pub quivers: Vec<Option<AlgQuiver>>,
    /// `(u, v, k)`: node `u` becomes node `v` by exchanging summand `k`.
    pub edges: Vec<(usize, usize, usize)>,
    index: HashMap<CTObject, usize>,
}

impl ExchangeGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, t: &CTObject) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.edges.iter().filter(|&&(a, b, _)| a == u || b == u).count()
    }

    /// Nodes in canonical (sorted) order.
    pub fn sorted_nodes(&self) -> Vec<CTObject> {
        let mut v = self.nodes.clone();
        v.sort();
        v
    }
}

pub fn exchange_graph(c: &OrbitQuiver, ext: &ExtTable) -> Result<ExchangeGraph> {
    let compat = Compat::new(ext);
    let m = c.m.unwrap_or(2);
    let track = m == 2;
    let (seed, q0) = initial_seed(c, ext)?;
    let mut g = ExchangeGraph { nodes: vec![seed.clone()], quivers: vec![track.then(|| q0.normalized())], edges: Vec::new(), index: HashMap::new() };
    g.index.insert(seed, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let t = g.nodes[u].clone();
        for &k in &t.members {
            let cands = compat.complements(&t, k);
            if cands.len() != m - 1 {
                return Err(CtkError::Mutation(format!(
                    "summand {k} of {:?} has {} complements, expected {}",
                    t.members,
                    cands.len(),
                    m - 1
                )));
            }
            for v in cands {
                let mut members = t.members.clone();
                members.retain(|&x| x != k);
                members.push(v);
                let next = CTObject::new(members);
                let mutated = if track {
                    let q = g.quivers[u].as_ref().expect("tracked quiver");
                    let pos = q.position(k).expect("summand label");
                    let mut mq = fz_mutate(q, pos);
                    mq.labels[pos] = v;
                    Some(mq.normalized())
                } else {
                    None
                };
                match g.index.get(&next) {
                    Some(&w) => {
                        if track && g.quivers[w] != mutated {
                            return Err(CtkError::PathInconsistency(format!(
                                "{:?} reached with two different quivers",
                                next.members
                            )));
                        }
                        if u < w {
                            g.edges.push((u, w, k));
                        }
                    }
                    None => {
                        let w = g.nodes.len();
                        g.index.insert(next.clone(), w);
                        g.nodes.push(next);
                        g.quivers.push(mutated);
                        g.edges.push((u, w, k));
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    Ok(g)
}

pub fn quiver_of(g: &ExchangeGraph, t: &CTObject) -> Result<AlgQuiver> {
    g.index_of(t)
        .and_then(|i| g.quivers[i].clone())
        .ok_or_else(|| CtkError::UnknownObject(format!("{:?}", t.members)))
}

/// Runs both enumerators and checks that they agree.
pub fn enumerate_both(c: &OrbitQuiver, ext: &ExtTable) -> Result<(Vec<CTObject>, ExchangeGraph)> {
    let brute = enumerate_brute(c, ext)?;
    let g = exchange_graph(c, ext)?;
    let mut mutation = g.sorted_nodes();
    mutation.dedup();
    if mutation != brute {
        let only_brute = brute.iter().filter(|t| g.index_of(t).is_none()).count();
        return Err(CtkError::CountMismatch(format!(
            "clique search found {}, mutation found {} ({} only in clique search)",
            brute.len(),
            mutation.len(),
            only_brute
        )));
    }
    Ok((brute, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arquiver::build_cluster_category;
    use crate::diagram::{build_diagram, DynkinKind, DynkinKind::*};

    fn setup(k: DynkinKind, n: usize, m: usize) -> (OrbitQuiver, ExtTable) {
        let c = build_cluster_category(&build_diagram(k, n).unwrap(), m).unwrap();
        let e = ExtTable::new(&c).unwrap();
        (c, e)
    }

    #[test]
    fn a1() {
        let (c, e) = setup(A, 1, 2);
        let compat = Compat::new(&e);
        assert!(compat.is_rigid(&[]));
        assert!(!compat.is_rigid(&[0, 1]));
        assert!(compat.is_cluster_tilting(&[0]));
        assert_eq!(enumerate_brute(&c, &e).unwrap().len(), 2);
        let t = CTObject::new(vec![0]);
        assert_eq!(mutate(&compat, &t, 0).unwrap(), CTObject::new(vec![c.tau[0]]));
    }

    #[test]
    fn singletons_rigid() {
        for (k, n) in [(A, 4), (D, 5), (E, 6)] {
            let (_, e) = setup(k, n, 2);
            let compat = Compat::new(&e);
            assert_eq!(compat.rigid.count(), compat.n);
        }
    }

    #[test]
    fn covering_search_matches_cliques() {
        for (k, n, m) in [(A, 3, 2), (A, 4, 3), (D, 4, 2), (D, 5, 2), (E, 6, 2)] {
            let (c, e) = setup(k, n, m);
            assert_eq!(cluster_tilting_search(&Compat::new(&e)), enumerate_brute(&c, &e).unwrap());
        }
    }

    #[test]
    fn small_counts() {
        for (k, n, want) in [(A, 2, 5), (A, 3, 14), (A, 4, 42), (D, 4, 50), (E, 6, 833)] {
            let (c, e) = setup(k, n, 2);
            let (objs, g) = enumerate_both(&c, &e).unwrap();
            assert_eq!(objs.len(), want);
            assert!((0..g.len()).all(|u| g.degree(u) == n));
        }
    }

    #[test]
    fn fuss_catalan() {
        // m = 3: (3n choose n) / (2n + 1) for A_n
        for (n, want) in [(2, 12), (3, 55)] {
            let (c, e) = setup(A, n, 3);
            let (objs, g) = enumerate_both(&c, &e).unwrap();
            assert_eq!(objs.len(), want);
            assert!((0..g.len()).all(|u| g.degree(u) == 2 * n));
        }
    }

    #[test]
    fn rank_minus_one_not_tilting() {
        let (c, e) = setup(A, 3, 2);
        let compat = Compat::new(&e);
        for t in enumerate_brute(&c, &e).unwrap() {
            assert!(!compat.is_cluster_tilting(&t.members[1..]));
        }
    }

    #[test]
    fn seed_is_orientation() {
        let (c, e) = setup(A, 3, 2);
        let (_, q) = initial_seed(&c, &e).unwrap();
        assert_eq!(q.arrows(), vec![(0, 1), (1, 2)]);
        let (c, e) = setup(E, 6, 2);
        let (t, q) = initial_seed(&c, &e).unwrap();
        let g = exchange_graph(&c, &e).unwrap();
        assert_eq!(quiver_of(&g, &t).unwrap(), q.normalized());
    }

    #[test]
    fn pentagon() {
        let (c, e) = setup(A, 2, 2);
        let compat = Compat::new(&e);
        let (seed, _) = initial_seed(&c, &e).unwrap();
        let mut t = seed.clone();
        let mut last = usize::MAX;
        for step in 0..5 {
            // alternate the summand that was not just created
            let k = *t.members.iter().find(|&&x| x != last && (step > 0 || x == seed.members[0])).unwrap();
            let next = mutate(&compat, &t, k).unwrap();
            last = *next.members.iter().find(|x| !t.contains(**x)).unwrap();
            t = next;
        }
        assert_eq!(t, seed);
    }

    #[test]
    fn fz_examples() {
        let q = AlgQuiver::unlabelled(3, &[(0, 1), (1, 2)]);
        let m = fz_mutate(&q, 1);
        assert_eq!(m.arrows(), vec![(0, 2), (1, 0), (2, 1)]);
        assert_eq!(fz_mutate(&m, 1), q);
        let sink = fz_mutate(&q, 2);
        assert_eq!(sink.arrows(), vec![(0, 1), (2, 1)]);
    }
}
