//! The translation quiver ZΔ and its finite quotients.
//!
//! A vertex of ZΔ is `(row, level)`. For an arrow `i -> j` of the chosen
//! orientation there are arrows `(i,p) -> (j,p)` and `(j,p) -> (i,p+1)`, and
//! `τ(r,q) = (r,q-1)`. Every functor we need (τ, ν, [1] and their products)
//! acts as `(r,q) ↦ (σ(r), q + off(r))` and is stored as a [`MeshAutomorphism`].

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diagram::DynkinDiagram;
use crate::error::{CtkError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZVertex {
    pub row: usize,
    pub level: i64,
}

impl ZVertex {
    pub fn new(row: usize, level: i64) -> Self {
        ZVertex { row, level }
    }
}

impl fmt::Display for ZVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row + 1, self.level)
    }
}

/// Successors of `v` in ZΔ.
pub fn z_successors(d: &DynkinDiagram, v: ZVertex) -> Vec<ZVertex> {
    let mut out = Vec::with_capacity(3);
    for &(s, t) in &d.arrows {
        if s == v.row {
            out.push(ZVertex::new(t, v.level));
        }
        if t == v.row {
            out.push(ZVertex::new(s, v.level + 1));
        }
    }
    out
}

/// Predecessors of `v` in ZΔ.
pub fn z_predecessors(d: &DynkinDiagram, v: ZVertex) -> Vec<ZVertex> {
    let mut out = Vec::with_capacity(3);
    for &(s, t) in &d.arrows {
        if t == v.row {
            out.push(ZVertex::new(s, v.level));
        }
        if s == v.row {
            out.push(ZVertex::new(t, v.level - 1));
        }
    }
    out
}

pub fn z_tau(v: ZVertex) -> ZVertex {
    ZVertex::new(v.row, v.level - 1)
}

/// An automorphism of ZΔ commuting with τ: `(r,q) ↦ (perm[r], q + offset[r])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MeshAutomorphism {
    pub perm: Vec<usize>,
    pub offset: Vec<i64>,
}

impl MeshAutomorphism {
    pub fn identity(n: usize) -> Self {
        MeshAutomorphism { perm: (0..n).collect(), offset: vec![0; n] }
    }

    /// τ^k.
    pub fn tau_power(n: usize, k: i64) -> Self {
        MeshAutomorphism { perm: (0..n).collect(), offset: vec![-k; n] }
    }

    pub fn apply(&self, v: ZVertex) -> ZVertex {
        ZVertex::new(self.perm[v.row], v.level + self.offset[v.row])
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut offset = vec![0; n];
        for r in 0..n {
            let mid = other.perm[r];
            perm[r] = self.perm[mid];
            offset[r] = other.offset[r] + self.offset[mid];
        }
        MeshAutomorphism { perm, offset }
    }

    pub fn inverse(&self) -> Self {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut offset = vec![0; n];
        for r in 0..n {
            perm[self.perm[r]] = r;
            offset[self.perm[r]] = -self.offset[r];
        }
        MeshAutomorphism { perm, offset }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.perm.len());
        for _ in 0..k.unsigned_abs() {
            acc = base.compose(&acc);
        }
        acc
    }

    /// Order of the row permutation.
    pub fn row_order(&self) -> usize {
        let n = self.perm.len();
        let mut seen = vec![false; n];
        let mut l = 1;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut r = s;
            while !seen[r] {
                seen[r] = true;
                r = self.perm[r];
                len += 1;
            }
            l = lcm(l, len);
        }
        l
    }

    /// `Some(k)` when this is τ^k.
    pub fn as_tau_power(&self) -> Option<i64> {
        let first = *self.offset.first()?;
        let pure = self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.offset.iter().all(|&o| o == first);
        pure.then_some(-first)
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a as u64, b as u64) as usize * b
}

/// A slice of ZΔ holding the module category and the Serre functor.
#[derive(Clone, Debug)]
pub struct DerivedWindow {
    pub diagram: DynkinDiagram,
    pub lo: i64,
    pub hi: i64,
    pub proj: Vec<ZVertex>,
    pub inj: Vec<ZVertex>,
    pub module_slice: Vec<ZVertex>,
    dims: HashMap<ZVertex, Vec<u32>>,
    pub nu: MeshAutomorphism,
    pub shift: MeshAutomorphism,
}

pub fn default_width(d: &DynkinDiagram) -> i64 {
    3 * d.coxeter_number() as i64 + 4
}

pub fn build_window(d: &DynkinDiagram, width: i64) -> Result<DerivedWindow> {
    let h = d.coxeter_number() as i64;
    if width < 3 * h {
        return Err(CtkError::WindowTooSmall(format!("width {width} < 3h = {}", 3 * h)));
    }
    let n = d.rank;

    // p_i = p_j + 1 for every arrow i -> j.
    let mut plevel: Vec<Option<i64>> = vec![None; n];
    plevel[0] = Some(0);
    let mut changed = true;
    while changed {
        changed = false;
        for &(s, t) in &d.arrows {
            match (plevel[s], plevel[t]) {
                (Some(ps), None) => {
                    plevel[t] = Some(ps - 1);
                    changed = true;
                }
                (None, Some(pt)) => {
                    plevel[s] = Some(pt + 1);
                    changed = true;
                }
                _ => {}
            }
        }
    }
    let plevel: Vec<i64> = plevel.into_iter().map(|p| p.expect("connected diagram")).collect();
    let min = *plevel.iter().min().unwrap();
    let proj: Vec<ZVertex> = (0..n).map(|i| ZVertex::new(i, plevel[i] - min)).collect();

    let proj_dim: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| d.path_count(i, j)).collect()).collect();
    let inj_dim: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| d.path_count(j, i)).collect()).collect();

    let order = d.topological_order();
    let mut dims: HashMap<ZVertex, Vec<u32>> = HashMap::new();
    let mut module_slice = Vec::new();
    let mut inj: Vec<Option<ZVertex>> = vec![None; n];
    let mut active = vec![false; n];
    let mut finished = vec![false; n];
    let mut level = 0i64;
    let cap = 4 * h + 8;
    while finished.iter().any(|f| !f) {
        if level > cap {
            return Err(CtkError::Invariant(format!("knitting of {d} did not terminate")));
        }
        for &r in &order {
            let v = ZVertex::new(r, level);
            let dim: Vec<u32> = if v == proj[r] {
                active[r] = true;
                proj_dim[r].clone()
            } else if active[r] {
                let mut acc = vec![0i64; n];
                for p in z_predecessors(d, v) {
                    if let Some(pd) = dims.get(&p) {
                        for (a, &x) in acc.iter_mut().zip(pd) {
                            *a += i64::from(x);
                        }
                    }
                }
                let prev = &dims[&z_tau(v)];
                for (a, &x) in acc.iter_mut().zip(prev) {
                    *a -= i64::from(x);
                }
                if acc.iter().any(|&x| x < 0) || acc.iter().all(|&x| x == 0) {
                    return Err(CtkError::Invariant(format!("knitting produced a non-root at {v}")));
                }
                acc.into_iter().map(|x| x as u32).collect()
            } else {
                continue;
            };
            if let Some(j) = (0..n).find(|&j| inj_dim[j] == dim) {
                inj[j] = Some(v);
                active[r] = false;
                finished[r] = true;
            }
            dims.insert(v, dim);
            module_slice.push(v);
        }
        level += 1;
    }
    if module_slice.len() != d.positive_roots() {
        return Err(CtkError::Invariant(format!(
            "module slice of {d} has {} vertices, expected {}",
            module_slice.len(),
            d.positive_roots()
        )));
    }
    let inj: Vec<ZVertex> = inj
        .into_iter()
        .enumerate()
        .map(|(j, v)| v.ok_or_else(|| CtkError::Invariant(format!("injective I_{} not reached", j + 1))))
        .collect::<Result<_>>()?;

    let nu = MeshAutomorphism {
        perm: (0..n).map(|i| inj[i].row).collect(),
        offset: (0..n).map(|i| inj[i].level - proj[i].level).collect(),
    };
    let shift = MeshAutomorphism::tau_power(n, -1).compose(&nu);
    let lo = -(h + 2);
    Ok(DerivedWindow { diagram: d.clone(), lo, hi: lo + width - 1, proj, inj, module_slice, dims, nu, shift })
}

impl DerivedWindow {
    pub fn rank(&self) -> usize {
        self.diagram.rank
    }

    pub fn in_span(&self, v: ZVertex) -> bool {
        self.lo <= v.level && v.level <= self.hi
    }

    pub fn tau(&self, v: ZVertex) -> ZVertex {
        z_tau(v)
    }

    pub fn successors(&self, v: ZVertex) -> Vec<ZVertex> {
        z_successors(&self.diagram, v)
    }

    pub fn predecessors(&self, v: ZVertex) -> Vec<ZVertex> {
        z_predecessors(&self.diagram, v)
    }

    /// All arrows with both ends inside the span.
    pub fn arrows(&self) -> Vec<(ZVertex, ZVertex)> {
        let mut out = Vec::new();
        for q in self.lo..=self.hi {
            for r in 0..self.rank() {
                let v = ZVertex::new(r, q);
                for w in self.successors(v) {
                    if self.in_span(w) {
                        out.push((v, w));
                    }
                }
            }
        }
        out
    }

    pub fn is_module(&self, v: ZVertex) -> bool {
        self.dims.contains_key(&v)
    }

    pub fn module_dim(&self, v: ZVertex) -> Option<&[u32]> {
        self.dims.get(&v).map(Vec::as_slice)
    }

    /// τ^a[b] as an automorphism of ZΔ.
    pub fn functor(&self, a: i64, b: i64) -> MeshAutomorphism {
        MeshAutomorphism::tau_power(self.rank(), a).compose(&self.shift.pow(b))
    }

    /// Serre functor ν = τ[1].
    pub fn serre(&self, v: ZVertex) -> ZVertex {
        self.nu.apply(v)
    }
}

/// `F = τ^a [b]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FunctorSpec {
    pub a: i64,
    pub b: i64,
}

impl FunctorSpec {
    pub fn new(a: i64, b: i64) -> Self {
        FunctorSpec { a, b }
    }

    /// The functor τ⁻¹[m−1] defining the m-cluster category.
    pub fn cluster(m: usize) -> Self {
        FunctorSpec { a: -1, b: m as i64 - 1 }
    }
}

impl fmt::Display for FunctorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.b {
            0 => write!(f, "τ^{}", self.a),
            b => write!(f, "τ^{}[{}]", self.a, b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauOrbit {
    /// Rows of ZΔ whose vertices land in this orbit.
    pub rows: Vec<usize>,
    pub base_row: usize,
    pub len: usize,
    pub first: usize,
}

/// A finite quotient of ZΔ by a freely acting `F = τ^a[b]`.
///
/// Vertex `first(o) + p` is the image of `(base_row(o), p)`.
#[derive(Clone, Debug)]
pub struct OrbitQuiver {
    pub diagram: DynkinDiagram,
    pub functor: FunctorSpec,
    pub m: Option<usize>,
    pub window: Arc<DerivedWindow>,
    pub generator: MeshAutomorphism,
    pub orbits: Vec<TauOrbit>,
    pub arrows: Vec<(usize, usize)>,
    pub tau: Vec<usize>,
    pub tau_inv: Vec<usize>,
    pub shift: Vec<usize>,
    pub shift_inv: Vec<usize>,
    pub nu: Vec<usize>,
    pub alpha: Option<Vec<bool>>,
    pub phi: Option<Vec<Option<usize>>>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    vertex_orbit: Vec<usize>,
    row_to_base: Vec<(usize, i64)>,
    row_orbit: Vec<usize>,
    /// |level displacement| of F^k where k is the order of F's row permutation.
    pub period: i64,
    pub row_order: usize,
}

pub type ClusterQuiver = OrbitQuiver;

pub fn build_cluster_category(d: &DynkinDiagram, m: usize) -> Result<ClusterQuiver> {
    if m < 2 {
        return Err(CtkError::InvalidDiagram(format!("m-cluster category needs m >= 2, got {m}")));
    }
    let w = Arc::new(build_window(d, default_width(d))?);
    let mut q = OrbitQuiver::from_window(w, FunctorSpec::cluster(m))?;
    q.m = Some(m);
    Ok(q)
}

pub fn build_orbit_category(d: &DynkinDiagram, a: i64, b: i64) -> Result<OrbitQuiver> {
    let w = Arc::new(build_window(d, default_width(d))?);
    OrbitQuiver::from_window(w, FunctorSpec::new(a, b))
}

impl OrbitQuiver {
    pub fn from_window(window: Arc<DerivedWindow>, functor: FunctorSpec) -> Result<Self> {
        let d = window.diagram.clone();
        let n = d.rank;
        let f = window.functor(functor.a, functor.b);
        let k = f.row_order();
        let fk = f.pow(k as i64);
        let shift = fk.offset[0];
        if fk.offset.iter().any(|&o| o != shift) {
            return Err(CtkError::Invariant("power of functor is not a translation".into()));
        }
        let period = shift.abs();
        let powers: Vec<MeshAutomorphism> = (0..k as i64).map(|j| f.pow(j)).collect();
        for (j, g) in powers.iter().enumerate().skip(1) {
            for r in 0..n {
                let fixed = if period == 0 { g.offset[r] == 0 } else { g.offset[r].rem_euclid(period) == 0 };
                if g.perm[r] == r && fixed {
                    let e = if period == 0 { j as i64 } else { j as i64 - k as i64 * (g.offset[r] / shift) };
                    return Err(CtkError::NotFree(format!("every vertex ({}, q) under F^{e}", r + 1)));
                }
            }
        }
        if shift == 0 {
            return Err(CtkError::InfiniteQuotient);
        }

        let mut row_orbit = vec![usize::MAX; n];
        let mut orbits: Vec<TauOrbit> = Vec::new();
        let mut first = 0;
        for r0 in 0..n {
            if row_orbit[r0] != usize::MAX {
                continue;
            }
            let mut rows = vec![r0];
            let mut r = f.perm[r0];
            while r != r0 {
                rows.push(r);
                r = f.perm[r];
            }
            rows.sort_unstable();
            let mut g = period as u64;
            for p in &powers {
                if p.perm[r0] == r0 {
                    g = gcd(g, p.offset[r0].unsigned_abs());
                }
            }
            for &r in &rows {
                row_orbit[r] = orbits.len();
            }
            orbits.push(TauOrbit { rows, base_row: r0, len: g as usize, first });
            first += g as usize;
        }
        let count = first;
        let row_to_base: Vec<(usize, i64)> = (0..n)
            .map(|r| {
                let base = orbits[row_orbit[r]].base_row;
                let j = (0..k).find(|&j| powers[j].perm[r] == base).expect("row in orbit");
                (j, powers[j].offset[r])
            })
            .collect();
        let mut vertex_orbit = vec![0; count];
        for (o, orb) in orbits.iter().enumerate() {
            for p in 0..orb.len {
                vertex_orbit[orb.first + p] = o;
            }
        }

        let mut q = OrbitQuiver {
            diagram: d.clone(),
            functor,
            m: None,
            window: window.clone(),
            generator: f,
            orbits,
            arrows: Vec::new(),
            tau: Vec::new(),
            tau_inv: Vec::new(),
            shift: Vec::new(),
            shift_inv: Vec::new(),
            nu: Vec::new(),
            alpha: None,
            phi: None,
            succ: vec![Vec::new(); count],
            pred: vec![Vec::new(); count],
            vertex_orbit,
            row_to_base,
            row_orbit,
            period,
            row_order: k,
        };
        for x in 0..count {
            let u = q.lift(x);
            for w in z_successors(&d, u) {
                let y = q.project(w);
                q.arrows.push((x, y));
                q.succ[x].push(y);
                q.pred[y].push(x);
            }
        }
        for list in q.succ.iter_mut().chain(q.pred.iter_mut()) {
            list.sort_unstable();
        }
        q.tau = q.induced(&MeshAutomorphism::tau_power(n, 1));
        q.tau_inv = q.induced(&MeshAutomorphism::tau_power(n, -1));
        q.shift = q.induced(&window.shift);
        q.shift_inv = q.induced(&window.shift.inverse());
        q.nu = q.induced(&window.nu);

        if let Some((f1, f2)) = d.fork() {
            let alpha: Vec<bool> = (0..count).map(|x| {
                let r = q.lift(x).row;
                r == f1 || r == f2
            }).collect();
            let mut phi = vec![None; count];
            for x in 0..count {
                if !alpha[x] {
                    continue;
                }
                let beta: Vec<usize> = q.succ[x].iter().copied().filter(|&y| !alpha[y]).collect();
                if beta.len() != 1 {
                    return Err(CtkError::Invariant(format!("α-vertex {x} has {} β-successors", beta.len())));
                }
                let others: Vec<usize> =
                    q.pred[beta[0]].iter().copied().filter(|&z| alpha[z] && z != x).collect();
                if others.len() != 1 {
                    return Err(CtkError::Invariant(format!("α-vertex {x} has no unique flip partner")));
                }
                phi[x] = Some(others[0]);
            }
            q.alpha = Some(alpha);
            q.phi = Some(phi);
        }
        Ok(q)
    }

    pub fn rank(&self) -> usize {
        self.diagram.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_orbit.len()
    }

    pub fn orbit_of(&self, x: usize) -> usize {
        self.vertex_orbit[x]
    }

    pub fn position(&self, x: usize) -> usize {
        x - self.orbits[self.vertex_orbit[x]].first
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.len).collect()
    }

    pub fn lift(&self, x: usize) -> ZVertex {
        let o = &self.orbits[self.vertex_orbit[x]];
        ZVertex::new(o.base_row, (x - o.first) as i64)
    }

    pub fn project(&self, v: ZVertex) -> usize {
        let o = &self.orbits[self.row_orbit[v.row]];
        let (_, off) = self.row_to_base[v.row];
        o.first + (v.level + off).rem_euclid(o.len as i64) as usize
    }

    /// The permutation of vertices induced by an automorphism of ZΔ commuting with F.
    pub fn induced(&self, g: &MeshAutomorphism) -> Vec<usize> {
        (0..self.vertex_count()).map(|x| self.project(g.apply(self.lift(x)))).collect()
    }

    pub fn successors(&self, x: usize) -> &[usize] {
        &self.succ[x]
    }

    pub fn predecessors(&self, x: usize) -> &[usize] {
        &self.pred[x]
    }

    pub fn is_alpha(&self, x: usize) -> bool {
        self.alpha.as_ref().is_some_and(|a| a[x])
    }

    pub fn flip(&self, x: usize) -> usize {
        self.phi.as_ref().and_then(|p| p[x]).unwrap_or(x)
    }

    pub fn label(&self, x: usize) -> String {
        format!("o{}p{}", self.orbit_of(x), self.position(x))
    }

    /// τ^s[t](x).
    pub fn apply_functor(&self, s: i64, t: i64, x: usize) -> usize {
        let mut v = x;
        let (tp, tp_inv) = (&self.tau, &self.tau_inv);
        for _ in 0..s.unsigned_abs() {
            v = if s > 0 { tp[v] } else { tp_inv[v] };
        }
        for _ in 0..t.unsigned_abs() {
            v = if t > 0 { self.shift[v] } else { self.shift_inv[v] };
        }
        v
    }

    pub fn tau_orbit(&self, x: usize) -> Vec<usize> {
        let mut out = vec![x];
        let mut y = self.tau[x];
        while y != x {
            out.push(y);
            y = self.tau[y];
        }
        out
    }

    pub fn to_dot(&self, with_tau: bool) -> String {
        let mut s = format!("digraph \"{}_{}\" {{\n", self.diagram.name(), self.functor)
            .replace("τ", "tau");
        for x in 0..self.vertex_count() {
            s.push_str(&format!("  {} [label=\"{}\"];\n", x, self.label(x)));
        }
        for &(x, y) in &self.arrows {
            s.push_str(&format!("  {x} -> {y};\n"));
        }
        if with_tau {
            for x in 0..self.vertex_count() {
                s.push_str(&format!("  {} -> {} [style=dashed];\n", x, self.tau[x]));
            }
        }
        s.push_str("}\n");
        s
    }
}

pub fn apply_functor(c: &OrbitQuiver, s: i64, t: i64, v: usize) -> usize {
    c.apply_functor(s, t, v)
}

pub fn tau_orbit(c: &OrbitQuiver, v: usize) -> Vec<usize> {
    c.tau_orbit(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{build_diagram, DynkinKind, DynkinKind::*};

    fn cat(k: DynkinKind, n: usize) -> ClusterQuiver {
        build_cluster_category(&build_diagram(k, n).unwrap(), 2).unwrap()
    }

    fn sorted(mut v: Vec<usize>) -> Vec<usize> {
        v.sort_unstable();
        v
    }

    #[test]
    fn window_examples() {
        let a1 = build_window(&build_diagram(A, 1).unwrap(), 12).unwrap();
        assert_eq!(a1.module_slice.len(), 1);
        assert_eq!(a1.nu.offset, vec![0]);
        assert_eq!(a1.shift.offset, vec![1]);
        let a2 = build_window(&build_diagram(A, 2).unwrap(), 12).unwrap();
        assert_eq!(a2.module_slice.len(), 3);
        assert_eq!(a2.module_dim(a2.proj[0]).unwrap(), &[1, 1]);
        let d4 = build_diagram(D, 4).unwrap();
        assert_eq!(build_window(&d4, 30).unwrap().module_slice.len(), 12);
        assert!(build_window(&d4, 10).is_err());
    }

    #[test]
    fn orbit_shapes() {
        assert_eq!(cat(A, 3).orbit_lengths(), vec![6, 3]);
        assert_eq!(cat(A, 3).vertex_count(), 9);
        assert_eq!(sorted(cat(E, 6).orbit_lengths()), vec![7, 7, 14, 14]);
        assert_eq!(cat(E, 7).orbit_lengths(), vec![10; 7]);
        assert_eq!(cat(E, 8).orbit_lengths(), vec![16; 8]);
        let d5 = cat(D, 5);
        assert_eq!(d5.vertex_count(), 25);
        assert_eq!(sorted(d5.orbit_lengths()), vec![5, 5, 5, 10]);
        let d6 = cat(D, 6);
        assert_eq!(d6.orbit_lengths(), vec![6; 6]);
    }

    #[test]
    fn cluster_relations() {
        for (k, n) in [(A, 1), (A, 4), (D, 4), (D, 5), (E, 6)] {
            let c = cat(k, n);
            let h = c.diagram.coxeter_number();
            assert_eq!(c.vertex_count(), n * (h + 2) / 2);
            assert_eq!(c.shift, c.tau, "{k:?}{n}");
            for x in 0..c.vertex_count() {
                assert_eq!(c.apply_functor(-1, 1, x), x);
                assert_eq!(c.tau[c.tau_inv[x]], x);
            }
        }
    }

    #[test]
    fn tau_power_flips_alpha_in_odd_d() {
        let c = cat(D, 5);
        for x in 0..c.vertex_count() {
            if c.is_alpha(x) {
                assert_eq!(c.apply_functor(5, 0, x), c.flip(x));
                assert_ne!(c.flip(x), x);
                assert_eq!(c.flip(c.flip(x)), x);
            }
        }
    }

    #[test]
    fn flip_is_fork_swap() {
        for n in 4..=7 {
            let c = cat(D, n);
            let (f1, f2) = c.diagram.fork().unwrap();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(f1, f2);
            let swap = MeshAutomorphism { perm, offset: vec![0; n] };
            let image = c.induced(&swap);
            for x in 0..c.vertex_count() {
                if c.is_alpha(x) {
                    assert_eq!(c.flip(x), image[x]);
                }
            }
        }
    }

    #[test]
    fn cluster_equals_orbit_with_same_functor() {
        let d = build_diagram(A, 3).unwrap();
        let c = build_cluster_category(&d, 2).unwrap();
        let o = build_orbit_category(&d, -1, 1).unwrap();
        assert_eq!(c.arrows, o.arrows);
        assert_eq!(c.tau, o.tau);
    }

    #[test]
    fn identity_functor_rejected() {
        let d = build_diagram(D, 4).unwrap();
        assert_eq!(build_orbit_category(&d, 0, 0).unwrap_err(), CtkError::InfiniteQuotient);
        let a3 = build_diagram(A, 3).unwrap();
        assert!(matches!(build_orbit_category(&a3, 2, 1), Err(CtkError::NotFree(_))));
    }

    #[test]
    fn cylinder() {
        for n in 1..=5 {
            let d = build_diagram(A, n).unwrap();
            let o = build_orbit_category(&d, n as i64 + 3, 0).unwrap();
            assert_eq!(o.orbit_lengths(), vec![n + 3; n]);
        }
    }

    #[test]
    fn serre_relations() {
        for (k, n) in [(A, 5), (D, 5), (D, 6), (E, 6), (E, 8)] {
            let d = build_diagram(k, n).unwrap();
            let w = build_window(&d, default_width(&d)).unwrap();
            let t = MeshAutomorphism::tau_power(n, 1);
            assert_eq!(w.shift.compose(&t), w.nu);
            assert_eq!(t.compose(&w.shift), w.nu);
            for i in 0..n {
                assert_eq!(w.nu.apply(w.proj[i]), w.inj[i]);
            }
            let h = d.coxeter_number() as i64;
            // [2] = τ^{-h}
            assert_eq!(w.shift.pow(2), MeshAutomorphism::tau_power(n, -h));
        }
    }

    #[test]
    fn nu_preserves_arrows() {
        for (k, n) in [(A, 4), (D, 5), (E, 6)] {
            let d = build_diagram(k, n).unwrap();
            let w = build_window(&d, default_width(&d)).unwrap();
            for (u, v) in w.arrows() {
                let (fu, fv) = (w.nu.apply(u), w.nu.apply(v));
                assert!(z_successors(&d, fu).contains(&fv));
            }
        }
    }

    #[test]
    fn mesh_consistency() {
        for (k, n) in [(A, 5), (D, 6), (E, 7)] {
            let d = build_diagram(k, n).unwrap();
            let w = build_window(&d, default_width(&d)).unwrap();
            for &v in &w.module_slice {
                if w.proj.contains(&v) {
                    continue;
                }
                let mut into: Vec<ZVertex> = w.predecessors(v);
                let mut out: Vec<ZVertex> = w.successors(w.tau(v));
                into.sort();
                out.sort();
                assert_eq!(into, out);
            }
        }
    }

    #[test]
    fn quotient_is_well_defined() {
        let d = build_diagram(D, 5).unwrap();
        let o = build_orbit_category(&d, 3, 1).unwrap();
        let f = &o.generator;
        for x in 0..o.vertex_count() {
            let u = o.lift(x);
            assert_eq!(o.project(f.apply(u)), x);
            for v in z_successors(&d, u) {
                assert!(z_successors(&d, f.apply(u)).contains(&f.apply(v)));
            }
        }
    }
}
