//! Hom and Ext dimensions.
//!
//! `dim Hom(x, -)` on ZΔ is the hammock starting at `x`, computed by the
//! clamped knitting recursion. Ext in a quotient by `F` is the orbit sum
//! `Σ_p dim Hom(x, [i] F^p y)`.

use std::collections::BTreeMap;

use crate::arquiver::{z_predecessors, z_tau, DerivedWindow, OrbitQuiver, ZVertex};
use crate::diagram::DynkinDiagram;
use crate::error::{CtkError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hammock {
    pub source: ZVertex,
    pub dims: BTreeMap<ZVertex, u32>,
}

impl Hammock {
    pub fn get(&self, y: ZVertex) -> u32 {
        self.dims.get(&y).copied().unwrap_or(0)
    }
}

pub fn hammock(w: &DerivedWindow, x: ZVertex) -> Result<Hammock> {
    let h = w.diagram.coxeter_number() as i64;
    if x.level + h > w.hi {
        return Err(CtkError::WindowTooSmall(format!("{x} is closer than h to the right edge")));
    }
    let order = w.diagram.topological_order();
    let mut dims: BTreeMap<ZVertex, u32> = BTreeMap::new();
    for level in x.level..=w.hi {
        let mut any = false;
        for &r in &order {
            let y = ZVertex::new(r, level);
            let val = if y == x {
                1
            } else {
                let s: i64 = z_predecessors(&w.diagram, y)
                    .into_iter()
                    .map(|z| i64::from(dims.get(&z).copied().unwrap_or(0)))
                    .sum();
                let t = i64::from(dims.get(&z_tau(y)).copied().unwrap_or(0));
                (s - t).max(0) as u32
            };
            if val > 0 {
                dims.insert(y, val);
                any = true;
            }
        }
        if level == w.hi && any {
            return Err(CtkError::WindowTooSmall(format!("hammock of {x} reaches the window edge")));
        }
        if !any && level > x.level {
            break;
        }
    }
    Ok(Hammock { source: x, dims })
}

/// One hammock per row, starting at level 0; hammocks are τ-invariant.
#[derive(Clone, Debug)]
pub struct HomTable {
    rank: usize,
    // rows[r][s][k] = dim Hom((r,0), (s,k))
    rows: Vec<Vec<Vec<u32>>>,
    pub reach: i64,
}

impl HomTable {
    pub fn new(w: &DerivedWindow) -> Result<Self> {
        let n = w.rank();
        let mut rows = vec![vec![Vec::new(); n]; n];
        let mut reach = 0;
        for (r, per_row) in rows.iter_mut().enumerate() {
            let hm = hammock(w, ZVertex::new(r, 0))?;
            for (&y, &v) in &hm.dims {
                let k = y.level as usize;
                let col = &mut per_row[y.row];
                if col.len() <= k {
                    col.resize(k + 1, 0);
                }
                col[k] = v;
                reach = reach.max(y.level);
            }
        }
        Ok(HomTable { rank: n, rows, reach })
    }

    pub fn hom(&self, x: ZVertex, y: ZVertex) -> u32 {
        let k = y.level - x.level;
        if k < 0 {
            return 0;
        }
        self.rows[x.row][y.row].get(k as usize).copied().unwrap_or(0)
    }

    /// Support of `Hom(x, -)` with multiplicities.
    pub fn support(&self, x: ZVertex) -> Vec<(ZVertex, u32)> {
        let mut out = Vec::new();
        for s in 0..self.rank {
            for (k, &v) in self.rows[x.row][s].iter().enumerate() {
                if v > 0 {
                    out.push((ZVertex::new(s, x.level + k as i64), v));
                }
            }
        }
        out
    }
}

pub fn hom_derived(w: &DerivedWindow, x: ZVertex, y: ZVertex, k: i64) -> Result<u32> {
    let target = w.shift.pow(k).apply(y);
    let hm = hammock(w, x)?;
    Ok(hm.get(target))
}

pub fn dim_vector(w: &DerivedWindow, x: ZVertex) -> Option<Vec<u32>> {
    w.module_dim(x).map(<[u32]>::to_vec)
}

/// `⟨u, v⟩ = Σ u_i v_i − Σ_{i→j} u_i v_j`.
pub fn euler_form(d: &DynkinDiagram, u: &[u32], v: &[u32]) -> i64 {
    let diag: i64 = u.iter().zip(v).map(|(&a, &b)| i64::from(a) * i64::from(b)).sum();
    let off: i64 = d.arrows.iter().map(|&(i, j)| i64::from(u[i]) * i64::from(v[j])).sum();
    diag - off
}

/// Ext^i between vertices of a quotient, for `1 <= i <= degrees`.
#[derive(Clone, Debug)]
pub struct ExtTable {
    n: usize,
    pub degrees: usize,
    data: Vec<Vec<u32>>,
    pub homs: HomTable,
}

impl ExtTable {
    /// Degrees `1..m` for an m-cluster category, degree 1 otherwise.
    pub fn new(q: &OrbitQuiver) -> Result<Self> {
        let degrees = q.m.map_or(1, |m| m - 1);
        Self::with_degrees(q, degrees)
    }

    pub fn with_degrees(q: &OrbitQuiver, degrees: usize) -> Result<Self> {
        let homs = HomTable::new(&q.window)?;
        let n = q.vertex_count();
        let mut data = Vec::with_capacity(degrees);
        for i in 1..=degrees {
            let back = q.window.shift.pow(-(i as i64));
            let mut table = vec![0u32; n * n];
            for x in 0..n {
                for (w, v) in homs.support(q.lift(x)) {
                    table[x * n + q.project(back.apply(w))] += v;
                }
            }
            data.push(table);
        }
        Ok(ExtTable { n, degrees, data, homs })
    }

    pub fn ext(&self, x: usize, y: usize, i: usize) -> u32 {
        self.data[i - 1][x * self.n + y]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Ext vanishes in both directions in every degree.
    pub fn compatible(&self, x: usize, y: usize) -> bool {
        (1..=self.degrees).all(|i| self.ext(x, y, i) == 0 && self.ext(y, x, i) == 0)
    }
}

/// Number of F-steps that can reach the hammock of any lift from any lift.
pub fn orbit_sum_bound(q: &OrbitQuiver, homs: &HomTable, i: usize) -> i64 {
    let k = q.row_order as i64;
    let max_shift = q.window.shift.offset.iter().map(|o| o.abs()).max().unwrap_or(0);
    let max_f = (0..k).flat_map(|j| q.generator.pow(j).offset).map(i64::abs).max().unwrap_or(0);
    let max_len = q.orbits.iter().map(|o| o.len as i64).max().unwrap_or(0);
    let span = homs.reach + i as i64 * max_shift + max_f + max_len + 2;
    k * (span / q.period + 1) + k
}

/// `Σ_{|p| <= bound} dim Hom(lift x, [i] F^p lift y)`.
pub fn ext_by_orbit_sum(q: &OrbitQuiver, homs: &HomTable, x: usize, y: usize, i: usize, bound: i64) -> u32 {
    let u = q.lift(x);
    let v = q.lift(y);
    let sh = q.window.shift.pow(i as i64);
    let f = &q.generator;
    let finv = f.inverse();
    let mut total = homs.hom(u, sh.apply(v));
    let (mut up, mut down) = (v, v);
    for _ in 0..bound {
        up = f.apply(up);
        down = finv.apply(down);
        total += homs.hom(u, sh.apply(up)) + homs.hom(u, sh.apply(down));
    }
    total
}

pub fn ext_cluster(c: &OrbitQuiver, t: &ExtTable, x: usize, y: usize, i: usize) -> Result<u32> {
    let m = c.m.unwrap_or(2);
    if i == 0 || i >= m || i > t.degrees {
        return Err(CtkError::ExtDegree { i, m });
    }
    Ok(t.ext(x, y, i))
}

pub fn ext_orbit(o: &OrbitQuiver, t: &ExtTable, x: usize, y: usize, i: usize) -> Result<u32> {
    ext_cluster(o, t, x, y, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arquiver::{build_cluster_category, build_orbit_category, build_window, default_width};
    use crate::diagram::{build_diagram, DynkinKind, DynkinKind::*};

    fn window(k: DynkinKind, n: usize) -> DerivedWindow {
        let d = build_diagram(k, n).unwrap();
        build_window(&d, default_width(&d)).unwrap()
    }

    #[test]
    fn a2_projectives() {
        let w = window(A, 2);
        assert_eq!(hom_derived(&w, w.proj[1], w.proj[0], 0).unwrap(), 1);
        assert_eq!(hom_derived(&w, w.proj[0], w.proj[1], 0).unwrap(), 0);
    }

    #[test]
    fn source_and_translate() {
        let w = window(D, 5);
        for &x in &w.module_slice {
            let hm = hammock(&w, x).unwrap();
            assert_eq!(hm.get(x), 1);
            assert_eq!(hm.get(z_tau(x)), 0);
        }
    }

    #[test]
    fn a3_hom_from_simple_projective() {
        // 1 -> 2 -> 3: P_3 is simple; P_1 has length 3.
        let w = window(A, 3);
        let total = |x: ZVertex| -> u32 {
            w.module_slice.iter().map(|&y| hom_derived(&w, x, y, 0).unwrap()).sum()
        };
        // Interval modules [i, j]; Hom([a,b],[c,d]) = 1 iff c <= a <= d <= b.
        let interval = |v: ZVertex| {
            let dv = w.module_dim(v).unwrap();
            let lo = dv.iter().position(|&c| c > 0).unwrap();
            let hi = dv.iter().rposition(|&c| c > 0).unwrap();
            (lo, hi)
        };
        for &x in &w.module_slice {
            let (a, b) = interval(x);
            let oracle = w
                .module_slice
                .iter()
                .filter(|&&y| {
                    let (c, dd) = interval(y);
                    c <= a && a <= dd && dd <= b
                })
                .count() as u32;
            assert_eq!(total(x), oracle, "{x}");
        }
        assert_eq!(total(w.proj[0]), 3);
        assert_eq!(total(w.proj[2]), 3);
    }

    #[test]
    fn a3_ext_of_simples() {
        let w = window(A, 3);
        let simple = |i: usize| {
            *w.module_slice
                .iter()
                .find(|&&v| {
                    let d = w.module_dim(v).unwrap();
                    d.iter().sum::<u32>() == 1 && d[i] == 1
                })
                .unwrap()
        };
        let (s1, s2) = (simple(0), simple(1));
        // Ext^1(S_1, S_2) = 1 for the arrow 1 -> 2; the other direction vanishes.
        assert_eq!(hom_derived(&w, s1, s2, 1).unwrap(), 1);
        assert_eq!(hom_derived(&w, s2, s1, 1).unwrap(), 0);
    }

    #[test]
    fn top_root_of_e8() {
        let w = window(E, 8);
        let top = w.module_slice.iter().map(|&v| w.module_dim(v).unwrap().iter().sum::<u32>()).max().unwrap();
        assert_eq!(top, 29);
    }

    #[test]
    fn euler_examples() {
        let d = build_diagram(A, 3).unwrap();
        assert_eq!(euler_form(&d, &[1, 0, 0], &[1, 0, 0]), 1);
        assert_eq!(euler_form(&d, &[1, 0, 0], &[0, 0, 1]), 0);
        let w = window(E, 6);
        for &v in &w.module_slice {
            let dv = w.module_dim(v).unwrap();
            assert_eq!(euler_form(&w.diagram, dv, dv), 1);
            for i in 0..6 {
                let p = w.module_dim(w.proj[i]).unwrap();
                assert_eq!(euler_form(&w.diagram, p, dv), i64::from(dv[i]));
            }
        }
    }

    #[test]
    fn ext_a1() {
        let c = build_cluster_category(&build_diagram(A, 1).unwrap(), 2).unwrap();
        let t = ExtTable::new(&c).unwrap();
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(ext_cluster(&c, &t, 0, 0, 1).unwrap(), 0);
        assert_eq!(ext_cluster(&c, &t, 0, c.tau[0], 1).unwrap(), 1);
        assert!(ext_cluster(&c, &t, 0, 0, 2).is_err());
    }

    #[test]
    fn ext_table_matches_orbit_sum_and_saturates() {
        let cases: Vec<OrbitQuiver> = vec![
            build_cluster_category(&build_diagram(A, 4).unwrap(), 2).unwrap(),
            build_cluster_category(&build_diagram(D, 5).unwrap(), 3).unwrap(),
            build_orbit_category(&build_diagram(E, 6).unwrap(), 7, 0).unwrap(),
            build_orbit_category(&build_diagram(E, 8).unwrap(), 1, 0).unwrap(),
            build_orbit_category(&build_diagram(A, 5).unwrap(), 4, 1).unwrap(),
        ];
        for q in cases {
            let t = ExtTable::new(&q).unwrap();
            for i in 1..=t.degrees {
                let bound = orbit_sum_bound(&q, &t.homs, i);
                for x in 0..q.vertex_count() {
                    for y in 0..q.vertex_count() {
                        let s = ext_by_orbit_sum(&q, &t.homs, x, y, i, bound);
                        assert_eq!(s, t.ext(x, y, i));
                        assert_eq!(s, ext_by_orbit_sum(&q, &t.homs, x, y, i, bound + 10));
                    }
                }
            }
        }
    }

    #[test]
    fn cluster_ext_symmetric() {
        for (k, n) in [(A, 5), (D, 6), (E, 7)] {
            let c = build_cluster_category(&build_diagram(k, n).unwrap(), 2).unwrap();
            let t = ExtTable::new(&c).unwrap();
            for x in 0..c.vertex_count() {
                assert_eq!(t.ext(x, x, 1), 0);
                for y in 0..c.vertex_count() {
                    assert_eq!(t.ext(x, y, 1), t.ext(y, x, 1));
                }
            }
        }
    }
}
