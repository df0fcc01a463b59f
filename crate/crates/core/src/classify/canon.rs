//! Canonical forms of small quivers, optionally with marked vertices.

use serde::{Deserialize, Serialize};

use crate::tilting::AlgQuiver;

/// Lexicographically minimal upper-triangle encoding of the exchange matrix
/// over all relabellings that keep marked vertices first, in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalQuiver {
    pub n: usize,
    pub marks: usize,
    pub code: Vec<i8>,
}

impl CanonicalQuiver {
    /// Arrows of the canonical representative on `0..n`.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut k = 0;
        for j in 0..self.n {
            for i in 0..j {
                let v = self.code[k];
                k += 1;
                for _ in 0..v.max(0) {
                    out.push((i, j));
                }
                for _ in 0..(-v).max(0) {
                    out.push((j, i));
                }
            }
        }
        out
    }

    pub fn to_quiver(&self) -> AlgQuiver {
        AlgQuiver::unlabelled(self.n, &self.arrows())
    }
}

pub fn quiver_canonical(q: &AlgQuiver) -> CanonicalQuiver {
    canonical_marked(q, &[]).0
}

pub fn quiver_iso(a: &AlgQuiver, b: &AlgQuiver) -> bool {
    a.len() == b.len() && quiver_canonical(a) == quiver_canonical(b)
}

/// Canonical form with `marks` (positions) pinned to the first slots, plus
/// the ordering of positions realising it.
pub fn canonical_marked(q: &AlgQuiver, marks: &[usize]) -> (CanonicalQuiver, Vec<usize>) {
    let n = q.len();
    let colors = refine(q, marks);
    let mut slots: Vec<usize> = colors.clone();
    slots.sort_unstable();
    let mut search = Search { q, colors: &colors, slots: &slots, best: None, best_order: Vec::new() };
    let mut order = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut code = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    search.go(&mut order, &mut used, &mut code);
    let code = search.best.unwrap_or_default();
    (CanonicalQuiver { n, marks: marks.len(), code }, search.best_order)
}

fn refine(q: &AlgQuiver, marks: &[usize]) -> Vec<usize> {
    let n = q.len();
    let keys: Vec<(usize, i32, i32)> = (0..n)
        .map(|v| {
            let m = marks.iter().position(|&x| x == v).unwrap_or(marks.len());
            let out: i32 = q.b[v].iter().filter(|&&x| x > 0).sum();
            let inn: i32 = -q.b[v].iter().filter(|&&x| x < 0).sum::<i32>();
            (m, out, inn)
        })
        .collect();
    let mut colors = rank_keys(&keys);
    loop {
        let keys: Vec<(usize, Vec<(i32, usize)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(i32, usize)> =
                    (0..n).filter(|&u| q.b[v][u] != 0).map(|u| (q.b[v][u], colors[u])).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank_keys(&keys);
        let before = colors.iter().max().map_or(0, |m| m + 1);
        let after = next.iter().max().map_or(0, |m| m + 1);
        colors = next;
        if after == before {
            return colors;
        }
    }
}

fn rank_keys<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).expect("present")).collect()
}

struct Search<'a> {
    q: &'a AlgQuiver,
    colors: &'a [usize],
    slots: &'a [usize],
    best: Option<Vec<i8>>,
    best_order: Vec<usize>,
}

impl Search<'_> {
    fn go(&mut self, order: &mut Vec<usize>, used: &mut [bool], code: &mut Vec<i8>) {
        let p = order.len();
        let n = self.q.len();
        if p == n {
            if self.best.as_ref().is_none_or(|b| *code < *b) {
                self.best = Some(code.clone());
                self.best_order = order.clone();
            }
            return;
        }
        for v in 0..n {
            if used[v] || self.colors[v] != self.slots[p] {
                continue;
            }
            let start = code.len();
            for &u in order.iter() {
                code.push(self.q.b[u][v] as i8);
            }
            let prune = self.best.as_ref().is_some_and(|b| code[..] > b[..code.len()]);
            if !prune {
                order.push(v);
                used[v] = true;
                self.go(order, used, code);
                used[v] = false;
                order.pop();
            }
            code.truncate(start);
        }
    }
}

/// Connected components of the underlying graph restricted to `keep`.
pub fn components(q: &AlgQuiver, keep: &[bool]) -> Vec<Vec<usize>> {
    let n = q.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if !keep[s] || seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for u in 0..n {
                if keep[u] && !seen[u] && q.b[v][u] != 0 {
                    seen[u] = true;
                    comp.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Biconnected blocks of the underlying simple graph, as vertex sets.
pub fn blocks(q: &AlgQuiver) -> Vec<Vec<usize>> {
    let n = q.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::new();
    let mut time = 0;
    for s in 0..n {
        if disc[s] == usize::MAX {
            dfs_blocks(q, s, usize::MAX, &mut time, &mut disc, &mut low, &mut stack, &mut out);
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn dfs_blocks(
    q: &AlgQuiver,
    v: usize,
    parent: usize,
    time: &mut usize,
    disc: &mut [usize],
    low: &mut [usize],
    stack: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<usize>>,
) {
    disc[v] = *time;
    low[v] = *time;
    *time += 1;
    for u in 0..q.len() {
        if q.b[v][u] == 0 || u == parent {
            continue;
        }
        if disc[u] == usize::MAX {
            stack.push((v, u));
            dfs_blocks(q, u, v, time, disc, low, stack, out);
            low[v] = low[v].min(low[u]);
            if low[u] >= disc[v] {
                let mut block = Vec::new();
                while let Some((a, b)) = stack.pop() {
                    block.push(a);
                    block.push(b);
                    if (a, b) == (v, u) {
                        break;
                    }
                }
                block.sort_unstable();
                block.dedup();
                out.push(block);
            }
        } else if disc[u] < disc[v] {
            stack.push((v, u));
            low[v] = low[v].min(disc[u]);
        }
    }
}

/// Least `t > 0` with `seq[i] == seq[(i + t) % len]` for all `i`.
pub fn necklace_period<T: PartialEq>(seq: &[T]) -> usize {
    let a = seq.len();
    (1..=a).find(|&t| a.is_multiple_of(t) && (0..a).all(|i| seq[i] == seq[(i + t) % a])).unwrap_or(a.max(1))
}
