//! Dynkin diagrams with a fixed orientation.
//!
//! Vertices are stored 0-based; vertex `i` is printed as `i + 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CtkError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DynkinKind {
    A,
    D,
    E,
}

impl fmt::Display for DynkinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DynkinKind::A => "A",
            DynkinKind::D => "D",
            DynkinKind::E => "E",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for DynkinKind {
    type Err = CtkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(DynkinKind::A),
            "D" | "d" => Ok(DynkinKind::D),
            "E" | "e" => Ok(DynkinKind::E),
            _ => Err(CtkError::InvalidDiagram(format!("unknown Dynkin type `{s}`"))),
        }
    }
}

/// An oriented Dynkin diagram. `arrows` holds `(tail, head)` pairs, one per edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DynkinDiagram {
    pub kind: DynkinKind,
    pub rank: usize,
    pub arrows: Vec<(usize, usize)>,
}

/// A permutation of the diagram vertices preserving the undirected edge set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramAutomorphism {
    pub perm: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn identity(n: usize) -> Self {
        DiagramAutomorphism { perm: (0..n).collect() }
    }

    pub fn compose(&self, other: &Self) -> Self {
        // (self ∘ other)(i) = self(other(i))
        DiagramAutomorphism { perm: other.perm.iter().map(|&i| self.perm[i]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            inv[j] = i;
        }
        DiagramAutomorphism { perm: inv }
    }
}

pub fn build_diagram(kind: DynkinKind, rank: usize) -> Result<DynkinDiagram, CtkError> {
    let arrows = match kind {
        DynkinKind::A => {
            if rank < 1 {
                return Err(CtkError::InvalidDiagram("A_n needs n >= 1".into()));
            }
            (0..rank - 1).map(|i| (i, i + 1)).collect()
        }
        DynkinKind::D => {
            if rank < 4 {
                return Err(CtkError::InvalidDiagram(format!("D_{rank} is not a Dynkin diagram (n >= 4)")));
            }
            let branch = rank - 3;
            let mut a: Vec<(usize, usize)> = (0..branch).map(|i| (i, i + 1)).collect();
            a.push((rank - 2, branch));
            a.push((rank - 1, branch));
            a
        }
        DynkinKind::E => {
            if !(6..=8).contains(&rank) {
                return Err(CtkError::InvalidDiagram(format!("E_{rank} is not a Dynkin diagram (n in 6..=8)")));
            }
            // Bourbaki labels 1..8; branch vertex 4 (index 3), vertex 2 hangs off it.
            let mut a = vec![(0, 2), (2, 3), (1, 3), (4, 3)];
            for i in 5..rank {
                a.push((i, i - 1));
            }
            a
        }
    };
    Ok(DynkinDiagram { kind, rank, arrows })
}

impl DynkinDiagram {
    pub fn name(&self) -> String {
        format!("{}{}", self.kind, self.rank)
    }

    pub fn coxeter_number(&self) -> usize {
        match self.kind {
            DynkinKind::A => self.rank + 1,
            DynkinKind::D => 2 * self.rank - 2,
            DynkinKind::E => match self.rank {
                6 => 12,
                7 => 18,
                _ => 30,
            },
        }
    }

    pub fn positive_roots(&self) -> usize {
        self.rank * self.coxeter_number() / 2
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .arrows
            .iter()
            .filter_map(|&(s, t)| if s == v { Some(t) } else if t == v { Some(s) } else { None })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|&&(s, t)| s == v || t == v).count()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.arrows.iter().any(|&(s, t)| (s, t) == (u, v) || (s, t) == (v, u))
    }

    /// Vertices ordered so every arrow goes forward.
    pub fn topological_order(&self) -> Vec<usize> {
        let n = self.rank;
        let mut indeg = vec![0usize; n];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        ready.reverse();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            let mut next = Vec::new();
            for &(s, t) in &self.arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        next.push(t);
                    }
                }
            }
            next.sort_unstable_by(|a, b| b.cmp(a));
            ready.extend(next);
            ready.sort_unstable_by(|a, b| b.cmp(a));
        }
        order
    }

    /// Number of oriented paths from `i` to `j` (trivial path included).
    pub fn path_count(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return 1;
        }
        self.arrows.iter().filter(|&&(s, _)| s == i).map(|&(_, t)| self.path_count(t, j)).sum()
    }

    /// The two leaves forming the fork of a type D diagram.
    pub fn fork(&self) -> Option<(usize, usize)> {
        (self.kind == DynkinKind::D).then(|| (self.rank - 2, self.rank - 1))
    }

    /// Full automorphism group of the underlying graph, sorted.
    pub fn automorphisms(&self) -> Vec<DiagramAutomorphism> {
        let n = self.rank;
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend_automorphism(0, &mut perm, &mut used, &mut out);
        out.sort();
        out
    }

    fn extend_automorphism(
        &self,
        v: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<DiagramAutomorphism>,
    ) {
        let n = self.rank;
        if v == n {
            out.push(DiagramAutomorphism { perm: perm.clone() });
            return;
        }
        for w in 0..n {
            if used[w] || self.degree(w) != self.degree(v) {
                continue;
            }
            let ok = (0..v).all(|u| self.has_edge(u, v) == self.has_edge(perm[u], w));
            if ok {
                perm[v] = w;
                used[w] = true;
                self.extend_automorphism(v + 1, perm, used, out);
                used[w] = false;
            }
        }
        perm[v] = usize::MAX;
    }
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.kind, self.rank)
    }
}

pub fn coxeter_number(d: &DynkinDiagram) -> usize {
    d.coxeter_number()
}

pub fn automorphisms(d: &DynkinDiagram) -> Vec<DiagramAutomorphism> {
    d.automorphisms()
}
