use crate::arquiver::{OrbitQuiver, ZVertex};
use crate::tilting::AlgQuiver;

use super::canon::{blocks, canonical_marked, components};

fn is_oriented_triangle(q: &AlgQuiver, t: &[usize]) -> bool {
    let (a, b, c) = (t[0], t[1], t[2]);
    (q.b[a][b] == 1 && q.b[b][c] == 1 && q.b[c][a] == 1) || (q.b[b][a] == 1 && q.b[c][b] == 1 && q.b[a][c] == 1)
}

/// Violations of the local shape rules for quivers in the mutation class of A_n.
pub fn type_a_shape_violations(q: &AlgQuiver) -> Vec<String> {
    let n = q.len();
    let mut out = Vec::new();
    if q.b.iter().flatten().any(|&v| v.abs() > 1) {
        out.push("multiple arrows".to_string());
    }
    let bl = blocks(q);
    let mut triangles_at = vec![0usize; n];
    let mut bridges_at = vec![0usize; n];
    for b in &bl {
        match b.len() {
            2 => b.iter().for_each(|&v| bridges_at[v] += 1),
            3 if is_oriented_triangle(q, b) => b.iter().for_each(|&v| triangles_at[v] += 1),
            _ => out.push(format!("cycle through {b:?} is not an oriented 3-cycle")),
        }
    }
    for v in 0..n {
        let deg = q.neighbours(v).len();
        let ok = match deg {
            0..=2 => true,
            3 => triangles_at[v] == 1 && bridges_at[v] == 1,
            4 => triangles_at[v] == 2 && bridges_at[v] == 0,
            _ => false,
        };
        if !ok {
            out.push(format!("vertex {} has {deg} neighbours in a forbidden configuration", q.labels[v]));
        }
    }
    out
}

/// Distance of a row from the nearest end of A_n; τ-orbit number minus one.
pub fn depth(c: &OrbitQuiver, x: usize) -> usize {
    let r = c.lift(x).row;
    r.min(c.rank() - 1 - r)
}

/// Orbit depth predicted from the quiver position of each summand: for
/// a vertex whose removal leaves at most two components, the smaller size.
pub fn predicted_depths(q: &AlgQuiver) -> Vec<Option<usize>> {
    (0..q.len())
        .map(|v| {
            let mut keep = vec![true; q.len()];
            keep[v] = false;
            let comps = components(q, &keep);
            match comps.len() {
                0 | 1 => Some(0),
                2 => Some(comps[0].len().min(comps[1].len())),
                _ => None,
            }
        })
        .collect()
}

pub fn bow_perp_violations(c: &OrbitQuiver, q: &AlgQuiver) -> Vec<String> {
    let mut out = Vec::new();
    for (v, p) in predicted_depths(q).into_iter().enumerate() {
        let x = q.labels[v];
        match p {
            Some(d) if d == depth(c, x) => {}
            Some(d) => out.push(format!("summand {} at depth {} but quiver predicts {d}", c.label(x), depth(c, x))),
            None => out.push(format!("vertex {} splits the quiver into more than two parts", c.label(x))),
        }
    }
    out
}

/// A cut vertex with two halves of equal size, isomorphic by a map fixing the vertex.
#[allow(non_snake_case)]
pub fn detect_2symmetric_A(q: &AlgQuiver) -> bool {
    let n = q.len();
    if n.is_multiple_of(2) {
        return false;
    }
    (0..n).any(|v| {
        let mut keep = vec![true; n];
        keep[v] = false;
        let comps = components(q, &keep);
        if comps.len() != 2 || comps[0].len() != comps[1].len() {
            return false;
        }
        let half = |c: &Vec<usize>| {
            let mut s = c.clone();
            s.insert(0, v);
            canonical_marked(&q.induced(&s), &[0]).0
        };
        half(&comps[0]) == half(&comps[1])
    })
}

/// A central oriented 3-cycle carrying three pairwise isomorphic attached
/// quivers, each marked at its cycle vertex.
#[allow(non_snake_case)]
pub fn detect_3symmetric_A(q: &AlgQuiver) -> bool {
    let n = q.len();
    if !n.is_multiple_of(3) {
        return false;
    }
    blocks(q).into_iter().filter(|b| b.len() == 3 && is_oriented_triangle(q, b)).any(|tri| {
        let mut cut = q.clone();
        for &a in &tri {
            for &b in &tri {
                cut.b[a][b] = 0;
            }
        }
        let comps = components(&cut, &vec![true; n]);
        if comps.len() != 3 || comps.iter().any(|c| c.len() != n / 3) {
            return false;
        }
        let mut forms = Vec::new();
        for &v in &tri {
            let Some(comp) = comps.iter().find(|c| c.contains(&v)) else { return false };
            let mut s = comp.clone();
            s.retain(|&x| x != v);
            s.insert(0, v);
            forms.push(canonical_marked(&q.induced(&s), &[0]).0);
        }
        forms[0] == forms[1] && forms[1] == forms[2]
    })
}

/// Objects reachable from `x` through chains of mesh-middle pairs.
pub fn vertically_aligned(c: &OrbitQuiver, x: usize) -> Vec<usize> {
    let n = c.rank() as i64;
    let v = c.lift(x);
    let mut out: Vec<usize> = (-n..=n)
        .filter(|&k| k != 0)
        .filter_map(|k| {
            let r = v.row as i64 + 2 * k;
            (0..n).contains(&r).then(|| c.project(ZVertex::new(r as usize, v.level - k)))
        })
        .filter(|&y| y != x)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: usize, arrows: &[(usize, usize)]) -> AlgQuiver {
        AlgQuiver::unlabelled(n, arrows)
    }

    #[test]
    fn two_symmetric_examples() {
        assert!(detect_2symmetric_A(&q(3, &[(0, 1), (2, 1)])));
        assert!(detect_2symmetric_A(&q(3, &[(1, 0), (1, 2)])));
        assert!(!detect_2symmetric_A(&q(3, &[(0, 1), (1, 2)])));
        assert!(!detect_2symmetric_A(&q(3, &[(0, 1), (1, 2), (2, 0)])));
    }

    #[test]
    fn three_symmetric_examples() {
        assert!(detect_3symmetric_A(&q(3, &[(0, 1), (1, 2), (2, 0)])));
        assert!(!detect_3symmetric_A(&q(3, &[(0, 1), (1, 2)])));
        let six = q(6, &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (2, 5)]);
        assert!(detect_3symmetric_A(&six));
        let mixed = q(6, &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (5, 2)]);
        assert!(!detect_3symmetric_A(&mixed));
    }

    #[test]
    fn shape_rules() {
        assert!(type_a_shape_violations(&q(3, &[(0, 1), (1, 2), (2, 0)])).is_empty());
        assert!(!type_a_shape_violations(&q(3, &[(0, 1), (1, 2), (0, 2)])).is_empty());
        assert!(!type_a_shape_violations(&q(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])).is_empty());
        assert!(!type_a_shape_violations(&q(4, &[(0, 1), (0, 2), (0, 3)])).is_empty());
    }
}
