use serde::{Deserialize, Serialize};

use crate::arquiver::OrbitQuiver;
use crate::tilting::AlgQuiver;

use super::canon::{canonical_marked, components, necklace_period, CanonicalQuiver};

/// Attached type-A quiver: its size and its canonical form marked at the connecting vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attachment {
    pub size: usize,
    pub form: Option<CanonicalQuiver>,
}

impl Attachment {
    fn empty() -> Self {
        Attachment { size: 0, form: None }
    }

    fn at(q: &AlgQuiver, keep: &[bool], c: usize) -> Self {
        let comp = components(q, keep).into_iter().find(|comp| comp.contains(&c)).unwrap_or_default();
        let mut s = comp;
        s.retain(|&x| x != c);
        s.insert(0, c);
        Attachment { size: s.len(), form: Some(canonical_marked(&q.induced(&s), &[0]).0) }
    }
}

/// The three quiver shapes of cluster-tilted algebras of type D, by quiver positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DShape {
    One,
    Two { a: usize, b: usize, q1: Attachment, q2: Attachment },
    Three { cycle: Vec<usize>, spikes: Vec<Attachment> },
}

/// Subtype from the α-summands alone.
pub fn subtype_from_alpha(c: &OrbitQuiver, alphas: &[usize]) -> Option<u8> {
    match alphas.len() {
        2 if c.flip(alphas[0]) == alphas[1] => Some(1),
        2 => Some(2),
        k if k > 2 => Some(3),
        _ => None,
    }
}

/// Matches the quiver against the shape expected for the given subtype,
/// with `alphas` the quiver positions of the α-summands.
pub fn d_shape(q: &AlgQuiver, alphas: &[usize], subtype: u8) -> Option<DShape> {
    match subtype {
        1 => shape_one(q, alphas),
        2 => shape_two(q, alphas),
        3 => shape_three(q, alphas),
        _ => None,
    }
}

fn outs(q: &AlgQuiver, v: usize) -> Vec<usize> {
    (0..q.len()).filter(|&u| q.b[v][u] > 0).collect()
}

fn ins(q: &AlgQuiver, v: usize) -> Vec<usize> {
    (0..q.len()).filter(|&u| q.b[v][u] < 0).collect()
}

fn shape_one(q: &AlgQuiver, al: &[usize]) -> Option<DShape> {
    let (a, b) = (al[0], al[1]);
    if q.b[a][b] != 0 || q.b[a] != q.b[b] {
        return None;
    }
    let (o, i) = (outs(q, a), ins(q, a));
    if o.len() > 1 || i.len() > 1 || o.len() + i.len() == 0 {
        return None;
    }
    if let (Some(&c2), Some(&c1)) = (o.first(), i.first()) {
        if q.b[c2][c1] != 1 {
            return None;
        }
    }
    Some(DShape::One)
}

fn shape_two(q: &AlgQuiver, al: &[usize]) -> Option<DShape> {
    let (a, b) = (al[0], al[1]);
    let (oa, ia, ob, ib) = (outs(q, a), ins(q, a), outs(q, b), ins(q, b));
    if q.b[a][b] != 0 || [&oa, &ia, &ob, &ib].iter().any(|v| v.len() > 1) {
        return None;
    }
    // An empty attachment removes its connecting vertex from the square.
    let c1 = match (ia.first(), ob.first()) {
        (Some(&x), Some(&y)) if x == y => Some(x),
        (None, None) => None,
        _ => return None,
    };
    let c2 = match (oa.first(), ib.first()) {
        (Some(&x), Some(&y)) if x == y => Some(x),
        (None, None) => None,
        _ => return None,
    };
    if let (Some(x), Some(y)) = (c1, c2) {
        if q.b[x][y] != 0 {
            return None;
        }
    }
    if c1.is_none() && c2.is_none() {
        return None;
    }
    let mut keep = vec![true; q.len()];
    keep[a] = false;
    keep[b] = false;
    let comps = components(q, &keep);
    if comps.len() != usize::from(c1.is_some()) + usize::from(c2.is_some()) {
        return None;
    }
    let att = |c: Option<usize>| c.map_or_else(Attachment::empty, |c| Attachment::at(q, &keep, c));
    Some(DShape::Two { a, b, q1: att(c1), q2: att(c2) })
}

fn shape_three(q: &AlgQuiver, al: &[usize]) -> Option<DShape> {
    let n = q.len();
    let is_alpha = |v: usize| al.contains(&v);
    let mut cycle = vec![al[0]];
    loop {
        let last = *cycle.last().expect("nonempty");
        let next: Vec<usize> = outs(q, last).into_iter().filter(|&u| is_alpha(u)).collect();
        let prev: Vec<usize> = ins(q, last).into_iter().filter(|&u| is_alpha(u)).collect();
        if next.len() != 1 || prev.len() != 1 || q.b[last][next[0]] != 1 {
            return None;
        }
        if next[0] == cycle[0] {
            break;
        }
        if cycle.contains(&next[0]) {
            return None;
        }
        cycle.push(next[0]);
    }
    if cycle.len() != al.len() {
        return None;
    }
    let mut keep = vec![true; n];
    for &v in al {
        keep[v] = false;
    }
    let a = cycle.len();
    let mut spikes = Vec::with_capacity(a);
    let mut used = Vec::new();
    for i in 0..a {
        let (vi, vj) = (cycle[i], cycle[(i + 1) % a]);
        let cs: Vec<usize> = (0..n).filter(|&c| !is_alpha(c) && q.b[vj][c] == 1 && q.b[c][vi] == 1).collect();
        match cs.as_slice() {
            [] => spikes.push(Attachment::empty()),
            [c] => {
                used.push(*c);
                spikes.push(Attachment::at(q, &keep, *c));
            }
            _ => return None,
        }
    }
    for comp in components(q, &keep) {
        let here: Vec<usize> = used.iter().copied().filter(|c| comp.contains(c)).collect();
        if here.len() != 1 {
            return None;
        }
        for &x in &comp {
            let touches: Vec<usize> = (0..n).filter(|&v| is_alpha(v) && q.b[x][v] != 0).collect();
            if x != here[0] && !touches.is_empty() {
                return None;
            }
        }
    }
    Some(DShape::Three { cycle, spikes })
}

/// `(l, t, p)` for a central cycle with the given attachments in cyclic order.
pub fn l_symmetry(spikes: &[Attachment]) -> (usize, usize, usize) {
    let a = spikes.len();
    let t = necklace_period(spikes);
    let p = spikes[..t].iter().map(|s| s.size).sum::<usize>() + t;
    (a / t, t, p)
}

/// Detects `(l, t, p)` from a subtype-3 quiver given its α positions.
#[allow(non_snake_case)]
pub fn detect_l_symmetric_D(q: &AlgQuiver, alphas: &[usize]) -> Option<(usize, usize, usize)> {
    match shape_three(q, alphas)? {
        DShape::Three { spikes, .. } => Some(l_symmetry(&spikes)),
        _ => None,
    }
}

fn tau_pow(c: &OrbitQuiver, k: usize, x: usize) -> usize {
    c.apply_functor(k as i64, 0, x)
}

/// Placement rule for two α-summands separated by an attachment of size `k`.
pub fn alpha_step_ok(c: &OrbitQuiver, from: usize, to: usize, k: usize) -> bool {
    let y = tau_pow(c, k + 1, from);
    to == y || to == c.flip(y)
}

/// Strict parity form of the placement rule used along a central cycle.
pub fn alpha_step_parity(c: &OrbitQuiver, from: usize, to: usize, k: usize) -> bool {
    let y = tau_pow(c, k + 1, from);
    if (k + 1).is_multiple_of(2) {
        to == y
    } else {
        to == c.flip(y)
    }
}

/// Violations of the α-placement rules for subtypes 2 and 3; labels are category vertices.
pub fn alpha_distribution_violations(c: &OrbitQuiver, q: &AlgQuiver, shape: &DShape) -> Vec<String> {
    let mut out = Vec::new();
    match shape {
        DShape::One => {}
        DShape::Two { a, b, q1, q2, .. } => {
            let (ua, ub) = (q.labels[*a], q.labels[*b]);
            let ok = [(ua, ub), (ub, ua)].iter().any(|&(u1, u2)| {
                [(q1.size, q2.size), (q2.size, q1.size)]
                    .iter()
                    .any(|&(n1, n2)| alpha_step_ok(c, u2, u1, n1) && alpha_step_ok(c, u1, u2, n2))
            });
            if !ok {
                out.push(format!(
                    "α-summands {} and {} are not placed as attachments of sizes {} and {} require",
                    c.label(ua),
                    c.label(ub),
                    q1.size,
                    q2.size
                ));
            }
        }
        DShape::Three { cycle, spikes } => {
            let a = cycle.len();
            let fwd = (0..a).all(|i| alpha_step_parity(c, q.labels[cycle[i]], q.labels[cycle[(i + 1) % a]], spikes[i].size));
            let bwd = (0..a).all(|i| alpha_step_parity(c, q.labels[cycle[(i + 1) % a]], q.labels[cycle[i]], spikes[i].size));
            if !fwd && !bwd {
                out.push(format!(
                    "α-summands along the central cycle {:?} violate the placement rule",
                    cycle.iter().map(|&v| c.label(q.labels[v])).collect::<Vec<_>>()
                ));
            }
        }
    }
    out
}
