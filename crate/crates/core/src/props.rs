//! Identity checks for the Hom calculus, run over all pairs of a category.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arquiver::{build_cluster_category, build_window, default_width, z_predecessors, z_tau, ZVertex};
use crate::diagram::DynkinDiagram;
use crate::error::Result;
use crate::homcalc::{euler_form, ext_by_orbit_sum, orbit_sum_bound, ExtTable, HomTable};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PropertyReport {
    pub diagram: String,
    /// Check name to number of instances tested.
    pub checks: BTreeMap<String, usize>,
    pub failures: Vec<String>,
}

impl PropertyReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        *self.checks.entry(name.to_string()).or_default() += 1;
        if !ok {
            self.failures.push(format!("{name}: {}", detail()));
        }
    }
}

pub fn hom_properties(d: &DynkinDiagram) -> Result<PropertyReport> {
    let w = build_window(d, default_width(d))?;
    let homs = HomTable::new(&w)?;
    let mut rep = PropertyReport { diagram: d.name(), ..Default::default() };
    let slice = &w.module_slice;
    let dim = |v: ZVertex| w.module_dim(v).expect("module").to_vec();
    let sh = |v: ZVertex, k: i64| w.shift.pow(k).apply(v);

    for &x in slice {
        let dx = dim(x);
        rep.check("roots have Euler form 1", euler_form(d, &dx, &dx) == 1, || format!("{x}"));
        for &y in slice {
            let dy = dim(y);
            let lhs = euler_form(d, &dx, &dy);
            let rhs = i64::from(homs.hom(x, y)) - i64::from(homs.hom(x, sh(y, 1)));
            rep.check("Euler form is dim Hom - dim Ext", lhs == rhs, || format!("{x}, {y}: {lhs} vs {rhs}"));
            for k in [-2, -1, 2, 3] {
                let v = homs.hom(x, sh(y, k));
                rep.check("hereditary: Hom(x, y[k]) = 0 for k outside {0, 1}", v == 0, || format!("{x}, {y}, k = {k}"));
            }
            for k in [0, 1] {
                let a = homs.hom(x, sh(y, k));
                let b = homs.hom(sh(y, k), w.nu.apply(x));
                rep.check("Serre duality", a == b, || format!("{x}, {y}[{k}]: {a} vs {b}"));
            }
        }
        for (i, (&p, &q)) in w.proj.iter().zip(&w.inj).enumerate() {
            rep.check("Hom(P_i, x) = dim x at i", homs.hom(p, x) == dx[i], || format!("i = {}, {x}", i + 1));
            rep.check("Hom(x, I_i) = dim x at i", homs.hom(x, q) == dx[i], || format!("i = {}, {x}", i + 1));
        }
        if !w.proj.contains(&x) {
            let t = z_tau(x);
            let mut sum = vec![0u32; d.rank];
            for z in z_predecessors(d, x) {
                for (s, c) in sum.iter_mut().zip(dim(z)) {
                    *s += c;
                }
            }
            let lhs: Vec<u32> = dx.iter().zip(dim(t)).map(|(a, b)| a + b).collect();
            rep.check("mesh additivity of dimension vectors", lhs == sum, || format!("{x}"));
        }
    }

    // Hom(x, -) satisfies the mesh relations except at x and at x[1].
    for r in 0..d.rank {
        let x = ZVertex::new(r, 0);
        let x1 = sh(x, 1);
        let h = d.coxeter_number() as i64;
        for level in 0..=2 * h {
            for s in 0..d.rank {
                let y = ZVertex::new(s, level);
                let mesh: i64 = i64::from(homs.hom(x, y)) + i64::from(homs.hom(x, z_tau(y)))
                    - z_predecessors(d, y).into_iter().map(|z| i64::from(homs.hom(x, z))).sum::<i64>();
                let want = i64::from(y == x) + i64::from(y == x1);
                rep.check("hammock mesh defect only at x and x[1]", mesh == want, || format!("{x}, {y}: {mesh}"));
            }
        }
    }

    for m in [2, 3] {
        let c = build_cluster_category(d, m)?;
        let ext = ExtTable::new(&c)?;
        for i in 1..m {
            let bound = orbit_sum_bound(&c, &ext.homs, i);
            for x in 0..c.vertex_count() {
                for y in 0..c.vertex_count() {
                    let s = ext_by_orbit_sum(&c, &ext.homs, x, y, i, bound);
                    let ok = s == ext.ext(x, y, i) && s == ext_by_orbit_sum(&c, &ext.homs, x, y, i, bound + 10);
                    rep.check("Ext orbit sum saturates", ok, || format!("C_{m}: ({x}, {y}), degree {i}"));
                    let sym = ext.ext(y, x, m - i);
                    rep.check("Calabi-Yau symmetry", s == sym, || format!("C_{m}: ({x}, {y}), degree {i}"));
                }
            }
        }
    }
    Ok(rep)
}
