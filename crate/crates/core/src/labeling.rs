//! Joint labelings of two forests and their look-ahead and compatibility
//! refinements.

use std::collections::HashMap;

use crate::align::Alignment;
use crate::error::{Error, Result};
use crate::fingerprint::{Fingerprinter, Fp};
use crate::forest::{Forest, NodeId};

/// A class id for every node of `F` and of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    pub f: Vec<u32>,
    pub g: Vec<u32>,
}

impl Labeling {
    /// The labeling given by the node labels themselves.
    pub fn from_forests(f: &Forest, g: &Forest) -> Self {
        Labeling {
            f: f.labels().iter().map(|l| l.0).collect(),
            g: g.labels().iter().map(|l| l.0).collect(),
        }
    }

    /// Number of distinct classes.
    pub fn class_count(&self) -> usize {
        let mut all: Vec<u32> = self.f.iter().chain(&self.g).copied().collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    }

    /// Whether every class of `self` lies inside one class of `coarser`.
    pub fn refines(&self, coarser: &Labeling) -> bool {
        if self.f.len() != coarser.f.len() || self.g.len() != coarser.g.len() {
            return false;
        }
        let mut seen: HashMap<u32, u32> = HashMap::new();
        self.f
            .iter()
            .zip(&coarser.f)
            .chain(self.g.iter().zip(&coarser.g))
            .all(|(&a, &b)| *seen.entry(a).or_insert(b) == b)
    }

    /// Whether both labelings induce the same partition.
    pub fn equivalent(&self, other: &Labeling) -> bool {
        self.refines(other) && other.refines(self)
    }

    /// `P_λ(F)` and `P_λ(G)` as symbol strings.
    pub fn strings(&self, f: &Forest, g: &Forest) -> (Vec<u64>, Vec<u64>) {
        (f.symbols_with(&self.f), g.symbols_with(&self.g))
    }
}

/// Renumbers keys densely in order of first appearance over `F` then `G`.
fn intern<K: std::hash::Hash + Eq>(fk: Vec<K>, gk: Vec<K>) -> Labeling {
    let mut ids: HashMap<K, u32> = HashMap::new();
    let mut assign = |keys: Vec<K>| -> Vec<u32> {
        keys.into_iter()
            .map(|k| {
                let next = ids.len() as u32;
                *ids.entry(k).or_insert(next)
            })
            .collect()
    };
    let f = assign(fk);
    let g = assign(gk);
    Labeling { f, g }
}

/// Fingerprints of `P_λ(sub_{<d}(v))` for every node of one forest.
fn trimmed_fingerprints(x: &Forest, class: &[u32], d: usize, fp: &Fingerprinter) -> Vec<Fp> {
    let n = x.len();
    let table = fp.prefix_table(&x.symbols_with(class));
    // cut[v]: descendants of v at relative depth exactly d, in pre-order.
    let mut cut: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut path: Vec<NodeId> = Vec::new();
    for u in 0..n {
        let level = x.depth(u);
        path.truncate(level);
        if level >= d {
            cut[path[level - d]].push(u);
        }
        path.push(u);
    }
    (0..n)
        .map(|v| {
            let mut acc = Fp::EMPTY;
            let mut from = x.open(v);
            for &c in &cut[v] {
                acc = table.concat(acc, table.substring(from, x.open(c)));
                from = x.close(c) + 1;
            }
            table.concat(acc, table.substring(from, x.close(v) + 1))
        })
        .collect()
}

/// Look-ahead refinement `L(λ, d)`: two nodes share a class iff their
/// subtrees truncated below relative depth `d` have equal strings under `λ`
/// (up to fingerprint collisions).
pub fn lookahead_refine(
    f: &Forest,
    g: &Forest,
    lab: &Labeling,
    d: usize,
    fp: &Fingerprinter,
) -> Result<Labeling> {
    if d == 0 {
        return Err(Error::InvalidArgument("look-ahead depth must be positive".into()));
    }
    Ok(intern(
        trimmed_fingerprints(f, &lab.f, d, fp),
        trimmed_fingerprints(g, &lab.g, d, fp),
    ))
}

/// Recomputes look-ahead classes with an independent fingerprint and reports
/// whether the partitions agree.
pub fn audit_lookahead(
    f: &Forest,
    g: &Forest,
    lab: &Labeling,
    d: usize,
    got: &Labeling,
    second: &Fingerprinter,
) -> Result<bool> {
    Ok(lookahead_refine(f, g, lab, d, second)?.equivalent(got))
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Compatibility refinement `C(λ, w)`: classes are the connected components
/// of the relation pairing `u ∈ F` and `v ∈ G` with equal class and opening
/// and closing positions each within `w`.
pub fn compat_refine(f: &Forest, g: &Forest, lab: &Labeling, w: usize) -> Labeling {
    let (nf, ng) = (f.len(), g.len());
    // Node of G opened at each position.
    let mut opened = vec![usize::MAX; 2 * ng];
    for v in 0..ng {
        opened[g.open(v)] = v;
    }
    let mut dsu = Dsu::new(nf + ng);
    for u in 0..nf {
        let (o, c) = (f.open(u), f.close(u));
        let hi = (o + w + 1).min(2 * ng);
        for p in o.saturating_sub(w)..hi {
            let v = opened[p];
            if v != usize::MAX && lab.f[u] == lab.g[v] && c.abs_diff(g.close(v)) <= w {
                dsu.union(u, nf + v);
            }
        }
    }
    let fk: Vec<usize> = (0..nf).map(|u| dsu.find(u)).collect();
    let gk: Vec<usize> = (0..ng).map(|v| dsu.find(nf + v)).collect();
    intern(fk, gk)
}

/// `ted_{λ,A}`: half the cost of `A` on `P_λ(F)` and `P_λ(G)`.
pub fn alignment_cost(f: &Forest, g: &Forest, lab: &Labeling, a: &Alignment) -> Result<usize> {
    let (x, y) = lab.strings(f, g);
    Ok(a.eval(&x, &y)?.cost / 2)
}

/// Checks `ted_{L(λ,d),A} ≤ d · ted_{λ,A}` for a tree alignment `A`.
pub fn lookahead_cost_bound_check(
    f: &Forest,
    g: &Forest,
    lab: &Labeling,
    d: usize,
    a: &Alignment,
    fp: &Fingerprinter,
) -> Result<bool> {
    let refined = lookahead_refine(f, g, lab, d, fp)?;
    let x = f.symbols_with(&refined.f);
    let y = g.symbols_with(&refined.g);
    let after = a.eval(&x, &y)?.cost;
    let before = alignment_cost(f, g, lab, a)? * 2;
    Ok(after <= d * before)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{parse_paren_text, Interner};

    fn pair(a: &str, b: &str) -> (Forest, Forest) {
        let mut i = Interner::new();
        (
            parse_paren_text(a, &mut i).unwrap(),
            parse_paren_text(b, &mut i).unwrap(),
        )
    }

    #[test]
    fn depth_one_keeps_labels() {
        let (f, g) = pair("(a(b)(a))", "(b(a))");
        let lab = Labeling::from_forests(&f, &g);
        let fp = Fingerprinter::new(1_000_003);
        assert!(lookahead_refine(&f, &g, &lab, 1, &fp).unwrap().equivalent(&lab));
        assert!(matches!(
            lookahead_refine(&f, &g, &lab, 0, &fp),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn full_depth_compares_subtrees() {
        let (f, g) = pair("(a(b(c)))(a(b))", "(a(b(c)))");
        let lab = Labeling::from_forests(&f, &g);
        let fp = Fingerprinter::new(1_000_003);
        let r = lookahead_refine(&f, &g, &lab, 3, &fp).unwrap();
        assert_eq!(r.f[0], r.g[0]);
        assert_ne!(r.f[0], r.f[3]);
        let r = lookahead_refine(&f, &g, &lab, 2, &fp).unwrap();
        assert_eq!(r.f[0], r.f[3]);
        assert_ne!(r.f[1], r.f[4]);
    }

    #[test]
    fn compat_twins() {
        let (f, g) = pair("(a(a)(a))", "(a(a)(a))");
        let lab = Labeling::from_forests(&f, &g);
        let r = compat_refine(&f, &g, &lab, 0);
        assert_eq!(r.f, r.g);
        assert_eq!(r.class_count(), 3);
        let r = compat_refine(&f, &g, &lab, 2);
        assert_eq!(r.class_count(), 2);
        assert!(r.refines(&lab));
    }
}
