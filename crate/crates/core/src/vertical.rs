//! Reduction of synchronized vertical periodicity: context powers `C^e`
//! occurring at nearby nodes of both forests are shortened to `14k` layers.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::fingerprint::{Fingerprinter, Fp};
use crate::forest::{symbol_class, symbol_is_open, Forest, NodeId};
use crate::horizontal::{filter_runs, forest_from_symbols};
use crate::lca::LcaIndex;
use crate::ors::OrsIndex;

/// Longest qualifying periodic extension at one position: period `q` and the
/// far end `end` (exclusive to the right for opening positions, exclusive to
/// the left for closing positions). The default entry has `q = 1` and
/// `end` equal to the position itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QEntry {
    pub q: usize,
    pub end: isize,
}

/// A maximal context power `C^e` at node `u` with `|C_L| = q_l`, `|C_R| = q_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContextOcc {
    pub u: NodeId,
    pub q_l: usize,
    pub q_r: usize,
    pub e: usize,
}

/// Synchronized occurrences of a context power at `u_f ∈ F` and `u_g ∈ G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertOcc {
    pub u_f: NodeId,
    pub u_g: NodeId,
    pub q_l: usize,
    pub q_r: usize,
    pub e: usize,
}

/// For every opening position, the longest run suffix with period at most
/// `4k` and exponent at least `16k` starting there; symmetrically for closing
/// positions and run prefixes ending there.
pub fn compute_q(s: &[u64], k: usize) -> Vec<QEntry> {
    let mut q: Vec<QEntry> = (0..s.len())
        .map(|l| QEntry { q: 1, end: l as isize })
        .collect();
    let span = |e: &QEntry, l: usize| e.end.abs_diff(l as isize);
    for r in filter_runs(s, k) {
        for l in r.i..r.j {
            let cand = if symbol_is_open(s[l]) {
                (r.j - l >= 16 * k * r.p).then_some(QEntry { q: r.p, end: r.j as isize })
            } else {
                (l + 1 - r.i >= 16 * k * r.p).then_some(QEntry { q: r.p, end: r.i as isize - 1 })
            };
            if let Some(c) = cand {
                if span(&c, l) > span(&q[l], l) {
                    q[l] = c;
                }
            }
        }
    }
    q
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Whether `l · r` is balanced with label-consistent matches.
fn balanced_pair(l: &[u64], r: &[u64]) -> bool {
    let mut stack = Vec::new();
    for &c in l.iter().chain(r) {
        if symbol_is_open(c) {
            stack.push(symbol_class(c));
        } else if stack.pop() != Some(symbol_class(c)) {
            return false;
        }
    }
    stack.is_empty()
}

/// Maximal context powers with `|C_L|, |C_R| ≤ 4k` and exponent at least
/// `16k`, one candidate per node, in pre-order.
pub fn compute_contexts(f: &Forest, s: &[u64], k: usize) -> Vec<ContextOcc> {
    let q = compute_q(s, k);
    let idx = f.position_index();
    let lca = LcaIndex::new(f);
    let depth = |p: usize| idx.depth_at[p] as isize;
    let mut out = Vec::new();
    for u in 0..f.len() {
        let (o, c) = (f.open(u), f.close(u));
        let (ql, jl) = (q[o].q, q[o].end);
        let (qr, jr) = (q[c].q, q[c].end);
        if jl == o as isize || jr == c as isize || c - o < ql.max(qr) {
            continue;
        }
        let dl = depth(o + ql) - depth(o);
        let dr = depth(c - qr) - depth(c);
        if dl <= 0 || dr <= 0 {
            continue;
        }
        let (dl, dr) = (dl as usize, dr as usize);
        let d = dl / gcd(dl, dr) * dr;
        let (cl, cr) = (ql * (d / dl), qr * (d / dr));
        if cl > 4 * k || cr > 4 * k {
            continue;
        }
        if !balanced_pair(&s[o..o + cl], &s[c + 1 - cr..=c]) {
            continue;
        }
        // Run ends are clipped to the subtree of u before locating nodes.
        let vl = idx.node_at[(jl as usize).min(c)];
        let vr = idx.node_at[jr.max(o as isize) as usize];
        let Some(top) = lca.lca(vl, vr) else { continue };
        let e = [
            (jl as usize - o) / cl,
            (c as isize - jr) as usize / cr,
            (c - o + 1) / (cl + cr),
            (f.depth(top) - f.depth(u) + 1) / d,
        ]
        .into_iter()
        .min()
        .unwrap();
        if e >= 16 * k {
            out.push(ContextOcc { u, q_l: cl, q_r: cr, e });
        }
    }
    out
}

type ContextKey = (u64, usize, u64, usize);

fn context_key(table: &crate::fingerprint::PrefixHash, x: &Forest, c: &ContextOcc) -> ContextKey {
    let (o, cl) = (x.open(c.u), x.close(c.u));
    let l: Fp = table.substring(o, o + c.q_l);
    let r: Fp = table.substring(cl + 1 - c.q_r, cl + 1);
    (l.hash, l.len, r.hash, r.len)
}

/// Pairs each context occurrence of `F` (by opening position) with an
/// occurrence of the same context in `G` whose parentheses lie within `2k`,
/// skipping nodes covered by the previous hit.
pub fn vert_periods(
    f: &Forest,
    g: &Forest,
    x: &[u64],
    y: &[u64],
    k: usize,
    fp: &Fingerprinter,
) -> Vec<VertOcc> {
    let cf = compute_contexts(f, x, k);
    if cf.is_empty() {
        return Vec::new();
    }
    let cg = compute_contexts(g, y, k);
    let tx = fp.prefix_table(x);
    let ty = fp.prefix_table(y);
    let index = OrsIndex::new(
        cg.iter()
            .map(|c| (context_key(&ty, g, c), g.open(c.u), g.close(c.u), *c)),
    );
    let mut by_node: Vec<Option<ContextOcc>> = vec![None; g.len()];
    for d in &cg {
        by_node[d.u] = Some(*d);
    }
    let w = 2 * k;
    let mut next: isize = -1;
    let mut out = Vec::new();
    for c in &cf {
        let (o, cl) = (f.open(c.u), f.close(c.u));
        if (o as isize) <= next {
            continue;
        }
        let key = context_key(&tx, f, c);
        let hit = index.query(
            &key,
            (o.saturating_sub(w), o + w),
            (cl.saturating_sub(w), cl + w),
        );
        let Some((_, _, &deepest)) = hit else { continue };
        // Candidates in the rectangle are nested; the deepest may carry a
        // shorter power than one of its ancestors.
        let same = |d: &ContextOcc| {
            let (og, cg_) = (g.open(d.u), g.close(d.u));
            d.q_l == c.q_l
                && d.q_r == c.q_r
                && x[o..o + c.q_l] == y[og..og + c.q_l]
                && x[cl + 1 - c.q_r..=cl] == y[cg_ + 1 - c.q_r..=cg_]
        };
        let mut best: Option<ContextOcc> = None;
        let mut v = Some(deepest.u);
        while let Some(u) = v {
            if g.open(u) + w < o || g.close(u) > cl + w {
                break;
            }
            if let Some(d) = by_node[u].filter(|d| same(d)) {
                if best.is_none_or(|b| d.e > b.e) {
                    best = Some(d);
                }
            }
            v = g.parent(u);
        }
        let Some(d) = best else { continue };
        let e = c.e.min(d.e);
        out.push(VertOcc { u_f: c.u, u_g: d.u, q_l: c.q_l, q_r: c.q_r, e });
        next = o as isize + ((e - 8 * k) * c.q_l) as isize;
    }
    out
}

/// A block `[start, start + len)` removed from one string.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Cut {
    start: usize,
    len: usize,
}

/// Non-overlapping blocks keyed by start.
#[derive(Default)]
struct Cuts(BTreeMap<usize, usize>);

impl Cuts {
    fn is_free(&self, c: Cut) -> bool {
        let end = c.start + c.len;
        match self.0.range(..end).next_back() {
            Some((&s, &l)) => s + l <= c.start,
            None => true,
        }
    }

    fn insert(&mut self, c: Cut) {
        self.0.insert(c.start, c.len);
    }

    fn apply(&self, s: &[u64]) -> Vec<u64> {
        let mut out = Vec::with_capacity(s.len());
        let mut i = 0;
        for (&start, &len) in &self.0 {
            out.extend_from_slice(&s[i..start]);
            i = start + len;
        }
        out.extend_from_slice(&s[i..]);
        out
    }
}

/// Removes all but `14k` layers of each synchronized occurrence from both
/// strings. An occurrence whose blocks would overlap a previously accepted
/// block is skipped as a whole.
pub fn reduce_strings(f: &Forest, g: &Forest, x: &[u64], y: &[u64], occ: &[VertOcc], k: usize) -> (Vec<u64>, Vec<u64>) {
    let mut cf = Cuts::default();
    let mut cg = Cuts::default();
    for v in occ {
        assert!(v.e >= 14 * k, "occurrence exponent below 14k");
        let drop = v.e - 14 * k;
        if drop == 0 {
            continue;
        }
        let left = |o: usize| Cut { start: o, len: v.q_l * drop };
        let right = |c: usize| Cut { start: c + 1 - v.q_r * v.e, len: v.q_r * drop };
        let nf = [left(f.open(v.u_f)), right(f.close(v.u_f))];
        let ng = [left(g.open(v.u_g)), right(g.close(v.u_g))];
        let fits = nf[0].start + nf[0].len <= nf[1].start && ng[0].start + ng[0].len <= ng[1].start;
        if fits && nf.iter().all(|&c| cf.is_free(c)) && ng.iter().all(|&c| cg.is_free(c)) {
            nf.into_iter().for_each(|c| cf.insert(c));
            ng.into_iter().for_each(|c| cg.insert(c));
        }
    }
    (cf.apply(x), cg.apply(y))
}

/// Forests with the same bounded distance as `F, G` and without long
/// synchronized vertical periodicity.
pub fn vert_sync_reductions(f: &Forest, g: &Forest, k: usize, fp: &Fingerprinter) -> Result<(Forest, Forest)> {
    let (x, y) = (f.symbols(), g.symbols());
    let occ = vert_periods(f, g, &x, &y, k, fp);
    if occ.is_empty() {
        return Ok((f.clone(), g.clone()));
    }
    log::debug!("vertical: {} synchronized occurrences", occ.len());
    let (sx, sy) = reduce_strings(f, g, &x, &y, &occ, k);
    Ok((forest_from_symbols(&sx)?, forest_from_symbols(&sy)?))
}
