//! Full reduction: horizontal then vertical synchronized reductions, the
//! refined labeling `λ̂ = C(L(λ, 8k), 2k)` and the greedy anchor alignment of
//! the relabeled strings.

use std::time::{Duration, Instant};

use crate::align::{greedy_bounded_align, Alignment};
use crate::error::Result;
use crate::fingerprint::Fingerprinter;
use crate::forest::{Forest, NodeId};
use crate::horizontal::sync_reductions;
use crate::labeling::{compat_refine, lookahead_refine, Labeling};
use crate::vertical::vert_sync_reductions;

/// Reduced forests together with the labelings computed on them.
#[derive(Clone, Debug)]
pub struct ReducedPair {
    pub f: Forest,
    pub g: Forest,
    /// `L(λ, 8k)` on the reduced forests.
    pub lookahead: Labeling,
    /// `λ̂ = C(L(λ, 8k), 2k)`.
    pub labeling: Labeling,
    /// Greedy alignment of `P_λ̂(F′)` and `P_λ̂(G′)` with cost at most `16k²`
    /// and width at most `2k`, when one exists.
    pub anchor: Option<Alignment>,
    /// Time spent in the horizontal and vertical reductions.
    pub reduce_time: Duration,
    /// Time spent on the labelings and the anchor.
    pub anchor_time: Duration,
}

impl ReducedPair {
    /// Node pairs whose opening and closing parentheses are both matched by
    /// the anchor.
    pub fn anchor_pairs(&self) -> Vec<(NodeId, NodeId)> {
        let Some(a) = &self.anchor else {
            return Vec::new();
        };
        let (x, y) = self.labeling.strings(&self.f, &self.g);
        node_pairs(&self.f, &self.g, &matched_positions(a, &x, &y))
    }
}

/// Matched position pairs `(x, y)` of an alignment.
pub(crate) fn matched_positions(a: &Alignment, x: &[u64], y: &[u64]) -> Vec<(usize, usize)> {
    a.aligned_pairs().filter(|&(p, q)| x[p] == y[q]).collect()
}

/// Node pairs `(u, v)` with `(o(u), o(v))` and `(c(u), c(v))` both listed.
pub(crate) fn node_pairs(f: &Forest, g: &Forest, positions: &[(usize, usize)]) -> Vec<(NodeId, NodeId)> {
    let pf = f.position_index();
    let pg = g.position_index();
    let mut partner = vec![usize::MAX; 2 * f.len()];
    for &(p, q) in positions {
        partner[p] = q;
    }
    positions
        .iter()
        .filter_map(|&(p, q)| {
            let (u, v) = (pf.node_at[p], pg.node_at[q]);
            (p == f.open(u) && q == g.open(v) && partner[f.close(u)] == g.close(v)).then_some((u, v))
        })
        .collect()
}

/// Runs the full reduction with threshold `k ≥ 1`.
pub fn reduce_and_anchor(f: &Forest, g: &Forest, k: usize, fp: &Fingerprinter) -> Result<ReducedPair> {
    let start = Instant::now();
    let (f1, g1) = sync_reductions(f, g, k, fp)?;
    let (f2, g2) = vert_sync_reductions(&f1, &g1, k, fp)?;
    let reduce_time = start.elapsed();
    let base = Labeling::from_forests(&f2, &g2);
    let lookahead = lookahead_refine(&f2, &g2, &base, 8 * k, fp)?;
    let labeling = compat_refine(&f2, &g2, &lookahead, 2 * k);
    let (x, y) = labeling.strings(&f2, &g2);
    let anchor = greedy_bounded_align(&x, &y, 16 * k * k, 2 * k);
    let anchor_time = start.elapsed() - reduce_time;
    log::debug!(
        "full reduction: {}+{} nodes -> {}+{}, {} classes, anchor {}",
        f.len(),
        g.len(),
        f2.len(),
        g2.len(),
        labeling.class_count(),
        if anchor.is_some() { "found" } else { "absent" }
    );
    Ok(ReducedPair {
        f: f2,
        g: g2,
        lookahead,
        labeling,
        anchor,
        reduce_time,
        anchor_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{parse_paren_text, Interner};

    #[test]
    fn identical_forests_anchor_everything() {
        let mut i = Interner::new();
        let f = parse_paren_text("(a(b)(c(d)))(e)", &mut i).unwrap();
        let fp = Fingerprinter::new(1_000_003);
        let r = reduce_and_anchor(&f, &f, 1, &fp).unwrap();
        assert_eq!(r.anchor, Some(Alignment::identity(10)));
        assert_eq!(r.anchor_pairs(), (0..5).map(|u| (u, u)).collect::<Vec<_>>());
    }

    #[test]
    fn distant_forests_have_no_anchor() {
        let mut i = Interner::new();
        let f = parse_paren_text("(a)(a)(a)(a)(a)(a)(a)(a)(a)", &mut i).unwrap();
        let g = parse_paren_text("(b)(b)(b)(b)(b)(b)(b)(b)(b)", &mut i).unwrap();
        let fp = Fingerprinter::new(1_000_003);
        assert!(reduce_and_anchor(&f, &g, 1, &fp).unwrap().anchor.is_none());
    }
}
