//! Reducing distance under a forced non-crossing matching to plain bounded
//! distance: height flattening, redundant leaf pruning and the uniqueness
//! gadget.

use crate::error::{Error, Result};
use crate::forest::{Forest, Label, NodeId, Paren, Side, FRESH_LABEL_BASE};

/// A set of node pairs `(u ∈ F, v ∈ G)` kept sorted by `u`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<(NodeId, NodeId)>,
}

impl Matching {
    pub fn new(mut pairs: Vec<(NodeId, NodeId)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        Matching { pairs }
    }

    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Checks that the pairs form a label-preserving non-crossing matching:
    /// every node is used once and pre-order and post-order are preserved.
    pub fn validate(&self, f: &Forest, g: &Forest) -> Result<()> {
        for &(u, v) in &self.pairs {
            if u >= f.len() || v >= g.len() {
                return Err(Error::InvalidArgument(format!("pair ({u}, {v}) out of range")));
            }
            if f.label(u) != g.label(v) {
                return Err(Error::UnmatchedLabels(u, v));
            }
        }
        // Sorted by u, so u and v must both be strictly increasing (pre-order).
        for w in self.pairs.windows(2) {
            let ((u1, v1), (u2, v2)) = (w[0], w[1]);
            if u1 == u2 || v1 >= v2 {
                return Err(Error::Crossing(u1, v1, u2, v2));
            }
        }
        let mut by_close: Vec<(usize, usize, NodeId, NodeId)> = self
            .pairs
            .iter()
            .map(|&(u, v)| (f.close(u), g.close(v), u, v))
            .collect();
        by_close.sort_unstable();
        for w in by_close.windows(2) {
            if w[0].1 >= w[1].1 {
                return Err(Error::Crossing(w[0].2, w[0].3, w[1].2, w[1].3));
            }
        }
        Ok(())
    }
}

/// First label not used by either forest and outside the user range.
pub fn fresh_label_base(f: &Forest, g: &Forest) -> u32 {
    let used = f.max_label().max(g.max_label()).unwrap_or(0);
    used.max(FRESH_LABEL_BASE - 1) + 1
}

/// Splits each forest at the matched nodes and interleaves the pieces with
/// matched single-node separators, so that every matched node becomes a leaf.
pub fn reduce_height(f: &Forest, g: &Forest, m: &Matching) -> Result<(Forest, Forest, Matching)> {
    m.validate(f, g)?;
    let sep = Label(fresh_label_base(f, g));
    let (fh, fmap, fsep) = split_at_marked(f, m.pairs().iter().map(|p| p.0), sep);
    let (gh, gmap, gsep) = split_at_marked(g, m.pairs().iter().map(|p| p.1), sep);
    let mut pairs: Vec<(NodeId, NodeId)> = m
        .pairs()
        .iter()
        .map(|&(u, v)| (fmap[u], gmap[v]))
        .collect();
    pairs.extend(fsep.iter().copied().zip(gsep.iter().copied()));
    Ok((fh, gh, Matching::new(pairs)))
}

/// Returns the flattened forest, the old→new node map and the separator ids.
/// Piece `i` holds the nodes whose nearest proper marked ancestor is the
/// `i`-th marked node; pieces after the first are preceded by a separator.
fn split_at_marked(
    f: &Forest,
    marked: impl Iterator<Item = NodeId>,
    sep: Label,
) -> (Forest, Vec<NodeId>, Vec<NodeId>) {
    let n = f.len();
    let mut mark = vec![0usize; n];
    let mut count = 0;
    for (i, u) in marked.enumerate() {
        mark[u] = i + 1;
        count = i + 1;
    }
    let mut class = vec![0usize; n];
    let mut sizes = vec![0usize; count + 1];
    for u in 0..n {
        class[u] = match f.parent(u) {
            None => 0,
            Some(p) if mark[p] > 0 => mark[p],
            Some(p) => class[p],
        };
        sizes[class[u]] += 1;
    }
    // Piece i > 0 starts right after its separator.
    let mut next = vec![0usize; count + 1];
    let mut seps = Vec::with_capacity(count);
    for i in 1..=count {
        seps.push(next[i - 1] + sizes[i - 1]);
        next[i] = next[i - 1] + sizes[i - 1] + 1;
    }
    let total = n + count;
    let mut parents = vec![None; total];
    let mut labels = vec![sep; total];
    let mut map = vec![0; n];
    for u in 0..n {
        let c = class[u];
        map[u] = next[c];
        next[c] += 1;
    }
    for u in 0..n {
        labels[map[u]] = f.label(u);
        parents[map[u]] = match f.parent(u) {
            Some(p) if mark[p] == 0 => Some(map[p]),
            _ => None,
        };
    }
    (Forest::from_parents(&parents, &labels), map, seps)
}

fn left_siblings(f: &Forest) -> Vec<Option<NodeId>> {
    let mut left = vec![None; f.len()];
    let mut link = |ids: &mut dyn Iterator<Item = NodeId>| {
        let mut prev = None;
        for c in ids {
            left[c] = prev;
            prev = Some(c);
        }
    };
    link(&mut f.roots().iter().copied());
    for u in 0..f.len() {
        link(&mut f.children(u));
    }
    left
}

/// Drops matched leaf pairs whose immediate left siblings are matched to
/// each other, deleting those leaves from both forests.
pub fn prune_redundant(f: &Forest, g: &Forest, m: &Matching) -> (Forest, Forest, Matching) {
    assert!(
        m.pairs().iter().all(|&(u, v)| f.is_leaf(u) && g.is_leaf(v)),
        "pruning requires a matching of leaves"
    );
    let lf = left_siblings(f);
    let lg = left_siblings(g);
    let mut partner = vec![None; f.len()];
    for &(u, v) in m.pairs() {
        partner[u] = Some(v);
    }
    let mut drop_f = vec![false; f.len()];
    let mut drop_g = vec![false; g.len()];
    let mut kept = Vec::new();
    for &(u, v) in m.pairs() {
        let redundant = match (lf[u], lg[v]) {
            (Some(a), Some(b)) => partner[a] == Some(b),
            _ => false,
        };
        if redundant {
            drop_f[u] = true;
            drop_g[v] = true;
        } else {
            kept.push((u, v));
        }
    }
    let (fp, fmap) = delete_nodes(f, &drop_f);
    let (gp, gmap) = delete_nodes(g, &drop_g);
    let mp = Matching::new(kept.into_iter().map(|(u, v)| (fmap[u], gmap[v])).collect());
    assert!(
        5 * mp.len() <= 2 * (fp.len() + gp.len() + 1),
        "pruned matching exceeds the 2/5 bound"
    );
    (fp, gp, mp)
}

fn delete_nodes(f: &Forest, drop: &[bool]) -> (Forest, Vec<NodeId>) {
    let keep: Vec<NodeId> = (0..f.len()).filter(|&u| !drop[u]).collect();
    let mut map = vec![usize::MAX; f.len()];
    for (i, &u) in keep.iter().enumerate() {
        map[u] = i;
    }
    (f.induced(&keep), map)
}

/// Attaches `k + 1` children with pairwise unique fresh labels below each
/// matched leaf, identically in both forests.
pub fn gadget(f: &Forest, g: &Forest, m: &Matching, k: usize) -> (Forest, Forest) {
    let base = fresh_label_base(f, g) as u64;
    let total = base + (m.len() as u64) * (k as u64 + 1);
    assert!(total <= u32::MAX as u64 + 1, "label space exhausted");
    let mut slot_f = vec![usize::MAX; f.len()];
    let mut slot_g = vec![usize::MAX; g.len()];
    for (i, &(u, v)) in m.pairs().iter().enumerate() {
        assert!(f.is_leaf(u) && g.is_leaf(v), "gadget requires a matching of leaves");
        slot_f[u] = i;
        slot_g[v] = i;
    }
    let grow = |x: &Forest, slot: &[usize]| -> Forest {
        let mut parens = Vec::with_capacity(2 * (x.len() + m.len() * (k + 1)));
        let mut node = 0;
        for p in x.parens() {
            parens.push(p);
            if p.side == Side::Open {
                let i = slot[node];
                node += 1;
                if i != usize::MAX {
                    for j in 0..=k {
                        let l = Label((base + (i * (k + 1) + j) as u64) as u32);
                        parens.push(Paren::open(l));
                        parens.push(Paren::close(l));
                    }
                }
            }
        }
        Forest::from_parens(&parens).expect("gadget keeps balance")
    };
    (grow(f, &slot_f), grow(g, &slot_g))
}

/// Forests whose bounded distance equals the bounded distance of the input
/// under the forced matching `m`.
pub fn partial_reduce(f: &Forest, g: &Forest, m: &Matching, k: usize) -> Result<(Forest, Forest)> {
    let (fh, gh, mh) = reduce_height(f, g, m)?;
    let (fb, gb, mb) = prune_redundant(&fh, &gh, &mh);
    Ok(gadget(&fb, &gb, &mb, k))
}
