//! Lowest common ancestors via an Euler tour, per-block minima and a sparse
//! table over the blocks.

use crate::forest::{Forest, NodeId};

const BLOCK: usize = 32;

pub struct LcaIndex {
    first: Vec<usize>,
    /// Euler tour entries packed as `(depth << 32) | node`, so that the
    /// minimum entry is the shallowest node.
    tour: Vec<u64>,
    /// `table[l][b]`: minimum over blocks `b .. b + 2^l`.
    table: Vec<Vec<u64>>,
    tree_of: Vec<usize>,
}

impl LcaIndex {
    pub fn new(forest: &Forest) -> Self {
        let n = forest.len();
        let mut tour: Vec<u64> = Vec::with_capacity(2 * n);
        let mut first = vec![0; n];
        let mut tree_of = vec![0; n];
        let pack = |u: NodeId| ((forest.depth(u) as u64) << 32) | u as u64;
        let mut stack: Vec<NodeId> = Vec::new();
        for u in 0..n {
            while let Some(&top) = stack.last() {
                if forest.is_ancestor(top, u) {
                    break;
                }
                stack.pop();
                if let Some(&parent) = stack.last() {
                    tour.push(pack(parent));
                }
            }
            tree_of[u] = match forest.parent(u) {
                Some(p) => tree_of[p],
                None => u,
            };
            first[u] = tour.len();
            tour.push(pack(u));
            stack.push(u);
        }
        let blocks: Vec<u64> = tour
            .chunks(BLOCK)
            .map(|c| *c.iter().min().unwrap())
            .collect();
        let mut table = vec![blocks];
        let mut span = 1;
        while 2 * span <= table[0].len() {
            let prev = table.last().unwrap();
            let next: Vec<u64> = (0..prev.len() - span)
                .map(|i| prev[i].min(prev[i + span]))
                .collect();
            table.push(next);
            span *= 2;
        }
        LcaIndex {
            first,
            tour,
            table,
            tree_of,
        }
    }

    fn range_min(&self, a: usize, b: usize) -> u64 {
        let (ba, bb) = (a / BLOCK + 1, b / BLOCK);
        if ba >= bb {
            return *self.tour[a..b].iter().min().unwrap();
        }
        let head = self.tour[a..ba * BLOCK].iter().min().copied().unwrap_or(u64::MAX);
        let tail = self.tour[bb * BLOCK..b].iter().min().copied().unwrap_or(u64::MAX);
        let level = (usize::BITS - 1 - (bb - ba).leading_zeros()) as usize;
        let row = &self.table[level];
        head.min(tail).min(row[ba]).min(row[bb - (1 << level)])
    }

    /// Lowest common ancestor, or `None` when `u` and `v` lie in different trees.
    pub fn lca(&self, u: NodeId, v: NodeId) -> Option<NodeId> {
        if self.tree_of[u] != self.tree_of[v] {
            return None;
        }
        let (x, y) = (self.first[u], self.first[v]);
        let m = self.range_min(x.min(y), x.max(y) + 1);
        Some((m & 0xffff_ffff) as NodeId)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{parse_paren_text, Interner};

    #[test]
    fn basic_queries() {
        let mut i = Interner::new();
        let f = parse_paren_text("(a(b(c)(d))(e))(f(g))", &mut i).unwrap();
        let idx = LcaIndex::new(&f);
        assert_eq!(idx.lca(2, 2), Some(2));
        assert_eq!(idx.lca(0, 3), Some(0));
        assert_eq!(idx.lca(2, 3), Some(1));
        assert_eq!(idx.lca(3, 4), Some(0));
        assert_eq!(idx.lca(6, 5), Some(5));
        assert_eq!(idx.lca(2, 6), None);
    }
}
