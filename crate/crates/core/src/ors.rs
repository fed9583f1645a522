//! Orthogonal range successor: the point with the smallest y-coordinate in
//! an axis-parallel rectangle, answered with a merge-sort tree.

use std::collections::HashMap;
use std::hash::Hash;

/// Static point set over `(x, y)` with an attached payload.
pub struct RangeSuccessor<T> {
    xs: Vec<usize>,
    /// `levels[d]` holds, for each block of `2^d` x-sorted points, the block's
    /// entries sorted by y.
    levels: Vec<Vec<(usize, u32)>>,
    payload: Vec<T>,
}

impl<T: Clone> RangeSuccessor<T> {
    pub fn new(mut points: Vec<(usize, usize, T)>) -> Self {
        points.sort_by_key(|p| (p.0, p.1));
        let xs: Vec<usize> = points.iter().map(|p| p.0).collect();
        let mut base: Vec<(usize, u32)> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.1, i as u32))
            .collect();
        let payload = points.into_iter().map(|p| p.2).collect();
        let n = base.len();
        let mut levels = vec![base.clone()];
        let mut width = 1;
        while width < n {
            let mut next = Vec::with_capacity(n);
            for chunk in base.chunks(2 * width) {
                let mid = chunk.len().min(width);
                let (l, r) = chunk.split_at(mid);
                let (mut a, mut b) = (0, 0);
                while a < l.len() || b < r.len() {
                    if b == r.len() || (a < l.len() && l[a] <= r[b]) {
                        next.push(l[a]);
                        a += 1;
                    } else {
                        next.push(r[b]);
                        b += 1;
                    }
                }
            }
            base = next;
            levels.push(base.clone());
            width *= 2;
        }
        RangeSuccessor {
            xs,
            levels,
            payload,
        }
    }

    /// Among points with `x ∈ [x_lo, x_hi]` and `y ∈ [y_lo, y_hi]`, the one
    /// with minimal `y` (ties broken by minimal `x`).
    pub fn query(
        &self,
        x_lo: usize,
        x_hi: usize,
        y_lo: usize,
        y_hi: usize,
    ) -> Option<(usize, usize, &T)> {
        if x_lo > x_hi || y_lo > y_hi {
            return None;
        }
        let mut lo = self.xs.partition_point(|&x| x < x_lo);
        let mut hi = self.xs.partition_point(|&x| x <= x_hi);
        let mut best: Option<(usize, u32)> = None;
        let mut level = 0;
        while lo < hi {
            let width = 1 << level;
            if lo % (2 * width) != 0 && lo + width <= hi {
                self.probe(level, lo, width, y_lo, y_hi, &mut best);
                lo += width;
            }
            if hi % (2 * width) != 0 && hi - width >= lo {
                hi -= width;
                self.probe(level, hi, width, y_lo, y_hi, &mut best);
            }
            level += 1;
            if level >= self.levels.len() {
                // Remaining range is a single aligned top-level block.
                if lo < hi {
                    self.probe(self.levels.len() - 1, lo, hi - lo, y_lo, y_hi, &mut best);
                }
                break;
            }
        }
        best.map(|(y, i)| (self.xs[i as usize], y, &self.payload[i as usize]))
    }

    fn probe(
        &self,
        level: usize,
        start: usize,
        width: usize,
        y_lo: usize,
        y_hi: usize,
        best: &mut Option<(usize, u32)>,
    ) {
        let block = &self.levels[level][start..start + width];
        let k = block.partition_point(|e| e.0 < y_lo);
        if k < block.len() && block[k].0 <= y_hi {
            let cand = block[k];
            let better = match *best {
                None => true,
                Some(b) => (cand.0, self.xs[cand.1 as usize]) < (b.0, self.xs[b.1 as usize]),
            };
            if better {
                *best = Some(cand);
            }
        }
    }
}

/// Point sets grouped by a key, each answering range-successor queries.
pub struct OrsIndex<K, T> {
    groups: HashMap<K, RangeSuccessor<T>>,
}

impl<K: Eq + Hash, T: Clone> OrsIndex<K, T> {
    pub fn new(points: impl IntoIterator<Item = (K, usize, usize, T)>) -> Self {
        let mut grouped: HashMap<K, Vec<(usize, usize, T)>> = HashMap::new();
        for (key, x, y, t) in points {
            grouped.entry(key).or_default().push((x, y, t));
        }
        OrsIndex {
            groups: grouped
                .into_iter()
                .map(|(k, pts)| (k, RangeSuccessor::new(pts)))
                .collect(),
        }
    }

    pub fn query(
        &self,
        key: &K,
        x: (usize, usize),
        y: (usize, usize),
    ) -> Option<(usize, usize, &T)> {
        self.groups.get(key)?.query(x.0, x.1, y.0, y.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_single() {
        let e: RangeSuccessor<()> = RangeSuccessor::new(vec![]);
        assert!(e.query(0, 10, 0, 10).is_none());
        let s = RangeSuccessor::new(vec![(3, 4, 'a')]);
        assert_eq!(s.query(0, 10, 0, 10).map(|p| *p.2), Some('a'));
        assert!(s.query(4, 10, 0, 10).is_none());
        assert!(s.query(0, 10, 5, 10).is_none());
    }

    #[test]
    fn grouped_by_key() {
        let idx = OrsIndex::new(vec![(1u8, 2, 9, 'x'), (1, 3, 7, 'y'), (2, 3, 1, 'z')]);
        assert_eq!(idx.query(&1, (0, 5), (0, 10)).map(|p| *p.2), Some('y'));
        assert_eq!(idx.query(&2, (0, 5), (0, 10)).map(|p| *p.2), Some('z'));
        assert!(idx.query(&3, (0, 5), (0, 10)).is_none());
    }
}
