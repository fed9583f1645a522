//! Exact tree edit distance by dynamic programming.
//!
//! [`ted_exact`] is a memoized recursion over pairs of subforests and serves
//! as the reference implementation. [`ted_threshold`] is a banded
//! Zhang–Shasha variant that only explores alignments of cost at most `k`
//! and is used to solve residual instances.

use std::collections::HashMap;
use std::fmt;

use crate::forest::{Forest, Label, NodeId};
use crate::partial::{self, Matching};

/// Tree edit distance clamped to a threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TedValue {
    Finite(usize),
    Infinity,
}

impl TedValue {
    pub fn clamp(d: usize, k: usize) -> Self {
        if d <= k {
            TedValue::Finite(d)
        } else {
            TedValue::Infinity
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            TedValue::Finite(d) => Some(d),
            TedValue::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == TedValue::Infinity
    }
}

impl fmt::Display for TedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TedValue::Finite(d) => write!(f, "{d}"),
            TedValue::Infinity => write!(f, "INF"),
        }
    }
}

/// Exact unit-cost tree edit distance.
pub fn ted_exact(f: &Forest, g: &Forest) -> usize {
    let mut memo = HashMap::new();
    let mut ctx = ExactCtx { f, g, memo: &mut memo };
    ctx.dist(0, f.len(), 0, g.len())
}

struct ExactCtx<'a> {
    f: &'a Forest,
    g: &'a Forest,
    memo: &'a mut HashMap<(u32, u32, u32, u32), usize>,
}

impl ExactCtx<'_> {
    /// Distance between the subforests occupying pre-order ranges `[a, b)`
    /// of F and `[c, d)` of G; both ranges are unions of whole subtrees.
    fn dist(&mut self, a: usize, b: usize, c: usize, d: usize) -> usize {
        if a == b {
            return d - c;
        }
        if c == d {
            return b - a;
        }
        let key = (a as u32, b as u32, c as u32, d as u32);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let (sa, sc) = (self.f.size(a), self.g.size(c));
        let delete = self.dist(a + 1, b, c, d) + 1;
        let insert = self.dist(a, b, c + 1, d) + 1;
        let relabel = (self.f.label(a) != self.g.label(c)) as usize;
        let matched = self.dist(a + 1, a + sa, c + 1, c + sc)
            + self.dist(a + sa, b, c + sc, d)
            + relabel;
        let v = delete.min(insert).min(matched);
        self.memo.insert(key, v);
        v
    }
}

/// Postorder view of a forest extended with a virtual root.
struct Postorder {
    /// Labels by postorder rank (1-based); rank `n + 1` is the virtual root.
    label: Vec<Option<Label>>,
    /// Postorder rank of the leftmost leaf below each rank.
    lml: Vec<usize>,
    keyroots: Vec<usize>,
}

impl Postorder {
    fn new(f: &Forest) -> Self {
        let n = f.len();
        let mut rank = vec![0usize; n];
        let mut next = 1;
        // Closing order of nodes is postorder.
        let mut stack: Vec<NodeId> = Vec::new();
        for u in 0..n {
            while let Some(&top) = stack.last() {
                if f.is_ancestor(top, u) {
                    break;
                }
                rank[top] = next;
                next += 1;
                stack.pop();
            }
            stack.push(u);
        }
        while let Some(top) = stack.pop() {
            rank[top] = next;
            next += 1;
        }
        let mut label = vec![None; n + 2];
        let mut lml = vec![0usize; n + 2];
        // Leftmost leaf of u is the first leaf at or after u in pre-order.
        let mut leaf_after = vec![0usize; n + 1];
        for u in (0..n).rev() {
            leaf_after[u] = if f.is_leaf(u) { u } else { leaf_after[u + 1] };
        }
        for u in 0..n {
            label[rank[u]] = Some(f.label(u));
            lml[rank[u]] = rank[leaf_after[u]];
        }
        lml[n + 1] = 1;
        let mut seen = vec![false; n + 2];
        let mut keyroots = Vec::new();
        for i in (1..=n + 1).rev() {
            if !seen[lml[i]] {
                seen[lml[i]] = true;
                keyroots.push(i);
            }
        }
        keyroots.reverse();
        Postorder {
            label,
            lml,
            keyroots,
        }
    }
}

/// Tree edit distance if it is at most `k`, otherwise [`TedValue::Infinity`].
pub fn ted_threshold(f: &Forest, g: &Forest, k: usize) -> TedValue {
    let (n, m) = (f.len(), g.len());
    if n.abs_diff(m) > k {
        return TedValue::Infinity;
    }
    if f == g {
        return TedValue::Finite(0);
    }
    let band = k.min(n.max(m) + 1);
    let inf = band + 1;
    let pf = Postorder::new(f);
    let pg = Postorder::new(g);
    let width = 2 * band + 1;
    // Tree distances for postorder pairs (x, y) with |x - y| ≤ band.
    let mut td = vec![inf as u32; (n + 2) * width];
    let td_at = |x: usize, y: usize| -> Option<usize> {
        (x.abs_diff(y) <= band).then(|| x * width + (y + band - x))
    };
    let mut fd: Vec<u32> = Vec::new();
    // Keyroots of G grouped by leftmost leaf for the band restriction.
    let mut g_kr_by_lml = vec![usize::MAX; m + 2];
    for &j in &pg.keyroots {
        g_kr_by_lml[pg.lml[j]] = j;
    }
    let cap = |v: u32| v.min(inf as u32);
    let mut partners: Vec<usize> = Vec::new();
    for &i in &pf.keyroots {
        let li = pf.lml[i];
        let lo = li.saturating_sub(band).max(1);
        let hi = (li + band).min(m + 1);
        // Tables must be filled in increasing keyroot order on both sides.
        partners.clear();
        partners.extend((lo..=hi).map(|lj| g_kr_by_lml[lj]).filter(|&j| j != usize::MAX));
        partners.sort_unstable();
        for &j in &partners {
            let lj = pg.lml[j];
            let rows = i - li + 2;
            let cols = j - lj + 2;
            fd.clear();
            fd.resize(rows * width, inf as u32);
            let at = |a: usize, b: usize| -> Option<usize> {
                (a.abs_diff(b) <= band).then(|| a * width + (b + band - a))
            };
            fd[at(0, 0).unwrap()] = 0;
            for a in 1..rows.min(band + 1) {
                fd[at(a, 0).unwrap()] = a as u32;
            }
            for b in 1..cols.min(band + 1) {
                fd[at(0, b).unwrap()] = b as u32;
            }
            for a in 1..rows {
                let x = li + a - 1;
                let b_lo = a.saturating_sub(band).max(1);
                let b_hi = (a + band).min(cols - 1);
                for b in b_lo..=b_hi {
                    let y = lj + b - 1;
                    let get = |fd: &Vec<u32>, a: usize, b: usize| match at(a, b) {
                        Some(p) => fd[p],
                        None => inf as u32,
                    };
                    let del = get(&fd, a - 1, b) + 1;
                    let ins = get(&fd, a, b - 1) + 1;
                    let v = if pf.lml[x] == li && pg.lml[y] == lj {
                        let relabel = (pf.label[x] != pg.label[y]) as u32;
                        let v = cap(del.min(ins).min(get(&fd, a - 1, b - 1) + relabel));
                        if let Some(p) = td_at(x, y) {
                            td[p] = v;
                        }
                        v
                    } else {
                        let sub = match td_at(x, y) {
                            Some(p) => get(&fd, pf.lml[x] - li, pg.lml[y] - lj) + td[p],
                            None => inf as u32,
                        };
                        cap(del.min(ins).min(sub))
                    };
                    fd[at(a, b).unwrap()] = v;
                }
            }
        }
    }
    match td_at(n + 1, m + 1) {
        Some(p) => TedValue::clamp(td[p] as usize, k),
        None => TedValue::Infinity,
    }
}

/// Minimum cost of a tree alignment that matches every pair of `m`.
///
/// Returns [`TedValue::Infinity`] when `m` is not a non-crossing matching.
pub fn ted_constrained(f: &Forest, g: &Forest, m: &Matching) -> TedValue {
    if m.validate(f, g).is_err() {
        return TedValue::Infinity;
    }
    let (fh, gh, mh) = partial::reduce_height(f, g, m).expect("validated matching");
    // Matching only the pairs of M and editing everything else is feasible.
    let k = fh.len() + gh.len() - 2 * mh.len();
    let (fg, gg) = partial::gadget(&fh, &gh, &mh, k);
    TedValue::Finite(ted_exact(&fg, &gg))
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
    fn exact_examples() {
        let (f, g) = pair("(a)", "(b)");
        assert_eq!(ted_exact(&f, &g), 1);
        let (f, g) = pair("(a)(b(x)(y)(z))", "(a(x)(y)(z))");
        assert_eq!(ted_exact(&f, &g), 2);
        assert_eq!(ted_exact(&f, &f), 0);
        let (f, g) = pair("", "(a(b))");
        assert_eq!(ted_exact(&f, &g), 2);
    }

    #[test]
    fn threshold_examples() {
        let (f, g) = pair("(a)", "(b)");
        assert_eq!(ted_threshold(&f, &g, 0), TedValue::Infinity);
        assert_eq!(ted_threshold(&f, &g, 1), TedValue::Finite(1));
        assert_eq!(ted_threshold(&f, &f, 0), TedValue::Finite(0));
        let (f, g) = pair("(a)(b(x)(y)(z))", "(a(x)(y)(z))");
        assert_eq!(ted_threshold(&f, &g, 1), TedValue::Infinity);
        assert_eq!(ted_threshold(&f, &g, 2), TedValue::Finite(2));
        assert_eq!(ted_threshold(&f, &g, 9), TedValue::Finite(2));
    }

    #[test]
    fn constrained_examples() {
        let (f, g) = pair("(a(b)(c))", "(a(b)(c))");
        assert_eq!(ted_constrained(&f, &g, &Matching::default()), TedValue::Finite(0));
        assert_eq!(
            ted_constrained(&f, &g, &Matching::new(vec![(0, 0)])),
            TedValue::Finite(0)
        );
        assert_eq!(
            ted_constrained(&f, &g, &Matching::new(vec![(1, 2)])),
            TedValue::Infinity
        );
        let (f, g) = pair("(a)(b)(c)(d)", "(b)(c)(d)(a)");
        assert_eq!(ted_exact(&f, &g), 2);
        assert_eq!(
            ted_constrained(&f, &g, &Matching::new(vec![(0, 3)])),
            TedValue::Finite(6)
        );
    }
}
