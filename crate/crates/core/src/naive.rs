//! Slow reference implementations used to cross-check the fast algorithms.

use std::collections::{BTreeSet, HashMap};

use crate::align::Alignment;
use crate::forest::{symbol_class, symbol_is_open, Forest, Label, NodeId};
use crate::partial::Matching;
use crate::runs::Run;

/// Smallest period of a non-empty string via the failure function.
pub fn smallest_period<T: PartialEq>(s: &[T]) -> usize {
    let n = s.len();
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n.saturating_sub(1)]
}

/// All runs by scanning every candidate period; quadratic.
pub fn runs<T: PartialEq>(s: &[T]) -> Vec<Run> {
    let n = s.len();
    let mut out = BTreeSet::new();
    for p in 1..=n / 2 {
        let mut x = 0;
        while x + p < n {
            if s[x] != s[x + p] {
                x += 1;
                continue;
            }
            let a = x;
            while x + p < n && s[x] == s[x + p] {
                x += 1;
            }
            let (i, j) = (a, x + p);
            if j - i >= 2 * p && smallest_period(&s[i..j]) == p {
                out.insert(Run { i, j, p });
            }
        }
    }
    out.into_iter().collect()
}

/// Edit distance restricted to alignments of width at most `w`.
pub fn banded_edit_distance<T: PartialEq>(x: &[T], y: &[T], w: usize) -> Option<usize> {
    let (n, m) = (x.len(), y.len());
    const INF: usize = usize::MAX / 2;
    let mut dp = vec![vec![INF; m + 1]; n + 1];
    for i in 0..=n {
        for j in 0..=m {
            if i.abs_diff(j) > w {
                continue;
            }
            if i == 0 && j == 0 {
                dp[i][j] = 0;
                continue;
            }
            let mut v = INF;
            if i > 0 {
                v = v.min(dp[i - 1][j] + 1);
            }
            if j > 0 {
                v = v.min(dp[i][j - 1] + 1);
            }
            if i > 0 && j > 0 {
                v = v.min(dp[i - 1][j - 1] + (x[i - 1] != y[j - 1]) as usize);
            }
            dp[i][j] = v;
        }
    }
    (dp[n][m] < INF).then_some(dp[n][m])
}

/// Lowest common ancestor by walking parent pointers.
pub fn lca(f: &Forest, u: NodeId, v: NodeId) -> Option<NodeId> {
    let mut seen = vec![false; f.len()];
    let mut a = Some(u);
    while let Some(x) = a {
        seen[x] = true;
        a = f.parent(x);
    }
    let mut b = Some(v);
    while let Some(x) = b {
        if seen[x] {
            return Some(x);
        }
        b = f.parent(x);
    }
    None
}

/// Minimal-y point in a rectangle by linear scan (ties by minimal x).
pub fn range_successor<T: Clone>(
    points: &[(usize, usize, T)],
    x: (usize, usize),
    y: (usize, usize),
) -> Option<(usize, usize, T)> {
    points
        .iter()
        .filter(|p| x.0 <= p.0 && p.0 <= x.1 && y.0 <= p.1 && p.1 <= y.1)
        .min_by_key(|p| (p.1, p.0))
        .cloned()
}

/// A node mapping between two forests: pairs sorted by the `F` node.
pub type Mapping = Vec<(NodeId, NodeId)>;

/// Cost of the tree alignment described by a mapping.
pub fn mapping_cost(f: &Forest, g: &Forest, m: &[(NodeId, NodeId)]) -> usize {
    let relabels = m.iter().filter(|&&(u, v)| f.label(u) != g.label(v)).count();
    f.len() + g.len() - 2 * m.len() + relabels
}

/// Enumerates every mapping preserving ancestry and sibling order that
/// contains all pairs of `required`, calling `visit` on each.
pub fn for_each_mapping(
    f: &Forest,
    g: &Forest,
    required: &[(NodeId, NodeId)],
    visit: &mut dyn FnMut(&[(NodeId, NodeId)]),
) {
    let mut req_f = vec![None; f.len()];
    let mut req_g = vec![false; g.len()];
    for &(u, v) in required {
        req_f[u] = Some(v);
        req_g[v] = true;
    }
    let mut cur: Mapping = Vec::new();
    fn rec(
        f: &Forest,
        g: &Forest,
        u: NodeId,
        req_f: &[Option<NodeId>],
        req_g: &[bool],
        cur: &mut Mapping,
        visit: &mut dyn FnMut(&[(NodeId, NodeId)]),
    ) {
        if u == f.len() {
            visit(cur);
            return;
        }
        let first = cur.last().map_or(0, |p| p.1 + 1);
        let ok = |v: NodeId, cur: &Mapping| {
            cur.iter()
                .all(|&(a, b)| f.is_ancestor(a, u) == g.is_ancestor(b, v))
        };
        match req_f[u] {
            Some(v) => {
                if v >= first && ok(v, cur) {
                    cur.push((u, v));
                    rec(f, g, u + 1, req_f, req_g, cur, visit);
                    cur.pop();
                }
            }
            None => {
                rec(f, g, u + 1, req_f, req_g, cur, visit);
                for v in first..g.len() {
                    if !req_g[v] && ok(v, cur) {
                        cur.push((u, v));
                        rec(f, g, u + 1, req_f, req_g, cur, visit);
                        cur.pop();
                    }
                }
            }
        }
    }
    rec(f, g, 0, &req_f, &req_g, &mut cur, visit);
}

/// Tree edit distance by exhaustive mapping enumeration.
pub fn ted_brute(f: &Forest, g: &Forest) -> usize {
    ted_constrained_brute(f, g, &Matching::default()).expect("unconstrained mapping exists")
}

/// Constrained tree edit distance by exhaustive enumeration; `None` when no
/// mapping contains the required pairs with equal labels.
pub fn ted_constrained_brute(f: &Forest, g: &Forest, m: &Matching) -> Option<usize> {
    if m.pairs().iter().any(|&(u, v)| f.label(u) != g.label(v)) {
        return None;
    }
    let mut best = None;
    for_each_mapping(f, g, m.pairs(), &mut |map| {
        let c = mapping_cost(f, g, map);
        best = Some(best.map_or(c, |b: usize| b.min(c)));
    });
    best
}

/// All minimum-cost mappings.
pub fn optimal_mappings(f: &Forest, g: &Forest) -> (usize, Vec<Mapping>) {
    let mut best = usize::MAX;
    let mut all: Vec<Mapping> = Vec::new();
    for_each_mapping(f, g, &[], &mut |map| {
        let c = mapping_cost(f, g, map);
        if c < best {
            best = c;
            all.clear();
        }
        if c == best {
            all.push(map.to_vec());
        }
    });
    (best, all)
}

/// Tree alignment of `P(F)` onto `P(G)` realizing a mapping; between aligned
/// parentheses, deletions precede insertions when `deletions_first` is set.
pub fn mapping_alignment(f: &Forest, g: &Forest, m: &[(NodeId, NodeId)], deletions_first: bool) -> Alignment {
    let mut anchors: Vec<(usize, usize)> = m
        .iter()
        .flat_map(|&(u, v)| [(f.open(u), g.open(v)), (f.close(u), g.close(v))])
        .collect();
    anchors.sort_unstable();
    anchors.push((2 * f.len(), 2 * g.len()));
    let mut pts = vec![(0, 0)];
    let (mut x, mut y) = (0, 0);
    for (i, &(a, b)) in anchors.iter().enumerate() {
        let gap = |pts: &mut Vec<(usize, usize)>, x: &mut usize, y: &mut usize, del: bool| {
            if del {
                while *x < a {
                    *x += 1;
                    pts.push((*x, *y));
                }
            } else {
                while *y < b {
                    *y += 1;
                    pts.push((*x, *y));
                }
            }
        };
        gap(&mut pts, &mut x, &mut y, deletions_first);
        gap(&mut pts, &mut x, &mut y, !deletions_first);
        if i + 1 < anchors.len() {
            x += 1;
            y += 1;
            pts.push((x, y));
        }
    }
    Alignment::new(pts)
}

/// Equivalence classes as a canonical vector: each element is replaced by
/// the index of the first element with the same key.
pub fn canonical_classes<K: std::hash::Hash + Eq>(keys: impl IntoIterator<Item = K>) -> Vec<usize> {
    let mut first: HashMap<K, usize> = HashMap::new();
    keys.into_iter()
        .enumerate()
        .map(|(i, k)| *first.entry(k).or_insert(i))
        .collect()
}

/// Nodes whose depth is congruent to `r` modulo `h`, by direct scan.
pub fn marked_levels(f: &Forest, r: usize, h: usize) -> Vec<NodeId> {
    (0..f.len()).filter(|&u| f.depth(u) % h == r).collect()
}

/// Number of nodes on the longest top-down path avoiding `marked` nodes.
pub fn longest_unmarked_path(f: &Forest, marked: &[bool]) -> usize {
    let mut run = vec![0usize; f.len()];
    let mut best = 0;
    for u in 0..f.len() {
        if marked[u] {
            continue;
        }
        run[u] = 1 + f.parent(u).map_or(0, |p| run[p]);
        best = best.max(run[u]);
    }
    best
}

/// Look-ahead classes keyed by the explicit truncated subtree strings.
pub fn lookahead_classes(f: &Forest, g: &Forest, lab_f: &[u32], lab_g: &[u32], d: usize) -> (Vec<usize>, Vec<usize>) {
    let key = |x: &Forest, lab: &[u32], v: NodeId| -> Vec<u64> {
        let relabeled = relabel(x, lab);
        relabeled.subtree_trimmed(v, d).symbols()
    };
    let keys: Vec<Vec<u64>> = (0..f.len())
        .map(|v| key(f, lab_f, v))
        .chain((0..g.len()).map(|v| key(g, lab_g, v)))
        .collect();
    let all = canonical_classes(keys);
    (all[..f.len()].to_vec(), all[f.len()..].to_vec())
}

fn relabel(x: &Forest, lab: &[u32]) -> Forest {
    let parents: Vec<Option<NodeId>> = (0..x.len()).map(|u| x.parent(u)).collect();
    let labels: Vec<Label> = lab.iter().map(|&c| Label(c)).collect();
    Forest::from_parents(&parents, &labels)
}

/// Compatibility classes by checking every node pair and merging classes
/// until nothing changes.
pub fn compat_classes(f: &Forest, g: &Forest, lab_f: &[u32], lab_g: &[u32], w: usize) -> (Vec<usize>, Vec<usize>) {
    let (nf, ng) = (f.len(), g.len());
    let mut comp: Vec<usize> = (0..nf + ng).collect();
    let mut edges = Vec::new();
    for u in 0..nf {
        for v in 0..ng {
            if lab_f[u] == lab_g[v]
                && f.open(u).abs_diff(g.open(v)) <= w
                && f.close(u).abs_diff(g.close(v)) <= w
            {
                edges.push((u, nf + v));
            }
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b) in &edges {
            let m = comp[a].min(comp[b]);
            if comp[a] != m || comp[b] != m {
                comp[a] = m;
                comp[b] = m;
                changed = true;
            }
        }
    }
    let all = canonical_classes(comp);
    (all[..nf].to_vec(), all[nf..].to_vec())
}

/// Length of the longest prefix of `s[x..]` having period `q`, for every `x`.
fn periodic_extent<T: PartialEq>(s: &[T], q: usize) -> Vec<usize> {
    let n = s.len();
    // same[x]: consecutive positions t ≥ x with s[t] = s[t + q].
    let mut same = vec![0; n + 1];
    for x in (0..n).rev() {
        if x + q < n && s[x] == s[x + q] {
            same[x] = same[x + 1] + 1;
        }
    }
    (0..n).map(|x| (n - x).min(q + same[x])).collect()
}

/// Balanced with matching classes on both parentheses of every pair.
pub fn is_balanced_symbols(s: &[u64]) -> bool {
    let mut stack = Vec::new();
    for &c in s {
        if symbol_is_open(c) {
            stack.push(symbol_class(c));
        } else if stack.pop() != Some(symbol_class(c)) {
            return false;
        }
    }
    stack.is_empty()
}

/// A witness `(x, y, |Q|)` of `Q^e` having `s`-synchronized occurrences in
/// `X, Y` with `|Q| ≤ max_root`, optionally requiring a balanced `Q`.
pub fn synchronized_power(
    x: &[u64],
    y: &[u64],
    max_root: usize,
    e: usize,
    s: usize,
    balanced: bool,
) -> Option<(usize, usize, usize)> {
    for q in 1..=max_root {
        let len = q * e;
        let ext = periodic_extent(x, q);
        for a in 0..x.len() {
            if ext[a] < len || (balanced && !is_balanced_symbols(&x[a..a + q])) {
                continue;
            }
            let lo = a.saturating_sub(s);
            let hi = (a + s).min(y.len().saturating_sub(len));
            for b in lo..=hi {
                if b + len <= y.len() && y[b..b + len] == x[a..a + len] {
                    return Some((a, b, q));
                }
            }
        }
    }
    None
}

/// A witness `(u, v, q_L, q_R)` of a context `C` with `|C_L|, |C_R| ≤ max_side`
/// such that `C^e` has `s`-synchronized occurrences at `u ∈ F` and `v ∈ G`.
pub fn synchronized_context(
    f: &Forest,
    g: &Forest,
    max_side: usize,
    e: usize,
    s: usize,
) -> Option<(NodeId, NodeId, usize, usize)> {
    let (x, y) = (f.symbols(), g.symbols());
    // The context C^e occurs at u with sides of lengths q_l, q_r.
    let occurs = |z: &[u64], o: usize, c: usize, ql: usize, qr: usize| -> bool {
        let (l, r) = (ql * e, qr * e);
        if r > c + 1 || o + l > c + 1 - r {
            return false;
        }
        let left = &z[o..o + l];
        let right = &z[c + 1 - r..c + 1];
        let periodic = |t: &[u64], q: usize| (q..t.len()).all(|i| t[i] == t[i - q]);
        if !periodic(left, ql) || !periodic(right, qr) {
            return false;
        }
        let core: Vec<u64> = left[..ql].iter().chain(&right[r - qr..]).copied().collect();
        is_balanced_symbols(&core) && is_balanced_symbols(&z[o + l..c + 1 - r])
    };
    for u in 0..f.len() {
        let (o, c) = (f.open(u), f.close(u));
        for ql in 1..=max_side {
            for qr in 1..=max_side {
                if !occurs(&x, o, c, ql, qr) {
                    continue;
                }
                let (l, r) = (ql * e, qr * e);
                for v in 0..g.len() {
                    let (ov, cv) = (g.open(v), g.close(v));
                    if ov.abs_diff(o) > s || cv.abs_diff(c) > s || !occurs(&y, ov, cv, ql, qr) {
                        continue;
                    }
                    if y[ov..ov + l] == x[o..o + l] && y[cv + 1 - r..cv + 1] == x[c + 1 - r..c + 1] {
                        return Some((u, v, ql, qr));
                    }
                }
            }
        }
    }
    None
}

/// A uniformly chosen next step among those keeping a path of cost at most
/// `k` and width at most `w` feasible, repeated until the end: a random
/// member of `A_{k,w}(X, Y)`, or `None` when that set is empty.
pub fn random_bounded_alignment<T: PartialEq, R: rand::Rng + ?Sized>(
    rng: &mut R,
    x: &[T],
    y: &[T],
    k: usize,
    w: usize,
) -> Option<Alignment> {
    let (n, m) = (x.len(), y.len());
    const INF: usize = usize::MAX / 2;
    // rest[i][j]: cheapest banded completion from (i, j).
    let mut rest = vec![vec![INF; m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            if i.abs_diff(j) > w {
                continue;
            }
            if i == n && j == m {
                rest[i][j] = 0;
                continue;
            }
            let mut best = INF;
            if i < n {
                best = best.min(rest[i + 1][j] + 1);
            }
            if j < m {
                best = best.min(rest[i][j + 1] + 1);
            }
            if i < n && j < m {
                best = best.min(rest[i + 1][j + 1] + usize::from(x[i] != y[j]));
            }
            rest[i][j] = best;
        }
    }
    if rest[0][0] > k {
        return None;
    }
    let (mut i, mut j, mut budget) = (0, 0, k);
    let mut pts = vec![(0, 0)];
    while (i, j) != (n, m) {
        let mut options = Vec::new();
        if i < n && j < m {
            options.push((i + 1, j + 1, usize::from(x[i] != y[j])));
        }
        if i < n {
            options.push((i + 1, j, 1));
        }
        if j < m {
            options.push((i, j + 1, 1));
        }
        options.retain(|&(a, b, c)| c + rest[a][b] <= budget);
        let (a, b, c) = options[rng.random_range(0..options.len())];
        budget -= c;
        (i, j) = (a, b);
        pts.push((i, j));
    }
    Some(Alignment::new(pts))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{parse_paren_text, Interner};

    #[test]
    fn naive_runs_examples() {
        let r: Vec<_> = runs(b"aabaabaa").iter().map(|r| (r.i, r.j, r.p)).collect();
        assert_eq!(r, vec![(0, 2, 1), (0, 8, 3), (3, 5, 1), (6, 8, 1)]);
        assert_eq!(smallest_period(b"abcab"), 3);
    }

    #[test]
    fn brute_force_distance() {
        let mut i = Interner::new();
        let f = parse_paren_text("(a)(b(x)(y)(z))", &mut i).unwrap();
        let g = parse_paren_text("(a(x)(y)(z))", &mut i).unwrap();
        assert_eq!(ted_brute(&f, &g), 2);
        let (cost, maps) = optimal_mappings(&f, &g);
        assert_eq!(cost, 2);
        for m in &maps {
            for del in [true, false] {
                let a = mapping_alignment(&f, &g, m, del);
                assert!(a.is_tree_alignment(&f, &g));
                let s = a.eval(&f.symbols(), &g.symbols()).unwrap();
                assert_eq!(s.cost, 2 * cost);
            }
        }
    }
}
