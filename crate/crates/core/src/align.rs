//! String alignments over symbol sequences: evaluation, greedy bounded
//! alignment by a banded Landau–Vishkin wavefront, and structural checks.

use crate::error::{Error, Result};
use crate::forest::Forest;

/// A monotone lattice path `(x_t, y_t)` from `(0, 0)` to `(|X|, |Y|)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alignment {
    points: Vec<(usize, usize)>,
}

/// Cost, width, matches and breakpoints of an alignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlignmentStats {
    pub cost: usize,
    pub width: usize,
    pub matches: Vec<(usize, usize)>,
    pub breakpoints: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Delete,
    Insert,
    Align,
}

fn step(a: (usize, usize), b: (usize, usize)) -> Option<Step> {
    match (b.0.checked_sub(a.0)?, b.1.checked_sub(a.1)?) {
        (1, 0) => Some(Step::Delete),
        (0, 1) => Some(Step::Insert),
        (1, 1) => Some(Step::Align),
        _ => None,
    }
}

impl Alignment {
    pub fn new(points: Vec<(usize, usize)>) -> Self {
        Alignment { points }
    }

    /// The diagonal alignment of two strings of equal length `n`.
    pub fn identity(n: usize) -> Self {
        Alignment {
            points: (0..=n).map(|i| (i, i)).collect(),
        }
    }

    pub fn points(&self) -> &[(usize, usize)] {
        &self.points
    }

    /// Pairs `(x, y)` such that the alignment aligns `X[x]` with `Y[y]`.
    pub fn aligned_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.points
            .windows(2)
            .filter(|w| step(w[0], w[1]) == Some(Step::Align))
            .map(|w| w[0])
    }

    pub fn eval<T: PartialEq>(&self, x: &[T], y: &[T]) -> Result<AlignmentStats> {
        let pts = &self.points;
        if pts.first() != Some(&(0, 0)) || pts.last() != Some(&(x.len(), y.len())) {
            return Err(Error::Malformed("endpoints".into()));
        }
        let mut stats = AlignmentStats {
            cost: 0,
            width: 0,
            matches: Vec::new(),
            breakpoints: Vec::new(),
        };
        for (t, &p) in pts.iter().enumerate() {
            stats.width = stats.width.max(p.0.abs_diff(p.1));
            let Some(&q) = pts.get(t + 1) else {
                stats.breakpoints.push(p);
                break;
            };
            let s = step(p, q).ok_or_else(|| Error::Malformed(format!("step {t}")))?;
            if s == Step::Align && x[p.0] == y[p.1] {
                stats.matches.push(p);
            } else {
                stats.cost += 1;
                stats.breakpoints.push(p);
            }
        }
        Ok(stats)
    }

    /// Whether every interior breakpoint sits on unequal characters.
    pub fn is_greedy<T: PartialEq>(&self, x: &[T], y: &[T]) -> bool {
        let Ok(stats) = self.eval(x, y) else {
            return false;
        };
        stats
            .breakpoints
            .iter()
            .all(|&(a, b)| a == x.len() || b == y.len() || x[a] != y[b])
    }

    /// Whether this alignment of `P(F)` onto `P(G)` treats both parentheses
    /// of every node consistently.
    pub fn is_tree_alignment(&self, f: &Forest, g: &Forest) -> bool {
        let (pf, pg) = (f.position_index(), g.position_index());
        let (nx, ny) = (2 * f.len(), 2 * g.len());
        if self.points.first() != Some(&(0, 0)) || self.points.last() != Some(&(nx, ny)) {
            return false;
        }
        if self.points.windows(2).any(|w| step(w[0], w[1]).is_none()) {
            return false;
        }
        let mut px = vec![None; nx];
        let mut py = vec![None; ny];
        for (a, b) in self.aligned_pairs() {
            px[a] = Some(b);
            py[b] = Some(a);
        }
        let consistent = |po: &[usize], pc: &[usize], qo: &[usize], qc: &[usize], node_q: &[usize], part: &[Option<usize>]| {
            (0..po.len()).all(|u| match (part[po[u]], part[pc[u]]) {
                (None, None) => true,
                (Some(a), Some(b)) => {
                    let v = node_q[a];
                    node_q[b] == v && qo[v] == a && qc[v] == b
                }
                _ => false,
            })
        };
        consistent(&pf.o, &pf.c, &pg.o, &pg.c, &pg.node_at, &px)
            && consistent(&pg.o, &pg.c, &pf.o, &pf.c, &pf.node_at, &py)
    }
}

/// Size of the symmetric difference of the point sets of two alignments.
pub fn sym_diff_size(a: &Alignment, b: &Alignment) -> usize {
    let (p, q) = (a.points(), b.points());
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < p.len() && j < q.len() {
        match p[i].cmp(&q[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    p.len() + q.len() - 2 * common
}

const UNREACHED: isize = -1;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Choice {
    Start,
    Delete,
    Insert,
    Substitute,
    Stay,
}

/// A greedy alignment of cost at most `k` and width at most `w`, or `None`
/// if no alignment within these bounds exists.
pub fn greedy_bounded_align<T: PartialEq>(x: &[T], y: &[T], k: usize, w: usize) -> Option<Alignment> {
    let (n, m) = (x.len() as isize, y.len() as isize);
    let w = w.min(x.len().max(y.len())) as isize;
    let target = m - n;
    if target.abs() > w || target.unsigned_abs() > k {
        return None;
    }
    let width = (2 * w + 1) as usize;
    let idx = |d: isize| (d + w) as usize;
    let slide = |mut a: isize, d: isize| -> isize {
        while a < n && a + d < m && x[a as usize] == y[(a + d) as usize] {
            a += 1;
        }
        a
    };
    let mut far: Vec<Vec<isize>> = Vec::new();
    let mut how: Vec<Vec<Choice>> = Vec::new();
    let mut row = vec![UNREACHED; width];
    row[idx(0)] = slide(0, 0);
    far.push(row);
    how.push(vec![Choice::Start; width]);
    let mut e = 0;
    while far[e][idx(target)] != n {
        if e == k {
            return None;
        }
        let prev = &far[e];
        let mut row = vec![UNREACHED; width];
        let mut choice = vec![Choice::Start; width];
        for d in -w..=w {
            // Diagonal d holds points with y - x = d.
            let valid = |a: isize| a >= 0 && a <= n && a + d >= 0 && a + d <= m;
            let mut best = UNREACHED;
            let mut pick = Choice::Start;
            let offer = |a: isize, c: Choice, best: &mut isize, pick: &mut Choice| {
                if valid(a) && a > *best {
                    *best = a;
                    *pick = c;
                }
            };
            if d < w {
                let p = prev[idx(d + 1)];
                if p != UNREACHED && p < n {
                    offer(p + 1, Choice::Delete, &mut best, &mut pick);
                }
            }
            if d > -w {
                let p = prev[idx(d - 1)];
                if p != UNREACHED && p + d - 1 < m {
                    offer(p, Choice::Insert, &mut best, &mut pick);
                }
            }
            let p = prev[idx(d)];
            if p != UNREACHED {
                if p < n && p + d < m {
                    offer(p + 1, Choice::Substitute, &mut best, &mut pick);
                }
                offer(p, Choice::Stay, &mut best, &mut pick);
            }
            if best != UNREACHED {
                row[idx(d)] = slide(best, d);
                choice[idx(d)] = pick;
            }
        }
        far.push(row);
        how.push(choice);
        e += 1;
    }
    // Trace back from the final wavefront.
    let mut rev: Vec<(usize, usize)> = Vec::new();
    let mut d = target;
    let mut level = e;
    let mut end = far[e][idx(d)];
    loop {
        let c = how[level][idx(d)];
        let (start, prev_d, prev_end) = match c {
            Choice::Start => (0, d, 0),
            Choice::Delete => (far[level - 1][idx(d + 1)] + 1, d + 1, far[level - 1][idx(d + 1)]),
            Choice::Insert => (far[level - 1][idx(d - 1)], d - 1, far[level - 1][idx(d - 1)]),
            Choice::Substitute => (far[level - 1][idx(d)] + 1, d, far[level - 1][idx(d)]),
            Choice::Stay => {
                level -= 1;
                continue;
            }
        };
        let mut a = end;
        while a > start {
            rev.push((a as usize, (a + d) as usize));
            a -= 1;
        }
        rev.push((start as usize, (start + d) as usize));
        if c == Choice::Start {
            break;
        }
        // The edit step leads from the end of the previous slide.
        d = prev_d;
        end = prev_end;
        level -= 1;
    }
    rev.reverse();
    Some(Alignment::new(rev))
}

/// Position pairs matched by every greedy alignment of cost at most `k` and
/// width at most `w`, provided the strings avoid `w`-synchronized `e`-powers
/// with root at most `2w`.
pub fn common_matching_core<T: PartialEq>(
    x: &[T],
    y: &[T],
    k: usize,
    w: usize,
    e: usize,
) -> Result<Vec<(usize, usize)>> {
    let witness = greedy_bounded_align(x, y, k, w).ok_or(Error::NoAlignment)?;
    let trim = 7usize.saturating_mul(w).saturating_mul(k).saturating_mul(e);
    let mut core = Vec::new();
    let mut fragment = 0usize;
    for p in witness.points().windows(2) {
        let (a, b) = (p[0], p[1]);
        if step(a, b) == Some(Step::Align) && x[a.0] == y[a.1] {
            if fragment >= trim {
                core.push(a);
            }
            fragment += 1;
        } else {
            fragment = 0;
        }
    }
    Ok(core)
}
