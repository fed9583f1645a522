//! Maximal repetitions (runs) via Lyndon roots.
//!
//! Every run has a Lyndon root that is the longest Lyndon word starting at
//! its position under one of the two lexicographic orders, so extending the
//! longest Lyndon word at each position in both directions finds all runs.

use std::cmp::Ordering;

use crate::fingerprint::{Fingerprinter, PrefixHash};

/// A maximal periodic fragment `S[i..j)` with smallest period `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Run {
    pub i: usize,
    pub j: usize,
    pub p: usize,
}

impl Run {
    /// Exponent rounded down.
    pub fn exponent(&self) -> usize {
        (self.j - self.i) / self.p
    }
}

/// Longest-common-extension oracle over one string, in both directions.
pub struct Lce<'a> {
    s: &'a [u64],
    fwd: PrefixHash,
}

const DIRECT_PROBE: usize = 16;

impl<'a> Lce<'a> {
    pub fn new(s: &'a [u64]) -> Self {
        // A fixed odd base suffices here: equality is re-checked on the
        // boundary character, so a collision can only lengthen a match.
        let fp = Fingerprinter::new(0x9e37_79b9_7f4a_7c15);
        Lce {
            s,
            fwd: fp.prefix_table(s),
        }
    }

    /// Length of the longest common prefix of `S[i..]` and `S[j..]`.
    pub fn forward(&self, i: usize, j: usize) -> usize {
        let s = self.s;
        let n = s.len();
        if i == j {
            return n - i;
        }
        let max = n - i.max(j);
        let mut l = 0;
        while l < max && l < DIRECT_PROBE {
            if s[i + l] != s[j + l] {
                return l;
            }
            l += 1;
        }
        if l == max {
            return l;
        }
        // Gallop, then binary search on fingerprint equality.
        let mut step = DIRECT_PROBE;
        let mut lo = l;
        let mut hi;
        loop {
            let cand = (lo + step).min(max);
            if self.fwd.substring(i, i + cand) == self.fwd.substring(j, j + cand) {
                lo = cand;
                if cand == max {
                    return max;
                }
                step *= 2;
            } else {
                hi = cand;
                break;
            }
        }
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.fwd.substring(i, i + mid) == self.fwd.substring(j, j + mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Length of the longest common suffix of `S[..i)` and `S[..j)`.
    pub fn backward(&self, i: usize, j: usize) -> usize {
        let s = self.s;
        if i == j {
            return i;
        }
        let max = i.min(j);
        let mut l = 0;
        while l < max && l < DIRECT_PROBE {
            if s[i - 1 - l] != s[j - 1 - l] {
                return l;
            }
            l += 1;
        }
        if l == max {
            return l;
        }
        let eq = |len: usize| self.fwd.substring(i - len, i) == self.fwd.substring(j - len, j);
        let mut step = DIRECT_PROBE;
        let mut lo = l;
        let mut hi;
        loop {
            let cand = (lo + step).min(max);
            if eq(cand) {
                lo = cand;
                if cand == max {
                    return max;
                }
                step *= 2;
            } else {
                hi = cand;
                break;
            }
        }
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if eq(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Compares suffixes `S[i..]` and `S[j..]`; `flip` reverses the order on
    /// characters (a proper prefix stays smaller).
    fn compare_suffixes(&self, i: usize, j: usize, flip: bool) -> Ordering {
        let l = self.forward(i, j);
        let n = self.s.len();
        if i + l == n || j + l == n {
            return (n - i).cmp(&(n - j));
        }
        let ord = self.s[i + l].cmp(&self.s[j + l]);
        if flip {
            ord.reverse()
        } else {
            ord
        }
    }
}

/// For every `i`, the exclusive end of the longest Lyndon word starting at
/// `i`, i.e. the start of the next lexicographically smaller suffix.
fn lyndon_ends(lce: &Lce<'_>, flip: bool) -> Vec<usize> {
    let n = lce.s.len();
    let mut end = vec![n; n];
    for i in (0..n).rev() {
        let mut j = i + 1;
        while j < n && lce.compare_suffixes(j, i, flip) == Ordering::Greater {
            j = end[j];
        }
        end[i] = j;
    }
    end
}

/// All runs of `s`, sorted by start then end.
pub fn compute_runs(s: &[u64]) -> Vec<Run> {
    let n = s.len();
    if n < 2 {
        return Vec::new();
    }
    let lce = Lce::new(s);
    let mut runs = Vec::new();
    for flip in [false, true] {
        let end = lyndon_ends(&lce, flip);
        for i in 0..n {
            let j = end[i];
            let p = j - i;
            if j >= n {
                continue;
            }
            let r = lce.forward(i, j);
            let l = if i == 0 { 0 } else { lce.backward(i, j) };
            if l + r >= p {
                runs.push(Run {
                    i: i - l,
                    j: j + r,
                    p,
                });
            }
        }
    }
    runs.sort_unstable();
    runs.dedup();
    runs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn runs_of(s: &str) -> Vec<(usize, usize, usize)> {
        let v: Vec<u64> = s.bytes().map(u64::from).collect();
        let mut r: Vec<_> = compute_runs(&v).iter().map(|r| (r.i, r.j, r.p)).collect();
        r.sort();
        r
    }

    #[test]
    fn small_examples() {
        assert_eq!(runs_of("aaaa"), vec![(0, 4, 1)]);
        assert_eq!(runs_of("abab"), vec![(0, 4, 2)]);
        assert_eq!(runs_of("abc"), vec![]);
        assert_eq!(
            runs_of("aabaabaa"),
            vec![(0, 2, 1), (0, 8, 3), (3, 5, 1), (6, 8, 1)]
        );
    }

    #[test]
    fn lce_matches_direct_scan() {
        let s: Vec<u64> = "abaababaabaababaababaabaababaabaab".bytes().map(u64::from).collect();
        let lce = Lce::new(&s);
        for i in 0..s.len() {
            for j in 0..s.len() {
                let mut f = 0;
                while i.max(j) + f < s.len() && s[i + f] == s[j + f] {
                    f += 1;
                }
                assert_eq!(lce.forward(i, j), f);
                let mut b = 0;
                while b < i.min(j) && s[i - 1 - b] == s[j - 1 - b] {
                    b += 1;
                }
                assert_eq!(lce.backward(i, j), b);
            }
        }
    }
}
