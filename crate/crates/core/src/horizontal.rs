//! Reduction of synchronized horizontal periodicity: long balanced periodic
//! fragments occurring at nearby positions of both parenthesis strings are
//! shortened to `14k` periods.

use crate::error::Result;
use crate::fingerprint::Fingerprinter;
use crate::forest::{symbol_class, symbol_is_open, Forest, Label, Paren, Side};
use crate::runs::{compute_runs, Run};

/// A synchronized occurrence: start `i` (the later of the two run starts),
/// period `p` and usable exponent `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HSyncOcc {
    pub i: usize,
    pub p: usize,
    pub e: usize,
}

/// Runs with period at most `4k` and exponent at least `16k`, by start.
pub fn filter_runs(s: &[u64], k: usize) -> Vec<Run> {
    compute_runs(s)
        .into_iter()
        .filter(|r| r.p <= 4 * k && r.j - r.i >= 16 * k * r.p)
        .collect()
}

/// Smallest left rotation making `x` a balanced string whose matching
/// parentheses carry the same class, or `None`.
pub fn sigma(x: &[u64]) -> Option<usize> {
    let mut depth = 0usize;
    let mut last_unmatched = None;
    for (t, &s) in x.iter().enumerate() {
        if symbol_is_open(s) {
            depth += 1;
        } else if depth == 0 {
            last_unmatched = Some(t);
        } else {
            depth -= 1;
        }
    }
    let shift = last_unmatched.map_or(0, |m| m + 1);
    let mut stack = Vec::new();
    for t in 0..x.len() {
        let s = x[(t + shift) % x.len()];
        if symbol_is_open(s) {
            stack.push(symbol_class(s));
        } else if stack.pop() != Some(symbol_class(s)) {
            return None;
        }
    }
    stack.is_empty().then_some(shift % x.len().max(1))
}

/// Whether `y` is a rotation of `x`, filtered by fingerprints of `x·x` and
/// confirmed directly.
fn is_rotation(x: &[u64], y: &[u64], fp: &Fingerprinter) -> bool {
    if x.len() != y.len() {
        return false;
    }
    let p = x.len();
    let doubled: Vec<u64> = x.iter().chain(x).copied().collect();
    let table = fp.prefix_table(&doubled);
    let target = fp.of(y);
    (0..p.max(1)).any(|a| {
        table.substring(a, a + p) == target && doubled[a..a + p] == *y
    })
}

/// Pairs of filtered runs whose overlap spans at least `16k` periods, whose
/// periods agree up to rotation and are balanceable.
pub fn sync_occurrences(x: &[u64], y: &[u64], k: usize, fp: &Fingerprinter) -> Vec<HSyncOcc> {
    let rf = filter_runs(x, k);
    let rg = filter_runs(y, k);
    let (mut lf, mut lg) = (0, 0);
    let mut out = Vec::new();
    while lf < rf.len() && lg < rg.len() {
        let (a, b) = (rf[lf], rg[lg]);
        let overlap = a.j.min(b.j).saturating_sub(a.i.max(b.i));
        let e = overlap / a.p;
        let xs = &x[a.i..a.i + a.p];
        let ys = &y[b.i..b.i + b.p];
        if e >= 16 * k && is_rotation(xs, ys, fp) && sigma(xs).is_some() {
            out.push(HSyncOcc {
                i: a.i.max(b.i),
                p: a.p,
                e: e - 2 * k,
            });
        }
        if a.j < b.j {
            lf += 1;
        } else {
            lg += 1;
        }
    }
    out
}

/// Copies both strings, skipping all but `14k` periods of each recorded
/// occurrence. Records starting inside an already skipped block are ignored.
pub fn reduce_strings(x: &[u64], y: &[u64], occ: &[HSyncOcc], k: usize) -> (Vec<u64>, Vec<u64>) {
    let mut sx = Vec::with_capacity(x.len());
    let mut sy = Vec::with_capacity(y.len());
    let mut i = 0;
    for o in occ {
        assert!(o.e >= 14 * k, "occurrence exponent below 14k");
        if o.i < i {
            continue;
        }
        sx.extend_from_slice(&x[i.min(x.len())..o.i.min(x.len())]);
        sy.extend_from_slice(&y[i.min(y.len())..o.i.min(y.len())]);
        i = o.i + o.p * (o.e - 14 * k);
    }
    sx.extend_from_slice(&x[i.min(x.len())..]);
    sy.extend_from_slice(&y[i.min(y.len())..]);
    (sx, sy)
}

/// Forest whose parenthesis string under the original labels is `s`.
pub(crate) fn forest_from_symbols(s: &[u64]) -> Result<Forest> {
    let parens: Vec<Paren> = s
        .iter()
        .map(|&c| Paren {
            side: if symbol_is_open(c) { Side::Open } else { Side::Close },
            label: Label(symbol_class(c)),
        })
        .collect();
    Forest::from_parens(&parens)
}

/// Forests `F′, G′` with the same bounded distance as `F, G` and without
/// long synchronized horizontal periodicity.
pub fn sync_reductions(f: &Forest, g: &Forest, k: usize, fp: &Fingerprinter) -> Result<(Forest, Forest)> {
    let (x, y) = (f.symbols(), g.symbols());
    let occ = sync_occurrences(&x, &y, k, fp);
    if occ.is_empty() {
        return Ok((f.clone(), g.clone()));
    }
    log::debug!("horizontal: {} synchronized occurrences", occ.len());
    let (sx, sy) = reduce_strings(&x, &y, &occ, k);
    Ok((forest_from_symbols(&sx)?, forest_from_symbols(&sy)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{symbol, parse_paren_text, Interner};

    fn open(c: u32) -> u64 {
        symbol(Side::Open, c)
    }

    fn close(c: u32) -> u64 {
        symbol(Side::Close, c)
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(&[open(0), close(0)]), Some(0));
        // ")][()(" with round = 0 and square = 1.
        let x = [close(0), close(1), open(1), open(0), close(0), open(0)];
        assert_eq!(sigma(&x), Some(2));
        assert_eq!(sigma(&[open(0); 5]), None);
        assert_eq!(sigma(&[open(0), close(1)]), None);
    }

    fn children(n: usize, label: &str) -> String {
        format!("(r{})", format!("({label})").repeat(n))
    }

    #[test]
    fn filtered_runs_of_many_children() {
        let mut i = Interner::new();
        let f = parse_paren_text(&children(20, "c"), &mut i).unwrap();
        let runs = filter_runs(&f.symbols(), 1);
        assert_eq!(runs.len(), 1);
        assert_eq!((runs[0].p, runs[0].exponent()), (2, 20));
        let g = parse_paren_text("(a(b)(c))", &mut i).unwrap();
        assert!(filter_runs(&g.symbols(), 1).is_empty());
    }

    #[test]
    fn thirty_children_lose_fourteen_periods() {
        let mut i = Interner::new();
        let f = parse_paren_text(&children(30, "c"), &mut i).unwrap();
        let fp = Fingerprinter::new(1_000_003);
        let occ = sync_occurrences(&f.symbols(), &f.symbols(), 1, &fp);
        assert_eq!(occ, vec![HSyncOcc { i: 1, p: 2, e: 28 }]);
        let (a, b) = sync_reductions(&f, &f, 1, &fp).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 17);
        assert_eq!(a.children(0).count(), 16);
    }

    #[test]
    fn unsynchronized_runs_are_kept() {
        let mut i = Interner::new();
        let f = parse_paren_text(&format!("{}(x)", children(20, "c")), &mut i).unwrap();
        let g = parse_paren_text(&format!("(x){}", "(y)".repeat(30)), &mut i).unwrap();
        let fp = Fingerprinter::new(1_000_003);
        assert!(sync_occurrences(&f.symbols(), &g.symbols(), 1, &fp).is_empty());
        let (a, b) = sync_reductions(&f, &g, 1, &fp).unwrap();
        assert_eq!((a, b), (f, g));
    }
}
