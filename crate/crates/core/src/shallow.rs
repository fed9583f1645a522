//! Bounded distance for forests of small height: forced matching from the
//! common core of all greedy alignments under full-depth look-ahead labels,
//! then the exact solver on the residual instance.

use std::time::{Duration, Instant};

use crate::align::common_matching_core;
use crate::error::{Error, Result};
use crate::fingerprint::Fingerprinter;
use crate::forest::Forest;
use crate::horizontal::sync_reductions;
use crate::labeling::{lookahead_refine, Labeling};
use crate::oracle::{ted_threshold, TedValue};
use crate::partial::{partial_reduce, Matching};
use crate::reduction::node_pairs;

/// Sizes observed while solving one shallow instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ShallowStats {
    /// Nodes of each forest after the horizontal reduction.
    pub reduced: (usize, usize),
    /// Size of the forced matching.
    pub forced: usize,
    /// Sizes of the residual forests handed to the exact solver.
    pub residual: (usize, usize),
    /// Time spent in the exact solver on the residual forests.
    pub residual_time: Duration,
}

/// `ted≤k(F, G)` for forests of height at most `h`.
pub fn shallow_ted(f: &Forest, g: &Forest, h: usize, k: usize, fp: &Fingerprinter) -> Result<TedValue> {
    shallow_ted_with_stats(f, g, h, k, fp).map(|(v, _)| v)
}

pub fn shallow_ted_with_stats(
    f: &Forest,
    g: &Forest,
    h: usize,
    k: usize,
    fp: &Fingerprinter,
) -> Result<(TedValue, ShallowStats)> {
    let mut stats = ShallowStats::default();
    if f.height().max(g.height()) > h {
        return Err(Error::InvalidArgument(format!("height exceeds the bound {h}")));
    }
    if k == 0 || f.len().abs_diff(g.len()) > k {
        return Ok((ted_threshold(f, g, k), stats));
    }
    let (f1, g1) = sync_reductions(f, g, k, fp)?;
    stats.reduced = (f1.len(), g1.len());
    let lab = lookahead_refine(&f1, &g1, &Labeling::from_forests(&f1, &g1), h.max(1), fp)?;
    let (x, y) = lab.strings(&f1, &g1);
    let budget = 2 * h * k;
    let core = match common_matching_core(&x, &y, budget, 2 * k, 18 * k) {
        Ok(core) => core,
        Err(Error::NoAlignment) => return Ok((TedValue::Infinity, stats)),
        Err(e) => return Err(e),
    };
    let m = Matching::new(node_pairs(&f1, &g1, &core));
    if let Err(e) = m.validate(&f1, &g1) {
        log::warn!("shallow: forced pairs rejected: {e}");
        return Ok((TedValue::Infinity, stats));
    }
    let trim = 7usize.saturating_mul(2 * k).saturating_mul(budget).saturating_mul(18 * k);
    let slack = (budget + 1).saturating_mul(trim + 1);
    if f1.len() - m.len() > slack || g1.len() - m.len() > slack {
        log::warn!("shallow: forced matching too small ({} pairs)", m.len());
        return Ok((TedValue::Infinity, stats));
    }
    stats.forced = m.len();
    let (fr, gr) = partial_reduce(&f1, &g1, &m, k)?;
    stats.residual = (fr.len(), gr.len());
    log::debug!(
        "shallow: h={h} forced {} pairs, residual {}+{}",
        m.len(),
        fr.len(),
        gr.len()
    );
    let start = Instant::now();
    let value = ted_threshold(&fr, &gr, k);
    stats.residual_time = start.elapsed();
    Ok((value, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{parse_paren_text, Interner};
    use crate::oracle::ted_exact;

    #[test]
    fn agrees_with_exact_on_small_pairs() {
        let mut i = Interner::new();
        let fp = Fingerprinter::new(1_000_003);
        let cases = [
            ("(a(b)(c))", "(a(b)(c))"),
            ("(a(b)(c))", "(a(c))"),
            ("(a(b(c)))", "(a(c))(d)"),
            ("(a)(b)(c)", "(c)(b)(a)"),
        ];
        for (a, b) in cases {
            let f = parse_paren_text(a, &mut i).unwrap();
            let g = parse_paren_text(b, &mut i).unwrap();
            let h = f.height().max(g.height());
            for k in 0..5 {
                let want = TedValue::clamp(ted_exact(&f, &g), k);
                assert_eq!(shallow_ted(&f, &g, h, k, &fp).unwrap(), want, "{a} {b} {k}");
            }
        }
    }

    #[test]
    fn rejects_tall_input() {
        let mut i = Interner::new();
        let f = parse_paren_text("(a(b(c)))", &mut i).unwrap();
        let fp = Fingerprinter::new(1_000_003);
        assert!(shallow_ted(&f, &f, 2, 1, &fp).is_err());
    }
}
