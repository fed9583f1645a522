//! Seeded instance generators: random forests, random edits and planted
//! horizontal or vertical periodicity.

use rand::Rng;

use crate::forest::{Forest, Label, Paren};

/// Random forest with `n` nodes, height at most `max_height` (at least 1)
/// and labels drawn from `0..sigma`.
pub fn random_forest<R: Rng + ?Sized>(rng: &mut R, n: usize, max_height: usize, sigma: u32) -> Forest {
    let max_height = max_height.max(1);
    let sigma = sigma.max(1);
    let mut parents: Vec<Option<usize>> = Vec::with_capacity(n);
    let mut depth: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        let parent = if i == 0 || rng.random_range(0..8) == 0 {
            None
        } else {
            // Mix uniform attachment with attachment to recent nodes, which
            // produces both bushy and deep shapes.
            let cand = if rng.random_bool(0.5) {
                rng.random_range(0..i)
            } else {
                i - 1 - rng.random_range(0..i.min(3))
            };
            (depth[cand] + 1 < max_height).then_some(cand)
        };
        depth.push(parent.map_or(0, |p| depth[p] + 1));
        parents.push(parent);
    }
    let labels: Vec<Label> = (0..n).map(|_| Label(rng.random_range(0..sigma))).collect();
    Forest::from_parents(&parents, &labels)
}

/// Applies one random relabeling, deletion or insertion.
pub fn random_edit<R: Rng + ?Sized>(rng: &mut R, f: &Forest, sigma: u32) -> Forest {
    let sigma = sigma.max(1);
    let n = f.len();
    let kind = if n == 0 { 2 } else { rng.random_range(0..3) };
    match kind {
        0 if sigma > 1 => {
            let u = rng.random_range(0..n);
            let mut l = rng.random_range(0..sigma - 1);
            if l >= f.label(u).0 {
                l += 1;
            }
            let mut parens = f.parens();
            let (o, c) = (f.open(u), f.close(u));
            parens[o].label = Label(l);
            parens[c].label = Label(l);
            Forest::from_parens(&parens).expect("relabeling keeps balance")
        }
        0 | 1 => {
            let u = rng.random_range(0..n);
            let keep: Vec<usize> = (0..n).filter(|&v| v != u).collect();
            f.induced(&keep)
        }
        _ => {
            // Insert a node adopting a (possibly empty) run of siblings.
            let parent = if n == 0 || rng.random_bool(0.3) {
                None
            } else {
                Some(rng.random_range(0..n))
            };
            let kids: Vec<usize> = match parent {
                None => f.roots().to_vec(),
                Some(p) => f.children(p).collect(),
            };
            let a = rng.random_range(0..=kids.len());
            let b = rng.random_range(a..=kids.len());
            let start = if a < kids.len() {
                f.open(kids[a])
            } else {
                match parent {
                    Some(p) => f.close(p),
                    None => 2 * n,
                }
            };
            let end = if b > a { f.close(kids[b - 1]) + 1 } else { start };
            let l = Label(rng.random_range(0..sigma));
            let mut parens = f.parens();
            parens.insert(end, Paren::close(l));
            parens.insert(start, Paren::open(l));
            Forest::from_parens(&parens).expect("insertion keeps balance")
        }
    }
}

/// Applies `d` random edits; the distance to the input is at most `d`.
pub fn edit_script<R: Rng + ?Sized>(rng: &mut R, f: &Forest, d: usize, sigma: u32) -> Forest {
    let mut g = f.clone();
    for _ in 0..d {
        g = random_edit(rng, &g, sigma);
    }
    g
}

/// Inserts `reps` consecutive copies of `piece` at parenthesis position `at`.
pub fn plant_horizontal(f: &Forest, at: usize, piece: &Forest, reps: usize) -> Forest {
    let mut parens = f.parens();
    let block: Vec<Paren> = (0..reps).flat_map(|_| piece.parens()).collect();
    parens.splice(at..at, block);
    Forest::from_parens(&parens).expect("planted block is balanced")
}

/// A random context: the parentheses of a random tree split at a position
/// strictly inside its root.
pub fn random_context<R: Rng + ?Sized>(rng: &mut R, size: usize, sigma: u32) -> (Vec<Paren>, Vec<Paren>) {
    let t = loop {
        let t = random_forest(rng, size.max(1), size.max(1), sigma);
        if t.roots().len() == 1 {
            break t;
        }
    };
    let parens = t.parens();
    let cut = rng.random_range(1..parens.len());
    (parens[..cut].to_vec(), parens[cut..].to_vec())
}

/// Wraps the parenthesis range `[a, b)` (balanced) in `e` nested copies of
/// the context `(left, right)`.
pub fn plant_vertical(f: &Forest, a: usize, b: usize, left: &[Paren], right: &[Paren], e: usize) -> Forest {
    let parens = f.parens();
    let mut out = Vec::with_capacity(parens.len() + e * (left.len() + right.len()));
    out.extend_from_slice(&parens[..a]);
    for _ in 0..e {
        out.extend_from_slice(left);
    }
    out.extend_from_slice(&parens[a..b]);
    for _ in 0..e {
        out.extend_from_slice(right);
    }
    out.extend_from_slice(&parens[b..]);
    Forest::from_parens(&out).expect("context power is balanced")
}

/// A random balanced range `[a, b)` of `P(F)`: a run of consecutive siblings,
/// possibly empty.
pub fn random_sibling_range<R: Rng + ?Sized>(rng: &mut R, f: &Forest) -> (usize, usize) {
    let n = f.len();
    let parent = if n == 0 || rng.random_bool(0.3) {
        None
    } else {
        Some(rng.random_range(0..n))
    };
    let kids: Vec<usize> = match parent {
        None => f.roots().to_vec(),
        Some(p) => f.children(p).collect(),
    };
    let a = rng.random_range(0..=kids.len());
    let b = rng.random_range(a..=kids.len());
    let start = if a < kids.len() {
        f.open(kids[a])
    } else {
        parent.map_or(2 * n, |p| f.close(p))
    };
    let end = if b > a { f.close(kids[b - 1]) + 1 } else { start };
    (start, end)
}

/// Kind of periodic structure planted by [`planted_pair`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Plant {
    Horizontal,
    Vertical,
    Both,
}

/// A pair of forests sharing planted periodicity, with repetition counts
/// differing by at most one between the two sides, followed by `edits`
/// random edits on the second forest.
pub fn planted_pair<R: Rng + ?Sized>(
    rng: &mut R,
    base: usize,
    k: usize,
    plant: Plant,
    sigma: u32,
    edits: usize,
) -> (Forest, Forest) {
    let f0 = random_forest(rng, base, 6, sigma);
    let mut f = f0.clone();
    let mut g = f0;
    if matches!(plant, Plant::Horizontal | Plant::Both) {
        let size = rng.random_range(1..=2);
        let piece = random_forest(rng, size, 2, sigma);
        let reps = 18 * k + rng.random_range(0..8 * k + 1);
        let extra = rng.random_range(0..2);
        let at = random_sibling_range(rng, &f).0;
        f = plant_horizontal(&f, at, &piece, reps);
        g = plant_horizontal(&g, at, &piece, reps + extra);
    }
    if matches!(plant, Plant::Vertical | Plant::Both) {
        let size = rng.random_range(1..=2);
        let (left, right) = random_context(rng, size, sigma);
        let e = 18 * k + rng.random_range(0..8 * k + 1);
        let extra = rng.random_range(0..2);
        let (a, b) = random_sibling_range(rng, &f);
        let (ga, gb) = if f == g { (a, b) } else { random_sibling_range(rng, &g) };
        f = plant_vertical(&f, a, b, &left, &right, e);
        g = plant_vertical(&g, ga, gb, &left, &right, e + extra);
    }
    let g = edit_script(rng, &g, edits, sigma);
    (f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shapes_and_determinism() {
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        for n in [0, 1, 5, 40] {
            let f = random_forest(&mut a, n, 4, 3);
            assert_eq!(f.len(), n);
            assert!(f.height() <= 4);
            assert_eq!(f, random_forest(&mut b, n, 4, 3));
        }
    }

    #[test]
    fn edits_change_size_by_at_most_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let f = random_forest(&mut rng, 12, 5, 2);
            let g = random_edit(&mut rng, &f, 2);
            assert!(f.len().abs_diff(g.len()) <= 1);
        }
    }

    #[test]
    fn planting() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for plant in [Plant::Horizontal, Plant::Vertical, Plant::Both] {
            let (f, g) = planted_pair(&mut rng, 20, 1, plant, 2, 1);
            assert!(f.len() > 20 && g.len() > 10);
        }
    }
}
