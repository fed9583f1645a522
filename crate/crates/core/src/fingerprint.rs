//! Karp–Rabin fingerprints modulo the Mersenne prime 2^61 - 1.

use rand::Rng;

pub const MODULUS: u64 = (1 << 61) - 1;

#[inline]
pub fn mul_mod(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let lo = (p as u64) & MODULUS;
    let hi = (p >> 61) as u64;
    let s = lo + hi;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
pub fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

/// Reduces an arbitrary 64-bit symbol into the field, offset so that no
/// symbol maps to zero.
#[inline]
fn lift(s: u64) -> u64 {
    add_mod(s % MODULUS, 1)
}

/// A polynomial hash function with a fixed evaluation point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fingerprinter {
    base: u64,
}

/// Fingerprint of a string together with its length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    pub hash: u64,
    pub len: usize,
}

impl Fp {
    pub const EMPTY: Fp = Fp { hash: 0, len: 0 };
}

impl Fingerprinter {
    pub fn new(base: u64) -> Self {
        let base = base % MODULUS;
        assert!(base > 1, "degenerate fingerprint base");
        Fingerprinter { base }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fingerprinter::new(rng.random_range(1 << 20..MODULUS))
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn pow(&self, mut e: usize) -> u64 {
        let mut acc = 1;
        let mut b = self.base;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(acc, b);
            }
            b = mul_mod(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn of(&self, s: &[u64]) -> Fp {
        let mut h = 0;
        for &c in s {
            h = add_mod(mul_mod(h, self.base), lift(c));
        }
        Fp { hash: h, len: s.len() }
    }

    /// Fingerprint of the concatenation `a · b`.
    pub fn concat(&self, a: Fp, b: Fp) -> Fp {
        Fp {
            hash: add_mod(mul_mod(a.hash, self.pow(b.len)), b.hash),
            len: a.len + b.len,
        }
    }

    pub fn prefix_table(&self, s: &[u64]) -> PrefixHash {
        let mut h = Vec::with_capacity(s.len() + 1);
        let mut pw = Vec::with_capacity(s.len() + 1);
        h.push(0);
        pw.push(1);
        for (i, &c) in s.iter().enumerate() {
            h.push(add_mod(mul_mod(h[i], self.base), lift(c)));
            pw.push(mul_mod(pw[i], self.base));
        }
        PrefixHash { h, pw }
    }
}

/// Prefix fingerprints of a string supporting O(1) substring fingerprints.
#[derive(Clone, Debug)]
pub struct PrefixHash {
    h: Vec<u64>,
    pw: Vec<u64>,
}

impl PrefixHash {
    pub fn len(&self) -> usize {
        self.h.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Fingerprint of `S[i..j)`.
    #[inline]
    pub fn substring(&self, i: usize, j: usize) -> Fp {
        debug_assert!(i <= j && j <= self.len());
        Fp {
            hash: sub_mod(self.h[j], mul_mod(self.h[i], self.pw[j - i])),
            len: j - i,
        }
    }

    /// `base^e` for `e ≤ len`.
    #[inline]
    pub fn power(&self, e: usize) -> u64 {
        self.pw[e]
    }

    /// Fingerprint of the concatenation `a · b` using the cached powers.
    #[inline]
    pub fn concat(&self, a: Fp, b: Fp) -> Fp {
        Fp {
            hash: add_mod(mul_mod(a.hash, self.pw[b.len]), b.hash),
            len: a.len + b.len,
        }
    }
}

/// Fingerprint of `S[i..j)` from a prefix table.
pub fn substring_fp(table: &PrefixHash, i: usize, j: usize) -> Fp {
    table.substring(i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mersenne_multiplication_matches_u128_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let a = rng.random_range(0..MODULUS);
            let b = rng.random_range(0..MODULUS);
            let want = ((a as u128 * b as u128) % MODULUS as u128) as u64;
            assert_eq!(mul_mod(a, b), want);
        }
    }

    #[test]
    fn substrings_agree_with_direct_comparison() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s: Vec<u64> = (0..400).map(|_| rng.random_range(0..3)).collect();
        let fp = Fingerprinter::random(&mut rng);
        let t = fp.prefix_table(&s);
        assert_eq!(t.substring(5, 5), Fp::EMPTY);
        for _ in 0..100_000 {
            let len = rng.random_range(0..8);
            let i = rng.random_range(0..=s.len() - len);
            let j = rng.random_range(0..=s.len() - len);
            let same = s[i..i + len] == s[j..j + len];
            assert_eq!(t.substring(i, i + len) == t.substring(j, j + len), same);
        }
        assert_eq!(t.substring(3, 40), fp.of(&s[3..40]));
        let joined = fp.concat(fp.of(&s[0..10]), fp.of(&s[10..25]));
        assert_eq!(joined, t.substring(0, 25));
    }
}
