//! Computable digit sources.
//!
//! The base-k Champernowne sequence plays the role of the fixed normal
//! sequence `Z`; a derangement applied letterwise gives `Y = π(Z)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::word::{Alphabet, Word};

/// A total, deterministic rule `n ↦ digit(n)` for `n >= 1`.
pub trait DigitSource: Send + Sync {
    fn alphabet(&self) -> Alphabet;

    /// The `n`-th digit, 1-based.
    fn digit(&self, n: u64) -> u8;

    /// Sequential reads starting at digit 1.
    fn stream(&self) -> Box<dyn Iterator<Item = u8> + '_> {
        Box::new((1..).map(move |n| self.digit(n)))
    }

    fn describe(&self) -> String;
}

/// `X↾n` as a word.
pub fn prefix(src: &dyn DigitSource, n: usize) -> Word {
    Word::from_digits_unchecked(src.stream().take(n).collect())
}

/// Concatenation of the base-k numerals of 1, 2, 3, ...
#[derive(Debug, Clone, Copy)]
pub struct Champernowne {
    alphabet: Alphabet,
}

impl Champernowne {
    pub fn new(alphabet: Alphabet) -> Self {
        Self { alphabet }
    }
}

impl DigitSource for Champernowne {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Locates the numeral block containing position `n` without streaming:
    /// there are `(k-1) k^(l-1)` numerals of length `l`.
    fn digit(&self, n: u64) -> u8 {
        assert!(n >= 1, "digit positions are 1-based");
        let k = self.alphabet.k() as u128;
        let mut pos = (n - 1) as u128;
        let mut len = 1u128;
        let mut first = 1u128;
        loop {
            let block = len * (k - 1) * first;
            if pos < block {
                break;
            }
            pos -= block;
            len += 1;
            first *= k;
        }
        let number = first + pos / len;
        let from_left = pos % len;
        let shift = len - 1 - from_left;
        ((number / k.pow(shift as u32)) % k) as u8
    }

    fn stream(&self) -> Box<dyn Iterator<Item = u8> + '_> {
        let k = self.alphabet.k() as u64;
        let mut buf: Vec<u8> = Vec::new();
        Box::new((1u64..).flat_map(move |mut i| {
            buf.clear();
            while i > 0 {
                buf.push((i % k) as u8);
                i /= k;
            }
            buf.reverse();
            buf.clone()
        }))
    }

    fn describe(&self) -> String {
        format!("champernowne(k={})", self.alphabet.k())
    }
}

/// `digit'(n) = perm(digit(n))` for a fixed-point-free `perm`.
#[derive(Debug, Clone)]
pub struct Permuted<S> {
    src: S,
    perm: Vec<u8>,
}

impl<S: DigitSource> Permuted<S> {
    pub fn new(src: S, perm: Vec<u8>) -> Result<Self> {
        let k = src.alphabet().k();
        let mut seen = vec![false; k as usize];
        if perm.len() != k as usize {
            return Err(Error::InvalidParameter(format!("permutation needs {k} entries")));
        }
        for (a, &b) in perm.iter().enumerate() {
            if b >= k || seen[b as usize] {
                return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
            }
            if b as usize == a {
                return Err(Error::InvalidParameter(format!(
                    "{perm:?} fixes symbol {a}"
                )));
            }
            seen[b as usize] = true;
        }
        Ok(Self { src, perm })
    }

    /// The default derangement `a ↦ a+1 mod k`.
    pub fn shifted(src: S) -> Self {
        let k = src.alphabet().k();
        let perm = (0..k).map(|a| (a + 1) % k).collect();
        Self { src, perm }
    }

    pub fn perm(&self) -> &[u8] {
        &self.perm
    }

    pub fn inner(&self) -> &S {
        &self.src
    }
}

impl<S: DigitSource> DigitSource for Permuted<S> {
    fn alphabet(&self) -> Alphabet {
        self.src.alphabet()
    }

    fn digit(&self, n: u64) -> u8 {
        self.perm[self.src.digit(n) as usize]
    }

    fn stream(&self) -> Box<dyn Iterator<Item = u8> + '_> {
        Box::new(self.src.stream().map(move |d| self.perm[d as usize]))
    }

    fn describe(&self) -> String {
        format!("permuted({}, {:?})", self.src.describe(), self.perm)
    }
}

/// `a a a ...`
#[derive(Debug, Clone, Copy)]
pub struct Constant {
    pub alphabet: Alphabet,
    pub symbol: u8,
}

impl DigitSource for Constant {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn digit(&self, _n: u64) -> u8 {
        self.symbol
    }

    fn describe(&self) -> String {
        format!("constant({})", self.symbol)
    }
}

/// `0 1 .. k-1 0 1 ..`
#[derive(Debug, Clone, Copy)]
pub struct Cyclic {
    pub alphabet: Alphabet,
}

impl DigitSource for Cyclic {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn digit(&self, n: u64) -> u8 {
        ((n - 1) % self.alphabet.k() as u64) as u8
    }

    fn describe(&self) -> String {
        "cyclic".into()
    }
}

/// Canonical base-k expansion of a rational in `[0,1)`.
#[derive(Debug, Clone)]
pub struct RationalDigits {
    alphabet: Alphabet,
    x: Rat,
}

impl RationalDigits {
    pub fn new(alphabet: Alphabet, x: Rat) -> Result<Self> {
        crate::rat::check_unit(&x)?;
        Ok(Self { alphabet, x })
    }
}

impl DigitSource for RationalDigits {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn digit(&self, n: u64) -> u8 {
        let w = self.alphabet.expand(&self.x, n as usize).expect("x checked");
        w.digits()[n as usize - 1]
    }

    fn stream(&self) -> Box<dyn Iterator<Item = u8> + '_> {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        let den = self.x.denom().clone();
        let k = BigInt::from(self.alphabet.k());
        let mut rem = self.x.numer().clone();
        Box::new(std::iter::from_fn(move || {
            let (d, r) = (&rem * &k).div_rem(&den);
            rem = r;
            d.to_u8()
        }))
    }

    fn describe(&self) -> String {
        format!("expansion({})", crate::rat::fmt_rat(&self.x))
    }
}

/// Empirical Shannon entropy (base k) of the sliding `m`-blocks among the
/// first `n` digits, divided by `m`.
pub fn block_entropy(src: &dyn DigitSource, n: usize, m: usize) -> Result<f64> {
    if m == 0 || n < m {
        return Err(Error::InvalidParameter(format!(
            "block entropy needs N >= m >= 1 (N={n}, m={m})"
        )));
    }
    let k = src.alphabet().k() as u128;
    let digits: Vec<u8> = src.stream().take(n).collect();
    let mut counts: HashMap<Vec<u8>, u64> = HashMap::new();
    for block in digits.windows(m) {
        *counts.entry(block.to_vec()).or_insert(0) += 1;
    }
    let total = (n - m + 1) as f64;
    let h: f64 = counts
        .values()
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    let per_symbol = h / (k as f64).log2() / m as f64;
    Ok(per_symbol.clamp(0.0, 1.0))
}
