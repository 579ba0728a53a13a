//! Alphabets, words and base-k numeral arithmetic.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{check_unit, kadic, pow_k, Rat};

const DIGIT_CHARS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// The alphabet `{0, .., k-1}` with `2 <= k <= 36`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    k: u8,
}

impl Alphabet {
    pub fn new(k: u32) -> Result<Self> {
        if !(2..=36).contains(&k) {
            return Err(Error::BadAlphabet(k));
        }
        Ok(Self { k: k as u8 })
    }

    pub fn binary() -> Self {
        Self { k: 2 }
    }

    #[inline]
    pub fn k(self) -> u8 {
        self.k
    }

    pub fn symbols(self) -> impl Iterator<Item = u8> {
        0..self.k
    }

    /// Builds a word, rejecting digits outside the alphabet.
    pub fn word(self, digits: Vec<u8>) -> Result<Word> {
        if let Some(&d) = digits.iter().find(|&&d| d >= self.k) {
            return Err(Error::InvalidDigit {
                digit: d as u32,
                k: self.k,
            });
        }
        Ok(Word(digits))
    }

    /// Parses a digit string (`0-9` then `a-z`).
    pub fn parse_word(self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "-" || s == "λ" {
            return Ok(Word::empty());
        }
        let mut digits = Vec::with_capacity(s.len());
        for c in s.chars() {
            let d = c.to_digit(36).ok_or_else(|| Error::ParseWord(s.to_string()))?;
            if d >= self.k as u32 {
                return Err(Error::InvalidDigit { digit: d, k: self.k });
            }
            digits.push(d as u8);
        }
        Ok(Word(digits))
    }

    /// `val(w) = sum_i w_i k^(n-i)`; `val(λ) = 0`.
    pub fn val(self, w: &Word) -> BigUint {
        if w.is_empty() {
            return BigUint::zero();
        }
        BigUint::from_radix_be(&w.0, self.k as u32).expect("digits checked at construction")
    }

    /// `grid(w) = val(w) / k^|w|`, undefined on the empty word.
    pub fn grid(self, w: &Word) -> Result<Rat> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(kadic(self.val(w), self.k, w.len()))
    }

    /// The length-`n` word whose numeral is `v` (left-padded with zeros).
    /// Panics if `v >= k^n`.
    pub fn numeral(self, v: &BigUint, n: usize) -> Word {
        let mut digits = if v.is_zero() {
            Vec::new()
        } else {
            v.to_radix_be(self.k as u32)
        };
        assert!(digits.len() <= n, "numeral does not fit in {n} digits");
        let mut out = vec![0u8; n - digits.len()];
        out.append(&mut digits);
        Word(out)
    }

    /// Number of words strictly shorter than `n`: `(k^n - 1)/(k - 1)`.
    pub fn count_shorter(self, n: usize) -> BigUint {
        (pow_k(self.k, n) - 1u32) / (self.k as u32 - 1)
    }

    /// 0-based position of `w` in length-lexicographic order.
    pub fn lenlex_rank(self, w: &Word) -> BigUint {
        self.count_shorter(w.len()) + self.val(w)
    }

    pub fn lenlex_unrank(self, rank: &BigUint) -> Word {
        let mut n = 0usize;
        let mut level = BigUint::one();
        let mut before = BigUint::zero();
        while &before + &level <= *rank {
            before += &level;
            level *= self.k as u32;
            n += 1;
        }
        self.numeral(&(rank - before), n)
    }

    /// First `n` digits of the canonical base-k expansion of `x ∈ [0,1)`.
    ///
    /// Repeated multiply-by-k on the exact rational never produces a
    /// `(k-1)^∞` tail: terminating expansions continue with zeros.
    pub fn expand(self, x: &Rat, n: usize) -> Result<Word> {
        check_unit(x)?;
        let den = x.denom().clone();
        let mut rem = x.numer().clone();
        let k = BigInt::from(self.k);
        let mut digits = Vec::with_capacity(n);
        for _ in 0..n {
            let (d, r) = (rem * &k).div_rem(&den);
            digits.push(d.to_u8().expect("digit below k"));
            rem = r;
        }
        Ok(Word(digits))
    }

    /// All words of length exactly `n` in lexicographic order.
    pub fn words_of_len(self, n: usize) -> WordsOfLen {
        WordsOfLen {
            k: self.k,
            next: Some(vec![0; n]),
        }
    }

    /// All words of length at most `n`, in length-lexicographic order.
    pub fn words_up_to(self, n: usize) -> impl Iterator<Item = Word> {
        (0..=n).flat_map(move |m| self.words_of_len(m))
    }
}

/// Lexicographic odometer over `Σ^n`.
pub struct WordsOfLen {
    k: u8,
    next: Option<Vec<u8>>,
}

impl Iterator for WordsOfLen {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] + 1 < self.k {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(Word(cur))
    }
}

/// A finite word over `{0, .., k-1}`, stored one digit per byte.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Wraps digits already known to lie in the alphabet.
    pub(crate) fn from_digits_unchecked(digits: Vec<u8>) -> Self {
        Word(digits)
    }

    /// `a^n`.
    pub fn repeat(a: u8, n: usize) -> Self {
        Word(vec![a; n])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.0
    }

    /// True if every digit equals `a` (vacuously for λ).
    pub fn is_constant(&self, a: u8) -> bool {
        self.0.iter().all(|&d| d == a)
    }

    pub fn push(&mut self, d: u8) {
        self.0.push(d);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Length-lexicographic comparison.
    pub fn lenlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        let s: String = self.0.iter().map(|&d| DIGIT_CHARS[d as usize] as char).collect();
        f.write_str(&s)
    }
}

pub(crate) fn digit_char(d: u8) -> char {
    DIGIT_CHARS[d as usize] as char
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn a(k: u32) -> Alphabet {
        Alphabet::new(k).unwrap()
    }

    fn w(k: u32, s: &str) -> Word {
        a(k).parse_word(s).unwrap()
    }

    #[test]
    fn alphabet_bounds() {
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::new(37).is_err());
        assert!(a(2).word(vec![0, 2]).is_err());
        assert!(a(3).parse_word("3").is_err());
    }

    #[test]
    fn val_examples() {
        assert_eq!(a(2).val(&w(2, "10")), BigUint::from(2u32));
        assert_eq!(a(2).val(&Word::empty()), BigUint::zero());
        assert_eq!(a(3).val(&w(3, "210")), BigUint::from(21u32));
    }

    #[test]
    fn grid_examples() {
        assert_eq!(a(2).grid(&w(2, "01")).unwrap(), rat(1, 4));
        assert_eq!(a(2).grid(&w(2, "1")).unwrap(), rat(1, 2));
        assert_eq!(a(3).grid(&w(3, "21")).unwrap(), rat(7, 9));
        assert_eq!(a(2).grid(&Word::empty()), Err(Error::EmptyWord));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(a(2).lenlex_rank(&Word::empty()), BigUint::zero());
        assert_eq!(a(2).lenlex_rank(&w(2, "00")), BigUint::from(3u32));
        assert_eq!(a(2).lenlex_rank(&w(2, "11")), BigUint::from(6u32));
    }

    #[test]
    fn expand_examples() {
        assert_eq!(a(2).expand(&rat(1, 2), 3).unwrap(), w(2, "100"));
        assert_eq!(a(2).expand(&rat(1, 3), 4).unwrap(), w(2, "0101"));
        assert_eq!(a(10).expand(&rat(0, 1), 2).unwrap(), w(10, "00"));
        assert!(a(2).expand(&rat(1, 1), 2).is_err());
        assert!(a(2).expand(&rat(-1, 3), 2).is_err());
    }

    #[test]
    fn text_form() {
        assert_eq!(w(36, "09az").to_string(), "09az");
        assert_eq!(Word::empty().to_string(), "-");
        assert_eq!(w(2, "-"), Word::empty());
    }

    #[test]
    fn enumeration_is_lenlex() {
        for k in [2u32, 3] {
            let words: Vec<Word> = a(k).words_up_to(4).collect();
            for (i, x) in words.iter().enumerate() {
                assert_eq!(a(k).lenlex_rank(x), BigUint::from(i));
                assert_eq!(&a(k).lenlex_unrank(&BigUint::from(i)), x);
            }
            for pair in words.windows(2) {
                assert_eq!(pair[0].lenlex_cmp(&pair[1]), std::cmp::Ordering::Less);
            }
        }
    }

    /// Canonical representative: grid(w) has a terminating expansion, so
    /// expanding it back to |w| digits recovers w exactly.
    #[test]
    fn grid_expand_round_trip_exhaustive() {
        for k in [2u32, 3] {
            for n in 1..=8 {
                let mut seen = std::collections::HashSet::new();
                for x in a(k).words_of_len(n) {
                    let g = a(k).grid(&x).unwrap();
                    assert_eq!(a(k).expand(&g, n).unwrap(), x);
                    assert!(seen.insert(a(k).val(&x)));
                }
                assert_eq!(seen.len() as u64, (k as u64).pow(n as u32));
            }
        }
    }

    #[test]
    fn unrank_inverts_rank_exhaustive() {
        for k in [2u32, 3] {
            for x in a(k).words_up_to(8) {
                assert_eq!(a(k).lenlex_unrank(&a(k).lenlex_rank(&x)), x);
            }
        }
    }
}
