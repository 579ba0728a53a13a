//! An enumerator that is computable in near-linear time yet approximates
//! `x = 1/k` from below along the integer chain `J_n = k^(n-1) - n`.
//!
//! For `|w| = n >= 1`:
//!
//! 1. `0^n ↦ c_n = J_n / k^n`
//! 2. leading 0, `val(w) <= J_n` ↦ `grid(w)`
//! 3. leading 0, `val(w) > J_n` ↦ `0`
//! 4. `1 0^(n-1) ↦ x + k^-(n+1)`
//! 5. otherwise `grid(w)`
//!
//! and `λ ↦ 0`. Clauses 2 and 3 compare `w` with the numeral of `J_n`
//! digit by digit instead of evaluating `val(w)`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::Zero;

use super::standard::grid_ball_words;
use super::{filter_candidates, in_ball, SeparatorEnumerator};
use crate::error::{Error, Result};
use crate::rat::{inv_pow_k, kadic, pow_k, rat, Rat};
use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, Copy)]
pub struct NearLinearParams {
    alphabet: Alphabet,
}

impl NearLinearParams {
    pub fn new(alphabet: Alphabet) -> Self {
        Self { alphabet }
    }

    pub fn k(&self) -> u8 {
        self.alphabet.k()
    }

    pub fn x(&self) -> Rat {
        rat(1, self.k() as i64)
    }

    /// `J_n = k^(n-1) - n`, for `n >= 1`.
    pub fn j(&self, n: usize) -> BigUint {
        assert!(n >= 1);
        pow_k(self.k(), n - 1) - BigUint::from(n)
    }

    /// `c_n = J_n / k^n`.
    pub fn c(&self, n: usize) -> Rat {
        kadic(self.j(n), self.k(), n)
    }

    /// The length-`n` numeral of `J_n`. Since `k^(n-1) - 1` is all `(k-1)`s,
    /// subtracting `n - 1` is a digitwise complement with no borrows.
    pub fn j_numeral(&self, n: usize) -> Word {
        assert!(n >= 1);
        let k = self.k();
        let mut digits = vec![k - 1; n];
        digits[0] = 0;
        let mut m = (n - 1) as u64;
        let mut i = n;
        while m > 0 {
            i -= 1;
            digits[i] = k - 1 - (m % k as u64) as u8;
            m /= k as u64;
        }
        Word::from_digits_unchecked(digits)
    }

    /// Words sent to 0 by clause 3 (length `n`): leading 0 and
    /// `J_n < val(w) <= k^(n-1) - 1`. There are exactly `n - 1` of them.
    pub fn zero_clause_words(&self, n: usize) -> Vec<Word> {
        if n < 2 {
            return Vec::new();
        }
        let mut v = self.j(n) + 1u32;
        let top = pow_k(self.k(), n - 1);
        let mut out = Vec::with_capacity(n - 1);
        while v < top {
            out.push(self.alphabet.numeral(&v, n));
            v += 1u32;
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NearLinearEnumerator {
    params: NearLinearParams,
}

impl NearLinearEnumerator {
    pub fn new(alphabet: Alphabet) -> Self {
        Self {
            params: NearLinearParams::new(alphabet),
        }
    }

    pub fn params(&self) -> &NearLinearParams {
        &self.params
    }
}

impl SeparatorEnumerator for NearLinearEnumerator {
    fn alphabet(&self) -> Alphabet {
        self.params.alphabet
    }

    fn id(&self) -> String {
        "nearlinear".into()
    }

    fn eval(&self, w: &Word) -> Rat {
        let n = w.len();
        if n == 0 {
            return Rat::zero();
        }
        let k = self.params.k();
        let d = w.digits();
        if d[0] == 0 {
            if w.is_constant(0) {
                return self.params.c(n);
            }
            return match d.cmp(self.params.j_numeral(n).digits()) {
                Ordering::Greater => Rat::zero(),
                _ => kadic(self.params.alphabet.val(w), k, n),
            };
        }
        if d[0] == 1 && d[1..].iter().all(|&a| a == 0) {
            return self.params.x() + inv_pow_k(k, n + 1);
        }
        kadic(self.params.alphabet.val(w), k, n)
    }

    fn preimages_within(&self, x: &Rat, delta: &Rat, maxlen: usize, budget: u64) -> Result<Vec<Word>> {
        let mut cands = grid_ball_words(self.params.alphabet, x, delta, maxlen, budget)?;
        cands.push(Word::empty());
        for m in 1..=maxlen {
            cands.push(Word::repeat(0, m));
            let mut d = vec![0; m];
            d[0] = 1;
            cands.push(Word::from_digits_unchecked(d));
        }
        if in_ball(&Rat::zero(), x, delta) {
            let extra: u64 = (maxlen as u64).saturating_mul(maxlen as u64) / 2;
            if cands.len() as u64 + extra > budget {
                return Err(Error::BudgetExceeded { budget });
            }
            for m in 2..=maxlen {
                cands.extend(self.params.zero_clause_words(m));
            }
        }
        Ok(filter_candidates(self, cands, x, delta))
    }

    fn best_below_closed_form(&self, x: &Rat, n: usize) -> Option<Rat> {
        if *x != self.params.x() {
            return None;
        }
        Some(if n == 0 { Rat::zero() } else { self.params.c(n) })
    }

    fn best_below_witness(&self, x: &Rat, n: usize) -> Option<Word> {
        (*x == self.params.x()).then(|| Word::repeat(0, n))
    }

    /// Clause 4 and clause 3 hide a few grid points, so cells just below
    /// `x` need slightly longer words than the plain grid.
    fn density_budget(&self) -> usize {
        10
    }

    fn describe(&self) -> String {
        format!("nearlinear(k={}, x=1/{})", self.params.k(), self.params.k())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerator::{bruteforce_preimages, DEFAULT_PREIMAGE_BUDGET};

    fn nl(k: u32) -> NearLinearEnumerator {
        NearLinearEnumerator::new(Alphabet::new(k).unwrap())
    }

    fn w(a: Alphabet, s: &str) -> Word {
        a.parse_word(s).unwrap()
    }

    #[test]
    fn clause_examples() {
        let f = nl(2);
        let a = f.alphabet();
        assert_eq!(f.eval(&w(a, "000")), rat(1, 8));
        assert_eq!(f.eval(&w(a, "100")), rat(9, 16));
        assert_eq!(f.eval(&w(a, "011")), rat(0, 1));
        assert_eq!(f.eval(&w(a, "001")), rat(1, 8));
        assert_eq!(f.eval(&w(a, "111")), rat(7, 8));
        assert_eq!(f.eval(&Word::empty()), rat(0, 1));
        assert_eq!(f.eval(&w(a, "0")), rat(0, 1));
    }

    /// Digit comparison agrees with evaluating the clauses on integers.
    #[test]
    fn clauses_match_integer_definition() {
        for k in [2u32, 3, 5] {
            let f = nl(k);
            let a = f.alphabet();
            let p = *f.params();
            for word in a.words_up_to(if k == 2 { 11 } else { 6 }) {
                let n = word.len();
                if n == 0 {
                    continue;
                }
                let v = a.val(&word);
                let d = word.digits();
                let expect = if word.is_constant(0) {
                    p.c(n)
                } else if d[0] == 0 && v <= p.j(n) {
                    a.grid(&word).unwrap()
                } else if d[0] == 0 {
                    Rat::zero()
                } else if d[0] == 1 && d[1..].iter().all(|&b| b == 0) {
                    p.x() + inv_pow_k(a.k(), n + 1)
                } else {
                    a.grid(&word).unwrap()
                };
                assert_eq!(f.eval(&word), expect, "k={k} w={word}");
            }
        }
    }

    #[test]
    fn j_numerals() {
        for k in [2u32, 3, 7, 10] {
            let p = NearLinearParams::new(Alphabet::new(k).unwrap());
            for n in 1..60 {
                assert_eq!(p.alphabet.val(&p.j_numeral(n)), p.j(n), "k={k} n={n}");
                assert_eq!(p.zero_clause_words(n).len(), n.saturating_sub(1));
            }
        }
    }

    #[test]
    fn chain_constants() {
        let p = NearLinearParams::new(Alphabet::binary());
        let js: Vec<BigUint> = (1..=5).map(|n| p.j(n)).collect();
        assert_eq!(js, [0u32, 0, 1, 4, 11].map(BigUint::from));
        for k in [2u32, 3] {
            let p = NearLinearParams::new(Alphabet::new(k).unwrap());
            for n in 1..100 {
                assert!(p.c(n) <= p.c(n + 1));
                assert!(p.c(n) < p.x());
            }
        }
    }

    /// Leading 0 means value `<= c_n < x`; a leading nonzero digit means
    /// value `>= x`, with equality impossible.
    #[test]
    fn sign_structure() {
        for k in [2u32, 3] {
            let f = nl(k);
            let p = *f.params();
            for word in f.alphabet().words_up_to(if k == 2 { 10 } else { 6 }) {
                if word.is_empty() {
                    continue;
                }
                let v = f.eval(&word);
                if word.digits()[0] == 0 {
                    assert!(v <= p.c(word.len()));
                } else {
                    assert!(v > p.x(), "{word}");
                }
            }
        }
    }

    #[test]
    fn preimages_match_bruteforce() {
        let f = nl(2);
        let pts = [
            (rat(1, 2), rat(1, 5)),
            (rat(0, 1), rat(1, 64)),
            (rat(1, 16), rat(1, 100)),
            (rat(1, 2), rat(1, 64)),
            (rat(3, 5), rat(1, 9)),
        ];
        for (x, d) in pts {
            let fast = f.preimages_within(&x, &d, 12, DEFAULT_PREIMAGE_BUDGET).unwrap();
            let slow = bruteforce_preimages(&f, &x, &d, 12, DEFAULT_PREIMAGE_BUDGET).unwrap();
            assert_eq!(fast, slow, "x={x} d={d}");
        }
        let f3 = nl(3);
        for n in 1..6 {
            let d = rat(2 * n, 3i64.pow(n as u32));
            let x = f3.params().x();
            let fast = f3.preimages_within(&x, &d, 7, DEFAULT_PREIMAGE_BUDGET).unwrap();
            let slow = bruteforce_preimages(&f3, &x, &d, 7, DEFAULT_PREIMAGE_BUDGET).unwrap();
            assert_eq!(fast, slow);
        }
    }

    /// With words up to length 8 the cell `[31/64, 1/2)` stays empty: the
    /// grid words there are sent to 0 by clause 3, and `c_n` first enters
    /// it at `n = 10`.
    #[test]
    fn density_needs_length_ten() {
        let f = nl(2);
        assert_eq!(crate::enumerator::density_gaps(&f, 6, 8, 8, &[]), vec![31]);
        assert_eq!(crate::enumerator::density_gaps(&f, 6, 9, 9, &[]), vec![31]);
        assert!(crate::enumerator::density_gaps(&f, 6, 10, 10, &[]).is_empty());
    }

    #[test]
    fn long_words_are_cheap() {
        let f = nl(2);
        let mut d = vec![0u8; 1 << 20];
        d[3] = 1;
        d[1 << 19] = 1;
        let v = f.eval(&Word::from_digits_unchecked(d));
        assert!(!v.is_zero() && v < f.params().x());
    }
}
