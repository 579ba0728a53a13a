use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

use super::{in_ball, BallDfa, SeparatorEnumerator};
use crate::error::{Error, Result};
use crate::rat::{floor_scaled, kadic, pow_k, Rat};
use crate::word::{Alphabet, Word};

/// `f_std(w) = grid(w)`, `f_std(λ) = 0`.
#[derive(Debug, Clone, Copy)]
pub struct StdEnumerator {
    alphabet: Alphabet,
}

impl StdEnumerator {
    pub fn new(alphabet: Alphabet) -> Self {
        Self { alphabet }
    }
}

/// Grid words of each length `1..=maxlen` whose value lies in the ball,
/// plus `λ` when `0` does. Shared with the coherent enumerator.
pub(crate) fn grid_ball_words(
    alphabet: Alphabet,
    x: &Rat,
    delta: &Rat,
    maxlen: usize,
    budget: u64,
) -> Result<Vec<Word>> {
    let k = alphabet.k();
    let mut out = Vec::new();
    if in_ball(&Rat::zero(), x, delta) {
        out.push(Word::empty());
    }
    let lo_t = x - delta;
    let hi_t = x + delta;
    let mut seen: u64 = 0;
    for m in 1..=maxlen {
        let top = BigInt::from(pow_k(k, m)) - 1;
        // strict inequalities: v/k^m > lo_t and v/k^m < hi_t
        let mut lo: BigInt = floor_scaled_signed(&lo_t, k, m) + 1;
        let hi_scaled = &hi_t * Rat::from_integer(BigInt::from(pow_k(k, m)));
        let mut hi = hi_scaled.ceil().to_integer() - 1;
        if lo.is_negative() {
            lo = BigInt::zero();
        }
        if hi > top {
            hi = top;
        }
        if lo > hi {
            continue;
        }
        let count = (&hi - &lo + 1u32).to_u64().unwrap_or(u64::MAX);
        seen = seen.saturating_add(count);
        if seen > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        let mut v = lo.magnitude().clone();
        let hi = hi.magnitude().clone();
        while v <= hi {
            out.push(alphabet.numeral(&v, m));
            v += 1u32;
        }
    }
    Ok(out)
}

fn floor_scaled_signed(t: &Rat, k: u8, m: usize) -> BigInt {
    if t.is_negative() {
        (t * Rat::from_integer(BigInt::from(pow_k(k, m)))).floor().to_integer()
    } else {
        floor_scaled(t, k, m)
    }
}

/// `⌊k^n x⌋ / k^n`.
pub(crate) fn truncation(alphabet: Alphabet, x: &Rat, n: usize) -> Option<Rat> {
    if x.is_negative() || *x >= Rat::from_integer(1.into()) {
        return None;
    }
    let fl = floor_scaled(x, alphabet.k(), n);
    let v: BigUint = fl.to_biguint().expect("non-negative");
    Some(kadic(v, alphabet.k(), n))
}

impl SeparatorEnumerator for StdEnumerator {
    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn id(&self) -> String {
        "std".into()
    }

    fn eval(&self, w: &Word) -> Rat {
        if w.is_empty() {
            return Rat::zero();
        }
        self.alphabet.grid(w).expect("nonempty")
    }

    fn preimages_within(&self, x: &Rat, delta: &Rat, maxlen: usize, budget: u64) -> Result<Vec<Word>> {
        grid_ball_words(self.alphabet, x, delta, maxlen, budget)
    }

    fn best_below_closed_form(&self, x: &Rat, n: usize) -> Option<Rat> {
        truncation(self.alphabet, x, n)
    }

    fn best_below_witness(&self, x: &Rat, n: usize) -> Option<Word> {
        self.alphabet.expand(x, n).ok()
    }

    fn ball_automaton(&self, x: &Rat, delta: &Rat) -> Option<BallDfa> {
        Some(BallDfa::new(x, delta, self.alphabet, None))
    }

    fn density_budget(&self) -> usize {
        6
    }

    fn describe(&self) -> String {
        format!("std(k={})", self.alphabet.k())
    }
}
