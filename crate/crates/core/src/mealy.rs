//! Invertible synchronous Mealy machines.
//!
//! A machine reads one symbol and writes one symbol per step; in every state
//! the output map is a permutation of the alphabet, which makes the induced
//! word map a length-preserving bijection.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::word::{digit_char, Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyMachine {
    alphabet: Alphabet,
    /// `next[q*k + a]`
    next: Vec<usize>,
    /// `out[q*k + a]`
    out: Vec<u8>,
    start: usize,
}

impl MealyMachine {
    /// Builds a machine from dense tables indexed by `q*k + a` and validates it.
    pub fn new(alphabet: Alphabet, next: Vec<usize>, out: Vec<u8>, start: usize) -> Result<Self> {
        let m = Self::from_tables_unchecked(alphabet, next, out, start)?;
        m.validate()?;
        Ok(m)
    }

    /// Builds the tables without checking the permutation property. Shapes,
    /// state indices and symbols are still checked.
    pub fn from_tables_unchecked(
        alphabet: Alphabet,
        next: Vec<usize>,
        out: Vec<u8>,
        start: usize,
    ) -> Result<Self> {
        let k = alphabet.k() as usize;
        if next.is_empty() || !next.len().is_multiple_of(k) || next.len() != out.len() {
            return Err(Error::InvalidParameter(
                "Mealy tables must have |Q|*k entries".into(),
            ));
        }
        let states = next.len() / k;
        if start >= states || next.iter().any(|&q| q >= states) {
            return Err(Error::InvalidParameter("state index out of range".into()));
        }
        if let Some(&b) = out.iter().find(|&&b| b >= alphabet.k()) {
            return Err(Error::InvalidDigit {
                digit: b as u32,
                k: alphabet.k(),
            });
        }
        Ok(Self {
            alphabet,
            next,
            out,
            start,
        })
    }

    /// Lists every state whose output map is not a permutation.
    pub fn validate(&self) -> Result<()> {
        let k = self.k() as usize;
        let bad: Vec<usize> = (0..self.num_states())
            .filter(|&q| {
                let mut seen = vec![false; k];
                for &b in &self.out[q * k..(q + 1) * k] {
                    seen[b as usize] = true;
                }
                seen.iter().any(|s| !s)
            })
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::NotPermutation(bad))
        }
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        Self::single_state(alphabet, &alphabet.symbols().collect::<Vec<_>>())
            .expect("identity is a permutation")
    }

    /// One state applying `perm` letterwise.
    pub fn single_state(alphabet: Alphabet, perm: &[u8]) -> Result<Self> {
        let k = alphabet.k() as usize;
        if perm.len() != k {
            return Err(Error::InvalidParameter(format!(
                "permutation must have {k} entries"
            )));
        }
        Self::new(alphabet, vec![0; k], perm.to_vec(), 0)
    }

    /// Single-state derangement `a -> a+1 mod k`.
    pub fn cyclic_shift(alphabet: Alphabet) -> Self {
        let k = alphabet.k();
        let perm: Vec<u8> = (0..k).map(|a| (a + 1) % k).collect();
        Self::single_state(alphabet, &perm).expect("shift is a permutation")
    }

    /// Two-state machine: state 0 copies, state 1 shifts by one. Reading the
    /// top symbol in state 0 arms state 1; reading a 0 in state 1 disarms it.
    pub fn carry_flip(alphabet: Alphabet) -> Self {
        let k = alphabet.k();
        let ku = k as usize;
        let mut next = vec![0; 2 * ku];
        let mut out = vec![0; 2 * ku];
        for a in 0..k {
            let i = a as usize;
            out[i] = a;
            next[i] = if a == k - 1 { 1 } else { 0 };
            out[ku + i] = (a + 1) % k;
            next[ku + i] = if a == 0 { 0 } else { 1 };
        }
        Self::new(alphabet, next, out, 0).expect("carry-flip is valid")
    }

    /// The shipped example machines, by name.
    pub fn named(alphabet: Alphabet, name: &str) -> Option<Self> {
        match name {
            "identity" => Some(Self::identity(alphabet)),
            "shift" => Some(Self::cyclic_shift(alphabet)),
            "carry-flip" => Some(Self::carry_flip(alphabet)),
            _ => None,
        }
    }

    pub fn library(alphabet: Alphabet) -> Vec<(&'static str, Self)> {
        ["identity", "shift", "carry-flip"]
            .into_iter()
            .map(|n| (n, Self::named(alphabet, n).unwrap()))
            .collect()
    }

    /// A uniformly random valid machine with `states` states.
    pub fn random<R: Rng + ?Sized>(alphabet: Alphabet, states: usize, rng: &mut R) -> Self {
        let k = alphabet.k() as usize;
        let mut next = Vec::with_capacity(states * k);
        let mut out = Vec::with_capacity(states * k);
        for _ in 0..states {
            let mut perm: Vec<u8> = alphabet.symbols().collect();
            perm.shuffle(rng);
            out.extend(perm);
            next.extend((0..k).map(|_| rng.gen_range(0..states)));
        }
        Self::new(alphabet, next, out, 0).expect("random tables are valid")
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    #[inline]
    pub fn k(&self) -> u8 {
        self.alphabet.k()
    }

    pub fn num_states(&self) -> usize {
        self.next.len() / self.k() as usize
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// One step: `(next state, output symbol)`.
    #[inline]
    pub fn step(&self, q: usize, a: u8) -> (usize, u8) {
        let i = q * self.k() as usize + a as usize;
        (self.next[i], self.out[i])
    }

    pub fn apply(&self, w: &Word) -> Word {
        self.apply_from(self.start, w).1
    }

    /// Runs from state `q`, returning the final state and the output.
    pub fn apply_from(&self, mut q: usize, w: &Word) -> (usize, Word) {
        let mut out = Vec::with_capacity(w.len());
        for &a in w.digits() {
            let (q2, b) = self.step(q, a);
            out.push(b);
            q = q2;
        }
        (q, Word::from_digits_unchecked(out))
    }

    /// Same states; in state `q` reading `b` outputs `a = out(q,·)^{-1}(b)`
    /// and moves to `next(q, a)`.
    pub fn invert(&self) -> Self {
        let k = self.k() as usize;
        let mut next = vec![0; self.next.len()];
        let mut out = vec![0; self.out.len()];
        for q in 0..self.num_states() {
            for a in 0..k {
                let b = self.out[q * k + a] as usize;
                out[q * k + b] = a as u8;
                next[q * k + b] = self.next[q * k + a];
            }
        }
        Self {
            alphabet: self.alphabet,
            next,
            out,
            start: self.start,
        }
    }

    /// Text form: header `mealy k=<k> states=<n> start=<q0>`, then one line
    /// `<q> <a> -> <q'> emit <b>` per transition.
    pub fn to_text(&self) -> String {
        let k = self.k() as usize;
        let mut s = format!(
            "mealy k={} states={} start={}\n",
            k,
            self.num_states(),
            self.start
        );
        for q in 0..self.num_states() {
            for a in 0..k {
                let i = q * k + a;
                let _ = writeln!(
                    s,
                    "{} {} -> {} emit {}",
                    q,
                    digit_char(a as u8),
                    self.next[i],
                    digit_char(self.out[i])
                );
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let table = crate::machine_text::parse(text, "mealy")?;
        let alphabet = Alphabet::new(table.k)?;
        let mut out = Vec::with_capacity(table.emit.len());
        for (i, e) in table.emit.iter().enumerate() {
            let w = alphabet.parse_word(e).map_err(|err| Error::ParseMachine {
                line: table.lines[i],
                msg: err.to_string(),
            })?;
            if w.len() != 1 {
                return Err(Error::ParseMachine {
                    line: table.lines[i],
                    msg: "Mealy machines emit exactly one symbol".into(),
                });
            }
            out.push(w.digits()[0]);
        }
        Self::new(alphabet, table.next, out, table.start)
    }
}
