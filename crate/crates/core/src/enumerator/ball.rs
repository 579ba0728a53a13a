//! Regular ball languages for grid-valued enumerators.
//!
//! For a rational threshold `t`, the set of words `w` with `0.w < t` (or
//! `> t`) is regular: compare `w` digit by digit against the eventually
//! periodic canonical expansion of `t`. Two such comparators give the open
//! ball `(x - δ, x + δ)`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::mealy::MealyMachine;
use crate::rat::Rat;
use crate::word::Alphabet;

const LESS: u32 = 0;
const GREATER: u32 = 1;
const TIED: u32 = 2;

/// Comparator of `0.w` against a fixed rational.
#[derive(Debug, Clone)]
pub enum Threshold {
    /// Every word compares this way (threshold outside `[0,1)`).
    Always(Ordering),
    /// `digits[i]` is the `(i+1)`-th expansion digit; positions at or past
    /// `pre + per` fold back into the period. `exact[i]` is true when the
    /// expansion is all zeros from position `i` on.
    Expansion {
        digits: Vec<u8>,
        exact: Vec<bool>,
        pre: usize,
    },
}

impl Threshold {
    pub fn new(t: &Rat, alphabet: Alphabet) -> Self {
        if t.is_negative() {
            return Threshold::Always(Ordering::Greater);
        }
        if *t >= Rat::one() {
            return Threshold::Always(Ordering::Less);
        }
        let den = t.denom().clone();
        let k = BigInt::from(alphabet.k());
        let mut rem = t.numer().clone();
        let mut seen: HashMap<BigInt, usize> = HashMap::new();
        let mut digits = Vec::new();
        let mut exact = Vec::new();
        let pre = loop {
            if let Some(&i) = seen.get(&rem) {
                break i;
            }
            seen.insert(rem.clone(), digits.len());
            exact.push(rem.is_zero());
            let (d, r) = (&rem * &k).div_rem(&den);
            digits.push(d.to_u8().expect("digit below k"));
            rem = r;
        };
        Threshold::Expansion { digits, exact, pre }
    }

    /// Number of comparator states.
    pub fn num_states(&self) -> usize {
        match self {
            Threshold::Always(_) => 1,
            Threshold::Expansion { digits, .. } => TIED as usize + digits.len(),
        }
    }

    fn start(&self) -> u32 {
        match self {
            Threshold::Always(Ordering::Less) => LESS,
            Threshold::Always(_) => GREATER,
            Threshold::Expansion { .. } => TIED,
        }
    }

    fn step(&self, s: u32, d: u8) -> u32 {
        if s < TIED {
            return s;
        }
        let Threshold::Expansion { digits, pre, .. } = self else {
            unreachable!("tied states only exist for expansions")
        };
        let pos = (s - TIED) as usize;
        match d.cmp(&digits[pos]) {
            Ordering::Less => LESS,
            Ordering::Greater => GREATER,
            Ordering::Equal => {
                let next = if pos + 1 == digits.len() { *pre } else { pos + 1 };
                TIED + next as u32
            }
        }
    }

    /// Final comparison of `0.w` (as read so far) with the threshold.
    fn relation(&self, s: u32) -> Ordering {
        match s {
            LESS => Ordering::Less,
            GREATER => Ordering::Greater,
            _ => {
                let Threshold::Expansion { exact, .. } = self else {
                    unreachable!()
                };
                if exact[(s - TIED) as usize] {
                    Ordering::Equal
                } else {
                    Ordering::Less
                }
            }
        }
    }
}

/// DFA state: `(relabeling state, low comparator, high comparator)`.
pub type BallState = (usize, u32, u32);

/// Accepts `w` iff `grid(M(w))` (or `grid(w)` without relabeling, with
/// `λ ↦ 0`) lies in the open ball.
#[derive(Debug, Clone)]
pub struct BallDfa {
    low: Threshold,
    high: Threshold,
    relabel: Option<MealyMachine>,
}

impl BallDfa {
    pub fn new(x: &Rat, delta: &Rat, alphabet: Alphabet, relabel: Option<MealyMachine>) -> Self {
        Self {
            low: Threshold::new(&(x - delta), alphabet),
            high: Threshold::new(&(x + delta), alphabet),
            relabel,
        }
    }

    pub fn start(&self) -> BallState {
        let q = self.relabel.as_ref().map_or(0, |m| m.start());
        (q, self.low.start(), self.high.start())
    }

    #[inline]
    pub fn step(&self, (q, lo, hi): BallState, a: u8) -> BallState {
        let (q2, b) = match &self.relabel {
            Some(m) => m.step(q, a),
            None => (0, a),
        };
        (q2, self.low.step(lo, b), self.high.step(hi, b))
    }

    pub fn accepts(&self, (_, lo, hi): BallState) -> bool {
        self.low.relation(lo) == Ordering::Greater && self.high.relation(hi) == Ordering::Less
    }

    pub fn run(&self, w: &crate::word::Word) -> bool {
        let s = w.digits().iter().fold(self.start(), |s, &a| self.step(s, a));
        self.accepts(s)
    }

    /// Upper bound on reachable states.
    pub fn num_states(&self) -> usize {
        self.relabel.as_ref().map_or(1, |m| m.num_states())
            * self.low.num_states()
            * self.high.num_states()
    }
}
