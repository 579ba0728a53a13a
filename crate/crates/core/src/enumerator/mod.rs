//! Separator enumerators: maps from words to `[0,1)` with dense image.
//!
//! Four implementations ship: [`StdEnumerator`] (the base-k grid),
//! [`CoherentEnumerator`] (the grid relabeled by an invertible Mealy machine),
//! [`PairEnumerator`] (the twin enumerators `f0`/`f1` sharing one
//! best-from-below chain at `1/2`), and [`NearLinearEnumerator`].

mod ball;
mod coherent;
pub mod listing;
mod nearlinear;
mod pair;
mod standard;

use std::path::Path;

use num_traits::Signed;

pub use ball::{BallDfa, Threshold};
pub use coherent::CoherentEnumerator;
pub use nearlinear::{NearLinearEnumerator, NearLinearParams};
pub use pair::{Branch, PairClass, PairEnumerator, PairParams};
pub use standard::StdEnumerator;

use crate::error::{Error, Result};
use crate::mealy::MealyMachine;
use crate::rat::Rat;
use crate::word::{Alphabet, Word};

/// Default cap on the number of words a preimage search may materialize.
pub const DEFAULT_PREIMAGE_BUDGET: u64 = 1 << 22;

pub trait SeparatorEnumerator: Send + Sync {
    fn alphabet(&self) -> Alphabet;

    /// Short identifier, as accepted on the command line.
    fn id(&self) -> String;

    fn eval(&self, w: &Word) -> Rat;

    /// Every word `w` with `|w| <= maxlen` and `|eval(w) - x| < delta`, in
    /// length-lexicographic order. Fails if more than `budget` candidate
    /// words would have to be examined.
    fn preimages_within(&self, x: &Rat, delta: &Rat, maxlen: usize, budget: u64)
        -> Result<Vec<Word>>;

    /// `a_n(x)` when a closed form is known for this `x`.
    fn best_below_closed_form(&self, _x: &Rat, _n: usize) -> Option<Rat> {
        None
    }

    /// A word of length at most `n` attaining the closed-form `a_n(x)`.
    fn best_below_witness(&self, _x: &Rat, _n: usize) -> Option<Word> {
        None
    }

    /// A finite automaton accepting exactly the words whose value lies in
    /// the open ball, when the ball language is regular in a known way.
    fn ball_automaton(&self, _x: &Rat, _delta: &Rat) -> Option<BallDfa> {
        None
    }

    /// Word length within which every cell `[j/k^6, (j+1)/k^6)` holds an
    /// image point.
    fn density_budget(&self) -> usize;

    fn describe(&self) -> String {
        self.id()
    }
}

pub fn in_ball(v: &Rat, x: &Rat, delta: &Rat) -> bool {
    (v - x).abs() < *delta
}

/// Exhaustive preimage search over all words up to `maxlen`.
pub fn bruteforce_preimages(
    f: &dyn SeparatorEnumerator,
    x: &Rat,
    delta: &Rat,
    maxlen: usize,
    budget: u64,
) -> Result<Vec<Word>> {
    let k = f.alphabet().k() as u64;
    let mut total: u64 = 0;
    let mut level: u64 = 1;
    for _ in 0..=maxlen {
        total = total.saturating_add(level);
        level = level.saturating_mul(k);
    }
    if total > budget {
        return Err(Error::BudgetExceeded { budget });
    }
    Ok(f.alphabet()
        .words_up_to(maxlen)
        .filter(|w| in_ball(&f.eval(w), x, delta))
        .collect())
}

/// Sorts and dedups candidate words, then keeps those inside the ball.
pub(crate) fn filter_candidates(
    f: &dyn SeparatorEnumerator,
    mut cands: Vec<Word>,
    x: &Rat,
    delta: &Rat,
) -> Vec<Word> {
    cands.sort_by(|a, b| a.lenlex_cmp(b));
    cands.dedup();
    cands.retain(|w| in_ball(&f.eval(w), x, delta));
    cands
}

/// Indices `j` of the cells `[j/k^e, (j+1)/k^e)` holding no value `f(w)`
/// with `w` among all words of length `<= min(budget, exhaustive_cap)` and
/// the `extra` words (which should have length `<= budget`).
pub fn density_gaps(
    f: &dyn SeparatorEnumerator,
    e: u32,
    budget: usize,
    exhaustive_cap: usize,
    extra: &[Word],
) -> Vec<u64> {
    use num_traits::ToPrimitive;
    let k = f.alphabet().k() as u64;
    let cells = k.pow(e);
    let scale = Rat::from_integer(cells.into());
    let mut hit = vec![false; cells as usize];
    let words = f.alphabet().words_up_to(budget.min(exhaustive_cap));
    for w in words.chain(extra.iter().filter(|w| w.len() <= budget).cloned()) {
        let j = (f.eval(&w) * &scale).floor().to_integer().to_u64().expect("value in [0,1)");
        hit[j as usize] = true;
    }
    (0..cells).filter(|&j| !hit[j as usize]).collect()
}

/// Parses an enumerator name: `std`, `coherent:<machine-file|name>`,
/// `pair:f0`, `pair:f1`, `nearlinear`.
pub fn from_spec(spec: &str, alphabet: Alphabet) -> Result<Box<dyn SeparatorEnumerator>> {
    match spec {
        "std" => Ok(Box::new(StdEnumerator::new(alphabet))),
        "pair:f0" => Ok(Box::new(PairEnumerator::new(alphabet, Branch::F0))),
        "pair:f1" => Ok(Box::new(PairEnumerator::new(alphabet, Branch::F1))),
        "nearlinear" => Ok(Box::new(NearLinearEnumerator::new(alphabet))),
        _ => {
            let Some(src) = spec.strip_prefix("coherent:") else {
                return Err(Error::InvalidParameter(format!("unknown enumerator '{spec}'")));
            };
            let machine = if Path::new(src).is_file() {
                let text = std::fs::read_to_string(src)
                    .map_err(|e| Error::InvalidParameter(format!("{src}: {e}")))?;
                let m = MealyMachine::from_text(&text)?;
                if m.alphabet() != alphabet {
                    return Err(Error::InvalidParameter(format!(
                        "machine alphabet k={} does not match --k {}",
                        m.k(),
                        alphabet.k()
                    )));
                }
                m
            } else {
                MealyMachine::named(alphabet, src).ok_or_else(|| {
                    Error::InvalidParameter(format!("no machine file or shipped machine '{src}'"))
                })?
            };
            Ok(Box::new(CoherentEnumerator::new(machine, src)))
        }
    }
}
