use super::standard::{grid_ball_words, truncation};
use super::{BallDfa, SeparatorEnumerator};
use crate::error::Result;
use crate::mealy::MealyMachine;
use crate::rat::Rat;
use crate::word::{Alphabet, Word};

/// `f(w) = grid(M(w))` for an invertible synchronous Mealy machine `M`,
/// with `f(λ) = 0`.
#[derive(Debug, Clone)]
pub struct CoherentEnumerator {
    machine: MealyMachine,
    inverse: MealyMachine,
    label: String,
}

impl CoherentEnumerator {
    pub fn new(machine: MealyMachine, label: &str) -> Self {
        let inverse = machine.invert();
        Self {
            machine,
            inverse,
            label: label.to_string(),
        }
    }

    pub fn machine(&self) -> &MealyMachine {
        &self.machine
    }
}

impl SeparatorEnumerator for CoherentEnumerator {
    fn alphabet(&self) -> Alphabet {
        self.machine.alphabet()
    }

    fn id(&self) -> String {
        format!("coherent:{}", self.label)
    }

    fn eval(&self, w: &Word) -> Rat {
        if w.is_empty() {
            return Rat::from_integer(0.into());
        }
        self.alphabet().grid(&self.machine.apply(w)).expect("nonempty")
    }

    /// Grid words in the ball, pulled back through `M⁻¹` length by length.
    fn preimages_within(&self, x: &Rat, delta: &Rat, maxlen: usize, budget: u64) -> Result<Vec<Word>> {
        let mut out: Vec<Word> = grid_ball_words(self.alphabet(), x, delta, maxlen, budget)?
            .into_iter()
            .map(|u| self.inverse.apply(&u))
            .collect();
        out.sort_by(|a, b| a.lenlex_cmp(b));
        Ok(out)
    }

    fn best_below_closed_form(&self, x: &Rat, n: usize) -> Option<Rat> {
        truncation(self.alphabet(), x, n)
    }

    fn best_below_witness(&self, x: &Rat, n: usize) -> Option<Word> {
        let u = self.alphabet().expand(x, n).ok()?;
        Some(self.inverse.apply(&u))
    }

    fn ball_automaton(&self, x: &Rat, delta: &Rat) -> Option<BallDfa> {
        Some(BallDfa::new(x, delta, self.alphabet(), Some(self.machine.clone())))
    }

    fn density_budget(&self) -> usize {
        6
    }

    fn describe(&self) -> String {
        format!("coherent({}, k={}, {} states)", self.label, self.alphabet().k(), self.machine.num_states())
    }
}
