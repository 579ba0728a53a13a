//! Best approximation from below: `a_n(x) = max { f(w) : |w| <= n, f(w) <= x }`.

use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::enumerator::SeparatorEnumerator;
use crate::error::{Error, Result};
use crate::rat::{fmt_rat, pow_k, Rat};

/// Oracle mode refuses chains needing more than this many evaluations.
pub const ORACLE_BOUND: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Exhaustive evaluation of every word.
    Oracle,
    /// Per-enumerator closed forms.
    Fast,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Mode::Oracle),
            "fast" => Ok(Mode::Fast),
            _ => Err(Error::InvalidParameter(format!("mode must be oracle or fast, got '{s}'"))),
        }
    }
}

/// Exhaustive `a_n(x)`.
pub fn best_below_bruteforce(f: &dyn SeparatorEnumerator, x: &Rat, n: usize) -> Result<Rat> {
    f.alphabet()
        .words_up_to(n)
        .map(|w| f.eval(&w))
        .filter(|v| v <= x)
        .max()
        .ok_or_else(|| Error::NoWitness(format!("no word of length <= {n} has value <= {x}")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxChain {
    pub id: String,
    pub k: u8,
    pub x: Rat,
    /// `a_0 ..= a_N`.
    pub values: Vec<Rat>,
}

impl ApproxChain {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `b_n = k^n a_n` for `n = 1..=N`.
    pub fn scaled(&self) -> Vec<Rat> {
        scaled_chain(self).0
    }

    /// Rows `n, a_n, b_n, integer_flag` for `n = 1..=N`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,a_n,b_n,integer_flag\n");
        for (i, b) in self.scaled().iter().enumerate() {
            let n = i + 1;
            let b_txt = if b.is_integer() {
                b.to_integer().to_string()
            } else {
                fmt_rat(b)
            };
            writeln!(out, "{n},{},{b_txt},{}", fmt_rat(&self.values[n]), b.is_integer()).unwrap();
        }
        out
    }
}

/// `b_n = k^n a_n` for `n >= 1`, plus whether every entry is an integer.
pub fn scaled_chain(chain: &ApproxChain) -> (Vec<Rat>, bool) {
    let b: Vec<Rat> = chain
        .values
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, a)| a * Rat::from_integer(pow_k(chain.k, n).into()))
        .collect();
    let all_int = b.iter().all(|v| v.is_integer());
    (b, all_int)
}

pub fn approx_chain(f: &dyn SeparatorEnumerator, x: &Rat, n_max: usize, mode: Mode) -> Result<ApproxChain> {
    let values = match mode {
        Mode::Fast => (0..=n_max)
            .map(|n| {
                f.best_below_closed_form(x, n).ok_or_else(|| {
                    Error::NoClosedForm(format!("{} at x = {}", f.id(), fmt_rat(x)))
                })
            })
            .collect::<Result<Vec<_>>>()?,
        Mode::Oracle => oracle_values(f, x, n_max)?,
    };
    Ok(ApproxChain {
        id: f.id(),
        k: f.alphabet().k(),
        x: x.clone(),
        values,
    })
}

/// One pass over all words up to `n_max`: best per length, then running max.
fn oracle_values(f: &dyn SeparatorEnumerator, x: &Rat, n_max: usize) -> Result<Vec<Rat>> {
    let k = f.alphabet().k();
    let need = pow_k(k, n_max + 1);
    if need > ORACLE_BOUND.into() {
        return Err(Error::BudgetExceeded { budget: ORACLE_BOUND });
    }
    let mut per_len: Vec<Option<Rat>> = vec![None; n_max + 1];
    for w in f.alphabet().words_up_to(n_max) {
        let v = f.eval(&w);
        if v <= *x {
            let slot = &mut per_len[w.len()];
            if slot.as_ref().is_none_or(|b| v > *b) {
                *slot = Some(v);
            }
        }
    }
    let mut out = Vec::with_capacity(n_max + 1);
    let mut best: Option<Rat> = None;
    for (n, v) in per_len.into_iter().enumerate() {
        best = match (best, v) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        out.push(best.clone().ok_or_else(|| {
            Error::NoWitness(format!("no word of length <= {n} has value <= {x}"))
        })?);
    }
    Ok(out)
}

/// Ensures a chain satisfies `a_n <= x` and is nondecreasing.
pub fn check_chain(chain: &ApproxChain) -> std::result::Result<(), String> {
    for (n, a) in chain.values.iter().enumerate() {
        if *a > chain.x {
            return Err(format!("a_{n} = {a} exceeds x = {}", chain.x));
        }
        if *a < Rat::zero() || *a >= Rat::one() {
            return Err(format!("a_{n} = {a} outside [0,1)"));
        }
        if n > 0 && chain.values[n - 1] > *a {
            return Err(format!("a_{} > a_{n}", n - 1));
        }
    }
    Ok(())
}
