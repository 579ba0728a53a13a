//! The twin enumerators `f0`, `f1` around `x = 1/2`.
//!
//! Both share the annuli `A_n = (x - r_n, x - r_{n+1}) ∪ (x + r_{n+1}, x + r_n)`
//! with `r_n = k^-(n+2)` and the targets `c_n = x - (r_n + r_{n+1})/2 ∈ A_n`.
//! `f0` sends `0^n ↦ c_n`, `f1` sends `z_n ↦ c_n` where `z_n` is the length-n
//! prefix of the base-k Champernowne sequence. Both send `y_m` (prefixes of
//! the shifted sequence) with `m = 2^n (2t+1)` to the `t`-th point of a dense
//! listing of `A_n`, and every remaining word to a dense listing of the far
//! region `[0, x - r_0] ∪ [x + r_0, 1)`.
//!
//! Words not covered by any of these rules (`z_n` under `f0`, `0^n` under
//! `f1`) take the odd far indices `2n + 1`; the words of `W` take the even
//! ones, `2j` for the `j`-th word of `W` in length-lexicographic order.

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use super::listing::refinement_point;
use super::{filter_candidates, SeparatorEnumerator};
use crate::error::{Error, Result};
use crate::rat::{inv_pow_k, rat, Rat};
use crate::sequence::{prefix, Champernowne, DigitSource, Permuted};
use crate::word::{Alphabet, Word};

/// Parameters of the construction; `x` is fixed at `1/2`.
#[derive(Debug, Clone, Copy)]
pub struct PairParams {
    alphabet: Alphabet,
}

impl PairParams {
    pub fn new(alphabet: Alphabet) -> Self {
        Self { alphabet }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn k(&self) -> u8 {
        self.alphabet.k()
    }

    pub fn x(&self) -> Rat {
        rat(1, 2)
    }

    /// `r_n = k^-(n+2)`.
    pub fn r(&self, n: usize) -> Rat {
        inv_pow_k(self.k(), n + 2)
    }

    /// `c_n = x - (r_n + r_{n+1}) / 2`.
    pub fn c(&self, n: usize) -> Rat {
        self.x() - (self.r(n) + self.r(n + 1)) / rat(2, 1)
    }

    /// Index of the annulus containing `v`, if any.
    pub fn annulus_of(&self, v: &Rat) -> Option<usize> {
        let d = (v - self.x()).abs();
        if d.is_zero() || d >= self.r(0) {
            return None;
        }
        let mut n = 0;
        let mut next = self.r(1);
        while d <= next {
            if d == next {
                return None;
            }
            n += 1;
            next = self.r(n + 1);
        }
        Some(n)
    }

    /// Splits `m >= 1` as `2^n (2t + 1)`, i.e. `m ∈ L_n` at position `t`.
    pub fn split_length(m: usize) -> (usize, u64) {
        assert!(m >= 1, "L_n partitions the positive integers");
        let n = m.trailing_zeros() as usize;
        (n, ((m >> n) as u64 - 1) / 2)
    }

    /// `d_{n,t}`: left and right pieces of `A_n` interleaved, each refined
    /// k-adically, with `c_n` skipped.
    pub fn dense_listing_dn(&self, n: usize, t: &BigUint) -> Rat {
        let x = self.x();
        let (rn, rn1) = (self.r(n), self.r(n + 1));
        let two = BigUint::from(2u32);
        let s = t / &two;
        if (t % &two).is_zero() {
            // c_n is the midpoint of the left piece; it appears in the
            // refinement only for even k, as level-1 point i = k/2.
            let k = self.k();
            let s = if k.is_multiple_of(2) && s >= BigUint::from(k as u32 / 2 - 1) {
                s + 1u32
            } else {
                s
            };
            refinement_point(&(&x - &rn), &(&x - &rn1), k, &s)
        } else {
            refinement_point(&(&x + &rn1), &(&x + &rn), self.k(), &s)
        }
    }

    /// `q_t`: the endpoints `0`, `x - r_0`, `x + r_0` first, then the
    /// interiors of `[0, x - r_0]` and `[x + r_0, 1)` interleaved.
    pub fn dense_listing_far(&self, t: &BigUint) -> Rat {
        let x = self.x();
        let r0 = self.r(0);
        let three = BigUint::from(3u32);
        if *t < three {
            return match u32::try_from(t).unwrap() {
                0 => Rat::zero(),
                1 => &x - &r0,
                _ => &x + &r0,
            };
        }
        let u = t - three;
        let two = BigUint::from(2u32);
        let s = &u / &two;
        if (&u % &two).is_zero() {
            refinement_point(&Rat::zero(), &(&x - &r0), self.k(), &s)
        } else {
            refinement_point(&(&x + &r0), &Rat::one(), self.k(), &s)
        }
    }

    /// True if the open ball around `center` meets the far region.
    pub fn ball_meets_far(&self, center: &Rat, delta: &Rat) -> bool {
        let (lo, hi) = (center - delta, center + delta);
        let (a, b) = (self.x() - self.r(0), self.x() + self.r(0));
        (lo < a && hi > Rat::zero()) || (hi > b && lo < Rat::one())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    F0,
    F1,
}

/// Which rule of the construction assigns a word's value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairClass {
    /// `0^n ↦ c_n` (branch f0; includes λ).
    ZeroPow(usize),
    /// `z_n ↦ c_n` (branch f1; includes λ).
    ZWord(usize),
    /// `y_len ↦ d_{annulus, index}` where `len = 2^annulus (2 index + 1)`.
    YWord { len: usize, annulus: usize, index: u64 },
    /// The `rank`-th word of `W`, mapped to far index `2 rank`.
    Remainder { rank: BigUint },
    /// `z_n` under f0 or `0^n` under f1, mapped to far index `2n + 1`.
    Leftover { len: usize },
}

impl PairClass {
    /// Index into the far listing, for words valued there.
    pub fn far_index(&self) -> Option<BigUint> {
        match self {
            PairClass::Remainder { rank } => Some(rank * 2u32),
            PairClass::Leftover { len } => Some(BigUint::from(2 * *len + 1)),
            _ => None,
        }
    }
}

#[derive(Clone)]
pub struct PairEnumerator {
    params: PairParams,
    branch: Branch,
    z: Champernowne,
    y: Permuted<Champernowne>,
    /// Length of the leading run of 0s in Z and in Y.
    zrun: usize,
    yrun: usize,
    overrides: Vec<(Word, Rat)>,
}

fn leading_zeros(src: &dyn DigitSource) -> usize {
    src.stream().take_while(|&d| d == 0).count()
}

impl PairEnumerator {
    pub fn new(alphabet: Alphabet, branch: Branch) -> Self {
        let z = Champernowne::new(alphabet);
        let y = Permuted::shifted(z);
        Self {
            params: PairParams::new(alphabet),
            branch,
            zrun: leading_zeros(&z),
            yrun: leading_zeros(&y),
            z,
            y,
            overrides: Vec::new(),
        }
    }

    /// Replaces the value of one word. Used to build deliberately broken
    /// enumerators for negative tests.
    pub fn with_override(mut self, w: Word, value: Rat) -> Self {
        self.overrides.push((w, value));
        self
    }

    pub fn params(&self) -> &PairParams {
        &self.params
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn z_prefix(&self, n: usize) -> Word {
        prefix(&self.z, n)
    }

    pub fn y_prefix(&self, n: usize) -> Word {
        prefix(&self.y, n)
    }

    /// Distinct special words of length `m` (`0^m`, `z_m`, `y_m`).
    pub fn specials_of_len(&self, m: usize) -> Vec<Word> {
        let mut v = vec![Word::repeat(0, m), self.z_prefix(m), self.y_prefix(m)];
        v.sort();
        v.dedup();
        v
    }

    /// Number of excluded words (any of `0^m`, `z_m`, `y_m`) of length `< m`.
    fn excluded_shorter(&self, m: usize) -> BigUint {
        if m == 0 {
            return BigUint::zero();
        }
        // length 0 contributes λ once; each length l >= 1 contributes 3
        // minus coincidences with 0^l (z_l ≠ y_l since the shift has no
        // fixed points)
        let l = m - 1;
        BigUint::from(1 + 3 * l - self.zrun.min(l) - self.yrun.min(l))
    }

    pub fn classify(&self, w: &Word) -> PairClass {
        let m = w.len();
        if m == 0 {
            return match self.branch {
                Branch::F0 => PairClass::ZeroPow(0),
                Branch::F1 => PairClass::ZWord(0),
            };
        }
        let is_zero = w.is_constant(0);
        let z = self.z_prefix(m);
        let y = self.y_prefix(m);
        let (is_z, is_y) = (*w == z, *w == y);
        let yword = || {
            let (annulus, index) = PairParams::split_length(m);
            PairClass::YWord {
                len: m,
                annulus,
                index,
            }
        };
        match self.branch {
            Branch::F0 if is_zero => return PairClass::ZeroPow(m),
            Branch::F1 if is_z => return PairClass::ZWord(m),
            _ => {}
        }
        if is_y {
            return yword();
        }
        if is_z || is_zero {
            return PairClass::Leftover { len: m };
        }
        let before_same_len = [Word::repeat(0, m), z, y]
            .iter()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .filter(|s| *s < w)
            .count();
        let excluded = self.excluded_shorter(m) + before_same_len;
        let rank = self.params.alphabet.lenlex_rank(w) - excluded;
        PairClass::Remainder { rank }
    }

    pub fn value_of(&self, class: &PairClass) -> Rat {
        match class {
            PairClass::ZeroPow(n) | PairClass::ZWord(n) => self.params.c(*n),
            PairClass::YWord { annulus, index, .. } => {
                self.params.dense_listing_dn(*annulus, &BigUint::from(*index))
            }
            other => self
                .params
                .dense_listing_far(&other.far_index().expect("far-valued class")),
        }
    }

    /// Length-`m` witness of `a_m(1/2) = c_m`: `0^m` for f0, `z_m` for f1.
    pub fn chain_witness(&self, m: usize) -> Word {
        match self.branch {
            Branch::F0 => Word::repeat(0, m),
            Branch::F1 => self.z_prefix(m),
        }
    }
}

impl SeparatorEnumerator for PairEnumerator {
    fn alphabet(&self) -> Alphabet {
        self.params.alphabet
    }

    fn id(&self) -> String {
        match self.branch {
            Branch::F0 => "pair:f0".into(),
            Branch::F1 => "pair:f1".into(),
        }
    }

    fn eval(&self, w: &Word) -> Rat {
        if let Some((_, v)) = self.overrides.iter().find(|(o, _)| o == w) {
            return v.clone();
        }
        self.value_of(&self.classify(w))
    }

    /// Special words are checked directly; all other words are valued in
    /// the far region, so they are only enumerated when the ball meets it.
    fn preimages_within(&self, x: &Rat, delta: &Rat, maxlen: usize, budget: u64) -> Result<Vec<Word>> {
        if self.params.ball_meets_far(x, delta) {
            return super::bruteforce_preimages(self, x, delta, maxlen, budget);
        }
        if (3 * (maxlen as u64 + 1)) > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        let mut cands: Vec<Word> = (0..=maxlen).flat_map(|m| self.specials_of_len(m)).collect();
        cands.extend(
            self.overrides
                .iter()
                .filter(|(w, _)| w.len() <= maxlen)
                .map(|(w, _)| w.clone()),
        );
        Ok(filter_candidates(self, cands, x, delta))
    }

    fn best_below_closed_form(&self, x: &Rat, n: usize) -> Option<Rat> {
        (*x == self.params.x()).then(|| self.params.c(n))
    }

    fn best_below_witness(&self, x: &Rat, n: usize) -> Option<Word> {
        (*x == self.params.x()).then(|| self.chain_witness(n))
    }

    fn density_budget(&self) -> usize {
        64
    }

    fn describe(&self) -> String {
        format!(
            "{}(k={}, x=1/2, Z={}, Y={})",
            self.id(),
            self.params.k(),
            self.z.describe(),
            self.y.describe()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerator::{bruteforce_preimages, DEFAULT_PREIMAGE_BUDGET};
    use std::collections::HashSet;

    fn bin() -> Alphabet {
        Alphabet::binary()
    }

    fn f(branch: Branch) -> PairEnumerator {
        PairEnumerator::new(bin(), branch)
    }

    #[test]
    fn constants() {
        let p = PairParams::new(bin());
        assert_eq!(p.r(0), rat(1, 4));
        assert_eq!(p.c(2), rat(29, 64));
        for n in 0..40 {
            assert!(p.c(n) < p.c(n + 1));
            assert!(p.c(n + 1) < p.x());
            assert_eq!(p.annulus_of(&p.c(n)), Some(n));
        }
        assert_eq!(p.annulus_of(&p.x()), None);
        assert_eq!(p.annulus_of(&(p.x() - p.r(3))), None);
        assert_eq!(p.annulus_of(&rat(1, 8)), None);
    }

    #[test]
    fn split_lengths() {
        assert_eq!(PairParams::split_length(1), (0, 0));
        assert_eq!(PairParams::split_length(2), (1, 0));
        assert_eq!(PairParams::split_length(6), (1, 1));
        assert_eq!(PairParams::split_length(48), (4, 1));
        for m in 1..5000usize {
            let (n, t) = PairParams::split_length(m);
            assert_eq!((1usize << n) * (2 * t as usize + 1), m);
            assert!(m > n);
        }
    }

    #[test]
    fn eval_examples() {
        let two = Word::repeat(0, 2);
        assert_eq!(f(Branch::F0).eval(&two), rat(29, 64));
        let f1 = f(Branch::F1);
        assert_eq!(f1.eval(&f1.z_prefix(2)), rat(29, 64));
        // y_2 ∈ L_1 (2 = 2^1 * 1) lands in A_1 under both branches when it
        // is not claimed by Step 1; for k = 2, y_2 = 00 so f0 keeps c_2.
        let k3 = Alphabet::new(3).unwrap();
        for branch in [Branch::F0, Branch::F1] {
            let g = PairEnumerator::new(k3, branch);
            let y2 = g.y_prefix(2);
            assert_eq!(g.params().annulus_of(&g.eval(&y2)), Some(1));
        }
        assert_eq!(f1.params().annulus_of(&f1.eval(&f1.y_prefix(2))), Some(1));
        assert_eq!(f(Branch::F0).eval(&Word::empty()), f1.eval(&Word::empty()));
    }

    #[test]
    fn classification_examples() {
        let f0 = f(Branch::F0);
        let f1 = f(Branch::F1);
        assert_eq!(f0.classify(&Word::repeat(0, 2)), PairClass::ZeroPow(2));
        let z3 = bin().parse_word("110").unwrap();
        assert_eq!(f1.z_prefix(3), z3);
        assert_eq!(f1.classify(&z3), PairClass::ZWord(3));
        assert_eq!(f0.classify(&z3), PairClass::Leftover { len: 3 });
        // λ, 0, 1, 00, 01: "01" is the first word outside every family
        let first = bin().parse_word("01").unwrap();
        for g in [&f0, &f1] {
            assert_eq!(g.classify(&first), PairClass::Remainder { rank: BigUint::zero() });
        }
    }

    /// The Step-3 rank counts words of W in length-lex order.
    #[test]
    fn remainder_rank_by_enumeration() {
        for k in [2u32, 3] {
            let a = Alphabet::new(k).unwrap();
            let g = PairEnumerator::new(a, Branch::F0);
            let mut next = 0u32;
            for w in a.words_up_to(if k == 2 { 10 } else { 6 }) {
                let m = w.len();
                let special = w.is_constant(0) || w == g.z_prefix(m) || w == g.y_prefix(m);
                let class = g.classify(&w);
                if special {
                    assert!(!matches!(class, PairClass::Remainder { .. }));
                } else {
                    assert_eq!(class, PairClass::Remainder { rank: BigUint::from(next) });
                    next += 1;
                }
            }
        }
    }

    #[test]
    fn dense_listing_membership_and_distinctness() {
        for k in [2u32, 3] {
            let p = PairParams::new(Alphabet::new(k).unwrap());
            for n in 0..=4 {
                let mut seen = HashSet::new();
                for t in 0u32..200 {
                    let v = p.dense_listing_dn(n, &BigUint::from(t));
                    assert_eq!(p.annulus_of(&v), Some(n));
                    assert_ne!(v, p.c(n));
                    assert!(seen.insert(v));
                }
            }
        }
    }

    #[test]
    fn dense_listing_density() {
        let p = PairParams::new(bin());
        let vals: Vec<Rat> = (0u32..1 << 12)
            .map(|t| p.dense_listing_dn(1, &BigUint::from(t)))
            .collect();
        let width = rat(1, 1 << 10);
        // sweep A_1's two pieces in steps of the cell width
        for (a, b) in [(p.x() - p.r(1), p.x() - p.r(2)), (p.x() + p.r(2), p.x() + p.r(1))] {
            let mut lo = a.clone();
            while &lo + &width <= b {
                let hi = &lo + &width;
                assert!(vals.iter().any(|v| *v >= lo && *v < hi), "gap at {lo}");
                lo = hi;
            }
        }
    }

    #[test]
    fn far_listing() {
        let p = PairParams::new(bin());
        let (a, b) = (p.x() - p.r(0), p.x() + p.r(0));
        let vals: Vec<Rat> = (0u32..500).map(|t| p.dense_listing_far(&BigUint::from(t))).collect();
        let set: HashSet<&Rat> = vals.iter().collect();
        assert_eq!(set.len(), vals.len());
        assert!(vals.iter().all(|v| (*v <= a || *v >= b) && *v >= Rat::zero() && *v < Rat::one()));
        let width = rat(1, 1 << 10);
        let mut lo = Rat::zero();
        let dense: Vec<Rat> = (0u32..1 << 13).map(|t| p.dense_listing_far(&BigUint::from(t))).collect();
        while &lo + &width <= a {
            let hi = &lo + &width;
            assert!(dense.iter().any(|v| *v >= lo && *v < hi), "gap at {lo}");
            lo = hi;
        }
    }

    #[test]
    fn preimages_match_bruteforce() {
        for branch in [Branch::F0, Branch::F1] {
            let g = f(branch);
            let x = g.params().x();
            for n in 0..5 {
                let d = g.params().r(n);
                let fast = g.preimages_within(&x, &d, 12, DEFAULT_PREIMAGE_BUDGET).unwrap();
                let slow = bruteforce_preimages(&g, &x, &d, 12, DEFAULT_PREIMAGE_BUDGET).unwrap();
                assert_eq!(fast, slow);
            }
            for (c, d) in [(rat(1, 3), rat(1, 10)), (rat(1, 2), rat(1, 3)), (rat(9, 16), rat(1, 64))] {
                let fast = g.preimages_within(&c, &d, 9, DEFAULT_PREIMAGE_BUDGET).unwrap();
                let slow = bruteforce_preimages(&g, &c, &d, 9, DEFAULT_PREIMAGE_BUDGET).unwrap();
                assert_eq!(fast, slow);
            }
        }
    }

    /// Words in the r_2 ball under f1 are exactly z_j (j >= 2) and y-words
    /// valued in annuli j >= 2.
    #[test]
    fn f1_ball_r2_contents() {
        let g = f(Branch::F1);
        let p = *g.params();
        let got = g.preimages_within(&p.x(), &p.r(2), 6, DEFAULT_PREIMAGE_BUDGET).unwrap();
        for w in a_words(6) {
            let class = g.classify(&w);
            let expect = match &class {
                PairClass::ZWord(j) => *j >= 2,
                PairClass::YWord { annulus, .. } => *annulus >= 2,
                _ => false,
            };
            assert_eq!(got.contains(&w), expect, "{w} {class:?}");
        }
    }

    fn a_words(n: usize) -> Vec<Word> {
        bin().words_up_to(n).collect()
    }
}
