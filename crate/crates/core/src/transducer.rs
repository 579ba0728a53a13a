//! Deterministic finite-state transducers and their information content.
//!
//! `K^T(w)` is the length of the shortest input on which `T` outputs exactly
//! `w`. It is computed by breadth-first search over pairs `(state, matched)`
//! where `matched` counts the output symbols of `w` already produced; edges
//! are input symbols, so BFS depth is input length.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::mealy::MealyMachine;
use crate::word::{digit_char, Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fst {
    alphabet: Alphabet,
    next: Vec<usize>,
    emit: Vec<Word>,
    start: usize,
    max_out: usize,
}

impl Fst {
    /// Dense tables indexed by `q*k + a`.
    pub fn new(alphabet: Alphabet, next: Vec<usize>, emit: Vec<Word>, start: usize) -> Result<Self> {
        let k = alphabet.k() as usize;
        if next.is_empty() || !next.len().is_multiple_of(k) || next.len() != emit.len() {
            return Err(Error::InvalidParameter(
                "transducer tables must have |Q|*k entries".into(),
            ));
        }
        let states = next.len() / k;
        if start >= states || next.iter().any(|&q| q >= states) {
            return Err(Error::InvalidParameter("state index out of range".into()));
        }
        for w in &emit {
            alphabet.word(w.digits().to_vec())?;
        }
        let max_out = emit.iter().map(Word::len).max().unwrap_or(0);
        Ok(Self {
            alphabet,
            next,
            emit,
            start,
            max_out,
        })
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        Self::letterwise(alphabet, &alphabet.symbols().collect::<Vec<_>>())
    }

    fn letterwise(alphabet: Alphabet, perm: &[u8]) -> Self {
        let k = alphabet.k() as usize;
        let emit = perm.iter().map(|&b| Word::repeat(b, 1)).collect();
        Self::new(alphabet, vec![0; k], emit, 0).expect("letterwise map is well-formed")
    }

    /// `T_L`: one state, every input symbol emits `0^L`.
    pub fn zero_emitter(alphabet: Alphabet, len: usize) -> Result<Self> {
        if len < 1 {
            return Err(Error::InvalidParameter("zero emitter needs L >= 1".into()));
        }
        let k = alphabet.k() as usize;
        Self::new(alphabet, vec![0; k], vec![Word::repeat(0, len); k], 0)
    }

    /// One state mapping each symbol `a` to `perm[a]`.
    pub fn letter_permuter(alphabet: Alphabet, perm: &[u8]) -> Result<Self> {
        let k = alphabet.k() as usize;
        let mut seen = vec![false; k];
        if perm.len() != k {
            return Err(Error::InvalidParameter(format!("permutation needs {k} entries")));
        }
        for &b in perm {
            if b as usize >= k || seen[b as usize] {
                return Err(Error::InvalidParameter(format!(
                    "{perm:?} is not a permutation of 0..{k}"
                )));
            }
            seen[b as usize] = true;
        }
        Ok(Self::letterwise(alphabet, perm))
    }

    /// Random machine with output blocks of length `0..=max_emit`.
    pub fn random<R: Rng + ?Sized>(
        alphabet: Alphabet,
        states: usize,
        max_emit: usize,
        rng: &mut R,
    ) -> Self {
        let k = alphabet.k();
        let n = states * k as usize;
        let next = (0..n).map(|_| rng.gen_range(0..states)).collect();
        let emit = (0..n)
            .map(|_| {
                let len = rng.gen_range(0..=max_emit);
                Word::from_digits_unchecked((0..len).map(|_| rng.gen_range(0..k)).collect())
            })
            .collect();
        Self::new(alphabet, next, emit, 0).expect("random tables are well-formed")
    }

    /// The machine `π ↦ M(T(π))`.
    ///
    /// States are pairs `(p, q)` of a `T`-state and an `M`-state, encoded as
    /// `p * |Q_M| + q`. On input `a` the block `ν_T(p, a)` is pushed through
    /// `M` starting from `q`.
    pub fn compose_mealy_after(&self, m: &MealyMachine) -> Fst {
        assert_eq!(self.alphabet, m.alphabet(), "alphabets must agree");
        let k = self.k() as usize;
        let qm = m.num_states();
        let states = self.num_states() * qm;
        let mut next = vec![0; states * k];
        let mut emit = vec![Word::empty(); states * k];
        for p in 0..self.num_states() {
            for q in 0..qm {
                for a in 0..k {
                    let (p2, block) = self.step(p, a as u8);
                    let (q2, out) = m.apply_from(q, block);
                    let i = (p * qm + q) * k + a;
                    next[i] = p2 * qm + q2;
                    emit[i] = out;
                }
            }
        }
        Fst {
            alphabet: self.alphabet,
            next,
            emit,
            start: self.start * qm + m.start(),
            max_out: self.max_out,
        }
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

    /// Longest output block over all transitions.
    pub fn max_output_len(&self) -> usize {
        self.max_out
    }

    #[inline]
    pub fn step(&self, q: usize, a: u8) -> (usize, &Word) {
        let i = q * self.k() as usize + a as usize;
        (self.next[i], &self.emit[i])
    }

    /// `T(π)`.
    pub fn run(&self, input: &Word) -> Word {
        let mut q = self.start;
        let mut out = Word::empty();
        for &a in input.digits() {
            let (q2, block) = self.step(q, a);
            out.extend_from(block);
            q = q2;
        }
        out
    }

    /// `K^T(w)`; `None` stands for ∞.
    pub fn k_info(&self, w: &Word) -> Option<usize> {
        self.k_info_with_input(w).map(|p| p.len())
    }

    /// A shortest input producing `w`, if any.
    pub fn k_info_with_input(&self, w: &Word) -> Option<Word> {
        let k = self.k() as usize;
        let n = w.len();
        let target = w.digits();
        let width = n + 1;
        let node = |q: usize, i: usize| q * width + i;
        let total = self.num_states() * width;
        // parent[v] = (previous node, input symbol)
        let mut parent: Vec<Option<(usize, u8)>> = vec![None; total];
        let mut seen = vec![false; total];
        let start = node(self.start, 0);
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut goal = None;
        while let Some(v) = queue.pop_front() {
            let (q, i) = (v / width, v % width);
            if i == n {
                goal = Some(v);
                break;
            }
            for a in 0..k {
                let (q2, block) = self.step(q, a as u8);
                let l = block.len();
                if i + l > n || block.digits() != &target[i..i + l] {
                    continue;
                }
                let u = node(q2, i + l);
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some((v, a as u8));
                    queue.push_back(u);
                }
            }
        }
        let mut v = goal?;
        let mut input = Vec::new();
        while let Some((p, a)) = parent[v] {
            input.push(a);
            v = p;
        }
        input.reverse();
        Some(Word::from_digits_unchecked(input))
    }

    /// Text form: header `fst k=<k> states=<n> start=<q0>`, then one line
    /// `<q> <a> -> <q'> emit <word>` per transition (`-` for λ).
    pub fn to_text(&self) -> String {
        let k = self.k() as usize;
        let mut s = format!(
            "fst k={} states={} start={}\n",
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
                    self.emit[i]
                );
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let table = crate::machine_text::parse(text, "fst")?;
        let alphabet = Alphabet::new(table.k)?;
        let emit = table
            .emit
            .iter()
            .zip(&table.lines)
            .map(|(e, &line)| {
                alphabet.parse_word(e).map_err(|err| Error::ParseMachine {
                    line,
                    msg: err.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, table.next, emit, table.start)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bin() -> Alphabet {
        Alphabet::binary()
    }

    fn w(s: &str) -> Word {
        bin().parse_word(s).unwrap()
    }

    /// Exhaustive min over inputs of length <= max_len; independent of the BFS.
    fn k_info_bruteforce(t: &Fst, target: &Word, max_len: usize) -> Option<usize> {
        t.alphabet()
            .words_up_to(max_len)
            .find(|p| &t.run(p) == target)
            .map(|p| p.len())
    }

    #[test]
    fn run_examples() {
        assert_eq!(Fst::identity(bin()).run(&w("0110")), w("0110"));
        let t3 = Fst::zero_emitter(bin(), 3).unwrap();
        assert_eq!(t3.run(&w("10")), w("000000"));
        assert_eq!(t3.run(&Word::empty()), Word::empty());
    }

    #[test]
    fn k_info_examples() {
        assert_eq!(Fst::identity(bin()).k_info(&w("0101")), Some(4));
        let t3 = Fst::zero_emitter(bin(), 3).unwrap();
        assert_eq!(t3.k_info(&Word::repeat(0, 7)), None);
        assert_eq!(t3.k_info(&Word::repeat(0, 6)), Some(2));
        assert_eq!(t3.k_info(&w("1")), None);
        let t4 = Fst::zero_emitter(bin(), 4).unwrap();
        assert_eq!(t4.k_info(&Word::repeat(0, 12)), Some(3));
    }

    #[test]
    fn zero_emitter_examples() {
        assert!(Fst::zero_emitter(bin(), 0).is_err());
        let t1 = Fst::zero_emitter(bin(), 1).unwrap();
        assert_eq!(t1.run(&w("11")), w("00"));
        let k3 = Alphabet::new(3).unwrap();
        let t2 = Fst::zero_emitter(k3, 2).unwrap();
        assert_eq!(t2.run(&k3.parse_word("2").unwrap()), k3.parse_word("00").unwrap());
    }

    #[test]
    fn permuter_examples() {
        let swap = Fst::letter_permuter(bin(), &[1, 0]).unwrap();
        assert_eq!(swap.run(&w("0110")), w("1001"));
        let k3 = Alphabet::new(3).unwrap();
        let shift = Fst::letter_permuter(k3, &[1, 2, 0]).unwrap();
        let x = k3.parse_word("012").unwrap();
        assert_eq!(shift.run(&x), k3.parse_word("120").unwrap());
        assert!(Fst::letter_permuter(bin(), &[0, 0]).is_err());
        assert!(Fst::letter_permuter(bin(), &[0]).is_err());
    }

    #[test]
    fn compose_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let t = Fst::random(bin(), 2, 2, &mut rng);
            let id = MealyMachine::identity(bin());
            let m = MealyMachine::random(bin(), 2, &mut rng);
            let c_id = t.compose_mealy_after(&id);
            let c_m = t.compose_mealy_after(&m);
            let tid = Fst::identity(bin()).compose_mealy_after(&m);
            for p in bin().words_up_to(6) {
                assert_eq!(c_id.run(&p), t.run(&p));
                assert_eq!(c_m.run(&p), m.apply(&t.run(&p)));
                assert_eq!(tid.run(&p), m.apply(&p));
            }
        }
    }

    #[test]
    fn k_info_matches_exhaustive_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let states = rng.gen_range(1..=3);
            let t = Fst::random(bin(), states, 2, &mut rng);
            for target in bin().words_up_to(5) {
                let bfs = t.k_info(&target);
                let brute = k_info_bruteforce(&t, &target, 8);
                match bfs {
                    Some(v) if v <= 8 => assert_eq!(brute, Some(v)),
                    Some(_) => assert_eq!(brute, None),
                    None => assert_eq!(brute, None),
                }
                if let Some(p) = t.k_info_with_input(&target) {
                    assert_eq!(t.run(&p), target);
                }
            }
        }
    }

    #[test]
    fn k_info_bounded_by_input_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let t = Fst::random(bin(), 3, 3, &mut rng);
            for p in bin().words_up_to(6) {
                let out = t.run(&p);
                assert!(t.k_info(&out).unwrap() <= p.len());
            }
        }
    }

    #[test]
    fn zero_emitter_closed_form() {
        for l in 1..=8usize {
            let t = Fst::zero_emitter(bin(), l).unwrap();
            for n in 1..=64usize {
                // 0^n is reachable only when L divides n; the shortest
                // input reaching some 0^j with j >= n has length ceil(n/L).
                let expect = (n % l == 0).then_some(n / l);
                assert_eq!(t.k_info(&Word::repeat(0, n)), expect);
                let up = n.div_ceil(l) * l;
                assert_eq!(t.k_info(&Word::repeat(0, up)), Some(n.div_ceil(l)));
            }
        }
    }

    /// K^T(π(u)) >= K^{P⁻¹∘T}(u) for a letter permutation π.
    #[test]
    fn permutation_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let k3 = Alphabet::new(3).unwrap();
        for alphabet in [bin(), k3] {
            let perm: Vec<u8> = (0..alphabet.k()).map(|a| (a + 1) % alphabet.k()).collect();
            let p = MealyMachine::single_state(alphabet, &perm).unwrap();
            let p_inv = p.invert();
            for _ in 0..10 {
                let states = rng.gen_range(2..=3);
                let t = Fst::random(alphabet, states, 2, &mut rng);
                let pt = t.compose_mealy_after(&p_inv);
                for u in alphabet.words_up_to(if alphabet.k() == 2 { 6 } else { 4 }) {
                    let lhs = t.k_info(&p.apply(&u));
                    let rhs = pt.k_info(&u);
                    match (lhs, rhs) {
                        (Some(a), Some(b)) => assert!(a >= b),
                        (Some(_), None) => panic!("P⁻¹∘T must reach u"),
                        _ => {}
                    }
                }
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = Fst::random(Alphabet::new(3).unwrap(), 3, 3, &mut rng);
        assert_eq!(Fst::from_text(&t.to_text()).unwrap(), t);
        let txt = "fst k=2 states=1 start=0\n0 0 -> 0 emit -\n0 1 -> 0 emit 11\n";
        let t = Fst::from_text(txt).unwrap();
        assert_eq!(t.run(&w("0101")), w("1111"));
        assert!(Fst::from_text("fst k=2 states=1 start=0\n0 0 -> 0 emit 0\n").is_err());
        assert!(Fst::from_text("mealy k=2 states=1 start=0\n").is_err());
    }
}
