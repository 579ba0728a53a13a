//! Relativized approximation complexity
//! `K^{T,f}_δ(x) = min { K^T(w) : |f(w) - x| < δ }` and ratio curves
//! `K / log_k(1/δ)` over shrinking scales.
//!
//! Two exact routes. In the witness route a feasible word `w0` gives an
//! upper bound `c0 = K^T(w0)`; any cheaper input has length `< c0` and so
//! outputs at most `(c0 - 1) * max_out` symbols, which bounds the preimage
//! search. In the product route, available when the ball language is
//! regular, a breadth-first search over `T` times a ball automaton decides
//! the value, infinite included.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::Serialize;

use crate::enumerator::{
    in_ball, BallDfa, Branch, PairClass, PairEnumerator, PairParams, SeparatorEnumerator,
    DEFAULT_PREIMAGE_BUDGET,
};
use crate::error::{Error, Result};
use crate::rat::{fmt_rat, inv_pow_k, log_k_inv, Rat};
use crate::transducer::Fst;
use crate::word::Word;

/// Extra depths tried past the first closed-form witness inside the ball.
const WITNESS_WINDOW: usize = 64;
/// Longest preimage search used to find a first feasible word.
const SEED_SEARCH_MAXLEN: usize = 16;

/// `None` stands for `∞`.
pub type KValue = Option<usize>;

pub fn fmt_k(k: KValue) -> String {
    k.map_or_else(|| "inf".to_string(), |v| v.to_string())
}

/// Exact `K^{T,f}_δ(x)`: the product search when the ball language is
/// regular, the witness-bounded search otherwise.
pub fn k_approx(t: &Fst, f: &dyn SeparatorEnumerator, x: &Rat, delta: &Rat) -> Result<KValue> {
    if f.ball_automaton(x, delta).is_some() {
        return k_approx_product(t, f, x, delta);
    }
    k_approx_witness(t, f, x, delta, DEFAULT_PREIMAGE_BUDGET)
}

/// Exact `K^{T,f}_δ(x)` from a feasible seed word and a bounded preimage
/// search. Fails with `BudgetExceeded` when the bounded search would need
/// more than `budget` candidate words, and with `NoWitness` when no seed
/// with finite `K` turns up.
pub fn k_approx_witness(
    t: &Fst,
    f: &dyn SeparatorEnumerator,
    x: &Rat,
    delta: &Rat,
    budget: u64,
) -> Result<KValue> {
    check_delta(delta)?;
    if in_ball(&f.eval(&Word::empty()), x, delta) {
        return Ok(Some(0));
    }
    if t.max_output_len() == 0 {
        // T only ever outputs λ
        return Ok(None);
    }
    let Some(c0) = seed_bound(t, f, x, delta, budget)? else {
        return Err(Error::NoWitness(format!(
            "no feasible word with finite K found for {} at x = {}, delta = {}",
            f.id(),
            fmt_rat(x),
            fmt_rat(delta)
        )));
    };
    refine(t, f, x, delta, c0, budget).map(Some)
}

fn check_delta(delta: &Rat) -> Result<()> {
    if *delta <= Rat::from_integer(0.into()) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    Ok(())
}

/// Smallest finite `K^T(w0)` over closed-form witnesses in the ball, or
/// failing that over short preimages.
fn seed_bound(
    t: &Fst,
    f: &dyn SeparatorEnumerator,
    x: &Rat,
    delta: &Rat,
    budget: u64,
) -> Result<Option<usize>> {
    let k = f.alphabet().k();
    let depth_hint = log_k_inv(delta, k).max(0.0).ceil() as usize + 1;
    let mut best: Option<usize> = None;
    let mut first_in: Option<usize> = None;
    for n in 0..=depth_hint + WITNESS_WINDOW {
        if first_in.is_some_and(|n0| n > n0 + WITNESS_WINDOW) {
            break;
        }
        let Some(w) = f.best_below_witness(x, n) else {
            break;
        };
        if !in_ball(&f.eval(&w), x, delta) {
            continue;
        }
        first_in.get_or_insert(n);
        if let Some(c) = t.k_info(&w) {
            best = Some(best.map_or(c, |b| b.min(c)));
        }
    }
    if best.is_some() {
        return Ok(best);
    }
    for maxlen in 1..=SEED_SEARCH_MAXLEN {
        let words = match f.preimages_within(x, delta, maxlen, budget) {
            Ok(ws) => ws,
            Err(Error::BudgetExceeded { .. }) => break,
            Err(e) => return Err(e),
        };
        if let Some(c) = words.iter().filter_map(|w| t.k_info(w)).min() {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

fn refine(
    t: &Fst,
    f: &dyn SeparatorEnumerator,
    x: &Rat,
    delta: &Rat,
    c0: usize,
    budget: u64,
) -> Result<usize> {
    if c0 == 0 {
        return Ok(0);
    }
    let maxlen = (c0 - 1) * t.max_output_len();
    let words = f.preimages_within(x, delta, maxlen, budget)?;
    Ok(words
        .iter()
        .filter_map(|w| t.k_info(w))
        .min()
        .map_or(c0, |k| k.min(c0)))
}

/// `K^{T,f}_δ(x)` by breadth-first search over `T × ball automaton`; exact,
/// including `∞`. Requires an enumerator with a regular ball language.
pub fn k_approx_product(t: &Fst, f: &dyn SeparatorEnumerator, x: &Rat, delta: &Rat) -> Result<KValue> {
    check_delta(delta)?;
    let dfa = f.ball_automaton(x, delta).ok_or_else(|| {
        Error::NoClosedForm(format!("{} has no ball automaton", f.id()))
    })?;
    Ok(product_bfs(t, &dfa))
}

fn product_bfs(t: &Fst, dfa: &BallDfa) -> KValue {
    let k = t.k();
    let start = (t.start(), dfa.start());
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some(((q, s), depth)) = queue.pop_front() {
        if dfa.accepts(s) {
            return Some(depth);
        }
        for a in 0..k {
            let (q2, block) = t.step(q, a);
            let s2 = block.digits().iter().fold(s, |s, &b| dfa.step(s, b));
            if seen.insert((q2, s2)) {
                queue.push_back(((q2, s2), depth + 1));
            }
        }
    }
    None
}

/// Shortest input `π` with `|π| <= max_input` and `f(T(π))` in the ball, by
/// enumerating inputs. Only a test oracle.
pub fn k_approx_by_inputs(
    t: &Fst,
    f: &dyn SeparatorEnumerator,
    x: &Rat,
    delta: &Rat,
    max_input: usize,
) -> Option<usize> {
    f.alphabet()
        .words_up_to(max_input)
        .find(|p| in_ball(&f.eval(&t.run(p)), x, delta))
        .map(|p| p.len())
}

/// A δ-scale: `delta` with its index `n` and `log_k(1/delta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scale {
    pub n: usize,
    pub delta: Rat,
    pub logscale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleKind {
    /// `δ = r_n = k^-(n+2)`, the pair's annulus radii.
    Pair,
    /// `δ = 2n / k^n`.
    NearLinear,
    /// `δ = k^-n`.
    Power,
}

impl std::str::FromStr for ScaleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pair" => Ok(Self::Pair),
            "nearlinear" => Ok(Self::NearLinear),
            "power" => Ok(Self::Power),
            _ => Err(Error::InvalidParameter(format!(
                "scale must be pair, nearlinear or power, got '{s}'"
            ))),
        }
    }
}

impl ScaleKind {
    pub fn at(self, k: u8, n: usize) -> Scale {
        let (delta, logscale) = match self {
            ScaleKind::Pair => (inv_pow_k(k, n + 2), (n + 2) as f64),
            ScaleKind::Power => (inv_pow_k(k, n), n as f64),
            ScaleKind::NearLinear => {
                let d = inv_pow_k(k, n) * Rat::from_integer((2 * n).into());
                let l = n as f64 - (2.0 * n as f64).log(k as f64);
                (d, l)
            }
        };
        Scale { n, delta, logscale }
    }

    pub fn range(self, k: u8, ns: impl IntoIterator<Item = usize>) -> Vec<Scale> {
        ns.into_iter().map(|n| self.at(k, n)).collect()
    }
}

/// Scales for arbitrary deltas; `n` is the position in the list.
pub fn scales_from_deltas(k: u8, deltas: &[Rat]) -> Vec<Scale> {
    deltas
        .iter()
        .enumerate()
        .map(|(n, d)| Scale {
            n,
            delta: d.clone(),
            logscale: log_k_inv(d, k),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub scale: Scale,
    pub k: KValue,
}

impl CurveRow {
    /// `K / log_k(1/δ)`, undefined when the scale is not below 1.
    pub fn ratio(&self) -> Option<f64> {
        if self.scale.logscale <= 0.0 {
            return None;
        }
        Some(self.k.map_or(f64::INFINITY, |k| k as f64 / self.scale.logscale))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioCurve {
    pub enumerator: String,
    pub transducer: String,
    pub x: Rat,
    /// Sorted by `delta` descending.
    pub rows: Vec<CurveRow>,
}

pub fn ratio_curve(
    t: &Fst,
    t_label: &str,
    f: &dyn SeparatorEnumerator,
    x: &Rat,
    scales: Vec<Scale>,
) -> Result<RatioCurve> {
    let mut scales = scales;
    scales.sort_by(|a, b| b.delta.cmp(&a.delta));
    let rows = scales
        .into_iter()
        .map(|scale| {
            let k = k_approx(t, f, x, &scale.delta)?;
            Ok(CurveRow { scale, k })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioCurve {
        enumerator: f.id(),
        transducer: t_label.to_string(),
        x: x.clone(),
        rows,
    })
}

impl RatioCurve {
    /// K never increases as δ grows (rows are by δ descending).
    pub fn is_monotone(&self) -> bool {
        let key = |k: KValue| k.unwrap_or(usize::MAX);
        self.rows.windows(2).all(|p| key(p[0].k) <= key(p[1].k))
    }

    /// Columns `n, delta, logscale, K, ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,delta,logscale,K,ratio\n");
        for r in &self.rows {
            let ratio = r.ratio().map_or_else(|| "-".to_string(), |v| format!("{v:.6}"));
            writeln!(
                out,
                "{},{},{:.6},{},{ratio}",
                r.scale.n,
                fmt_rat(&r.scale.delta),
                r.scale.logscale,
                fmt_k(r.k)
            )
            .unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeEntry {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "K")]
    pub k: String,
    pub ratio: f64,
    /// `⌈n/L⌉ / log_k(1/δ_n)`.
    pub closed_form_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeReport {
    pub enumerator: String,
    pub x: String,
    pub nmax: usize,
    pub delta: String,
    pub logscale: f64,
    pub entries: Vec<EnvelopeEntry>,
    pub envelope: f64,
}

/// Tail ratio of the zero-emitter family `T_L` at scale `nmax`; the minimum
/// over `L` bounds the relativized dimension from above.
pub fn family_upper_envelope(
    f: &dyn SeparatorEnumerator,
    x: &Rat,
    ls: &[usize],
    nmax: usize,
    kind: ScaleKind,
) -> Result<EnvelopeReport> {
    let scale = kind.at(f.alphabet().k(), nmax);
    let mut entries = Vec::new();
    for &l in ls {
        let t = Fst::zero_emitter(f.alphabet(), l)?;
        let k = k_approx(&t, f, x, &scale.delta)?;
        let row = CurveRow {
            scale: scale.clone(),
            k,
        };
        entries.push(EnvelopeEntry {
            l,
            k: fmt_k(k),
            ratio: row.ratio().unwrap_or(f64::NAN),
            closed_form_ratio: nmax.div_ceil(l) as f64 / scale.logscale,
        });
    }
    let envelope = entries.iter().map(|e| e.ratio).fold(f64::INFINITY, f64::min);
    Ok(EnvelopeReport {
        enumerator: f.id(),
        x: fmt_rat(x),
        nmax,
        delta: fmt_rat(&scale.delta),
        logscale: scale.logscale,
        entries,
        envelope,
    })
}

#[derive(Debug, Clone)]
pub struct StructuralReport {
    pub n: usize,
    pub maxlen: usize,
    /// Words inside the `r_n` ball, with their classification.
    pub inside: usize,
    pub counterexamples: Vec<(Word, Rat, PairClass)>,
}

impl StructuralReport {
    pub fn ok(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Every word of length `<= maxlen` with `|f1(w) - 1/2| < r_n` must be some
/// `z_j` with `j >= n`, or some `y_m` valued in an annulus `A_j` with
/// `j >= n` (and then `m >= j + 1`).
pub fn pair_structural_check(f1: &PairEnumerator, n: usize, maxlen: usize) -> Result<StructuralReport> {
    if f1.branch() != Branch::F1 {
        return Err(Error::InvalidParameter("structural check applies to f1".into()));
    }
    let p: &PairParams = f1.params();
    let (x, r) = (p.x(), p.r(n));
    let mut inside = 0;
    let mut counterexamples = Vec::new();
    for w in p.alphabet().words_up_to(maxlen) {
        let v = f1.eval(&w);
        if !in_ball(&v, &x, &r) {
            continue;
        }
        inside += 1;
        let class = f1.classify(&w);
        let allowed = match &class {
            PairClass::ZWord(j) => *j >= n,
            PairClass::YWord { len, annulus, .. } => {
                *annulus >= n && *len > *annulus && p.annulus_of(&v).is_some_and(|j| j >= n)
            }
            _ => false,
        };
        if !allowed {
            counterexamples.push((w, v, class));
        }
    }
    Ok(StructuralReport {
        n,
        maxlen,
        inside,
        counterexamples,
    })
}

/// An `f1` with the first remainder word of length `len` moved into `A_5`.
pub fn corrupted_f1(alphabet: crate::word::Alphabet, len: usize) -> PairEnumerator {
    let base = PairEnumerator::new(alphabet, Branch::F1);
    let w = alphabet
        .words_of_len(len)
        .find(|w| matches!(base.classify(w), PairClass::Remainder { .. }))
        .expect("some remainder word of each length >= 2");
    let inside = base.params().dense_listing_dn(5, &BigUint::from(0u32));
    base.with_override(w, inside)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerator::{from_spec, NearLinearEnumerator, StdEnumerator};
    use crate::mealy::MealyMachine;
    use crate::rat::rat;
    use crate::word::Alphabet;
    use rand::SeedableRng;

    fn bin() -> Alphabet {
        Alphabet::binary()
    }

    /// min over words up to `maxlen` in the ball of `K^T(w)`.
    fn by_words(t: &Fst, f: &dyn SeparatorEnumerator, x: &Rat, d: &Rat, maxlen: usize) -> KValue {
        f.alphabet()
            .words_up_to(maxlen)
            .filter(|w| in_ball(&f.eval(w), x, d))
            .filter_map(|w| t.k_info(&w))
            .min()
    }

    #[test]
    fn identity_example() {
        let t = Fst::identity(bin());
        let f = StdEnumerator::new(bin());
        assert_eq!(k_approx(&t, &f, &rat(1, 2), &rat(1, 4)).unwrap(), Some(1));
        assert_eq!(k_approx(&t, &f, &rat(1, 2), &rat(1, 1)).unwrap(), Some(0));
        assert_eq!(k_approx(&t, &f, &rat(3, 4), &rat(1, 2)).unwrap(), Some(1));
        assert!(k_approx(&t, &f, &rat(1, 2), &rat(0, 1)).is_err());
    }

    #[test]
    fn degenerate_consumer() {
        let a = bin();
        let t = Fst::new(a, vec![0, 0], vec![Word::empty(), Word::empty()], 0).unwrap();
        let f = StdEnumerator::new(a);
        assert_eq!(k_approx(&t, &f, &rat(1, 2), &rat(1, 4)).unwrap(), None);
        assert_eq!(k_approx(&t, &f, &rat(1, 8), &rat(1, 4)).unwrap(), Some(0));
    }

    #[test]
    fn unreachable_ball_is_infinite() {
        // T_1 only outputs 0s, whose grid values are 0
        let t = Fst::zero_emitter(bin(), 1).unwrap();
        let f = StdEnumerator::new(bin());
        assert_eq!(k_approx(&t, &f, &rat(1, 2), &rat(1, 8)).unwrap(), None);
    }

    /// Exactness against brute force on random small machines.
    #[test]
    fn matches_bruteforce() {
        let a = bin();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let fs: Vec<Box<dyn SeparatorEnumerator>> = vec![
            Box::new(StdEnumerator::new(a)),
            from_spec("coherent:carry-flip", a).unwrap(),
            Box::new(NearLinearEnumerator::new(a)),
            from_spec("pair:f0", a).unwrap(),
        ];
        let points = [rat(1, 3), rat(1, 2), rat(5, 7), rat(1, 9)];
        let deltas = [rat(1, 4), rat(1, 16), rat(1, 50)];
        for trial in 0..8 {
            let t = Fst::random(a, 1 + trial % 3, 2, &mut rng);
            for f in &fs {
                for x in &points {
                    for d in &deltas {
                        let fast = k_approx_witness(&t, f.as_ref(), x, d, 1 << 12);
                        let slow = by_words(&t, f.as_ref(), x, d, 9);
                        let inputs = k_approx_by_inputs(&t, f.as_ref(), x, d, 9);
                        match fast {
                            Ok(Some(k)) if k <= 4 => {
                                assert_eq!(Some(k), slow, "{} x={x} d={d}", f.id());
                                assert_eq!(Some(k), inputs);
                            }
                            Ok(Some(k)) => assert!(inputs.is_none_or(|i| i == k)),
                            Ok(None) => assert_eq!(inputs, None),
                            Err(Error::NoWitness(_)) => assert_eq!(inputs, None),
                            Err(Error::BudgetExceeded { .. }) => {}
                            Err(e) => panic!("{e}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn witness_and_product_routes_agree() {
        let a = Alphabet::new(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let f = from_spec("coherent:carry-flip", a).unwrap();
        for _ in 0..40 {
            let t = Fst::random(a, 3, 2, &mut rng);
            for x in [rat(1, 3), rat(4, 7), rat(1, 10)] {
                for e in 2..6 {
                    let d = inv_pow_k(3, e);
                    let product = k_approx_product(&t, f.as_ref(), &x, &d).unwrap();
                    match k_approx_witness(&t, f.as_ref(), &x, &d, 1 << 12) {
                        Ok(k) => assert_eq!(k, product),
                        Err(Error::NoWitness(_)) => assert_eq!(product, None),
                        Err(Error::BudgetExceeded { .. }) => {}
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn relabeling_identity_sample() {
        let a = bin();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let std = StdEnumerator::new(a);
        for (name, m) in MealyMachine::library(a) {
            let fm = from_spec(&format!("coherent:{name}"), a).unwrap();
            for _ in 0..5 {
                let t = Fst::random(a, 2, 2, &mut rng);
                let mt = t.compose_mealy_after(&m);
                for x in [rat(1, 3), rat(3, 4), rat(2, 9)] {
                    for e in 2..=6 {
                        let d = inv_pow_k(2, e);
                        let lhs = k_approx(&t, fm.as_ref(), &x, &d).unwrap();
                        let rhs = k_approx(&mt, &std, &x, &d).unwrap();
                        assert_eq!(lhs, rhs, "{name} x={x} d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn zero_emitter_upper_bounds() {
        let a = bin();
        let f0 = from_spec("pair:f0", a).unwrap();
        let nl = from_spec("nearlinear", a).unwrap();
        for l in [1usize, 2, 4, 8] {
            let t = Fst::zero_emitter(a, l).unwrap();
            for n in 0..=24 {
                let s = ScaleKind::Pair.at(2, n);
                let k = k_approx(&t, f0.as_ref(), &rat(1, 2), &s.delta).unwrap();
                assert_eq!(k, Some(n.div_ceil(l)), "L={l} n={n}");
                if n >= 1 {
                    let s = ScaleKind::NearLinear.at(2, n);
                    let k = k_approx(&t, nl.as_ref(), &rat(1, 2), &s.delta).unwrap().unwrap();
                    assert!(k <= n.div_ceil(l), "L={l} n={n}");
                }
            }
        }
    }

    #[test]
    fn curve_monotone_and_csv() {
        let a = bin();
        let t = Fst::zero_emitter(a, 1).unwrap();
        let f0 = from_spec("pair:f0", a).unwrap();
        let c = ratio_curve(&t, "T_1", f0.as_ref(), &rat(1, 2), ScaleKind::Pair.range(2, 0..=30)).unwrap();
        assert!(c.is_monotone());
        assert_eq!(c.rows[0].scale.n, 0);
        let last = c.rows.last().unwrap();
        assert_eq!(last.k, Some(30));
        assert!((last.ratio().unwrap() - 30.0 / 32.0).abs() < 1e-12);
        assert!(c.to_csv().starts_with("n,delta,logscale,K,ratio\n0,1/4,2.000000,0,0.000000\n"));
    }

    #[test]
    fn envelope_tail() {
        let a = bin();
        let f0 = from_spec("pair:f0", a).unwrap();
        let rep = family_upper_envelope(f0.as_ref(), &rat(1, 2), &[1, 2, 4, 8, 16], 200, ScaleKind::Pair).unwrap();
        assert!(rep.envelope <= 1.0 / 16.0 + 0.05);
        for e in &rep.entries {
            assert!((e.ratio - e.closed_form_ratio).abs() < 1e-12);
            assert!((e.ratio * e.l as f64 - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn structural_check() {
        let f1 = PairEnumerator::new(bin(), Branch::F1);
        for (n, maxlen) in [(3, 12), (0, 6), (5, 10)] {
            let rep = pair_structural_check(&f1, n, maxlen).unwrap();
            assert!(rep.ok(), "{:?}", rep.counterexamples);
            assert!(rep.inside > 0);
        }
        let bad = corrupted_f1(bin(), 7);
        let rep = pair_structural_check(&bad, 3, 8).unwrap();
        assert_eq!(rep.counterexamples.len(), 1);
        let f0 = PairEnumerator::new(bin(), Branch::F0);
        assert!(pair_structural_check(&f0, 1, 4).is_err());
    }
}
