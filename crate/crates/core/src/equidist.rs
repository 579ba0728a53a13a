//! k-adic residue statistics of integer sequences.
//!
//! A sequence `b_n` is k-adically equidistributed when, for every `m`, the
//! residues `b_n mod k^m` have asymptotic frequency `k^-m` each. Only finite
//! prefixes are examined here; deviations are exact rationals.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, to_f64, Rat};
use crate::sequence::DigitSource;

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueStats {
    pub k: u8,
    pub m: u32,
    /// Number of samples.
    pub n: u64,
    /// `counts[r]` for `r < k^m`.
    pub counts: Vec<u64>,
}

fn modulus(k: u8, m: u32) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    (k as u64)
        .checked_pow(m)
        .filter(|&q| q <= 1 << 24)
        .ok_or_else(|| Error::InvalidParameter(format!("modulus {k}^{m} too large")))
}

impl ResidueStats {
    /// Tallies residues already reduced mod `k^m`.
    pub fn from_residues(k: u8, m: u32, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        let q = modulus(k, m)?;
        let mut counts = vec![0u64; q as usize];
        let mut n = 0u64;
        for r in residues {
            counts[r as usize] += 1;
            n += 1;
        }
        if n == 0 {
            return Err(Error::InvalidParameter("need at least one sample".into()));
        }
        Ok(Self { k, m, n, counts })
    }

    pub fn modulus(&self) -> u64 {
        self.counts.len() as u64
    }

    pub fn target(&self) -> Rat {
        Rat::new(1.into(), BigInt::from(self.modulus()))
    }

    pub fn frequency(&self, r: usize) -> Rat {
        Rat::new(self.counts[r].into(), self.n.into())
    }

    pub fn deviation(&self, r: usize) -> Rat {
        (self.frequency(r) - self.target()).abs()
    }

    /// `max_r |counts[r]/N - k^-m|`.
    pub fn max_dev(&self) -> Rat {
        (0..self.counts.len())
            .map(|r| self.deviation(r))
            .max()
            .expect("modulus >= 2")
    }
}

/// Histogram of `b(1), ..., b(N)` modulo `k^m`.
pub fn residue_histogram(b: impl Fn(u64) -> BigInt, k: u8, n: u64, m: u32) -> Result<ResidueStats> {
    let q = BigInt::from(modulus(k, m)?);
    ResidueStats::from_residues(
        k,
        m,
        (1..=n).map(|i| b(i).mod_floor(&q).to_u64().expect("residue below modulus")),
    )
}

/// Residues of `b_n = k^(n-1) - n` without big integers: for `n > m` the
/// power vanishes mod `k^m`, leaving `-n`.
pub fn nearlinear_residue_stream(k: u8, m: u32, n: u64) -> Result<ResidueStats> {
    let q = modulus(k, m)?;
    let residues = (1..=n).map(move |i| {
        let pow = if i <= m as u64 {
            (k as u64).pow(i as u32 - 1) % q
        } else {
            0
        };
        (pow + q - i % q) % q
    });
    ResidueStats::from_residues(k, m, residues)
}

/// Residues of `⌊k^n x⌋` for the real `x` whose digits `src` produces.
/// `⌊k^n x⌋ mod k^m` is the numeral of digits `n-m+1 ..= n`, so a sliding
/// window over the stream suffices.
pub fn digit_window_residue_stream(src: &dyn DigitSource, m: u32, n: u64) -> Result<ResidueStats> {
    let k = src.alphabet().k();
    let q = modulus(k, m)?;
    let mut window = 0u64;
    let residues = src.stream().take(n as usize).map(move |d| {
        window = (window * k as u64 + d as u64) % q;
        window
    });
    ResidueStats::from_residues(k, m, residues)
}

#[derive(Debug, Clone, Serialize)]
pub struct EquidistLine {
    pub m: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub max_dev: String,
    pub max_dev_f64: f64,
    pub threshold: String,
    pub within: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquidistReport {
    pub source: String,
    pub label: &'static str,
    pub lines: Vec<EquidistLine>,
    #[serde(skip)]
    pub stats: Vec<ResidueStats>,
}

/// Per-`m` maximum deviation against a threshold depending on `(m, N)`.
/// Finite data never establishes a limit, so the verdict is labelled
/// empirical.
pub fn equidist_report(
    source: &str,
    stats: Vec<ResidueStats>,
    threshold: impl Fn(&ResidueStats) -> Rat,
) -> EquidistReport {
    let lines = stats
        .iter()
        .map(|s| {
            let dev = s.max_dev();
            let t = threshold(s);
            EquidistLine {
                m: s.m,
                n: s.n,
                max_dev_f64: to_f64(&dev),
                max_dev: fmt_rat(&dev),
                threshold: fmt_rat(&t),
                within: dev <= t,
            }
        })
        .collect();
    EquidistReport {
        source: source.into(),
        label: "empirical, not proof",
        lines,
        stats,
    }
}

impl EquidistReport {
    pub fn all_within(&self) -> bool {
        self.lines.iter().all(|l| l.within)
    }

    /// Columns `m, N, residue, count, frequency, deviation`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,N,residue,count,frequency,deviation\n");
        for s in &self.stats {
            for r in 0..s.counts.len() {
                writeln!(
                    out,
                    "{},{},{r},{},{},{}",
                    s.m,
                    s.n,
                    s.counts[r],
                    fmt_rat(&s.frequency(r)),
                    fmt_rat(&s.deviation(r))
                )
                .unwrap();
            }
        }
        out
    }
}

/// `(m + k^m) / N`: a finite prefix of length `m` plus at most one partial
/// cycle of `-n mod k^m`.
pub fn nearlinear_bound(s: &ResidueStats) -> Rat {
    Rat::new((s.m as u64 + s.modulus()).into(), s.n.into())
}
