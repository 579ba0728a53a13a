//! Shared line format for transducer and Mealy machine files.
//!
//! ```text
//! <tag> k=<k> states=<n> start=<q0>
//! <q> <a> -> <q'> emit <word or '-'>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Every `(q, a)` pair
//! must appear exactly once.

use crate::error::{Error, Result};

pub(crate) struct Table {
    pub k: u32,
    pub start: usize,
    /// `next[q*k + a]`
    pub next: Vec<usize>,
    /// Raw emit fields, same indexing.
    pub emit: Vec<String>,
    /// Source line of each entry, for error messages.
    pub lines: Vec<usize>,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::ParseMachine {
        line,
        msg: msg.into(),
    }
}

fn header_field(tok: Option<&str>, key: &str, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {key}=")))?;
    let v = tok
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| err(line, format!("expected {key}=<n>, got '{tok}'")))?;
    v.parse()
        .map_err(|_| err(line, format!("bad number in '{tok}'")))
}

pub(crate) fn parse(text: &str, tag: &str) -> Result<Table> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| err(1, "empty machine file"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some(tag) {
        return Err(err(hline, format!("header must start with '{tag}'")));
    }
    let k = header_field(toks.next(), "k", hline)?;
    let states = header_field(toks.next(), "states", hline)?;
    let start = header_field(toks.next(), "start", hline)?;
    if !(2..=36).contains(&k) {
        return Err(err(hline, format!("k={k} out of range")));
    }
    if states == 0 || start >= states {
        return Err(err(hline, "need states >= 1 and start < states"));
    }

    let n = states * k;
    let mut next = vec![usize::MAX; n];
    let mut emit = vec![String::new(); n];
    let mut src = vec![0; n];
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 6 || toks[2] != "->" || toks[4] != "emit" {
            return Err(err(ln, "expected '<q> <a> -> <q'> emit <word>'"));
        }
        let q: usize = toks[0].parse().map_err(|_| err(ln, "bad state"))?;
        let a = parse_symbol(toks[1], k).ok_or_else(|| err(ln, "bad input symbol"))?;
        let q2: usize = toks[3].parse().map_err(|_| err(ln, "bad target state"))?;
        if q >= states || q2 >= states {
            return Err(err(ln, "state out of range"));
        }
        let i = q * k + a;
        if next[i] != usize::MAX {
            return Err(err(ln, format!("duplicate transition for ({q}, {})", toks[1])));
        }
        next[i] = q2;
        emit[i] = toks[5].to_string();
        src[i] = ln;
    }
    if let Some(i) = next.iter().position(|&q| q == usize::MAX) {
        return Err(err(
            hline,
            format!("missing transition for state {} symbol {}", i / k, i % k),
        ));
    }
    Ok(Table {
        k: k as u32,
        start,
        next,
        emit,
        lines: src,
    })
}

fn parse_symbol(s: &str, k: usize) -> Option<usize> {
    let mut chars = s.chars();
    let d = chars.next()?.to_digit(36)? as usize;
    (chars.next().is_none() && d < k).then_some(d)
}
