//! Exact rationals.
//!
//! [`Rat`] is `num_rational::BigRational`, which is always kept reduced with a
//! positive denominator. This module adds the text form used on the command
//! line and in reports (`p/q`), a fast constructor for k-adic fractions, and a
//! few conversions used to build ratio curves.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// `k^n` as a big unsigned integer.
pub fn pow_k(k: u8, n: usize) -> BigUint {
    if k.is_power_of_two() {
        BigUint::one() << (n * k.trailing_zeros() as usize)
    } else {
        num_traits::pow(BigUint::from(k), n)
    }
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// `1 / k^n`.
pub fn inv_pow_k(k: u8, n: usize) -> Rat {
    Rat::new_raw(BigInt::one(), BigInt::from(pow_k(k, n)))
}

fn prime_factors(mut k: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= k {
        let mut e = 0;
        while k.is_multiple_of(p) {
            k /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if k > 1 {
        out.push((k, 1));
    }
    out
}

/// The reduced fraction `val / k^n`.
///
/// Avoids a general big-integer gcd: the only primes that can cancel are the
/// prime factors of `k`, and each is stripped by repeated exact division.
/// For `k = 2` this is a shift, so million-digit words stay linear time.
pub fn kadic(val: BigUint, k: u8, n: usize) -> Rat {
    if val.is_zero() {
        return Rat::zero();
    }
    let mut num = val;
    let mut den = pow_k(k, n);
    for (p, e) in prime_factors(k as u32) {
        let cap = e as u64 * n as u64;
        if p == 2 {
            let tz = num.trailing_zeros().unwrap_or(0).min(cap);
            num >>= tz as usize;
            den >>= tz as usize;
            continue;
        }
        let bp = BigUint::from(p);
        let mut removed = 0u64;
        while removed < cap {
            let (q, r) = num.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            num = q;
            den /= &bp;
            removed += 1;
        }
    }
    Rat::new_raw(BigInt::from_biguint(Sign::Plus, num), BigInt::from(den))
}

/// Text form `p/q`, also for integers (`0/1`, `3/1`).
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`. Decimal literals are rejected.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::ParseRat(s.to_string());
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(p, q))
}

/// Checks `0 <= x < 1`.
pub fn check_unit(x: &Rat) -> Result<()> {
    if x.is_negative() || *x >= Rat::one() {
        return Err(Error::OutOfUnitInterval(fmt_rat(x)));
    }
    Ok(())
}

fn ln_biguint(b: &BigUint) -> f64 {
    let bits = b.bits();
    if bits <= 1000 {
        return b.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (b >> shift as usize).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `log_k(1/delta)` in double precision, for positive `delta`.
pub fn log_k_inv(delta: &Rat, k: u8) -> f64 {
    let num = delta.numer().magnitude();
    let den = delta.denom().magnitude();
    (ln_biguint(den) - ln_biguint(num)) / (k as f64).ln()
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = ln_biguint(r.numer().magnitude());
        let d = ln_biguint(r.denom().magnitude());
        let v = (n - d).exp();
        if r.is_negative() {
            -v
        } else {
            v
        }
    })
}

/// `floor(k^n x)` for `x >= 0`.
pub fn floor_scaled(x: &Rat, k: u8, n: usize) -> BigInt {
    let scaled = x * Rat::from_integer(BigInt::from(pow_k(k, n)));
    scaled.floor().to_integer()
}
