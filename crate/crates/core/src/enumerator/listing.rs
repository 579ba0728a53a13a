//! Distinct, dense, computable listings of rationals by k-adic refinement.
//!
//! Level `l >= 1` of the refinement of an open interval `(a, b)` consists of
//! the points `a + (b - a) i / k^l` with `k ∤ i`; levels are listed in order
//! and points left to right. Level `l` occupies indices
//! `k^(l-1) - 1 .. k^l - 1`, so index `s` is located by the level with
//! `k^(l-1) <= s + 1 < k^l`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;

use crate::rat::Rat;

/// Level and numerator `i` of the `s`-th refinement point.
pub fn refinement_coords(k: u8, s: &BigUint) -> (usize, BigUint) {
    let target = s + 1u32;
    let mut level = 1usize;
    let mut low = BigUint::one();
    loop {
        let high = &low * k as u32;
        if target < high {
            break;
        }
        low = high;
        level += 1;
    }
    let j = target - &low;
    let i = &j + j.div_floor(&BigUint::from(k as u32 - 1)) + 1u32;
    (level, i)
}

/// The `s`-th refinement point of `(a, b)`.
pub fn refinement_point(a: &Rat, b: &Rat, k: u8, s: &BigUint) -> Rat {
    let (level, i) = refinement_coords(k, s);
    let den = crate::rat::pow_k(k, level);
    let frac = Rat::new(BigInt::from(i), BigInt::from(den));
    a + (b - a) * frac
}
