//! Separator enumerators and relativized finite-state dimension, in exact
//! arithmetic.
//!
//! The crate is organised bottom-up:
//!
//! - [`word`] and [`rat`]: alphabets, words, base-k numerals, exact rationals.
//! - [`transducer`] and [`mealy`]: finite-state transducers with exact
//!   information content, and invertible synchronous Mealy machines.
//! - [`sequence`]: computable digit sources (Champernowne, permuted streams)
//!   and block entropy.
//! - [`enumerator`]: the separator-enumerator interface and its four
//!   implementations (standard, finite-state coherent, the pair `f0`/`f1`,
//!   and the near-linear enumerator).
//! - [`approx`]: best-from-below approximation chains.
//! - [`equidist`]: k-adic residue statistics.
//! - [`kdim`]: relativized approximation complexity and ratio curves.
//! - [`verify`]: named check suites with JSON-ready reports.

pub mod error;
mod machine_text;
pub mod approx;
pub mod enumerator;
pub mod equidist;
pub mod kdim;
pub mod mealy;
pub mod rat;
pub mod sequence;
pub mod transducer;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use mealy::MealyMachine;
pub use rat::Rat;
pub use transducer::Fst;
pub use word::{Alphabet, Word};
