//! Arithmetic exponent pairs for composite trace functions.
//!
//! The crate has two halves. The exact half ([`pairs`], [`opt`]) works with
//! rational exponent triples `(kappa, lambda, nu)`, the A/B processes acting on
//! them, a branch-and-bound search over process words and the two-variable
//! linear program that produces sieve levels. The numeric half ([`trace`],
//! [`complete`], [`quadratic`], [`sieve`], [`arith`]) evaluates trace functions,
//! complete and incomplete exponential sums, quadratic congruences and the
//! linear sieve functions, so that every identity and inequality used by the
//! exact half can be checked by brute force at desk scale.
//!
//! [`verify`] bundles those checks into the acceptance suite used by the CLI.

pub mod arith;
pub mod complete;
mod error;
pub mod opt;
pub mod pairs;
pub mod quadratic;
pub mod rational;
pub mod sieve;
pub mod trace;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use opt::{
    divisor_level, gamma_of_theta, level_max_gamma, optimize_word, subconvex_delta,
    validity_range, LevelProblem, LevelResult, LpVariant, Objective, SearchReport,
};
pub use pairs::{ExponentSequence, ExponentTriple, Family, Letter, ProcessWord};
pub use rational::Rational;
