//! Exponent triples and the A/B processes.
//!
//! A triple `(kappa, lambda, nu)` records a bound
//! `S << (q/N)^kappa N^lambda delta^nu` for incomplete sums of a composite
//! trace function. Words over `{A, B}` act on triples right to left, so
//! `"BA3"` applies `A` three times and then `B`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, half, int, ratio, serde_pq, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentTriple {
    #[serde(with = "serde_pq")]
    pub kappa: Rational,
    #[serde(with = "serde_pq")]
    pub lambda: Rational,
    #[serde(with = "serde_pq")]
    pub nu: Rational,
}

impl ExponentTriple {
    pub fn new(kappa: Rational, lambda: Rational, nu: Rational) -> Self {
        Self { kappa, lambda, nu }
    }

    /// Builds a triple and rejects it outside `0 <= k <= 1/2 <= l <= 1`, `k <= l`.
    pub fn checked(kappa: Rational, lambda: Rational, nu: Rational) -> Result<Self> {
        let t = Self::new(kappa, lambda, nu);
        if t.in_box() {
            Ok(t)
        } else {
            Err(crate::error::domain(format!("triple {t} outside the exponent box")))
        }
    }

    /// Convenience for literals: `(kn/kd, ln/ld, nn/nd)`.
    pub fn from_ratios(k: (i64, i64), l: (i64, i64), n: (i64, i64)) -> Self {
        Self::new(ratio(k.0, k.1), ratio(l.0, l.1), ratio(n.0, n.1))
    }

    pub fn seed() -> Self {
        Self::new(half(), half(), half())
    }

    pub fn is_seed(&self) -> bool {
        *self == Self::seed()
    }

    pub fn in_box(&self) -> bool {
        let (k, l) = (&self.kappa, &self.lambda);
        !k.is_negative() && *k <= half() && half() <= *l && *l <= Rational::one() && k <= l
    }

    /// `(kappa, lambda)` without `nu`.
    pub fn pair(&self) -> (Rational, Rational) {
        (self.kappa.clone(), self.lambda.clone())
    }

    pub fn apply(&self, letter: Letter) -> Self {
        match letter {
            Letter::A => apply_a(self),
            Letter::B => apply_b(self),
        }
    }
}

impl fmt::Display for ExponentTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            rational::to_pq(&self.kappa),
            rational::to_pq(&self.lambda),
            rational::to_pq(&self.nu)
        )
    }
}

pub fn seed_triple() -> ExponentTriple {
    ExponentTriple::seed()
}

/// `(k/(2(k+1)), (k+l+1)/(2(k+1)), nu/2 + 1/4)`.
pub fn apply_a(t: &ExponentTriple) -> ExponentTriple {
    let k1 = &t.kappa + Rational::one();
    let two_k1 = &k1 * int(2);
    ExponentTriple::new(
        &t.kappa / &two_k1,
        (&t.kappa + &t.lambda + Rational::one()) / &two_k1,
        &t.nu / int(2) + ratio(1, 4),
    )
}

/// `(l - 1/2, k + 1/2, nu + l - k - 1/2)`.
pub fn apply_b(t: &ExponentTriple) -> ExponentTriple {
    ExponentTriple::new(
        &t.lambda - half(),
        &t.kappa + half(),
        &t.nu + &t.lambda - &t.kappa - half(),
    )
}

/// `(2k/(1-2k), (2l-1)/(1-2k), 2 nu - 1/2)`; undefined at `kappa = 1/2`.
pub fn inverse_a(t: &ExponentTriple) -> Result<ExponentTriple> {
    if t.is_seed() {
        return Err(crate::error::domain("inverse_A is not defined at the seed (1/2, 1/2, 1/2)"));
    }
    let den = Rational::one() - &t.kappa * int(2);
    if den.is_zero() {
        return Err(crate::error::domain("inverse_A needs kappa != 1/2"));
    }
    Ok(ExponentTriple::new(
        &t.kappa * int(2) / &den,
        (&t.lambda * int(2) - Rational::one()) / &den,
        &t.nu * int(2) - half(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'A',
            Letter::B => 'B',
        }
    }
}

/// A word over `{A, B}`, stored left to right as written.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ProcessWord {
    letters: Vec<Letter>,
}

impl ProcessWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    /// Parses `"BA3BA2BABABA2"`; a run-length digit repeats the preceding letter.
    pub fn parse(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        let mut chars = s.trim().chars().peekable();
        while let Some(c) = chars.next() {
            let letter = match c {
                'A' | 'a' => Letter::A,
                'B' | 'b' => Letter::B,
                _ => return Err(Error::Parse(format!("unexpected {c:?} in process word {s:?}"))),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let count = if digits.is_empty() {
                1
            } else {
                digits
                    .parse::<usize>()
                    .ok()
                    .filter(|&n| n <= 10_000)
                    .ok_or_else(|| Error::Parse(format!("bad repeat count {digits:?} in {s:?}")))?
            };
            letters.extend(std::iter::repeat_n(letter, count));
        }
        Ok(Self { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Drops every adjacent `BB`, since `B` is an involution.
    pub fn canonical(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if l == Letter::B && out.last() == Some(&Letter::B) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { letters: out }
    }

    pub fn is_canonical(&self) -> bool {
        !self.letters.windows(2).any(|w| w == [Letter::B, Letter::B])
    }

    /// `letter * self`, i.e. `letter` acts after the current word.
    pub fn prepend(&self, letter: Letter) -> Self {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.letters);
        Self { letters }
    }

    pub fn apply(&self, t: &ExponentTriple) -> ExponentTriple {
        self.letters.iter().rev().fold(t.clone(), |acc, &l| acc.apply(l))
    }

    /// Run-length form, e.g. `"BA3BA2BABABA2"`; the empty word prints as `""`.
    pub fn compact(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            out.push(l.as_char());
            if j - i > 1 {
                out.push_str(&(j - i).to_string());
            }
            i = j;
        }
        out
    }

    /// Every word of exactly `len` letters, optionally only the canonical ones.
    pub fn all_of_length(len: usize, canonical_only: bool) -> Vec<Self> {
        let mut words = vec![Self::empty()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(words.len() * 2);
            for w in &words {
                for l in [Letter::A, Letter::B] {
                    if canonical_only && l == Letter::B && w.letters.first() == Some(&Letter::B) {
                        continue;
                    }
                    next.push(w.prepend(l));
                }
            }
            words = next;
        }
        words
    }
}

impl fmt::Display for ProcessWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.compact())
    }
}

impl FromStr for ProcessWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for ProcessWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.compact())
    }
}

impl<'de> Deserialize<'de> for ProcessWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

pub fn apply_word(w: &ProcessWord, t: &ExponentTriple) -> ExponentTriple {
    w.apply(t)
}

/// Parses `w` and applies it to the seed.
pub fn word_on_seed(w: &str) -> Result<ExponentTriple> {
    Ok(ProcessWord::parse(w)?.apply(&ExponentTriple::seed()))
}

/// Entry `j` (0-based) pairs with modulus factor `q_{J-j}` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentSequence {
    pub entries: Vec<ExponentTriple>,
}

impl ExponentSequence {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// 1-based index of the modulus factor entry `j` (0-based) is paired with.
    pub fn factor_index(&self, j: usize) -> usize {
        self.entries.len() - j
    }
}

pub fn sequence_initial() -> ExponentSequence {
    ExponentSequence { entries: vec![ExponentTriple::seed()] }
}

/// Prepends `(1/2, 1, 0)` and maps each entry to `(k/2, (l+1)/2, nu)`.
pub fn sequence_apply_a(s: &ExponentSequence) -> ExponentSequence {
    let mut entries = Vec::with_capacity(s.entries.len() + 1);
    entries.push(ExponentTriple::new(half(), Rational::one(), Rational::zero()));
    entries.extend(s.entries.iter().map(|t| {
        ExponentTriple::new(&t.kappa / int(2), (&t.lambda + Rational::one()) / int(2), t.nu.clone())
    }));
    ExponentSequence { entries }
}

/// `[(2^-1,1,0), ..., (2^-(J-1),1,0), (2^-J, 1-2^-J, 1/2)]`.
pub fn sequence_akb(j: usize) -> Result<ExponentSequence> {
    if j == 0 {
        return Err(crate::error::domain("sequence_AkB needs J >= 1"));
    }
    let pow = |e: usize| Rational::new(1.into(), num_bigint::BigInt::from(2).pow(e as u32));
    if j == 1 {
        return Ok(sequence_initial());
    }
    let mut entries: Vec<ExponentTriple> =
        (1..j).map(|i| ExponentTriple::new(pow(i), Rational::one(), Rational::zero())).collect();
    entries.push(ExponentTriple::new(pow(j), Rational::one() - pow(j), half()));
    Ok(ExponentSequence { entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Pairs of the form `A^k (1/2, 1/2)`.
    Ak,
    /// Pairs of the form `B A^k (1/2, 1/2)`.
    BAk,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ak" | "a" => Ok(Family::Ak),
            "bak" | "ba" => Ok(Family::BAk),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// Size condition under which the pair may be applied at level `Q`:
/// `q^(1-2k) N^(2k-2l+1) >= Q` for `Ak`, `q^(2-2l) N^(2l-2k-1) >= Q` for `BAk`.
pub fn constraint_check(t: &ExponentTriple, family: Family, q: f64, n: f64, big_q: f64) -> Result<bool> {
    if t.is_seed() {
        return Err(crate::error::domain("the size condition excludes the seed pair"));
    }
    if !(q > 0.0 && n > 0.0 && big_q > 0.0) {
        return Err(crate::error::precondition("q, N, Q must be positive"));
    }
    let k = rational::to_f64(&t.kappa);
    let l = rational::to_f64(&t.lambda);
    let (eq, en) = match family {
        Family::Ak => (1.0 - 2.0 * k, 2.0 * k - 2.0 * l + 1.0),
        Family::BAk => (2.0 - 2.0 * l, 2.0 * l - 2.0 * k - 1.0),
    };
    let lhs = eq * q.ln() + en * n.ln();
    let rhs = big_q.ln();
    Ok(lhs >= rhs - 1e-12 * (1.0 + rhs.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(w: &str) -> (Rational, Rational) {
        word_on_seed(w).unwrap().pair()
    }

    #[test]
    fn seed_images() {
        assert_eq!(apply_b(&seed_triple()), ExponentTriple::from_ratios((0, 1), (1, 1), (0, 1)));
        assert_eq!(apply_a(&seed_triple()), ExponentTriple::from_ratios((1, 6), (2, 3), (1, 2)));
        let zero = ExponentTriple::from_ratios((0, 1), (1, 1), (0, 1));
        assert_eq!(apply_a(&zero), ExponentTriple::from_ratios((0, 1), (1, 1), (1, 4)));
    }

    #[test]
    fn table_one() {
        let rows = [
            ("A", (1, 6), (2, 3)),
            ("A2", (1, 14), (11, 14)),
            ("A3", (1, 30), (13, 15)),
            ("BA2", (2, 7), (4, 7)),
            ("BA3", (11, 30), (8, 15)),
            ("ABA2", (1, 9), (13, 18)),
            ("A2BA2", (1, 20), (33, 40)),
            ("BABA2", (2, 9), (11, 18)),
        ];
        for (w, k, l) in rows {
            assert_eq!(pair(w), (ratio(k.0, k.1), ratio(l.0, l.1)), "{w}");
        }
        let ba2 = word_on_seed("BA2").unwrap();
        assert_eq!(ba2.nu, ratio(5, 7));
    }

    #[test]
    fn long_word() {
        assert_eq!(pair("BA3BA2BABABA2"), (ratio(591, 1535), ratio(808, 1535)));
        assert_eq!(word_on_seed("").unwrap(), seed_triple());
        assert!(ProcessWord::parse("BAC").is_err());
    }

    #[test]
    fn inverse_examples() {
        let a = apply_a(&seed_triple());
        assert_eq!(inverse_a(&a).unwrap(), seed_triple());
        let a2 = word_on_seed("A2").unwrap();
        assert_eq!(inverse_a(&a2).unwrap(), a);
        assert!(inverse_a(&seed_triple()).is_err());
        let flat = ExponentTriple::from_ratios((1, 2), (3, 4), (0, 1));
        assert!(inverse_a(&flat).is_err());
    }

    #[test]
    fn word_text() {
        let w = ProcessWord::parse("BAAABAABABABAA").unwrap();
        assert_eq!(w.compact(), "BA3BA2BABABA2");
        assert_eq!(ProcessWord::parse("ABBA").unwrap().canonical().compact(), "A2");
        assert_eq!(ProcessWord::parse("A12").unwrap().len(), 12);
        assert_eq!(ProcessWord::all_of_length(3, true).len(), 5);
        assert_eq!(ProcessWord::all_of_length(3, false).len(), 8);
    }

    #[test]
    fn sequences() {
        let s1 = sequence_initial();
        let s2 = sequence_apply_a(&s1);
        let expect2 = vec![
            ExponentTriple::from_ratios((1, 2), (1, 1), (0, 1)),
            ExponentTriple::from_ratios((1, 4), (3, 4), (1, 2)),
        ];
        assert_eq!(s2.entries, expect2);
        let s3 = sequence_apply_a(&s2);
        assert_eq!(s3.entries[2], ExponentTriple::from_ratios((1, 8), (7, 8), (1, 2)));
        assert_eq!(sequence_akb(1).unwrap(), s1);
        assert_eq!(sequence_akb(3).unwrap(), s3);
        assert_eq!(s3.factor_index(0), 3);
        let mut s = sequence_initial();
        for j in 2..=8 {
            s = sequence_apply_a(&s);
            assert_eq!(sequence_akb(j).unwrap(), s);
        }
    }

    #[test]
    fn size_conditions() {
        let a = apply_a(&seed_triple());
        assert!(constraint_check(&a, Family::Ak, 1e6, 1e3, 1e3).unwrap());
        assert!(constraint_check(&a, Family::Ak, 1e6, 1e3, 1.0).unwrap());
        let ba2 = word_on_seed("BA2").unwrap();
        assert!(!constraint_check(&ba2, Family::BAk, 1e6, 1e4, 1e5).unwrap());
        assert!(constraint_check(&seed_triple(), Family::Ak, 1.0, 1.0, 1.0).is_err());
    }
}
