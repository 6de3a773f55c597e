use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, inv_mod, mul_mod, poly, pow_mod};
use crate::rational::Rational;
use crate::Result;

/// `lambda = f1 / f2` with integer coefficients, coprime over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalFunctionZ {
    f1: Vec<i64>,
    f2: Vec<i64>,
}

impl RationalFunctionZ {
    pub fn new(f1: Vec<i64>, f2: Vec<i64>) -> Result<Self> {
        let f1 = poly::trim(&f1).to_vec();
        let f2 = poly::trim(&f2).to_vec();
        if f2.is_empty() {
            return Err(crate::error::domain("denominator is the zero polynomial"));
        }
        if f1.iter().chain(&f2).any(|c| c.unsigned_abs() > 1 << 40) {
            return Err(crate::error::domain("coefficients are limited to 2^40 in absolute value"));
        }
        if !coprime_over_q(&f1, &f2) {
            return Err(crate::error::domain("numerator and denominator share a factor"));
        }
        Ok(Self { f1, f2 })
    }

    /// Skips the coprimality check; used for twists that only matter modulo `c`.
    pub(crate) fn from_parts(f1: Vec<i64>, f2: Vec<i64>) -> Self {
        Self { f1: poly::trim(&f1).to_vec(), f2: poly::trim(&f2).to_vec() }
    }

    pub fn polynomial(f: Vec<i64>) -> Result<Self> {
        Self::new(f, vec![1])
    }

    pub fn numerator(&self) -> &[i64] {
        &self.f1
    }

    pub fn denominator(&self) -> &[i64] {
        &self.f2
    }

    /// `deg f1 + deg f2`, with the zero polynomial counted as degree 0.
    pub fn degree(&self) -> usize {
        poly::degree(&self.f1).unwrap_or(0) + poly::degree(&self.f2).unwrap_or(0)
    }

    /// `t * lambda`.
    pub fn scaled(&self, t: i64) -> Self {
        Self { f1: poly::scale(&self.f1, t), f2: self.f2.clone() }
    }

    /// `lambda(a) mod m`, or `None` when `f2(a)` is not a unit.
    pub fn eval_mod(&self, a: u64, m: u64) -> Option<u64> {
        let den = poly::eval_mod(&self.f2, a, m);
        inv_mod(den, m).map(|inv| mul_mod(poly::eval_mod(&self.f1, a, m), inv, m))
    }

    /// Numerator and denominator of `lambda' = (f1' f2 - f1 f2') / f2^2`.
    pub fn derivative_parts(&self) -> (Vec<i64>, Vec<i64>) {
        let num = poly::sub(
            &poly::mul(&poly::derivative(&self.f1), &self.f2),
            &poly::mul(&self.f1, &poly::derivative(&self.f2)),
        );
        (poly::trim(&num).to_vec(), poly::mul(&self.f2, &self.f2))
    }

    /// `(lambda, c)`: gcd of `c` with every non-constant coefficient of `f1`
    /// and `f2`; `c` itself if there are none.
    pub fn content_gcd(&self, c: u64) -> u64 {
        joint_gcd(c, &[&self.f1, &self.f2])
    }

    /// `(lambda', c)` with the same convention applied to the quotient-rule parts.
    pub fn derivative_content_gcd(&self, c: u64) -> u64 {
        let (n, d) = self.derivative_parts();
        joint_gcd(c, &[&n, &d])
    }

    /// Whether `f1` and `f2` stay coprime modulo the prime `p` (and `f2` is
    /// not identically zero there).
    pub fn coprime_mod(&self, p: u64) -> bool {
        let a = poly::reduce(&self.f1, p);
        let b = poly::reduce(&self.f2, p);
        if b.iter().all(|&x| x == 0) {
            return false;
        }
        let g = gcd_mod_p(a, b, p);
        g.len() == 1
    }

    /// Number of roots of `f2` in `F_p`.
    pub fn pole_count_mod(&self, p: u64) -> u64 {
        (0..p).filter(|&a| poly::eval_mod(&self.f2, a, p) == 0).count() as u64
    }
}

impl fmt::Display for RationalFunctionZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", poly::format(&self.f1), poly::format(&self.f2))
    }
}

fn joint_gcd(c: u64, polys: &[&[i64]]) -> u64 {
    polys
        .iter()
        .flat_map(|p| p.iter().skip(1))
        .filter(|&&x| x != 0)
        .fold(c, |g, &x| gcd(g, x.unsigned_abs() % c.max(1)))
}

fn coprime_over_q(a: &[i64], b: &[i64]) -> bool {
    let to_q = |p: &[i64]| -> Vec<Rational> { p.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect() };
    let (mut a, mut b) = (to_q(a), to_q(b));
    trim_q(&mut a);
    trim_q(&mut b);
    if a.is_empty() {
        // gcd(0, f2) = f2
        return b.len() == 1;
    }
    while !b.is_empty() {
        let r = rem_q(&a, &b);
        a = b;
        b = r;
    }
    a.len() == 1
}

fn trim_q(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|x| x.is_zero()) {
        p.pop();
    }
}

fn rem_q(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let lead = b.last().expect("non-zero divisor").clone();
    while r.len() >= b.len() {
        let f = r.last().unwrap().clone() / &lead;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        r.pop();
        trim_q(&mut r);
    }
    r
}

/// Monic-free gcd over `F_p`; the zero polynomial is the empty vector.
fn gcd_mod_p(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
    let trim = |mut v: Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let inv = pow_mod(*b.last().unwrap(), p - 2, p);
        let mut r = a.clone();
        while r.len() >= b.len() && !r.is_empty() {
            let f = mul_mod(*r.last().unwrap(), inv, p);
            let shift = r.len() - b.len();
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - mul_mod(f, c, p)) % p;
            }
            r = trim(r);
        }
        a = b;
        b = r;
    }
    if a.is_empty() {
        vec![]
    } else {
        a
    }
}

/// The constant function `c`.
pub fn constant(c: i64) -> RationalFunctionZ {
    RationalFunctionZ { f1: poly::trim(&[c]).to_vec(), f2: vec![1] }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        assert!(RationalFunctionZ::new(vec![1, 1], vec![1, 1]).is_err());
        assert!(RationalFunctionZ::new(vec![2, 2], vec![1, 1]).is_err());
        assert!(RationalFunctionZ::new(vec![1], vec![0]).is_err());
        let r = RationalFunctionZ::new(vec![1, 0, 1], vec![0, 1]).unwrap();
        assert_eq!(r.degree(), 3);
        assert_eq!(r.eval_mod(2, 7), Some(mul_mod(5, 4, 7)));
        assert_eq!(r.eval_mod(0, 7), None);
        let (n, d) = r.derivative_parts();
        // ((x^2 + 1)/x)' = (x^2 - 1)/x^2
        assert_eq!(n, vec![-1, 0, 1]);
        assert_eq!(d, vec![0, 0, 1]);
    }

    #[test]
    fn gcd_conventions() {
        let r = RationalFunctionZ::polynomial(vec![5, 10, 15]).unwrap();
        assert_eq!(r.content_gcd(25), 5);
        assert_eq!(constant(3).content_gcd(12), 12);
        let inv = RationalFunctionZ::new(vec![1], vec![0, 1]).unwrap();
        assert_eq!(inv.content_gcd(101), 1);
        let sq = RationalFunctionZ::polynomial(vec![0, 0, 1]).unwrap();
        assert_eq!(sq.derivative_content_gcd(3), 1);
        assert_eq!(sq.derivative_content_gcd(2), 2);
    }

    #[test]
    fn reduction_mod_p() {
        let r = RationalFunctionZ::new(vec![7, 1], vec![0, 1]).unwrap();
        assert!(r.coprime_mod(5));
        assert!(!r.coprime_mod(7));
        assert_eq!(RationalFunctionZ::new(vec![1], vec![-1, 0, 1]).unwrap().pole_count_mod(5), 2);
    }
}
