//! Integer polynomials as ascending coefficient lists.

use super::modular::{add_mod, mul_mod, reduce_i128};

/// Drops trailing zero coefficients.
pub fn trim(c: &[i64]) -> &[i64] {
    let n = c.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
    &c[..n]
}

/// `None` for the zero polynomial.
pub fn degree(c: &[i64]) -> Option<usize> {
    trim(c).len().checked_sub(1)
}

pub fn eval_mod(c: &[i64], x: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let x = x % m;
    c.iter().rev().fold(0, |acc, &a| add_mod(mul_mod(acc, x, m), reduce_i128(a as i128, m), m))
}

/// Reduction of every coefficient mod `m`.
pub fn reduce(c: &[i64], m: u64) -> Vec<u64> {
    c.iter().map(|&a| reduce_i128(a as i128, m)).collect()
}

pub fn is_zero_mod(c: &[i64], m: u64) -> bool {
    c.iter().all(|&a| reduce_i128(a as i128, m) == 0)
}

pub fn derivative(c: &[i64]) -> Vec<i64> {
    c.iter().enumerate().skip(1).map(|(i, &a)| a * i as i64).collect()
}

pub fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

pub fn scale(a: &[i64], k: i64) -> Vec<i64> {
    a.iter().map(|&x| x * k).collect()
}

/// Text form `c0,c1,...`.
pub fn format(c: &[i64]) -> String {
    c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse(s: &str) -> crate::Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| crate::Error::Parse(format!("bad coefficient {t:?} in {s:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(degree(&[1, 0, 3, 0, 0]), Some(2));
        assert_eq!(degree(&[0, 0]), None);
        assert_eq!(eval_mod(&[1, 0, 1], 3, 7), 3);
        assert_eq!(eval_mod(&[-5, 2], 1, 7), 4);
        assert_eq!(derivative(&[4, 3, 0, 2]), vec![3, 0, 6]);
        assert_eq!(mul(&[1, 1], &[-1, 1]), vec![-1, 0, 1]);
        assert_eq!(sub(&[1, 2], &[0, 0, 3]), vec![1, 2, -3]);
        assert_eq!(parse("1, -2,3").unwrap(), vec![1, -2, 3]);
        assert!(parse("1,x").is_err());
    }
}
