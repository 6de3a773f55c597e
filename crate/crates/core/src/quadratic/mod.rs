//! The congruence `a^2 + 1 = 0 mod l`, proper representations
//! `l = r^2 + s^2`, the bijection between the two, the Weyl sums
//! `rho_n(l) = sum_a e(a n / l)` and the fraction decompositions built on the
//! bijection.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{d_infinity, e_frac, factorize, gcd, inv_mod, mul_mod, sqrt_minus_one};
use crate::rational::Rational;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootSet {
    pub ell: u64,
    pub roots: Vec<u64>,
}

impl RootSet {
    pub fn rho(&self) -> usize {
        self.roots.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TwoSquaresRep {
    pub r: u64,
    pub s: u64,
    pub ell: u64,
}

/// Roots of `a^2 + 1` mod `ell` via factorisation, Hensel lifting and CRT.
pub fn roots_minus_one(ell: u64) -> RootSet {
    assert!(ell >= 1, "ell must be positive");
    let mut roots = vec![0u64];
    let mut modulus = 1u64;
    for (p, e, pe) in factorize(ell).prime_powers() {
        let local = local_roots(p, e, pe);
        if local.is_empty() {
            return RootSet { ell, roots: Vec::new() };
        }
        let mut next = Vec::with_capacity(roots.len() * local.len());
        for &x in &roots {
            for &y in &local {
                next.push(crt_pair(x, modulus, y, pe));
            }
        }
        roots = next;
        modulus *= pe;
    }
    roots.sort_unstable();
    RootSet { ell, roots }
}

fn local_roots(p: u64, e: u32, pe: u64) -> Vec<u64> {
    if p == 2 {
        return if e == 1 { vec![1] } else { Vec::new() };
    }
    let Some(r) = sqrt_minus_one(p) else { return Vec::new() };
    let mut out: Vec<u64> = [r, p - r].iter().map(|&x| hensel(x, p, e)).collect();
    out.sort_unstable();
    debug_assert!(out.iter().all(|&x| (mul_mod(x, x, pe) + 1) % pe == 0));
    out
}

/// Lifts a simple root of `x^2 + 1` from `p` to `p^e`.
fn hensel(mut x: u64, p: u64, e: u32) -> u64 {
    let mut m = p;
    for _ in 1..e {
        m *= p;
        let f = (mul_mod(x, x, m) + 1) % m;
        let inv = inv_mod((2 * x) % m, m).expect("simple root");
        x = (x + m - mul_mod(f, inv, m)) % m;
    }
    x
}

/// `z = x mod m`, `z = y mod n` for coprime `m, n`.
fn crt_pair(x: u64, m: u64, y: u64, n: u64) -> u64 {
    let mn = m * n;
    let t = mul_mod((y + n - x % n) % n, inv_mod(m % n, n).expect("coprime moduli"), n);
    (x + m * t) % mn
}

/// Brute-force root search, for cross-checking.
pub fn roots_minus_one_brute(ell: u64) -> RootSet {
    assert!((1..=10_000_000).contains(&ell), "brute force is limited to ell <= 10^7");
    let roots = (0..ell).filter(|&a| (mul_mod(a, a, ell) + 1) % ell == 0).collect();
    RootSet { ell, roots }
}

/// Proper representations `ell = r^2 + s^2`, `r, s > 0`, `(r, s) = 1`, as
/// ordered pairs sorted by `r`.
pub fn two_squares(ell: u64) -> Vec<TwoSquaresRep> {
    let mut out = Vec::new();
    let mut r = 1u64;
    while r * r < ell {
        let rest = ell - r * r;
        let s = rest.isqrt();
        if s * s == rest && s > 0 && gcd(r, s) == 1 {
            out.push(TwoSquaresRep { r, s, ell });
        }
        r += 1;
    }
    out
}

/// `x - floor(x)`.
pub fn frac_mod1(x: &Rational) -> Rational {
    x - x.floor()
}

fn q(n: i128, d: i128) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn congruent_mod1(a: &Rational, b: &Rational) -> bool {
    frac_mod1(&(a - b)).is_zero()
}

/// The root paired with `(r, s)`: `a/ell = inv(s)/r - s/(r ell) mod 1`,
/// `inv(s)` taken mod `r ell`.
pub fn root_of_rep(rep: &TwoSquaresRep) -> u64 {
    let TwoSquaresRep { r, s, ell } = *rep;
    let m = r * ell;
    let sbar = inv_mod(s % m, m).expect("s is a unit mod r ell");
    let num = ell as i128 * sbar as i128 - s as i128;
    debug_assert_eq!(num % r as i128, 0);
    ((num / r as i128).rem_euclid(ell as i128)) as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Correspondence {
    pub ell: u64,
    pub pairs: Vec<(u64, TwoSquaresRep)>,
    /// Every pair satisfies the defining congruence in exact rationals.
    pub identities_hold: bool,
    pub bijective: bool,
}

/// Pairs each root of `a^2 + 1 mod ell` with its representation.
pub fn correspondence(ell: u64) -> Result<Correspondence> {
    let roots = roots_minus_one(ell);
    if roots.roots.is_empty() {
        return Err(crate::error::precondition(format!("{ell} has no roots of -1")));
    }
    let mut identities_hold = true;
    let mut pairs = Vec::new();
    for rep in two_squares(ell) {
        let a = root_of_rep(&rep);
        let TwoSquaresRep { r, s, .. } = rep;
        let m = (r * ell) as i128;
        let sbar = inv_mod(s % m as u64, m as u64).expect("unit") as i128;
        let rhs = q(sbar, r as i128) - q(s as i128, m);
        identities_hold &= congruent_mod1(&q(a as i128, ell as i128), &rhs);
        identities_hold &= (mul_mod(a, a, ell) + 1) % ell == 0;
        pairs.push((a, rep));
    }
    pairs.sort();
    let mut image: Vec<u64> = pairs.iter().map(|p| p.0).collect();
    image.dedup();
    let bijective = image == roots.roots && pairs.len() == roots.roots.len();
    Ok(Correspondence { ell, pairs, identities_hold, bijective })
}

/// `rho_n(ell) = sum_{a^2 + 1 = 0 (ell)} e(a n / ell)`.
pub fn weyl_rho(n: i64, ell: u64) -> Complex64 {
    let nn = n.rem_euclid(ell as i64) as u64;
    roots_minus_one(ell).roots.iter().map(|&a| e_frac(mul_mod(a, nn, ell), ell)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub d: u64,
    pub d1: u64,
    pub d2: u64,
    pub a: u64,
    pub rep: TwoSquaresRep,
    pub holds: bool,
    /// With `d2 = 1` the last term is an integer and the identity has two terms.
    pub two_term: bool,
}

/// Checks, in exact rationals mod 1,
/// `inv(d) a / ell = -r inv(d2 ell)/(d1 s) + r/(d s ell) - r inv(d1 s ell)/d2`
/// with `ell = r^2 + s^2`, `d2 = (d, r^inf)`, `d = d1 d2`, each inverse taken
/// modulo the denominator it sits over.
pub fn decompose_fraction(d: u64, a: u64, ell: u64) -> Result<Decomposition> {
    if d == 0 || ell < 2 || gcd(d, ell) != 1 {
        return Err(crate::error::precondition("need d >= 1, ell >= 2 and (d, ell) = 1"));
    }
    if (mul_mod(a, a, ell) + 1) % ell != 0 {
        return Err(crate::error::precondition(format!("{a} is not a root of -1 mod {ell}")));
    }
    let corr = correspondence(ell)?;
    let rep = corr
        .pairs
        .iter()
        .find(|(root, _)| *root == a % ell)
        .map(|(_, rep)| *rep)
        .ok_or_else(|| Error::Domain(format!("no representation paired with {a}")))?;
    let TwoSquaresRep { r, s, .. } = rep;
    let d2 = d_infinity(d, r);
    let d1 = d / d2;
    let inv = |x: u64, m: u64| -> i128 {
        if m == 1 {
            0
        } else {
            inv_mod(x % m, m).expect("unit") as i128
        }
    };
    let (r_, s_, d_, ell_) = (r as i128, s as i128, d as i128, ell as i128);
    let lhs = q(inv(d, ell) * a as i128, ell_);
    let t1 = q(-r_ * inv(d2 * ell % (d1 * s), d1 * s), d1 as i128 * s_);
    let t2 = q(r_, d_ * s_ * ell_);
    let t3 = q(-r_ * inv(d1 * s % d2 * ell % d2, d2), d2 as i128);
    let holds = congruent_mod1(&lhs, &(t1 + t2 + t3));
    Ok(Decomposition { d, d1, d2, a, rep, holds, two_term: d2 == 1 })
}

/// Exhaustive bijection scan over `2..=max`; returns the first failing `ell`.
pub fn verify_correspondence_upto(max: u64) -> Option<u64> {
    (2..=max).find(|&ell| {
        let rho = roots_minus_one(ell).rho();
        rho > 0 && correspondence(ell).map_or(true, |c| !(c.bijective && c.identities_hold))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_examples() {
        assert_eq!(roots_minus_one(5).roots, vec![2, 3]);
        assert_eq!(roots_minus_one(65).roots, vec![8, 18, 47, 57]);
        assert!(roots_minus_one(7).roots.is_empty());
        assert_eq!(roots_minus_one(1).roots, vec![0]);
        assert_eq!(roots_minus_one(2).roots, vec![1]);
        assert!(roots_minus_one(4).roots.is_empty());
        for ell in 1..3000 {
            assert_eq!(roots_minus_one(ell), roots_minus_one_brute(ell), "ell={ell}");
        }
    }

    #[test]
    fn reps_examples() {
        let r65: Vec<(u64, u64)> = two_squares(65).iter().map(|t| (t.r, t.s)).collect();
        assert_eq!(r65, vec![(1, 8), (4, 7), (7, 4), (8, 1)]);
        assert_eq!(two_squares(2).iter().map(|t| (t.r, t.s)).collect::<Vec<_>>(), vec![(1, 1)]);
        assert_eq!(two_squares(25).iter().map(|t| (t.r, t.s)).collect::<Vec<_>>(), vec![(3, 4), (4, 3)]);
    }

    #[test]
    fn correspondence_small() {
        let c = correspondence(5).unwrap();
        assert!(c.bijective && c.identities_hold);
        let find = |a| c.pairs.iter().find(|p| p.0 == a).map(|p| (p.1.r, p.1.s));
        assert_eq!(find(3), Some((1, 2)));
        assert_eq!(find(2), Some((2, 1)));
        assert_eq!(verify_correspondence_upto(2000), None);
        assert!(correspondence(7).is_err());
    }

    #[test]
    fn weyl_sums() {
        assert!((weyl_rho(0, 65) - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        let v = weyl_rho(1, 5);
        assert!((v.re - 2.0 * (4.0 * std::f64::consts::PI / 5.0).cos()).abs() < 1e-12);
        assert!((v.re + 1.61803).abs() < 1e-5);
    }

    #[test]
    fn decompositions() {
        let one = decompose_fraction(1, 3, 5).unwrap();
        assert!(one.holds && one.two_term);
        assert!(decompose_fraction(3, 3, 5).unwrap().holds);
        for ell in [5u64, 13, 25, 65, 85, 130, 145, 1105] {
            for &a in &roots_minus_one(ell).roots {
                for d in 1..40 {
                    if gcd(d, ell) == 1 {
                        let dec = decompose_fraction(d, a, ell).unwrap();
                        assert!(dec.holds, "{dec:?}");
                    }
                }
            }
        }
        assert!(decompose_fraction(5, 3, 5).is_err());
        assert!(decompose_fraction(1, 1, 5).is_err());
    }
}
