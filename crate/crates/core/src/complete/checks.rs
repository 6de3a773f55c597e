use rand::Rng;

use super::ratfun::RationalFunctionZ;
use super::sigma::sigma_direct;
use crate::arith::factor::{c_ddagger_of, flat_sharp_of, xi_of};
use crate::arith::{factorize, CheckOutcome};
use crate::Result;

/// `d` in the bounds, floored at 1 so that constant `lambda` keeps a
/// non-vanishing bound.
fn weight(lam: &RationalFunctionZ) -> f64 {
    lam.degree().max(1) as f64
}

/// `|Sigma(lambda, p)| <= 2 d sqrt(p) (lambda, p)^(1/2)`.
pub fn weil_check(lam: &RationalFunctionZ, p: u64) -> Result<CheckOutcome> {
    if !crate::arith::is_prime(p) {
        return Err(crate::error::precondition(format!("{p} is not prime")));
    }
    let lhs = sigma_direct(lam, p)?.value.norm();
    let g = lam.content_gcd(p) as f64;
    let bound = 2.0 * weight(lam) * (p as f64).sqrt() * g.sqrt();
    Ok(CheckOutcome { lhs, bound, pass: lhs <= bound + 1e-9 })
}

/// `|Sigma(lambda, c)| <= c^(1/2) (lambda, c_flat)^(1/2) (lambda', c_dd)
/// (2d)^omega(c) Xi(c)^(1/2)`.
pub fn composite_bound_check(lam: &RationalFunctionZ, c: u64) -> Result<CheckOutcome> {
    if c == 0 || c > 1_000_000 {
        return Err(crate::error::precondition("modulus must lie in 1..=10^6"));
    }
    let lhs = sigma_direct(lam, c)?.value.norm();
    let f = factorize(c);
    let (flat, _) = flat_sharp_of(&f);
    let cdd = c_ddagger_of(&f);
    let omega = f.pairs().len() as i32;
    let bound = (c as f64).sqrt()
        * (lam.content_gcd(flat) as f64).sqrt()
        * lam.derivative_content_gcd(cdd) as f64
        * (2.0 * weight(lam)).powi(omega)
        * (xi_of(&f) as f64).sqrt();
    Ok(CheckOutcome { lhs, bound, pass: lhs <= bound * (1.0 + 1e-12) + 1e-9 })
}

/// Random `f1 / f2` with `deg f1 <= d1`, `deg f2 <= d2`, coefficients in
/// `[-span, span]`, coprime over the rationals.
pub fn random_rational_function<R: Rng>(rng: &mut R, d1: usize, d2: usize, span: i64) -> RationalFunctionZ {
    loop {
        let f1: Vec<i64> = (0..=rng.gen_range(0..=d1)).map(|_| rng.gen_range(-span..=span)).collect();
        let f2: Vec<i64> = (0..=rng.gen_range(0..=d2)).map(|_| rng.gen_range(-span..=span)).collect();
        if let Ok(l) = RationalFunctionZ::new(f1, f2) {
            return l;
        }
    }
}

/// As [`random_rational_function`], additionally coprime modulo every prime
/// dividing `c`.
pub fn random_rational_function_mod<R: Rng>(
    rng: &mut R,
    d1: usize,
    d2: usize,
    span: i64,
    c: u64,
) -> RationalFunctionZ {
    let primes: Vec<u64> = factorize(c).primes().collect();
    loop {
        let l = random_rational_function(rng, d1, d2, span);
        if primes.iter().all(|&p| l.coprime_mod(p)) {
            return l;
        }
    }
}
