use num_complex::Complex64;
use serde::Serialize;

use super::eval::trace_table;
use super::spec::TraceSpec;
use crate::arith::gcd;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiOrthogonality {
    pub correlation: Complex64,
    /// Proportionality constant `c` with `K1 = c K2`, or 0.
    pub alpha: Complex64,
    pub lhs: f64,
    pub bound: f64,
    pub pass: bool,
}

const PROPORTIONAL_TOL: f64 = 1e-9;

/// `|sum_x K1(x) conj(K2(x)) - alpha p| <= 3 c1^2 c2^2 sqrt(p)`.
pub fn quasi_orthogonality_check(s1: &TraceSpec, s2: &TraceSpec, p: u64) -> Result<QuasiOrthogonality> {
    let k1 = trace_table(s1, p)?;
    let k2 = trace_table(s2, p)?;
    let correlation: Complex64 = k1.iter().zip(&k2).map(|(a, b)| a * b.conj()).sum();
    let energy2: f64 = k2.iter().map(|z| z.norm_sqr()).sum();
    let energy1: f64 = k1.iter().map(|z| z.norm_sqr()).sum();
    let mut alpha = Complex64::new(0.0, 0.0);
    if energy2 > 0.0 {
        let c = correlation / energy2;
        let resid: f64 = k1.iter().zip(&k2).map(|(a, b)| (a - c * b).norm_sqr()).sum();
        if resid.sqrt() <= PROPORTIONAL_TOL * energy1.sqrt().max(1.0) {
            alpha = c;
        }
    }
    let lhs = (correlation - alpha * p as f64).norm();
    let (c1, c2) = (s1.conductor_bound as f64, s2.conductor_bound as f64);
    let bound = 3.0 * c1 * c1 * c2 * c2 * (p as f64).sqrt();
    Ok(QuasiOrthogonality { correlation, alpha, lhs, bound, pass: lhs <= bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub shifts: usize,
    pub pass: bool,
}

/// Checks
/// `|S|^2 <= |psi2|_inf^2 q2 (|I| + sum_{0 < |l| <= |I|/q2} |sum_n 1_I(n) 1_I(n + l q2) D(n)|)`
/// for `Psi(n) = psi1(n mod q1) psi2(n mod q2)`, `I = (M, M + N]` and
/// `D(n) = psi1(n) conj(psi1(n + l q2))`. `psi1` is scaled to sup norm 1.
pub fn weyl_differencing_check(psi1: &[Complex64], psi2: &[Complex64], m: i64, n: u64) -> Result<WeylOutcome> {
    let (q1, q2) = (psi1.len() as u64, psi2.len() as u64);
    if q1 == 0 || q2 == 0 || gcd(q1, q2) != 1 {
        return Err(crate::error::precondition("need coprime, non-empty period lengths"));
    }
    let sup1 = psi1.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let sup2 = psi2.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if sup1 == 0.0 {
        return Ok(WeylOutcome { lhs: 0.0, rhs: 0.0, shifts: 0, pass: true });
    }
    let f1 = |x: i64| psi1[x.rem_euclid(q1 as i64) as usize] / sup1;
    let f2 = |x: i64| psi2[x.rem_euclid(q2 as i64) as usize];
    let s: Complex64 = (m + 1..=m + n as i64).map(|x| f1(x) * f2(x)).sum();
    let lhs = s.norm_sqr();
    let max_l = (n / q2) as i64;
    let mut diff_sum = 0.0;
    for l in (-max_l..=max_l).filter(|&l| l != 0) {
        let h = l * q2 as i64;
        // n and n + h both in (M, M + N]
        let lo = (m + 1).max(m + 1 - h);
        let hi = (m + n as i64).min(m + n as i64 - h);
        let inner: Complex64 = (lo..=hi).map(|x| f1(x) * f1(x + h).conj()).sum();
        diff_sum += inner.norm();
    }
    let rhs = sup2 * sup2 * q2 as f64 * (n as f64 + diff_sum);
    let pass = lhs <= rhs * (1.0 + 1e-12) + 1e-9;
    Ok(WeylOutcome { lhs, rhs, shifts: 2 * max_l as usize, pass })
}
