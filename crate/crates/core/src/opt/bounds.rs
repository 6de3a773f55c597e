use num_traits::One;

use crate::pairs::ExponentTriple;
use crate::rational::{half, int, ratio, to_f64, Rational};

/// `1/232`, the level gain a divisor-problem pair has to beat.
pub fn divisor_target() -> Rational {
    ratio(1, 232)
}

/// `(2 - k - 3 l) / (6 (k + 1))`.
pub fn divisor_level(t: &ExponentTriple) -> Rational {
    (int(2) - &t.kappa - &t.lambda * int(3)) / ((&t.kappa + Rational::one()) * int(6))
}

/// `1/2 - (k + l)/2`.
pub fn subconvex_delta(t: &ExponentTriple) -> Rational {
    half() - (&t.kappa + &t.lambda) / int(2)
}

/// Balanced factorisation sizes `q1 = q^(1/(k+1)) N^((k-l)/(k+1))`, `q2 = q/q1`.
pub fn optimal_split(q: f64, n: f64, t: &ExponentTriple) -> (f64, f64) {
    let k = to_f64(&t.kappa);
    let l = to_f64(&t.lambda);
    let q1 = (q.ln() / (k + 1.0) + n.ln() * (k - l) / (k + 1.0)).exp();
    (q1, q / q1)
}

/// `N W { w0/sqrt(q d) + sum_j (q_{J+1-j}/N)^(2^-j) + (d^2 q_1/N^2)^(2^-J) }`,
/// with `w0 = 1` iff `N > q d`. `factors[0]` is `q_1`.
pub fn bound_eval_akb(factors: &[f64], delta: f64, n: f64, w_sup: f64) -> f64 {
    assert!(!factors.is_empty(), "need at least one modulus factor");
    let q: f64 = factors.iter().product();
    let j_max = factors.len();
    let w0 = if n > q * delta { 1.0 } else { 0.0 };
    let mut bracket = w0 / (q * delta).sqrt();
    for j in 1..j_max {
        bracket += (factors[j_max - j] / n).powf(0.5f64.powi(j as i32));
    }
    bracket += (delta * delta * factors[0] / (n * n)).powf(0.5f64.powi(j_max as i32));
    n * w_sup * bracket
}

/// `sqrt(q d) W { N w0/(q d) + sum_j (N q_{J+1-j}/(q d))^(2^-j) + (N^2 q_1/q^2)^(2^-J) }`.
pub fn bound_eval_bakb(factors: &[f64], delta: f64, n: f64, w_sup: f64) -> f64 {
    assert!(!factors.is_empty(), "need at least one modulus factor");
    let q: f64 = factors.iter().product();
    let qd = q * delta;
    let j_max = factors.len();
    let w0 = if n > qd { 1.0 } else { 0.0 };
    let mut bracket = n * w0 / qd;
    for j in 1..j_max {
        bracket += (n * factors[j_max - j] / qd).powf(0.5f64.powi(j as i32));
    }
    bracket += (n * n * factors[0] / (q * q)).powf(0.5f64.powi(j_max as i32));
    qd.sqrt() * w_sup * bracket
}
