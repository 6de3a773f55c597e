//! Numeric forms of the auxiliary inequalities: gcd averages, averages of the
//! squarefull part and of `Xi`, Poisson summation in residue classes and the
//! Donoho-Stark support inequality.

use num_complex::Complex64;
use serde::Serialize;

use super::factor::{flat_sharp_of, xi_of, SpfSieve};
use super::modular::{e_frac, gcd, mul_mod};
use super::window::Window;
use crate::trace::fourier::normalized_dft;
use crate::{Error, Result};

/// `lhs <= bound` style outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckOutcome<T = f64> {
    pub lhs: T,
    pub bound: T,
    pub pass: bool,
}

impl<T: PartialOrd + Copy> CheckOutcome<T> {
    pub fn le(lhs: T, bound: T) -> Self {
        Self { lhs, bound, pass: lhs <= bound }
    }
}

/// `sum_{n <= x} gcd(n, q)` against `tau(q) x`, in exact integers.
pub fn gcd_average_check(x: u64, q: u64) -> CheckOutcome<u64> {
    assert!(x >= 1 && q >= 1);
    let lhs: u64 = (1..=x).map(|n| gcd(n, q)).sum();
    CheckOutcome::le(lhs, super::factor::tau(q) * x)
}

/// Ratios `S(X) / (X log X)` at logarithmic checkpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioCurve {
    pub checkpoints: Vec<(u64, f64)>,
    pub max_ratio: f64,
    pub cap: f64,
    pub pass: bool,
}

/// Bounded-ratio form of `sum_{n <= x} (n_sharp)^t << x log x` for `t <= 1/2`.
pub fn avg_sharp_check(x: u64, t: f64) -> Result<RatioCurve> {
    if t > 0.5 {
        return Err(crate::error::domain("avg_sharp_check needs t <= 1/2"));
    }
    ratio_curve(x, |f| (flat_sharp_of(f).1 as f64).powf(t))
}

/// Companion for `sum_{n <= x} Xi(n)^t << x log x`, `t <= 3/4`.
pub fn avg_xi_check(x: u64, t: f64) -> Result<RatioCurve> {
    if t > 0.75 {
        return Err(crate::error::domain("avg_xi_check needs t <= 3/4"));
    }
    ratio_curve(x, |f| (xi_of(f) as f64).powf(t))
}

const RATIO_CAP: f64 = 10.0;

fn ratio_curve(
    x: u64,
    term: impl Fn(&super::factor::Factorization) -> f64,
) -> Result<RatioCurve> {
    if !(2..=10_000_000).contains(&x) {
        return Err(crate::error::precondition("ratio curves need 2 <= x <= 10^7"));
    }
    let sieve = SpfSieve::new(x as usize);
    let mut marks: Vec<u64> = std::iter::successors(Some(10u64), |m| Some(m * 10))
        .take_while(|&m| m < x)
        .collect();
    marks.push(x);
    let mut checkpoints = Vec::with_capacity(marks.len());
    let mut sum = 0.0;
    let mut next = 0;
    for n in 1..=x {
        sum += term(&sieve.factorize(n as usize));
        if n == marks[next] {
            let nf = n as f64;
            checkpoints.push((n, sum / (nf * nf.ln())));
            next += 1;
        }
    }
    let max_ratio = checkpoints.iter().map(|c| c.1).fold(0.0, f64::max);
    Ok(RatioCurve { checkpoints, max_ratio, cap: RATIO_CAP, pass: max_ratio < RATIO_CAP })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
    pub tail_bound: f64,
    pub terms: u64,
    pub pass: bool,
}

/// Smallest `H` allowed for a Poisson check: `2 q X^(-1) X^0.1`, at least 1.
pub fn poisson_min_terms(x: f64, q: u64) -> u64 {
    (2.0 * q as f64 * x.powf(-0.9)).ceil().max(1.0) as u64
}

/// `sum_{n = a mod q} g(n/X)` directly and via the dual sum
/// `(X/q) sum_{|h| <= H} g_hat(hX/q) e(ah/q)`.
pub fn poisson_check(g: Window, x: f64, q: u64, a: u64, big_h: u64) -> Result<PoissonOutcome> {
    if q == 0 || q > 100_000 || !(1.0..=1e7).contains(&x) {
        return Err(crate::error::precondition("poisson_check needs 1 <= q <= 10^5, 1 <= X <= 10^7"));
    }
    if big_h < poisson_min_terms(x, q) {
        return Err(crate::error::precondition(format!(
            "H = {big_h} is below 2 q X^-0.9 = {}",
            poisson_min_terms(x, q)
        )));
    }
    let a = a % q;
    let lhs = residue_class_sum(g, x, q, a);
    let rhs = dual_sum(g, x, q, a, big_h);
    let scale = x / q as f64;
    let diff = (lhs - rhs).abs();
    let tail_bound = scale * g.tail_bound(big_h, scale);
    let slack = 1e-11 * (lhs.abs() + scale);
    Ok(PoissonOutcome { lhs, rhs, diff, tail_bound, terms: big_h, pass: diff <= tail_bound + slack })
}

/// `(X/q) sum_{|h| <= H} g_hat(hX/q) e(ah/q)`.
pub fn dual_sum(g: Window, x: f64, q: u64, a: u64, big_h: u64) -> f64 {
    let a = a % q;
    let scale = x / q as f64;
    let mut dual = g.fourier(0.0);
    for h in 1..=big_h {
        let gh = g.fourier(h as f64 * scale);
        // h and -h: g is real, so g_hat(-xi) = conj(g_hat(xi))
        let ph = e_frac(mul_mod(a, h % q, q), q);
        dual += gh * ph + (gh * ph).conj();
    }
    scale * dual.re
}

/// `sum_{n = a mod q} g(n/X)`, over the support `X < n < 2X`.
pub fn residue_class_sum(g: Window, x: f64, q: u64, a: u64) -> f64 {
    let lo = x.floor() as u64;
    let first = lo + (a + q - lo % q) % q;
    let mut acc = 0.0;
    let mut n = first;
    while (n as f64) < 2.0 * x {
        acc += g.eval(n as f64 / x);
        n += q;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyOutcome {
    pub support: usize,
    pub dual_support: usize,
    pub product: usize,
    pub modulus: usize,
    pub pass: bool,
}

/// Relative threshold below which an entry counts as zero.
pub const SUPPORT_THRESHOLD: f64 = 1e-9;

/// `|supp F| * |supp F_hat| >= q` for a non-zero `F` on `Z/qZ`.
pub fn uncertainty_check(values: &[Complex64]) -> Result<UncertaintyOutcome> {
    let support = |v: &[Complex64]| {
        let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        v.iter().filter(|z| z.norm() > SUPPORT_THRESHOLD * max).count()
    };
    let max = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if values.is_empty() || max == 0.0 {
        return Err(Error::Precondition("uncertainty_check needs a non-zero function".into()));
    }
    let s = support(values);
    let t = support(&normalized_dft(values));
    let q = values.len();
    Ok(UncertaintyOutcome { support: s, dual_support: t, product: s * t, modulus: q, pass: s * t >= q })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_average_examples() {
        let one = gcd_average_check(37, 1);
        assert_eq!((one.lhs, one.bound), (37, 37));
        let six = gcd_average_check(10, 6);
        assert_eq!((six.lhs, six.bound, six.pass), (23, 40, true));
    }

    #[test]
    fn sharp_average_is_bounded() {
        let zero = avg_sharp_check(10_000, 0.0).unwrap();
        let last = zero.checkpoints.last().unwrap();
        assert!((last.1 - 1.0 / (10_000f64).ln()).abs() < 1e-12);
        let half = avg_sharp_check(100_000, 0.5).unwrap();
        assert!(half.pass, "{half:?}");
        assert!(avg_xi_check(100_000, 0.75).unwrap().pass);
        assert!(avg_sharp_check(100, 0.6).is_err());
    }

    #[test]
    fn poisson_bump_prime_modulus() {
        let out = poisson_check(Window::Bump, 1e4, 101, 7, 8).unwrap();
        assert!(out.pass, "{out:?}");
        assert!(out.diff < 1e-8 * 1e4 / 101.0, "{out:?}");
    }

    #[test]
    fn poisson_plain_sum_and_plateau() {
        let out = poisson_check(Window::Bump, 500.0, 1, 0, 2).unwrap();
        assert!(out.pass, "{out:?}");
        let out = poisson_check(Window::Plateau, 3000.0, 17, 5, 40).unwrap();
        assert!(out.pass, "{out:?}");
    }

    #[test]
    fn poisson_rejects_short_dual_sum() {
        assert!(poisson_check(Window::Bump, 1e4, 90_000, 1, 1).is_err());
    }

    #[test]
    fn uncertainty_extremal_cases() {
        let q = 12;
        let mut delta = vec![Complex64::new(0.0, 0.0); q];
        delta[3] = Complex64::new(1.0, 0.0);
        let d = uncertainty_check(&delta).unwrap();
        assert_eq!((d.support, d.dual_support, d.pass), (1, q, true));
        let constant = vec![Complex64::new(2.0, 0.0); q];
        let c = uncertainty_check(&constant).unwrap();
        assert_eq!((c.support, c.dual_support, c.product), (q, 1, q));
        assert!(uncertainty_check(&vec![Complex64::new(0.0, 0.0); q]).is_err());
    }
}
