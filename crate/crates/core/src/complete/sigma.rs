use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ratfun::RationalFunctionZ;
use crate::arith::{e_frac, factorize, inv_mod, is_prime, mul_mod, poly, Factorization};
use crate::{Error, Result};

/// `sum_{a mod c} e(lambda(a)/c)` with the residues where `f2(a)` is not a
/// unit mod `c` left out and counted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumValue {
    pub value: Complex64,
    pub modulus: u64,
    pub excluded: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Direct,
    Crt,
    Stationary,
}

impl Method {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(Method::Direct),
            "crt" => Ok(Method::Crt),
            "stationary" => Ok(Method::Stationary),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

pub fn sigma_direct(lam: &RationalFunctionZ, c: u64) -> Result<SumValue> {
    if c == 0 {
        return Err(crate::error::precondition("modulus must be positive"));
    }
    let mut value = Complex64::new(0.0, 0.0);
    let mut excluded = 0;
    for a in 0..c {
        match lam.eval_mod(a, c) {
            Some(v) => value += e_frac(v, c),
            None => excluded += 1,
        }
    }
    Ok(SumValue { value, modulus: c, excluded })
}

fn check_factorization(f: &Factorization) -> Result<()> {
    for (p, e) in f.pairs() {
        if !is_prime(*p) || *e == 0 {
            return Err(Error::Factorization(format!("{p}^{e} is not a prime power")));
        }
    }
    Ok(())
}

/// `prod_{p^b || c} Sigma(inv(c/p^b) lambda, p^b)`, each factor by direct summation.
pub fn sigma_crt(lam: &RationalFunctionZ, fact: &Factorization) -> Result<SumValue> {
    crt_with(lam, fact, |l, _, _, pb| sigma_direct(l, pb))
}

fn crt_with(
    lam: &RationalFunctionZ,
    fact: &Factorization,
    local: impl Fn(&RationalFunctionZ, u64, u32, u64) -> Result<SumValue>,
) -> Result<SumValue> {
    check_factorization(fact)?;
    let c = fact.value();
    let mut value = Complex64::new(1.0, 0.0);
    let mut units = 1u64;
    for (p, e, pb) in fact.prime_powers() {
        let t = inv_mod((c / pb) % pb, pb).expect("coprime cofactor");
        let twisted = twist(lam, t, pb);
        let s = local(&twisted, p, e, pb)?;
        value *= s.value;
        units *= pb - s.excluded;
    }
    Ok(SumValue { value, modulus: c, excluded: c - units })
}

/// `t * lambda` with `t` reduced into `[0, m)`.
fn twist(lam: &RationalFunctionZ, t: u64, m: u64) -> RationalFunctionZ {
    let f1: Vec<i64> = lam
        .numerator()
        .iter()
        .map(|&a| mul_mod(crate::arith::modular::reduce_i128(a as i128, m), t, m) as i64)
        .collect();
    RationalFunctionZ::from_parts(f1, lam.denominator().to_vec())
}

/// Prime-power sum with its stationary-phase bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryValue {
    pub sum: SumValue,
    /// Stationary points `y` (mod `p^alpha`) that contributed.
    pub stationary_points: Vec<u64>,
    /// Stationary points where `lambda''(y)/2 = 0 mod p` (odd exponent only).
    pub degenerate: Vec<u64>,
}

/// Taylor coefficients `(lambda(y), lambda'(y), lambda''(y)/2) mod m`, or
/// `None` when `f2(y)` is not a unit.
fn taylor2(lam: &RationalFunctionZ, y: u64, m: u64) -> Option<(u64, u64, u64)> {
    let half_second = |f: &[i64]| -> Vec<i64> {
        f.iter().enumerate().skip(2).map(|(j, &a)| a * (j * (j - 1) / 2) as i64).collect()
    };
    let (f1, f2) = (lam.numerator(), lam.denominator());
    let a = [
        poly::eval_mod(f1, y, m),
        poly::eval_mod(&poly::derivative(f1), y, m),
        poly::eval_mod(&half_second(f1), y, m),
    ];
    let b = [
        poly::eval_mod(f2, y, m),
        poly::eval_mod(&poly::derivative(f2), y, m),
        poly::eval_mod(&half_second(f2), y, m),
    ];
    let inv = inv_mod(b[0], m)?;
    let sub = |x: u64, y: u64| (x + m - y % m) % m;
    let c0 = mul_mod(a[0], inv, m);
    let c1 = mul_mod(sub(a[1], mul_mod(c0, b[1], m)), inv, m);
    let c2 = mul_mod(sub(sub(a[2], mul_mod(c0, b[2], m)), mul_mod(c1, b[1], m)), inv, m);
    Some((c0, c1, c2))
}

/// `Sigma(lambda, p^beta)` for odd `p` and `2 <= beta <= 5` through the
/// stationary points of `lambda` modulo `p^alpha`, `alpha = floor(beta/2)`.
pub fn sigma_prime_power(lam: &RationalFunctionZ, p: u64, beta: u32) -> Result<StationaryValue> {
    if p == 2 || !is_prime(p) {
        return Err(crate::error::precondition("stationary phase needs an odd prime"));
    }
    if !(2..=5).contains(&beta) {
        return Err(crate::error::precondition("stationary phase is implemented for 2 <= beta <= 5"));
    }
    if lam.denominator().last().is_some_and(|&l| l.rem_euclid(p as i64) == 0) {
        return Err(crate::error::precondition("p divides the leading coefficient of the denominator"));
    }
    let c = p.pow(beta);
    let alpha = beta / 2;
    let pa = p.pow(alpha);
    let odd = beta % 2 == 1;
    let mut value = Complex64::new(0.0, 0.0);
    let mut stationary_points = Vec::new();
    let mut degenerate = Vec::new();
    for y in 0..pa {
        let Some((c0, c1, c2)) = taylor2(lam, y, c) else { continue };
        if c1 % pa != 0 {
            continue;
        }
        stationary_points.push(y);
        let phase = e_frac(c0, c);
        if odd {
            let mu = (c1 / pa) % p;
            let q2 = c2 % p;
            if q2 == 0 {
                degenerate.push(y);
            }
            let g: Complex64 = (0..p)
                .map(|z| e_frac((mul_mod(q2, mul_mod(z, z, p), p) + mul_mod(mu, z, p)) % p, p))
                .sum();
            value += phase * g;
        } else {
            value += phase;
        }
    }
    value *= pa as f64;
    let excluded = lam.pole_count_mod(p) * p.pow(beta - 1);
    Ok(StationaryValue { sum: SumValue { value, modulus: c, excluded }, stationary_points, degenerate })
}

/// Dispatches on `method`. `Stationary` factors `c` and uses stationary phase
/// on odd prime powers with `2 <= beta <= 5`, direct sums elsewhere.
pub fn sigma(lam: &RationalFunctionZ, c: u64, method: Method) -> Result<SumValue> {
    match method {
        Method::Direct => sigma_direct(lam, c),
        Method::Crt => sigma_crt(lam, &factorize(c)),
        Method::Stationary => crt_with(lam, &factorize(c), |l, p, e, pb| {
            if p != 2 && (2..=5).contains(&e) && l.denominator().last().is_some_and(|&v| v.rem_euclid(p as i64) != 0) {
                sigma_prime_power(l, p, e).map(|s| s.sum)
            } else {
                sigma_direct(l, pb)
            }
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(f1: &[i64], f2: &[i64]) -> RationalFunctionZ {
        RationalFunctionZ::new(f1.to_vec(), f2.to_vec()).unwrap()
    }

    #[test]
    fn direct_examples() {
        assert!(sigma_direct(&lam(&[0, 1], &[1]), 12).unwrap().value.norm() < 1e-12);
        let s = sigma_direct(&lam(&[0, 0, 1], &[1]), 9).unwrap();
        assert!((s.value - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        let p = 13;
        let kl = sigma_direct(&lam(&[1, 0, 1], &[0, 1]), p).unwrap();
        let t = crate::trace::kloosterman_point(2, p, 1) * (p as f64).sqrt();
        assert!((kl.value - t).norm() < 1e-10);
        assert_eq!(kl.excluded, 1);
    }

    #[test]
    fn crt_examples() {
        for (l, c) in [(lam(&[1], &[0, 1]), 15u64), (lam(&[0, 0, 1], &[1]), 36), (lam(&[3, 1, 2], &[1, 1]), 7)] {
            let d = sigma_direct(&l, c).unwrap();
            let m = sigma_crt(&l, &factorize(c)).unwrap();
            assert!((d.value - m.value).norm() < 1e-8 * c as f64, "{l} mod {c}");
            assert_eq!(d.excluded, m.excluded);
        }
        assert!(Factorization::from_pairs(vec![(4, 1)]).is_err());
    }

    #[test]
    fn stationary_examples() {
        let sq = lam(&[0, 0, 1], &[1]);
        let s2 = sigma_prime_power(&sq, 3, 2).unwrap();
        assert!((s2.sum.value - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        assert_eq!(s2.stationary_points, vec![0]);
        let s3 = sigma_prime_power(&sq, 3, 3).unwrap();
        assert!((s3.sum.value - Complex64::new(0.0, 3.0 * 3f64.sqrt())).norm() < 1e-12);
        let d = sigma_direct(&sq, 27).unwrap();
        assert!((s3.sum.value - d.value).norm() < 1e-9);
        assert!(sigma_prime_power(&sq, 2, 3).is_err());
        assert!(sigma_prime_power(&sq, 3, 6).is_err());
    }

    #[test]
    fn stationary_matches_direct_on_rational_functions() {
        let cases = [
            (lam(&[1, 2, 0, 1], &[1]), 5u64, 3u32),
            (lam(&[1, 0, 1], &[0, 1]), 7, 2),
            (lam(&[1, 0, 1], &[0, 1]), 7, 3),
            (lam(&[2, -1, 3], &[1, 3]), 11, 4),
            (lam(&[0, 0, 0, 1], &[1]), 3, 5),
        ];
        for (l, p, b) in cases {
            let s = sigma_prime_power(&l, p, b).unwrap();
            let d = sigma_direct(&l, p.pow(b)).unwrap();
            assert!((s.sum.value - d.value).norm() < 1e-8 * d.modulus as f64, "{l} p={p} b={b}");
            assert_eq!(s.sum.excluded, d.excluded);
        }
        let c = 3u64.pow(3) * 5 * 49;
        let l = lam(&[1, 1, 0, 2], &[1, 0, 1]);
        let a = sigma(&l, c, Method::Stationary).unwrap();
        let b = sigma(&l, c, Method::Direct).unwrap();
        assert!((a.value - b.value).norm() < 1e-8 * c as f64);
    }
}
