//! Integer factorization and the multiplicative invariants built on it:
//! `omega`, `tau_k`, the squarefree/squarefull split `n = n_flat * n_sharp`,
//! `Xi(n)` (prime powers with exponent at least 4) and `(d, r^inf)`.

use super::modular::{gcd, is_prime, mul_mod};

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization with ascending primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from `(prime, exponent)` pairs, checking that the
    /// primes are prime, distinct and the exponents positive.
    pub fn from_pairs(mut pairs: Vec<(u64, u32)>) -> crate::Result<Self> {
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(crate::Error::Factorization(format!("repeated prime {}", w[0].0)));
            }
        }
        if let Some(&(p, e)) = pairs.iter().find(|&&(p, e)| e == 0 || !is_prime(p)) {
            return Err(crate::Error::Factorization(format!("bad factor {p}^{e}")));
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn value(&self) -> u64 {
        self.pairs.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    pub fn prime_powers(&self) -> impl Iterator<Item = (u64, u32, u64)> + '_ {
        self.pairs.iter().map(|&(p, e)| (p, e, p.pow(e)))
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, e)| e == 1)
    }
}

/// Factorizes `n >= 1`: trial division up to `10^6`, then Miller-Rabin on the
/// cofactor and Pollard rho (Brent) to split composites.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize(0)");
    let mut pairs = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    };
    push(2, &mut m);
    push(3, &mut m);
    let mut p = 5;
    while p <= TRIAL_LIMIT && p * p <= m {
        push(p, &mut m);
        push(p + 2, &mut m);
        p += 6;
    }
    if m > 1 {
        let mut rest = Vec::new();
        split_large(m, &mut rest);
        rest.sort_unstable();
        for q in rest {
            match pairs.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => pairs.push((q, 1)),
            }
        }
    }
    pairs.sort_unstable();
    Factorization { pairs }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let (mut x, mut g, mut ys) = (0u64, 1u64, 0u64);
        const BLOCK: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BLOCK.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BLOCK;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

/// Number of distinct prime factors.
pub fn omega(n: u64) -> u32 {
    factorize(n).pairs.len() as u32
}

/// Number of divisors.
pub fn tau(n: u64) -> u64 {
    tau_k(n, 2)
}

/// Number of ordered ways to write `n` as a product of `k` positive integers.
pub fn tau_k(n: u64, k: u32) -> u64 {
    assert!(k >= 1);
    factorize(n)
        .pairs
        .iter()
        .map(|&(_, e)| binomial(e as u64 + k as u64 - 1, k as u64 - 1))
        .product()
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// All positive divisors in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, e) in factorize(n).pairs() {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// `(n_flat, n_sharp)`: the product of primes dividing `n` exactly once, and
/// the product of the prime powers with exponent at least 2.
pub fn split_flat_sharp(n: u64) -> (u64, u64) {
    flat_sharp_of(&factorize(n))
}

pub fn flat_sharp_of(f: &Factorization) -> (u64, u64) {
    f.prime_powers().fold((1, 1), |(flat, sharp), (_, e, pe)| {
        if e == 1 {
            (flat * pe, sharp)
        } else {
            (flat, sharp * pe)
        }
    })
}

/// `Xi(n)`: product of the prime powers `p^v || n` with `v >= 4`.
pub fn xi(n: u64) -> u64 {
    xi_of(&factorize(n))
}

pub fn xi_of(f: &Factorization) -> u64 {
    f.prime_powers().filter(|&(_, e, _)| e >= 4).map(|(_, _, pe)| pe).product()
}

/// `c_ddagger`: product of `p` over `p^2 || c` times product of `p` over `p^3 || c`.
pub fn c_ddagger_of(f: &Factorization) -> u64 {
    f.pairs().iter().filter(|&&(_, e)| e == 2 || e == 3).map(|&(p, _)| p).product()
}

/// `(d, r^inf)`: the largest divisor of `d` built from primes dividing `r`.
pub fn d_infinity(d: u64, r: u64) -> u64 {
    assert!(d >= 1 && r >= 1);
    let mut rest = d;
    loop {
        let g = gcd(rest, r);
        if g == 1 {
            return d / rest;
        }
        while rest % g == 0 {
            rest /= g;
        }
    }
}

/// Smallest-prime-factor table for bulk factorization of `1..=limit`.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let ip = i * p as usize;
                if p > si || ip > limit {
                    break;
                }
                spf[ip] = p;
            }
        }
        Self { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    pub fn factorize(&self, mut n: usize) -> Factorization {
        assert!(n >= 1 && n <= self.limit());
        let mut pairs: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            pairs.push((p as u64, e));
        }
        Factorization { pairs }
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_sharp_examples() {
        assert_eq!(split_flat_sharp(12), (3, 4));
        assert_eq!(split_flat_sharp(720), (5, 144));
        assert_eq!(split_flat_sharp(30), (30, 1));
        assert_eq!(split_flat_sharp(1), (1, 1));
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi(16), 16);
        assert_eq!(xi(8), 1);
        assert_eq!(xi(720), 16);
        assert_eq!(xi(288), 32);
        assert_eq!(xi(1), 1);
    }

    #[test]
    fn d_infinity_examples() {
        assert_eq!(d_infinity(12, 2), 4);
        assert_eq!(d_infinity(12, 6), 12);
        assert_eq!(d_infinity(5, 2), 1);
        assert_eq!(d_infinity(72, 10), 8);
    }

    #[test]
    fn large_factorizations() {
        let n = 1_000_003u64 * 999_983;
        assert_eq!(factorize(n).pairs(), &[(999_983, 1), (1_000_003, 1)]);
        let n = 2u64.pow(5) * 3 * 1_000_000_007;
        assert_eq!(factorize(n).pairs(), &[(2, 5), (3, 1), (1_000_000_007, 1)]);
        let n = 4_294_967_291u64 * 4_294_967_279;
        assert_eq!(factorize(n).value(), n);
        assert_eq!(factorize(n).pairs().len(), 2);
    }

    #[test]
    fn divisor_functions_against_enumeration() {
        for n in 1..=2000u64 {
            let brute: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            assert_eq!(divisors(n), brute);
            assert_eq!(tau(n), brute.len() as u64);
            let tau3: u64 = brute.iter().map(|&d| tau(n / d)).sum();
            assert_eq!(tau_k(n, 3), tau3);
            let distinct = brute.iter().filter(|&&d| d > 1 && is_prime(d)).count();
            assert_eq!(omega(n) as usize, distinct);
        }
    }

    #[test]
    fn sieve_matches_direct() {
        let sieve = SpfSieve::new(10_000);
        for n in 1..=10_000 {
            assert_eq!(sieve.factorize(n), factorize(n as u64));
        }
    }

    #[test]
    fn from_pairs_validation() {
        assert!(Factorization::from_pairs(vec![(3, 1), (5, 1)]).is_ok());
        assert!(Factorization::from_pairs(vec![(4, 1)]).is_err());
        assert!(Factorization::from_pairs(vec![(3, 1), (3, 2)]).is_err());
        assert!(Factorization::from_pairs(vec![(3, 0)]).is_err());
    }
}
