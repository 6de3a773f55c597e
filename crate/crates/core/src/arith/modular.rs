//! Overflow-safe modular arithmetic on `u64`.
//!
//! Products widen to `u128`, so every routine is exact for moduli below
//! `2^63`; the deterministic Miller-Rabin base set covers all of `u64`.

use std::f64::consts::TAU;

use num_complex::Complex64;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduces a signed value into `[0, m)`.
#[inline]
pub fn reduce_i128(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m`, `None` when `gcd(a, m) != 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| reduce_i128(t0, m))
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest primitive root of the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    assert!(is_prime(p), "primitive_root needs a prime, got {p}");
    if p == 2 {
        return 1;
    }
    let phi = p - 1;
    let primes: Vec<u64> = super::factor::factorize(phi)
        .pairs()
        .iter()
        .map(|&(q, _)| q)
        .collect();
    (2..p)
        .find(|&g| primes.iter().all(|&q| pow_mod(g, phi / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// A square root of `-1` modulo the prime `p`, computed as `g^((p-1)/4)` for
/// the smallest primitive root `g`. `None` unless `p == 2` or `p = 1 mod 4`.
pub fn sqrt_minus_one(p: u64) -> Option<u64> {
    match p {
        2 => Some(1),
        _ if p % 4 == 1 => Some(pow_mod(primitive_root(p), (p - 1) / 4, p)),
        _ => None,
    }
}

/// `e(a/q) = exp(2 pi i a/q)`, with `a` reduced before the float conversion.
#[inline]
pub fn e_frac(a: u64, q: u64) -> Complex64 {
    let r = a % q;
    // fold into [-1/2, 1/2) so the angle stays small
    let t = if 2 * r >= q {
        -((q - r) as f64) / q as f64
    } else {
        r as f64 / q as f64
    };
    let (s, c) = (TAU * t).sin_cos();
    Complex64::new(c, s)
}

/// `e(x)` for a real argument already reduced by the caller.
#[inline]
pub fn e_real(x: f64) -> Complex64 {
    let t = x - x.round();
    let (s, c) = (TAU * t).sin_cos();
    Complex64::new(c, s)
}

/// Precomputed `e(j/q)` for `0 <= j < q`.
#[derive(Debug, Clone)]
pub struct PhaseTable {
    q: u64,
    values: Vec<Complex64>,
}

impl PhaseTable {
    pub fn new(q: u64) -> Self {
        let values = (0..q).map(|j| e_frac(j, q)).collect();
        Self { q, values }
    }

    #[inline]
    pub fn get(&self, a: u64) -> Complex64 {
        self.values[(a % self.q) as usize]
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }
}
