//! Linear sieve functions and the congruence sum `A_d`.

use serde::Serialize;

use crate::arith::checks::{dual_sum, poisson_min_terms, residue_class_sum};
use crate::arith::modular::{gcd, inv_mod, mul_mod};
use crate::arith::Window;
use crate::error::{domain, precondition};
use crate::quadratic::roots_minus_one;
use crate::rational::Rational;
use crate::Result;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// `2 e^gamma`.
pub fn two_e_gamma() -> f64 {
    2.0 * EULER_GAMMA.exp()
}

/// Tabulated `F` and `f` on the grid `1, 1 + h, ..., s_max`.
#[derive(Debug, Clone, Serialize)]
pub struct SieveTable {
    pub s_max: f64,
    pub h: f64,
    #[serde(rename = "F_values")]
    pub big_f: Vec<f64>,
    #[serde(rename = "f_values")]
    pub small_f: Vec<f64>,
    #[serde(skip)]
    per_unit: usize,
}

pub const MAX_S: f64 = 20.0;
pub const COARSEST_STEP: f64 = 1.0 / 64.0;

pub fn build_table(s_max: f64, h: f64) -> Result<SieveTable> {
    if !(h > 0.0) || h > COARSEST_STEP {
        return Err(precondition(format!("step {h} is coarser than 1/64")));
    }
    if !(3.0..=MAX_S).contains(&s_max) {
        return Err(precondition(format!("s_max = {s_max} outside [3, 20]")));
    }
    let per_unit = (1.0 / h).round() as usize;
    if per_unit % 2 != 0 || ((per_unit as f64) * h - 1.0).abs() > 1e-12 {
        return Err(precondition("1/h must be an even integer so that integers sit on the grid"));
    }
    let h = 1.0 / per_unit as f64;
    let n = ((s_max - 1.0) * per_unit as f64).ceil() as usize;
    let s_at = |i: usize| 1.0 + i as f64 * h;
    let c = two_e_gamma();

    // sF and sf, integrated from s = 2 (index per_unit)
    let mut sf_big = vec![0.0; n + 1];
    let mut sf_small = vec![0.0; n + 1];
    let mut big_f = vec![0.0; n + 1];
    let mut small_f = vec![0.0; n + 1];
    for i in 0..=per_unit.min(n) {
        big_f[i] = c / s_at(i);
        sf_big[i] = c;
    }
    let start = per_unit;
    // integrands at index i: F(s_i - 1) and f(s_i - 1), known once index i - per_unit is filled
    for i in start + 1..=n {
        let k = i - start;
        let (ib, is) = if k % 2 == 0 {
            let simpson = |v: &[f64]| h / 3.0 * (v[i - 2 - per_unit] + 4.0 * v[i - 1 - per_unit] + v[i - per_unit]);
            (sf_big[i - 2] + simpson(&small_f), sf_small[i - 2] + simpson(&big_f))
        } else {
            // one step [i-1, i] from the parabola through i-1, i, i+1; these stay inside one Simpson panel
            let j = i - per_unit;
            let one = |v: &[f64]| h / 12.0 * (5.0 * v[j - 1] + 8.0 * v[j] - v[j + 1]);
            (sf_big[i - 1] + one(&small_f), sf_small[i - 1] + one(&big_f))
        };
        sf_big[i] = ib;
        sf_small[i] = is;
        big_f[i] = ib / s_at(i);
        small_f[i] = is / s_at(i);
    }
    Ok(SieveTable { s_max: s_at(n), h, big_f, small_f, per_unit })
}

impl SieveTable {
    pub fn grid(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.big_f.len()).map(move |i| (1.0 + i as f64 * self.h, self.big_f[i], self.small_f[i]))
    }

    fn lookup(&self, v: &[f64], s: f64) -> Result<f64> {
        if s > self.s_max + 1e-12 {
            return Err(domain(format!("s = {s} beyond the table end {}", self.s_max)));
        }
        let x = (s - 1.0) * self.per_unit as f64;
        let i = x.round();
        if (x - i).abs() < 1e-9 {
            return Ok(v[i as usize]);
        }
        // cubic through four grid points within the same unit interval
        let unit = (s.floor() as usize - 1) * self.per_unit;
        let base = (x.floor() as usize).saturating_sub(1).clamp(unit, unit + self.per_unit - 3);
        let base = base.min(v.len() - 4);
        let mut acc = 0.0;
        for a in 0..4 {
            let mut w = 1.0;
            for b in 0..4 {
                if a != b {
                    w *= (x - (base + b) as f64) / (a as f64 - b as f64);
                }
            }
            acc += w * v[base + a];
        }
        Ok(acc)
    }

    /// Upper sieve function.
    pub fn upper(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(domain("F needs s > 0"));
        }
        if s <= 3.0 {
            return Ok(two_e_gamma() / s);
        }
        self.lookup(&self.big_f, s)
    }

    /// Lower sieve function.
    pub fn lower(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(domain("f needs s > 0"));
        }
        if s <= 2.0 {
            return Ok(0.0);
        }
        self.lookup(&self.small_f, s)
    }
}

/// Brun-Titchmarsh constant `2/gamma(theta)` as a float.
pub fn bt_upper_constant(theta: &Rational) -> Result<f64> {
    Ok(crate::rational::to_f64(&crate::opt::bt_constant(theta)?))
}

#[derive(Debug, Clone, Serialize)]
pub struct CongruenceSum {
    pub x: f64,
    pub d: u64,
    pub ell: u64,
    pub rho: usize,
    pub a_d: f64,
    pub main: f64,
    pub remainder: f64,
    pub poisson: f64,
    pub terms: u64,
    pub tail_bound: f64,
    pub pass: bool,
}

pub fn congruence_sum_check(x: f64, d: u64, ell: u64, g: Window) -> Result<CongruenceSum> {
    if d == 0 || ell == 0 || gcd(d, ell) != 1 {
        return Err(precondition("congruence_sum_check needs d, ell >= 1 with gcd(d, ell) = 1"));
    }
    if !(1.0..=1e7).contains(&x) || d.saturating_mul(ell) > 1_000_000_000 {
        return Err(precondition("congruence_sum_check needs 1 <= X <= 10^7 and d*ell <= 10^9"));
    }
    let roots = roots_minus_one(ell);
    let q = d * ell;
    let terms = poisson_min_terms(x, q);
    let scale = x / q as f64;
    let mut a_d = 0.0;
    let mut poisson = 0.0;
    for &a in &roots.roots {
        // n = 0 mod d, n = a mod ell
        let b = crt_zero(d, ell, a);
        a_d += residue_class_sum(g, x, q, b);
        poisson += dual_sum(g, x, q, b, terms);
    }
    let rho = roots.rho();
    let main = g.mass() * rho as f64 * scale;
    let tail_bound = rho as f64 * scale * g.tail_bound(terms, scale);
    let slack = 1e-11 * (a_d.abs() + scale * rho as f64);
    let pass = (a_d - poisson).abs() <= tail_bound + slack;
    Ok(CongruenceSum { x, d, ell, rho, a_d, main, remainder: a_d - main, poisson, terms, tail_bound, pass })
}

// n mod d*ell with n = 0 mod d and n = a mod ell
fn crt_zero(d: u64, ell: u64, a: u64) -> u64 {
    if ell == 1 {
        return 0;
    }
    let inv = inv_mod(d % ell, ell).expect("coprime");
    d * mul_mod(a % ell, inv, ell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse;

    fn table() -> SieveTable {
        build_table(12.0, 1.0 / 1024.0).unwrap()
    }

    #[test]
    fn seeded_values() {
        let t = table();
        assert!((t.upper(1.5).unwrap() - 2.374763).abs() < 1e-6);
        assert!((t.upper(3.0).unwrap() - 1.187381).abs() < 1e-6);
        let f3 = two_e_gamma() * 2f64.ln() / 3.0;
        assert!((t.lower(3.0).unwrap() - f3).abs() < 1e-10);
    }

    #[test]
    fn closed_forms() {
        let t = table();
        let c = two_e_gamma();
        for (s, big, small) in t.grid() {
            if s <= 3.0 {
                assert!((big - c / s).abs() < 1e-10, "F({s})");
            }
            if s > 2.0 && s <= 4.0 {
                assert!((small - c * (s - 1.0).ln() / s).abs() < 1e-10, "f({s})");
            }
        }
    }

    #[test]
    fn limits_and_monotone() {
        let t = table();
        assert!((t.upper(10.0).unwrap() - 1.0).abs() < 1e-3);
        assert!((t.lower(10.0).unwrap() - 1.0).abs() < 1e-3);
        let pts: Vec<_> = t.grid().filter(|g| g.0 >= 2.0).collect();
        for w in pts.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-12);
            assert!(w[1].2 >= w[0].2 - 1e-12);
            assert!(w[1].2 <= 1.0 + 1e-12 && w[1].1 >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn interpolation_between_nodes() {
        let t = table();
        let c = two_e_gamma();
        let s = 3.3337;
        assert!((t.lower(s).unwrap() - c * (s - 1.0).ln() / s).abs() < 1e-10);
    }

    #[test]
    fn step_rejected() {
        assert!(build_table(10.0, 1.0 / 32.0).is_err());
        assert!(build_table(30.0, 1.0 / 1024.0).is_err());
    }

    #[test]
    fn bt() {
        assert!((bt_upper_constant(&parse("1/2").unwrap()).unwrap() - 8.0 / 3.0).abs() < 1e-15);
        assert!((bt_upper_constant(&parse("64/97").unwrap()).unwrap() - 388.0 / 101.0).abs() < 1e-14);
    }

    #[test]
    fn congruence_sums() {
        let one = congruence_sum_check(1e5, 3, 1, Window::Bump).unwrap();
        assert_eq!(one.rho, 1);
        assert!(one.pass);
        let seven = congruence_sum_check(1e5, 3, 7, Window::Bump).unwrap();
        assert_eq!((seven.a_d, seven.main), (0.0, 0.0));
        let r = congruence_sum_check(1e5, 3, 65, Window::Plateau).unwrap();
        assert_eq!(r.rho, 4);
        assert!(r.pass);
        assert!((r.a_d - r.poisson).abs() < 1e-6 * 1e5 / 195.0);
        assert!(congruence_sum_check(1e5, 5, 65, Window::Bump).is_err());
    }
}
