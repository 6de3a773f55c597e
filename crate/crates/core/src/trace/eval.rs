use num_complex::Complex64;

use super::spec::{CompositeTraceSpec, TraceKind, TraceSpec};
use crate::arith::{e_frac, inv_mod, mul_mod, poly, primitive_root, PhaseTable};
use crate::{Error, Result};

fn check_spec(spec: &TraceSpec, p: u64) -> Result<()> {
    match &spec.kind {
        TraceKind::AdditiveRational { f2, .. } if poly::is_zero_mod(f2, p) => Err(
            crate::error::precondition(format!("denominator vanishes identically mod {p}")),
        ),
        TraceKind::MultiplicativeChar { .. } if p == 2 => {
            Err(crate::error::precondition("multiplicative characters need an odd prime"))
        }
        TraceKind::HyperKloosterman { k } if *k == 0 => {
            Err(crate::error::precondition("Kloosterman order must be at least 1"))
        }
        TraceKind::Table { values } if values.len() as u64 != p => {
            Err(Error::LengthMismatch { expected: p as usize, got: values.len() })
        }
        _ => Ok(()),
    }
}

/// `K_p(x)` for a single residue.
pub fn eval_trace(spec: &TraceSpec, p: u64, x: u64) -> Result<Complex64> {
    check_spec(spec, p)?;
    let x = x % p;
    Ok(match &spec.kind {
        TraceKind::AdditiveRational { f1, f2 } => additive_at(f1, f2, p, x),
        TraceKind::MultiplicativeChar { r, f } => {
            let v = poly::eval_mod(f, x, p);
            if v == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                let ind = discrete_log(v, primitive_root(p), p);
                char_phase(*r, ind, p)
            }
        }
        TraceKind::HyperKloosterman { k } => kloosterman_point(*k, p, x),
        TraceKind::Table { values } => values[x as usize],
    })
}

/// All values `K_p(0), ..., K_p(p-1)`.
pub fn trace_table(spec: &TraceSpec, p: u64) -> Result<Vec<Complex64>> {
    check_spec(spec, p)?;
    Ok(match &spec.kind {
        TraceKind::AdditiveRational { f1, f2 } => (0..p).map(|x| additive_at(f1, f2, p, x)).collect(),
        TraceKind::MultiplicativeChar { r, f } => {
            let ind = index_table(p);
            (0..p)
                .map(|x| {
                    let v = poly::eval_mod(f, x, p);
                    if v == 0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        char_phase(*r, ind[v as usize], p)
                    }
                })
                .collect()
        }
        TraceKind::HyperKloosterman { k } => kloosterman_table(*k, p),
        TraceKind::Table { values } => values.clone(),
    })
}

fn additive_at(f1: &[i64], f2: &[i64], p: u64, x: u64) -> Complex64 {
    let den = poly::eval_mod(f2, x, p);
    match inv_mod(den, p) {
        Some(inv) => e_frac(mul_mod(poly::eval_mod(f1, x, p), inv, p), p),
        None => Complex64::new(0.0, 0.0),
    }
}

fn char_phase(r: i64, ind: u64, p: u64) -> Complex64 {
    let m = p - 1;
    let r = r.rem_euclid(m as i64) as u64;
    e_frac(mul_mod(r, ind, m), m)
}

/// `ind[g^i mod p] = i` for the smallest primitive root `g`.
pub fn index_table(p: u64) -> Vec<u64> {
    let g = primitive_root(p);
    let mut ind = vec![0u64; p as usize];
    let mut v = 1u64;
    for i in 0..p - 1 {
        ind[v as usize] = i;
        v = mul_mod(v, g, p);
    }
    ind
}

fn discrete_log(v: u64, g: u64, p: u64) -> u64 {
    let mut x = 1u64;
    for i in 0..p - 1 {
        if x == v {
            return i;
        }
        x = mul_mod(x, g, p);
    }
    unreachable!("{v} is not a power of the primitive root mod {p}")
}

fn kl_norm(k: u32, p: u64) -> f64 {
    (p as f64).powf(-((k - 1) as f64) / 2.0)
}

fn kl_zero(k: u32, p: u64) -> Complex64 {
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    Complex64::new(sign * kl_norm(k, p), 0.0)
}

/// `Kl_k(x, p)` by `k - 1` nested loops over `F_p^*`.
pub fn kloosterman_point(k: u32, p: u64, x: u64) -> Complex64 {
    let x = x % p;
    if k == 1 {
        return e_frac(x, p);
    }
    if x == 0 {
        return kl_zero(k, p);
    }
    let phases = PhaseTable::new(p);
    let mut acc = Complex64::new(0.0, 0.0);
    kl_loops(k - 1, p, x, 1, 0, &phases, &mut acc);
    acc * kl_norm(k, p)
}

fn kl_loops(left: u32, p: u64, x: u64, prod: u64, sum: u64, phases: &PhaseTable, acc: &mut Complex64) {
    if left == 0 {
        let last = mul_mod(x, inv_mod(prod, p).expect("unit"), p);
        *acc += phases.get((sum + last) % p);
        return;
    }
    for y in 1..p {
        kl_loops(left - 1, p, x, mul_mod(prod, y, p), (sum + y) % p, phases, acc);
    }
}

/// Every `Kl_k(x, p)` via `S_k(x) = sum_{y != 0} S_{k-1}(x / y) e(y/p)`.
pub fn kloosterman_table(k: u32, p: u64) -> Vec<Complex64> {
    let phases = PhaseTable::new(p);
    let mut s: Vec<Complex64> = (0..p).map(|x| phases.get(x)).collect();
    if k == 1 {
        return s;
    }
    let mut inv = vec![0u64; p as usize];
    for y in 1..p {
        inv[y as usize] = inv_mod(y, p).expect("unit");
    }
    for _ in 2..=k {
        let mut next = vec![Complex64::new(0.0, 0.0); p as usize];
        for (x, slot) in next.iter_mut().enumerate().skip(1) {
            let mut acc = Complex64::new(0.0, 0.0);
            for y in 1..p {
                acc += s[mul_mod(x as u64, inv[y as usize], p) as usize] * phases.get(y);
            }
            *slot = acc;
        }
        s = next;
    }
    let norm = kl_norm(k, p);
    s.iter_mut().for_each(|z| *z *= norm);
    s[0] = kl_zero(k, p);
    s
}

/// `K(n) = prod_p K_p(n mod p)`; `1` for the empty product.
pub fn eval_composite(spec: &CompositeTraceSpec, n: i64) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for (p, s) in spec.parts() {
        acc *= eval_trace(s, p, n.rem_euclid(p as i64) as u64)?;
    }
    Ok(acc)
}

/// Per-prime value tables of a composite spec.
#[derive(Debug, Clone)]
pub struct CompositeTables {
    pub(crate) tables: Vec<(u64, Vec<Complex64>)>,
}

impl CompositeTables {
    pub fn build(spec: &CompositeTraceSpec) -> Result<Self> {
        let tables = spec.parts().map(|(p, s)| Ok((p, trace_table(s, p)?))).collect::<Result<_>>()?;
        Ok(Self { tables })
    }

    pub fn modulus(&self) -> u64 {
        self.tables.iter().map(|t| t.0).product()
    }

    pub fn at(&self, n: i64) -> Complex64 {
        self.tables
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, (p, t)| acc * t[n.rem_euclid(*p as i64) as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn kloosterman_examples() {
        let k1 = TraceSpec::kloosterman(1);
        assert!(close(eval_trace(&k1, 7, 3).unwrap(), e_frac(3, 7)));
        let k2 = TraceSpec::kloosterman(2);
        assert!(close(eval_trace(&k2, 5, 0).unwrap(), Complex64::new(-1.0 / 5f64.sqrt(), 0.0)));
        let v = eval_trace(&k2, 5, 1).unwrap();
        let expect = (2.0 + 2.0 * (4.0 * std::f64::consts::PI / 5.0).cos()) / 5f64.sqrt();
        assert!((v.re - expect).abs() < 1e-12 && v.im.abs() < 1e-12);
        assert!((v.re - 0.17082).abs() < 1e-5);
    }

    #[test]
    fn tables_match_points() {
        for p in [5u64, 7, 11, 13] {
            for k in 1..=3 {
                let t = kloosterman_table(k, p);
                for x in 0..p {
                    assert!(close(t[x as usize], kloosterman_point(k, p, x)), "k={k} p={p} x={x}");
                }
            }
            let m = TraceSpec::multiplicative(3, vec![1, 0, 1]);
            let t = trace_table(&m, p).unwrap();
            for x in 0..p {
                assert!(close(t[x as usize], eval_trace(&m, p, x).unwrap()));
            }
        }
    }

    #[test]
    fn deligne_bound() {
        for p in (3..200u64).filter(|&p| crate::arith::is_prime(p)) {
            for k in 2..=3 {
                let t = kloosterman_table(k, p);
                assert!(t[1..].iter().all(|z| z.norm() <= k as f64 + 1e-9), "k={k} p={p}");
            }
        }
    }

    #[test]
    fn characters() {
        // Legendre symbol mod 7 through r = (p-1)/2
        let leg = TraceSpec::multiplicative(3, vec![0, 1]);
        let t = trace_table(&leg, 7).unwrap();
        let expect = [0.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0];
        for x in 0..7 {
            assert!(close(t[x], Complex64::new(expect[x], 0.0)), "x={x}");
        }
        assert!(eval_trace(&leg, 2, 1).is_err());
        let inv = TraceSpec::additive(vec![1], vec![0, 1]);
        assert_eq!(eval_trace(&inv, 7, 0).unwrap(), Complex64::new(0.0, 0.0));
        assert!(close(eval_trace(&inv, 7, 3).unwrap(), e_frac(5, 7)));
        assert!(eval_trace(&TraceSpec::additive(vec![1], vec![7]), 7, 1).is_err());
    }

    #[test]
    fn composite_products() {
        assert_eq!(eval_composite(&CompositeTraceSpec::trivial(), 12).unwrap(), Complex64::new(1.0, 0.0));
        let kl = TraceSpec::kloosterman(2);
        let c = CompositeTraceSpec::uniform(15, &kl).unwrap();
        for n in -20..40i64 {
            let direct = eval_trace(&kl, 3, n.rem_euclid(3) as u64).unwrap()
                * eval_trace(&kl, 5, n.rem_euclid(5) as u64).unwrap();
            assert!(close(eval_composite(&c, n).unwrap(), direct));
        }
        let inv = CompositeTraceSpec::inverse_phase(105, 4).unwrap();
        let tables = CompositeTables::build(&inv).unwrap();
        for n in 1..105i64 {
            let expect = match inv_mod(n as u64, 105) {
                Some(i) => e_frac(4 * i % 105, 105),
                None => Complex64::new(0.0, 0.0),
            };
            assert!(close(tables.at(n), expect), "n={n}");
        }
    }
}
