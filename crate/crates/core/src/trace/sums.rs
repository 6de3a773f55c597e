use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::eval::CompositeTables;
use super::spec::CompositeTraceSpec;
use crate::pairs::ExponentTriple;
use crate::rational::to_f64;
use crate::Result;

/// Summands per block; the block layout depends only on the range, so the
/// result does not depend on the number of workers.
const BLOCK: u64 = 1 << 14;

/// Worker count from `VDC_THREADS`, if set to a positive integer.
pub fn env_threads() -> Option<usize> {
    std::env::var("VDC_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// `sum_{M < n <= M + N} K(n)` using `VDC_THREADS` workers (or rayon's default).
pub fn incomplete_sum(spec: &CompositeTraceSpec, m: i64, n: u64) -> Result<Complex64> {
    incomplete_sum_threads(spec, m, n, env_threads())
}

pub fn incomplete_sum_threads(
    spec: &CompositeTraceSpec,
    m: i64,
    n: u64,
    threads: Option<usize>,
) -> Result<Complex64> {
    let tables = CompositeTables::build(spec)?;
    Ok(sum_tables(&tables, m, n, threads))
}

pub(crate) fn sum_tables(tables: &CompositeTables, m: i64, n: u64, threads: Option<usize>) -> Complex64 {
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let blocks = n.div_ceil(BLOCK);
    let run = || -> Vec<Complex64> {
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let start = m + 1 + (b * BLOCK) as i64;
                let len = BLOCK.min(n - b * BLOCK);
                block_sum(tables, start, len)
            })
            .collect()
    };
    let partial = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map(|pool| pool.install(run))
            .unwrap_or_else(|_| run()),
        None => run(),
    };
    tree_sum(&partial)
}

fn block_sum(tables: &CompositeTables, start: i64, len: u64) -> Complex64 {
    let t = &tables.tables;
    let mut res: Vec<usize> = t.iter().map(|(p, _)| start.rem_euclid(*p as i64) as usize).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for _ in 0..len {
        let mut v = Complex64::new(1.0, 0.0);
        for (r, (p, tab)) in res.iter_mut().zip(t) {
            v *= tab[*r];
            *r += 1;
            if *r as u64 == *p {
                *r = 0;
            }
        }
        acc += v;
    }
    acc
}

/// Fixed-topology pairwise reduction.
fn tree_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => v[0],
        n => tree_sum(&v[..n / 2]) + tree_sum(&v[n / 2..]),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub length: u64,
    /// `(q/N)^kappa N^lambda`.
    pub scale: f64,
    pub max_abs: f64,
    pub worst_shift: i64,
    pub max_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub modulus: u64,
    pub pair: ExponentTriple,
    pub shifts: usize,
    pub rows: Vec<BoundRow>,
    pub max_ratio: f64,
}

pub const SHIFTS: usize = 32;

/// Max of `|S(M, N)| / ((q/N)^kappa N^lambda)` over the shifts `M = i q / 32`.
pub fn empirical_pair_check(spec: &CompositeTraceSpec, t: &ExponentTriple, lengths: &[u64]) -> Result<BoundReport> {
    let tables = CompositeTables::build(spec)?;
    let q = tables.modulus();
    let (k, l) = (to_f64(&t.kappa), to_f64(&t.lambda));
    let threads = env_threads();
    let mut rows = Vec::with_capacity(lengths.len());
    for &n in lengths {
        if n == 0 {
            return Err(crate::error::precondition("interval lengths must be positive"));
        }
        let nf = n as f64;
        let scale = (q as f64 / nf).powf(k) * nf.powf(l);
        let mut max_abs = 0.0;
        let mut worst_shift = 0;
        for i in 0..SHIFTS as u64 {
            let m = (i * q / SHIFTS as u64) as i64;
            let s = sum_tables(&tables, m, n, threads).norm();
            if s > max_abs {
                max_abs = s;
                worst_shift = m;
            }
        }
        rows.push(BoundRow { length: n, scale, max_abs, worst_shift, max_ratio: max_abs / scale });
    }
    let max_ratio = rows.iter().map(|r| r.max_ratio).fold(0.0, f64::max);
    Ok(BoundReport { modulus: q, pair: t.clone(), shifts: SHIFTS, rows, max_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{trace_table, TraceSpec};

    #[test]
    fn trivial_and_orthogonal() {
        let one = CompositeTraceSpec::trivial();
        assert_eq!(incomplete_sum(&one, 5, 10).unwrap(), Complex64::new(10.0, 0.0));
        let q = 3 * 5 * 7u64;
        let lin = CompositeTraceSpec::additive_over(q, 2, &[0, 1], &[1]).unwrap();
        assert!(incomplete_sum(&lin, -4, q).unwrap().norm() < 1e-10);
    }

    #[test]
    fn full_period_factorises() {
        let spec = CompositeTraceSpec::parse("q=3*5*7;3=kloo:k=2;5=mult:r=1;f=1,0,1;7=addrat:f1=1,1;f2=0,1").unwrap();
        let full = incomplete_sum(&spec, 11, 105).unwrap();
        let mut prod = Complex64::new(1.0, 0.0);
        for (p, s) in spec.parts() {
            prod *= trace_table(s, p).unwrap().iter().sum::<Complex64>();
        }
        assert!((full - prod).norm() < 1e-10);
    }

    #[test]
    fn deterministic_across_workers() {
        let spec = CompositeTraceSpec::uniform(3 * 5 * 7 * 11 * 13, &TraceSpec::kloosterman(2)).unwrap();
        let a = incomplete_sum_threads(&spec, 17, 300_001, Some(1)).unwrap();
        let b = incomplete_sum_threads(&spec, 17, 300_001, Some(4)).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn constant_function_ratio() {
        let short = CompositeTraceSpec::uniform(15, &TraceSpec::table(vec![Complex64::new(1.0, 0.0); 3]))
            .unwrap();
        assert!(matches!(incomplete_sum(&short, 0, 1), Err(crate::Error::LengthMismatch { .. })));
        let ones = CompositeTraceSpec::new(vec![
            (3, TraceSpec::table(vec![Complex64::new(1.0, 0.0); 3])),
            (5, TraceSpec::table(vec![Complex64::new(1.0, 0.0); 5])),
        ])
        .unwrap();
        let t = crate::pairs::word_on_seed("A").unwrap();
        let r = empirical_pair_check(&ones, &t, &[7]).unwrap();
        let expect = 7f64.powf(1.0 - 2.0 / 3.0) * (7.0f64 / 15.0).powf(1.0 / 6.0);
        assert!((r.max_ratio - expect).abs() < 1e-12);
    }
}
