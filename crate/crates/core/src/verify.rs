//! The acceptance suite: one check per criterion, each with a time budget.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, gcd_average_check, is_prime, uncertainty_check};
use crate::complete::{
    random_rational_function, random_rational_function_mod, sigma_crt, sigma_direct, sigma_prime_power,
    composite_bound_check, weil_check,
};
use crate::arith::factorize;
use crate::opt::{
    divisor_level, divisor_target, gamma_left_limit, gamma_of_theta, level_max_gamma, optimize_word,
    subconvex_delta, validity_range, LevelProblem, LpVariant, Objective,
};
use crate::pairs::{apply_a, apply_b, inverse_a, word_on_seed, ExponentTriple, Family, ProcessWord};
use crate::quadratic::{decompose_fraction, roots_minus_one, verify_correspondence_upto};
use crate::rational::{half, int, ratio, to_f64, Rational};
use crate::sieve::{build_table, two_e_gamma};
use crate::trace::{
    empirical_pair_check, fourier_transform_p, incomplete_sum_threads, weyl_differencing_check,
    CompositeTraceSpec,
};
use crate::Result;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Cap handed to the word search.
    pub time_cap: Duration,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, time_cap: Duration::from_secs(60) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub budget_ms: u128,
}

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub budget: Duration,
    run: fn(&VerifyOptions, &mut ChaCha8Rng) -> Result<(bool, String)>,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub const CRITERIA: [Criterion; 12] = [
    Criterion { id: 1, name: "pair-table", budget: secs(1), run: c1_pair_table },
    Criterion { id: 2, name: "long-word", budget: secs(1), run: c2_long_word },
    Criterion { id: 3, name: "rankin-search", budget: secs(60), run: c3_rankin },
    Criterion { id: 4, name: "level-lp", budget: secs(5), run: c4_level },
    Criterion { id: 5, name: "process-algebra", budget: secs(5), run: c5_algebra },
    Criterion { id: 6, name: "stationary-phase", budget: secs(30), run: c6_stationary },
    Criterion { id: 7, name: "inequalities", budget: secs(60), run: c7_inequalities },
    Criterion { id: 8, name: "gauss-correspondence", budget: secs(30), run: c8_gauss },
    Criterion { id: 9, name: "sieve-functions", budget: secs(10), run: c9_sieve },
    Criterion { id: 10, name: "fourier", budget: secs(10), run: c10_fourier },
    Criterion { id: 11, name: "empirical-pairs", budget: secs(60), run: c11_empirical },
    Criterion { id: 12, name: "performance", budget: secs(40), run: c12_performance },
];

pub fn criterion(id: u32) -> Option<&'static Criterion> {
    CRITERIA.iter().find(|c| c.id == id)
}

impl Criterion {
    pub fn run(&self, opts: &VerifyOptions) -> CriterionReport {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (self.id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let start = Instant::now();
        let outcome = (self.run)(opts, &mut rng);
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = elapsed <= self.budget;
        let detail = if in_time { detail } else { format!("{detail}; over budget") };
        CriterionReport {
            id: self.id,
            name: self.name,
            pass: ok && in_time,
            detail,
            elapsed_ms: elapsed.as_millis(),
            budget_ms: self.budget.as_millis(),
        }
    }
}

/// Runs the selected criteria. The timing-sensitive performance check runs
/// alone after the others, which run in parallel. Reports come back by id.
pub fn run_suite(ids: &[u32], opts: &VerifyOptions) -> Vec<CriterionReport> {
    let (solo, shared): (Vec<&Criterion>, Vec<&Criterion>) =
        CRITERIA.iter().filter(|c| ids.contains(&c.id)).partition(|c| c.id == 12);
    let mut out: Vec<CriterionReport> = shared.par_iter().map(|c| c.run(opts)).collect();
    out.extend(solo.iter().map(|c| c.run(opts)));
    out.sort_by_key(|r| r.id);
    out
}

pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionReport> {
    let ids: Vec<u32> = CRITERIA.iter().map(|c| c.id).collect();
    run_suite(&ids, opts)
}

pub fn format_line(r: &CriterionReport) -> String {
    format!(
        "[{}] {:>2} {:<22} {:>7} ms / {} ms  {}",
        if r.pass { "PASS" } else { "FAIL" },
        r.id,
        r.name,
        r.elapsed_ms,
        r.budget_ms,
        r.detail
    )
}

fn fail_list(failures: &[String]) -> String {
    failures.iter().take(5).cloned().collect::<Vec<_>>().join(", ")
}

pub const PAIR_TABLE: [(&str, (i64, i64), (i64, i64)); 8] = [
    ("A", (1, 6), (2, 3)),
    ("A2", (1, 14), (11, 14)),
    ("A3", (1, 30), (13, 15)),
    ("BA2", (2, 7), (4, 7)),
    ("BA3", (11, 30), (8, 15)),
    ("ABA2", (1, 9), (13, 18)),
    ("A2BA2", (1, 20), (33, 40)),
    ("BABA2", (2, 9), (11, 18)),
];

fn c1_pair_table(_: &VerifyOptions, _: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for (w, k, l) in PAIR_TABLE {
        if word_on_seed(w)?.pair() != (ratio(k.0, k.1), ratio(l.0, l.1)) {
            bad.push(w.to_string());
        }
    }
    Ok((bad.is_empty(), format!("{}/8 pairs exact {}", 8 - bad.len(), fail_list(&bad))))
}

fn c2_long_word(_: &VerifyOptions, _: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let t = word_on_seed("BA3BA2BABABA2")?;
    let level = divisor_level(&t);
    let ok = t.pair() == (ratio(591, 1535), ratio(808, 1535))
        && level == ratio(55, 12756)
        && level >= divisor_target();
    Ok((ok, format!("({}, {}), level {} vs {}", t.kappa, t.lambda, level, divisor_target())))
}

fn c3_rankin(opts: &VerifyOptions, _: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let r = optimize_word(Objective::MinKappaPlusLambda, 40, opts.time_cap);
    let value = to_f64(&r.best_value);
    let delta = to_f64(&subconvex_delta(&r.best_triple));
    let ok = value <= 0.8291 && delta >= 0.085489;
    Ok((
        ok,
        format!(
            "{} -> {:.9}, delta {:.7}, {} nodes{}",
            r.best_word.compact(),
            value,
            delta,
            r.nodes_expanded,
            if r.exhaustive { "" } else { ", capped" }
        ),
    ))
}

fn c4_level(_: &VerifyOptions, _: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let rows = [
        ("A", (19, 18, 14), (16, 17)),
        ("A2", (86, 83, 60), (8, 9)),
        ("A3", (91, 89, 62), (112, 131)),
    ];
    let mut bad = Vec::new();
    let mut samples = 0;
    for (w, (a, b, c), (vn, vd)) in rows {
        let pair = word_on_seed(w)?;
        let v = ratio(vn, vd);
        if validity_range(&pair, LpVariant::Tabulated, Family::Ak)? != v {
            bad.push(format!("range {w}"));
        }
        for i in 0..50 {
            let theta: Rational = half() + (v.clone() - half()) * ratio(i, 50);
            let want = (int(a) - int(b) * &theta) / int(c);
            let got = level_max_gamma(&LevelProblem::new(theta.clone(), pair.clone(), LpVariant::Tabulated, Family::Ak))?;
            samples += 1;
            if got.gamma != want {
                bad.push(format!("{w} at {theta}"));
            }
        }
    }
    let labels = [
        (gamma_of_theta(&half())?, ratio(3, 4)),
        (gamma_of_theta(&ratio(64, 97))?, ratio(101, 194)),
        (gamma_of_theta(&ratio(32, 41))?, ratio(29, 82)),
        (gamma_left_limit(&ratio(16, 17))?, ratio(5, 34)),
    ];
    for (got, want) in labels {
        if got != want {
            bad.push(format!("gamma {got} != {want}"));
        }
    }
    Ok((bad.is_empty(), format!("{samples} sampled levels, 3 ranges, 4 labels {}", fail_list(&bad))))
}

fn random_triple(rng: &mut ChaCha8Rng) -> ExponentTriple {
    let r = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| {
        let d = rng.gen_range(1..=997i64);
        ratio(rng.gen_range(lo * d..=hi * d), d)
    };
    loop {
        let k = r(rng, 0, 1) / ratio(2, 1);
        let l = half() + r(rng, 0, 1) / ratio(2, 1);
        let nu = r(rng, -2, 2);
        // inverse_A needs kappa < 1/2
        if k < half() {
            return ExponentTriple::new(k, l, nu);
        }
    }
}

fn c5_algebra(_: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for _ in 0..1000 {
        let t = random_triple(rng);
        if apply_b(&apply_b(&t)) != t {
            bad.push(format!("BB {t}"));
        }
        if inverse_a(&apply_a(&t))? != t {
            bad.push(format!("A^-1 A {t}"));
        }
    }
    let mut words = 0usize;
    let seed = ExponentTriple::seed();
    for len in 0..=12 {
        for w in ProcessWord::all_of_length(len, false) {
            words += 1;
            if !w.apply(&seed).in_box() {
                bad.push(w.compact());
            }
        }
    }
    Ok((bad.is_empty(), format!("1000 triples, {words} words in the box {}", fail_list(&bad))))
}

fn c6_stationary(_: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 200 {
        let p = [3u64, 5, 7, 11][rng.gen_range(0..4)];
        let beta = rng.gen_range(2..=5u32);
        let lam = random_rational_function_mod(rng, 4, 2, 30, p);
        let Ok(s) = sigma_prime_power(&lam, p, beta) else { continue };
        done += 1;
        let c = p.pow(beta);
        let d = sigma_direct(&lam, c)?;
        let err = (s.sum.value - d.value).norm() / c as f64;
        worst = worst.max(err);
        if err > 1e-8 || s.sum.excluded != d.excluded {
            bad.push(format!("{lam} mod {p}^{beta}"));
        }
    }
    let mut crt_worst = 0.0f64;
    let mut crt = 0;
    while crt < 200 {
        let c = rng.gen_range(4..=10_000u64);
        let f = factorize(c);
        if f.pairs().len() < 2 {
            continue;
        }
        crt += 1;
        let lam = random_rational_function(rng, 3, 2, 30);
        let d = sigma_direct(&lam, c)?;
        let m = sigma_crt(&lam, &f)?;
        let err = (d.value - m.value).norm() / c as f64;
        crt_worst = crt_worst.max(err);
        if err > 1e-8 || d.excluded != m.excluded {
            bad.push(format!("{lam} mod {c}"));
        }
    }
    Ok((
        bad.is_empty(),
        format!("200 prime powers (worst {worst:.1e}), 200 composites (worst {crt_worst:.1e}) {}", fail_list(&bad)),
    ))
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn random_prime(rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> u64 {
    loop {
        let p = rng.gen_range(lo..=hi);
        if is_prime(p) {
            return p;
        }
    }
}

fn c7_inequalities(_: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for _ in 0..500 {
        let p = random_prime(rng, 2, 500);
        let lam = random_rational_function_mod(rng, 4, 3, 50, p);
        if !weil_check(&lam, p)?.pass {
            bad.push(format!("weil {lam} mod {p}"));
        }
    }
    for _ in 0..300 {
        let c = rng.gen_range(1..=10_000u64);
        let lam = random_rational_function_mod(rng, 4, 3, 50, c);
        if !composite_bound_check(&lam, c)?.pass {
            bad.push(format!("composite {lam} mod {c}"));
        }
    }
    for _ in 0..200 {
        let q1 = rng.gen_range(1..=60u64);
        let q2 = loop {
            let q2 = rng.gen_range(1..=60u64);
            if gcd(q1, q2) == 1 {
                break q2;
            }
        };
        let (a, b) = (random_vec(rng, q1 as usize), random_vec(rng, q2 as usize));
        let m = rng.gen_range(-500..500i64);
        let n = rng.gen_range(1..=600u64);
        if !weyl_differencing_check(&a, &b, m, n)?.pass {
            bad.push(format!("weyl q1={q1} q2={q2} M={m} N={n}"));
        }
    }
    let gcd_fail = (1..=200u64)
        .into_par_iter()
        .map(|q| (1..=500u64).filter(|&x| !gcd_average_check(x, q).pass).count())
        .sum::<usize>();
    if gcd_fail > 0 {
        bad.push(format!("{gcd_fail} gcd averages"));
    }
    for _ in 0..200 {
        let q = rng.gen_range(2..=512usize);
        let k = rng.gen_range(1..=q.min(12));
        let mut v = vec![Complex64::new(0.0, 0.0); q];
        for _ in 0..k {
            v[rng.gen_range(0..q)] = Complex64::new(rng.gen_range(0.5..1.5), rng.gen_range(-1.0..1.0));
        }
        let u = uncertainty_check(&v)?;
        if !u.pass {
            bad.push(format!("support {}x{} < {q}", u.support, u.dual_support));
        }
    }
    Ok((
        bad.is_empty(),
        format!("500 weil, 300 composite, 200 differencing, 100000 gcd, 200 support {}", fail_list(&bad)),
    ))
}

fn c8_gauss(_: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    if let Some(ell) = verify_correspondence_upto(10_000) {
        bad.push(format!("correspondence at {ell}"));
    }
    let mut done = 0;
    while done < 200 {
        let ell = rng.gen_range(2..=10_000u64);
        let roots = roots_minus_one(ell);
        if roots.roots.is_empty() {
            continue;
        }
        let d = rng.gen_range(1..=10_000u64);
        if gcd(d, ell) != 1 {
            continue;
        }
        done += 1;
        let a = roots.roots[rng.gen_range(0..roots.roots.len())];
        if !decompose_fraction(d, a, ell)?.holds {
            bad.push(format!("d={d} a={a} ell={ell}"));
        }
    }
    Ok((bad.is_empty(), format!("ell <= 10000 scanned, 200 decompositions {}", fail_list(&bad))))
}

fn c9_sieve(_: &VerifyOptions, _: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let coarse = build_table(10.0, 1.0 / 1024.0)?;
    let fine = build_table(10.0, 1.0 / 2048.0)?;
    let c = two_e_gamma();
    let mut closed = 0.0f64;
    for (s, big, small) in coarse.grid() {
        if s <= 3.0 {
            closed = closed.max((big - c / s).abs());
        }
        if s > 2.0 && s <= 4.0 {
            closed = closed.max((small - c * (s - 1.0).ln() / s).abs());
        }
    }
    let mut richardson = 0.0f64;
    for (i, (_, big, small)) in coarse.grid().enumerate() {
        richardson = richardson.max((big - fine.big_f[2 * i]).abs()).max((small - fine.small_f[2 * i]).abs());
    }
    let big10 = coarse.upper(10.0)?;
    let small10 = coarse.lower(10.0)?;
    let ok = closed < 1e-10 && richardson < 1e-8 && (big10 - 1.0).abs() < 1e-3 && (small10 - 1.0).abs() < 1e-3;
    Ok((
        ok,
        format!("closed-form {closed:.1e}, refinement {richardson:.1e}, F(10)={big10:.9}, f(10)={small10:.9}"),
    ))
}

fn c10_fourier(_: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut inv_err = 0.0f64;
    let mut pars_err = 0.0f64;
    for _ in 0..100 {
        let p = random_prime(rng, 2, 499);
        let f = random_vec(rng, p as usize);
        let g = fourier_transform_p(&f, p)?;
        let gg = fourier_transform_p(&g, p)?;
        for x in 0..p as usize {
            inv_err = inv_err.max((gg[x] - f[(p as usize - x) % p as usize]).norm());
        }
        let n1: f64 = f.iter().map(|z| z.norm_sqr()).sum();
        let n2: f64 = g.iter().map(|z| z.norm_sqr()).sum();
        pars_err = pars_err.max((n1 - n2).abs() / n1);
    }
    Ok((inv_err < 1e-9 && pars_err < 1e-9, format!("involution {inv_err:.1e}, parseval {pars_err:.1e}")))
}

pub const MONITOR_MODULUS: u64 = 3 * 5 * 7 * 11 * 13;

fn c11_empirical(_: &VerifyOptions, _: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let spec = CompositeTraceSpec::inverse_phase(MONITOR_MODULUS, 3)?;
    let q = MONITOR_MODULUS as f64;
    let lengths: Vec<u64> = [0.4, 0.5, 0.6].iter().map(|e| q.powf(*e).floor() as u64).collect();
    let mut parts = Vec::new();
    let mut worst = 0.0f64;
    for w in ["A", "A2", "BA2"] {
        let r = empirical_pair_check(&spec, &word_on_seed(w)?, &lengths)?;
        worst = worst.max(r.max_ratio);
        parts.push(format!("{w}: {:.3}", r.max_ratio));
    }
    Ok((worst <= 50.0, format!("max ratio {} (cap 50)", parts.join(", "))))
}

fn c12_performance(_: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let lam = random_rational_function_mod(rng, 3, 2, 30, 1_000_000);
    let start = Instant::now();
    sigma_direct(&lam, 1_000_000)?;
    let direct = start.elapsed();
    let spec = CompositeTraceSpec::parse("q=101*103*107*109*113;101=kloo:k=2;103=kloo:k=3;*=addrat:f1=1,0,0,1;f2=0,1")?;
    let n = 10_000_000;
    let start = Instant::now();
    let four = incomplete_sum_threads(&spec, 12_345, n, Some(4))?;
    let parallel = start.elapsed();
    let one = incomplete_sum_threads(&spec, 12_345, n, Some(1))?;
    let same = four.re.to_bits() == one.re.to_bits() && four.im.to_bits() == one.im.to_bits();
    let ok = direct < Duration::from_secs(1) && parallel < Duration::from_secs(20) && same;
    Ok((
        ok,
        format!(
            "sigma c=10^6 {} ms, sum N=10^7 on 4 workers {} ms, bit-identical {same}",
            direct.as_millis(),
            parallel.as_millis()
        ),
    ))
}
